"""Driven two-emitter Lindblad dynamics with collective dissipation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .coupling import CollectiveParams
from .state import I2, SIGMA_MINUS, SIGMA_PLUS, density_matrix, validate_state

RATE_TOL = 1e-12
NULL_TOL = 1e-10

# sigma_-^{(i)} on the two-qubit space
LOWERING = (np.kron(SIGMA_MINUS, I2), np.kron(I2, SIGMA_MINUS))
RAISING = (np.kron(SIGMA_PLUS, I2), np.kron(I2, SIGMA_PLUS))
for _m in LOWERING + RAISING:
    _m.setflags(write=False)


class IntegrationError(RuntimeError):
    """The integrator failed or produced a state outside tolerance."""


class SteadyStateAmbiguityError(ValueError):
    """The generator has more than one stationary state."""

    def __init__(self, dimension):
        self.dimension = dimension
        super().__init__(f"null space of the generator has dimension {dimension}; steady state is not unique")


@dataclass(frozen=True)
class DriveConfig:
    """Resonant laser drive; amplitude signs carry the relative phase (0 or pi)."""

    amplitude1: float = 0.0
    amplitude2: float = 0.0
    detuning1: float = 0.0
    detuning2: float = 0.0

    def __post_init__(self):
        for name in ("amplitude1", "amplitude2", "detuning1", "detuning2"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def is_driven(self) -> bool:
        return self.amplitude1 != 0.0 or self.amplitude2 != 0.0


def build_hamiltonian(p: CollectiveParams, d: DriveConfig = DriveConfig()) -> np.ndarray:
    """H/hbar in the frame rotating at the laser frequency."""
    h = p.v_coherent * (RAISING[0] @ LOWERING[1] + RAISING[1] @ LOWERING[0])
    for up, down, amp, det in zip(
        RAISING, LOWERING, (d.amplitude1, d.amplitude2), (d.detuning1, d.detuning2)
    ):
        h = h + amp * (up + down) - det * (up @ down)
    return h


def _rate_matrix(p: CollectiveParams) -> np.ndarray:
    g, c = p.gamma_individual, p.gamma_collective
    if abs(c) > g + RATE_TOL:
        raise ValueError(
            f"|gamma| = {abs(c)} exceeds Gamma = {g}: rate matrix is not positive semidefinite"
        )
    return np.array([[g, c], [c, g]], dtype=float)


def lindblad_rhs(rho, h, p: CollectiveParams) -> np.ndarray:
    """drho/dt evaluated directly from the commutator and the collective dissipator."""
    rho = np.asarray(rho, dtype=complex)
    rates = _rate_matrix(p)
    out = -1j * (h @ rho - rho @ h)
    for i in range(2):
        for j in range(2):
            if rates[i, j] == 0.0:
                continue
            pm = RAISING[i] @ LOWERING[j]
            out -= 0.5 * rates[i, j] * (
                rho @ pm + pm @ rho - 2.0 * LOWERING[i] @ rho @ RAISING[j]
            )
    return out


def liouvillian(h, p: CollectiveParams) -> np.ndarray:
    """16x16 generator acting on row-major vec(rho); vec(A rho B) = (A kron B^T) vec(rho)."""
    rates = _rate_matrix(p)
    eye = np.eye(4)
    gen = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for i in range(2):
        for j in range(2):
            pm = RAISING[i] @ LOWERING[j]
            gen -= 0.5 * rates[i, j] * (
                np.kron(eye, pm.T) + np.kron(pm, eye) - 2.0 * np.kron(LOWERING[i], RAISING[j].T)
            )
    return gen


@dataclass(frozen=True)
class EvolutionSpec:
    initial_state: np.ndarray
    params: CollectiveParams
    drive: DriveConfig = DriveConfig()
    t_final: float = 10.0
    sample_count: int = 500
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12

    def __post_init__(self):
        object.__setattr__(self, "initial_state", density_matrix(self.initial_state))
        if not self.t_final > 0:
            raise ValueError(f"t_final must be positive, got {self.t_final}")
        if int(self.sample_count) != self.sample_count or self.sample_count < 2:
            raise ValueError(f"sample_count must be an integer >= 2, got {self.sample_count}")
        for name in ("rel_tol", "abs_tol"):
            tol = getattr(self, name)
            if not 0 < tol <= 1e-2:
                raise ValueError(f"{name} must lie in (0, 1e-2], got {tol}")

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.t_final, int(self.sample_count))


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 4, 4)
    steps: int = 0

    def __len__(self):
        return len(self.times)

    def population(self, psi) -> np.ndarray:
        """<psi|rho(t)|psi> along the trajectory."""
        psi = np.asarray(psi, dtype=complex)
        return np.einsum("i,nij,j->n", psi.conj(), self.states, psi).real


def evolve(spec: EvolutionSpec) -> Trajectory:
    """Integrate the master equation and sample at uniform times.

    Each sample is checked for trace drift (must stay under 1e-9 before
    renormalization), symmetrized to its Hermitian part and validated.

    Raises
    ------
    IntegrationError
        On step-size underflow or when a sample fails validation.
    """
    h = build_hamiltonian(spec.params, spec.drive)
    gen = np.ascontiguousarray(liouvillian(h, spec.params))
    times = spec.times
    y0 = np.ascontiguousarray(spec.initial_state.reshape(-1))
    raw, n_acc, _, status = kernels.integrate_linear(gen, y0, times, spec.rel_tol, spec.abs_tol)
    if status != 0:
        raise IntegrationError("step size underflow during integration")

    states = raw.reshape(-1, 4, 4)
    traces = np.einsum("nii->n", states)
    drift = np.abs(traces - 1.0)
    if drift.max() >= 1e-9:
        k = int(drift.argmax())
        raise IntegrationError(f"trace drift {drift[k]:.3e} at t = {times[k]}")
    states = 0.5 * (states + states.conj().transpose(0, 2, 1))
    states /= traces.real[:, None, None]
    for t, rho in zip(times, states):
        report = validate_state(rho)
        if not report.ok:
            raise IntegrationError(f"invalid state at t = {t}: {report}")
    states.setflags(write=False)
    times.setflags(write=False)
    return Trajectory(times, states, n_acc)


def steady_state(p: CollectiveParams, d: DriveConfig = DriveConfig()) -> np.ndarray:
    """Unique stationary state from the null space of the generator.

    Raises :class:`SteadyStateAmbiguityError` if the null space is
    degenerate instead of picking one solution.
    """
    h = build_hamiltonian(p, d)
    gen = liouvillian(h, p)
    _, sv, vh = np.linalg.svd(gen)
    null = sv <= NULL_TOL * max(sv[0], 1.0)
    dim = int(null.sum())
    if dim != 1:
        raise SteadyStateAmbiguityError(dim)
    rho = vh[-1].conj().reshape(4, 4)
    rho = rho / np.trace(rho)
    rho = 0.5 * (rho + rho.conj().T)
    residual = np.abs(lindblad_rhs(rho, h, p)).max()
    if residual > NULL_TOL:
        raise IntegrationError(f"steady-state residual {residual:.3e} above {NULL_TOL}")
    return density_matrix(rho)
