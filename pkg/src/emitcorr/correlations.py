"""Total, classical and quantum correlations of two-qubit states.

Classical correlations are optimized over rank-1 projective measurements
on one qubit, parametrized by ``|a> = cos(theta)|0> + e^{i phi} sin(theta)|1>``
and its orthogonal partner. The search is an exhaustive coarse grid
followed by a compass (pattern) search. Entropies are in bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import kernels
from .state import (
    SIGMA_Y,
    entropy_of_spectrum,
    partial_trace,
    von_neumann_entropy,
)

IDENTITY_TOL = 1e-9
SLACK = 1e-6
# the compass search polls until its spread is this fraction of refine_tol, so
# the value error (quadratic in the step) lands far below refine_tol
POLISH = 1e-4
SWAP = np.eye(4)[[0, 2, 1, 3]]
YY = np.kron(SIGMA_Y, SIGMA_Y)


@dataclass(frozen=True)
class MeasurementBasis:
    theta: float
    phi: float

    def __post_init__(self):
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")

    @classmethod
    def canonical(cls, theta: float, phi: float) -> "MeasurementBasis":
        """Fold any angle pair onto theta in [0, pi/2], phi in [0, 2pi).

        The measurement depends only on the Bloch axis +-n with
        n = (sin 2theta cos phi, sin 2theta sin phi, cos 2theta).
        """
        theta, phi = float(theta), float(phi)
        polar = (2.0 * theta) % (2 * math.pi)
        if polar > math.pi:
            polar = 2 * math.pi - polar
            phi += math.pi
        if polar > math.pi / 2:
            polar = math.pi - polar
            phi += math.pi
        phi %= 2 * math.pi
        if phi >= 2 * math.pi:
            phi = 0.0
        return cls(polar / 2.0, phi)

    def kets(self):
        a = np.array([math.cos(self.theta), np.exp(1j * self.phi) * math.sin(self.theta)])
        b = np.array([np.exp(-1j * self.phi) * math.sin(self.theta), -math.cos(self.theta)])
        return a, b


@dataclass(frozen=True)
class OptimizerSettings:
    grid_theta: int = 64
    grid_phi: int = 128
    refine_tol: float = 1e-6
    max_refine_iters: int = 500

    def __post_init__(self):
        if self.grid_theta < 16 or self.grid_phi < 32:
            raise ValueError("coarse grid must be at least 16 x 32")
        if not 0 < self.refine_tol <= 1e-5:
            raise ValueError("refine_tol must lie in (0, 1e-5]")
        if self.max_refine_iters < 1:
            raise ValueError("max_refine_iters must be positive")


@dataclass(frozen=True)
class ClassicalCorrelation:
    value: float
    basis: MeasurementBasis
    conditional_entropy: float
    converged: bool = True
    iterations: int = 0


@dataclass(frozen=True)
class CorrelationRecord:
    t: Optional[float]
    mutual_information: float
    classical: float
    discord: float
    eof: float
    concurrence: float

    def __post_init__(self):
        for name in ("t", "mutual_information", "classical", "discord", "eof", "concurrence"):
            if getattr(self, name) is not None:
                object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("mutual_information", "classical", "discord", "eof"):
            if getattr(self, name) < -SLACK:
                raise ValueError(f"{name} = {getattr(self, name)} is negative")
        if not -SLACK <= self.concurrence <= 1 + SLACK:
            raise ValueError(f"concurrence {self.concurrence} outside [0, 1]")
        if abs(self.discord - (self.mutual_information - self.classical)) > IDENTITY_TOL:
            raise ValueError("discord differs from I - CC")

    def as_tuple(self):
        return (
            self.t,
            self.mutual_information,
            self.classical,
            self.discord,
            self.eof,
            self.concurrence,
        )


def _oriented(rho, measured):
    """Return rho with the measured qubit in the B slot."""
    r = np.ascontiguousarray(np.asarray(rho, dtype=complex))
    if measured == "B":
        return r
    if measured == "A":
        return np.ascontiguousarray(SWAP @ r @ SWAP)
    raise ValueError(f"measured qubit must be 'A' or 'B', got {measured!r}")


def mutual_information(rho) -> float:
    """S(rho_A) + S(rho_B) - S(rho_AB)."""
    return (
        von_neumann_entropy(partial_trace(rho, "A"))
        + von_neumann_entropy(partial_trace(rho, "B"))
        - von_neumann_entropy(rho)
    )


def conditional_entropy_after_measurement(rho, basis: MeasurementBasis, measured="B"):
    """Average entropy of the unmeasured qubit after a projective measurement.

    Returns ``(entropy, (p_a, p_b))``. Outcomes with probability below
    1e-12 contribute zero.
    """
    r = _oriented(rho, measured)
    a, b = basis.kets()
    probs = []
    total = 0.0
    for ket in (a, b):
        proj = np.kron(np.eye(2), np.outer(ket, ket.conj()))
        post = proj @ r @ proj
        p = float(np.trace(post).real)
        probs.append(p)
        if p < 1e-12:
            continue
        w = np.linalg.eigvalsh(partial_trace(post / p, "A"))
        total += p * entropy_of_spectrum(np.clip(w, 0.0, None))
    return total, tuple(probs)


def _compass_search(rho, theta, phi, step_theta, step_phi, settings):
    f0 = kernels.conditional_entropy(rho, theta, phi)
    iters = 0
    while iters < settings.max_refine_iters:
        iters += 1
        best = (f0, theta, phi)
        spread = 0.0
        for dt, dp in ((step_theta, 0.0), (-step_theta, 0.0), (0.0, step_phi), (0.0, -step_phi)):
            f = kernels.conditional_entropy(rho, theta + dt, phi + dp)
            spread = max(spread, abs(f - f0))
            if f < best[0]:
                best = (f, theta + dt, phi + dp)
        if best[0] < f0:
            f0, theta, phi = best
            continue
        if spread < POLISH * settings.refine_tol or max(step_theta, step_phi) < 1e-12:
            return f0, theta, phi, True, iters
        step_theta *= 0.5
        step_phi *= 0.5
    return f0, theta, phi, False, iters


def classical_correlation(rho, measured="B", settings: OptimizerSettings = OptimizerSettings()):
    """Maximal entropy reduction of one qubit by measuring the other.

    Parameters
    ----------
    rho : (4, 4) array
        Two-qubit density matrix.
    measured : {"B", "A"}
        The qubit that is measured.
    settings : OptimizerSettings

    Returns
    -------
    ClassicalCorrelation
        ``converged`` is False when the compass search hit
        ``max_refine_iters``; the best value found is still reported.
    """
    r = _oriented(rho, measured)
    thetas = np.linspace(0.0, math.pi / 2, settings.grid_theta)
    phis = np.linspace(0.0, 2 * math.pi, settings.grid_phi, endpoint=False)
    grid = kernels.conditional_entropy_grid(r, thetas, phis)
    i, j = np.unravel_index(int(np.argmin(grid)), grid.shape)
    f, th, ph, converged, iters = _compass_search(
        r, thetas[i], phis[j], thetas[1] - thetas[0], phis[1] - phis[0], settings
    )
    s_unmeasured = von_neumann_entropy(partial_trace(r, "A"))
    return ClassicalCorrelation(
        value=s_unmeasured - f,
        basis=MeasurementBasis.canonical(th, ph),
        conditional_entropy=f,
        converged=converged,
        iterations=iters,
    )


def quantum_discord(rho, measured="B", settings: OptimizerSettings = OptimizerSettings()) -> float:
    """Mutual information minus the optimized classical correlation."""
    return mutual_information(rho) - classical_correlation(rho, measured, settings).value


def discord_direct(rho, basis: MeasurementBasis, measured="B") -> float:
    """S(rho_measured) - S(rho) + conditional entropy at a fixed basis."""
    r = _oriented(rho, measured)
    cond, _ = conditional_entropy_after_measurement(r, basis, "B")
    return von_neumann_entropy(partial_trace(r, "B")) - von_neumann_entropy(r) + cond


def concurrence(rho) -> float:
    """max(0, l1 - l2 - l3 - l4) with l_i the decreasing square roots of the
    eigenvalues of rho (sy sy) rho* (sy sy).

    With rho = Psi Psi^dagger those square roots are the singular values of
    Psi^T (sy sy) Psi; taking them directly keeps low-rank states accurate
    to machine precision.
    """
    rho = np.asarray(rho, dtype=complex)
    w, v = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    psi = v * np.sqrt(np.clip(w, 0.0, None))
    lam = np.linalg.svd(psi.T @ YY @ psi, compute_uv=False)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def binary_entropy(x: float) -> float:
    return entropy_of_spectrum([x, 1.0 - x])


def eof_from_concurrence(c: float) -> float:
    return binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))


def entanglement_of_formation(rho) -> float:
    return eof_from_concurrence(concurrence(rho))


def correlation_record(rho, t=None, settings=OptimizerSettings(), measured="B") -> CorrelationRecord:
    """All five measures of one state; ``t=None`` marks a stationary state."""
    mi = mutual_information(rho)
    cc = classical_correlation(rho, measured, settings).value
    c = concurrence(rho)
    return CorrelationRecord(
        t=t,
        mutual_information=mi,
        classical=cc,
        discord=mi - cc,
        eof=eof_from_concurrence(c),
        concurrence=c,
    )

