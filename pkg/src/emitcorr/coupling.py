"""Collective parameters {V, gamma} from free-space or plasmonic geometry.

Every rate is in units of the individual decay rate Gamma; time is in
units of 1/Gamma.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

UNIT_TOL = 1e-12


class PlasmonApproximationWarning(UserWarning):
    """Emitter separation is below the range where the plasmonic formulas hold."""


@dataclass(frozen=True)
class CollectiveParams:
    """Rates entering the master equation.

    ``gamma_individual`` is the diagonal rate Gamma_ii, ``gamma_collective``
    the cross-damping gamma and ``v_coherent`` the dipole-dipole exchange V.
    Can be built directly from numbers, bypassing both geometry models.
    """

    v_coherent: float
    gamma_collective: float
    gamma_individual: float = 1.0

    def __post_init__(self):
        for name in ("v_coherent", "gamma_collective", "gamma_individual"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma_individual <= 0:
            raise ValueError("gamma_individual must be positive")


def _unit(v, name):
    a = np.asarray(v, dtype=float).reshape(-1)
    if a.shape != (3,):
        raise ValueError(f"{name} must be a 3-vector")
    if abs(np.linalg.norm(a) - 1.0) > UNIT_TOL:
        raise ValueError(f"{name} must have unit norm (|{name}| = {np.linalg.norm(a)!r})")
    return tuple(float(x) for x in a)


@dataclass(frozen=True)
class DipoleGeometry:
    mu1_hat: tuple
    mu2_hat: tuple
    r12_hat: tuple
    separation_over_wavelength: float
    refractive_index: float = 1.0
    gamma1: float = 1.0
    gamma2: float = 1.0

    def __post_init__(self):
        for name in ("mu1_hat", "mu2_hat", "r12_hat"):
            object.__setattr__(self, name, _unit(getattr(self, name), name))
        if not self.separation_over_wavelength > 0:
            raise ValueError("separation_over_wavelength must be positive")
        if not self.refractive_index >= 1:
            raise ValueError("refractive_index must be >= 1")
        if self.gamma1 <= 0 or self.gamma2 <= 0:
            raise ValueError("individual decay rates must be positive")

    @property
    def z(self) -> float:
        """Dimensionless separation n k0 r12."""
        return 2.0 * math.pi * self.refractive_index * self.separation_over_wavelength


@dataclass(frozen=True)
class PlasmonWaveguide:
    """Waveguide inputs; lengths in nanometres, ``zeta`` is d / lambda_pl."""

    beta: float
    propagation_length: float
    plasmon_wavelength: float
    zeta: float

    def __post_init__(self):
        if not 0 < self.beta <= 1:
            raise ValueError("beta must lie in (0, 1]")
        if not self.propagation_length > 0:
            raise ValueError("propagation_length must be positive")
        if not self.plasmon_wavelength > 0:
            raise ValueError("plasmon_wavelength must be positive")
        if not self.zeta > 0:
            raise ValueError("zeta must be positive")

    @property
    def separation_nm(self) -> float:
        return self.zeta * self.plasmon_wavelength


def free_space_coupling(g: DipoleGeometry) -> CollectiveParams:
    """Dipole-dipole shift V and cross-damping gamma in vacuum (or a medium of index n)."""
    z = g.z
    if z == 0:
        raise ZeroDivisionError("coincident emitters: z = 0 is singular")
    mu1, mu2, r = (np.asarray(v) for v in (g.mu1_hat, g.mu2_hat, g.r12_hat))
    m12 = float(mu1 @ mu2)
    m1r = float(mu1 @ r)
    m2r = float(mu2 @ r)
    transverse = m12 - m1r * m2r
    longitudinal = m12 - 3.0 * m1r * m2r
    c, s = math.cos(z), math.sin(z)
    gamma0 = math.sqrt(g.gamma1 * g.gamma2)
    v = 0.75 * gamma0 * (-transverse * c / z + longitudinal * (c / z**3 + s / z**2))
    gam = 1.5 * gamma0 * (transverse * s / z + longitudinal * (c / z**2 - s / z**3))
    return CollectiveParams(v_coherent=v, gamma_collective=gam, gamma_individual=gamma0)


def beta_tilde(w: PlasmonWaveguide) -> float:
    """Guided-mode fraction attenuated over the emitter separation."""
    return w.beta * math.exp(-w.plasmon_wavelength * w.zeta / (2.0 * w.propagation_length))


def plasmonic_coupling(w: PlasmonWaveguide) -> CollectiveParams:
    """Closed-form plasmon-mediated V and gamma (Gamma = 1).

    Warns with :class:`PlasmonApproximationWarning` when ``zeta < 1/4``;
    the formulas are still evaluated.
    """
    if w.zeta < 0.25:
        warnings.warn(
            f"zeta = {w.zeta} < 1/4: plasmonic approximation is unreliable at "
            "separations shorter than about lambda_pl/4",
            PlasmonApproximationWarning,
            stacklevel=2,
        )
    bt = beta_tilde(w)
    phase = 2.0 * math.pi * w.zeta
    return CollectiveParams(
        v_coherent=0.5 * bt * math.sin(phase),
        gamma_collective=bt * math.cos(phase),
        gamma_individual=1.0,
    )


@dataclass(frozen=True)
class FeasibilityReport:
    beta: float
    target_beta_tilde: float
    zeta: float
    required_ratio: float
    samples: tuple = field(default_factory=tuple)  # (lambda_pl, L, ratio, beta_tilde, feasible)

    @property
    def any_feasible(self) -> bool:
        return any(s[-1] for s in self.samples)


def required_ratio(beta: float, target_beta_tilde: float, zeta: float = 1.0) -> float:
    """lambda_pl / L needed for the attenuated beta to equal the target."""
    return -2.0 * math.log(target_beta_tilde / beta) / zeta


def feasibility_check(beta, target_beta_tilde, dispersion_samples=(), zeta=1.0):
    """Test whether waveguide samples reach a target attenuated beta.

    Parameters
    ----------
    beta : float
        Guided-mode fraction, in (0, 1].
    target_beta_tilde : float
        Desired attenuated fraction; must not exceed ``beta``.
    dispersion_samples : iterable of (lambda_pl, L)
        Candidate plasmon wavelength / propagation length pairs (same units).
    zeta : float
        Separation in plasmon wavelengths.

    Returns
    -------
    FeasibilityReport
        A sample is feasible when its ratio ``lambda_pl / L`` does not
        exceed the required one, i.e. its attenuated beta reaches the target.
    """
    if not 0 < beta <= 1:
        raise ValueError("beta must lie in (0, 1]")
    if not 0 < target_beta_tilde < 1:
        raise ValueError("target_beta_tilde must lie in (0, 1)")
    if target_beta_tilde > beta:
        raise ValueError(
            f"target {target_beta_tilde} exceeds beta {beta}: unreachable since the "
            "attenuation factor is at most 1"
        )
    need = required_ratio(beta, target_beta_tilde, zeta)
    rows = []
    for lam, length in dispersion_samples:
        if lam <= 0 or length <= 0:
            raise ValueError("dispersion samples need lambda_pl > 0 and L > 0")
        ratio = lam / length
        bt = beta * math.exp(-ratio * zeta / 2.0)
        rows.append((float(lam), float(length), ratio, bt, ratio <= need))
    return FeasibilityReport(beta, target_beta_tilde, zeta, need, tuple(rows))
