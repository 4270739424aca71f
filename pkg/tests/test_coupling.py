import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from emitcorr.coupling import (
    CollectiveParams,
    DipoleGeometry,
    PlasmonApproximationWarning,
    PlasmonWaveguide,
    beta_tilde,
    feasibility_check,
    free_space_coupling,
    plasmonic_coupling,
)

FIG2 = dict(beta=0.94, propagation_length=2000.0, plasmon_wavelength=542.0)


def perpendicular(sep, n=1.0, g1=1.0, g2=1.0):
    return DipoleGeometry((0, 0, 1), (0, 0, 1), (1, 0, 0), sep, n, g1, g2)


def test_free_space_at_three_quarter_wavelength():
    # z = 3pi/2: V = -3/(4 z^2), gamma = (3/2)(-1/z + 1/z^3)
    p = free_space_coupling(perpendicular(0.75))
    assert p.v_coherent == pytest.approx(-0.03377372788077926, abs=1e-12)
    assert p.gamma_collective == pytest.approx(-0.3039758708801465, abs=1e-12)
    assert p.gamma_collective < 0


def test_free_space_collinear_kills_transverse_term():
    # mu . r = 1: only the (1 - 3) = -2 near-field bracket remains
    g = DipoleGeometry((1, 0, 0), (1, 0, 0), (1, 0, 0), 0.4)
    z = g.z
    p = free_space_coupling(g)
    assert p.v_coherent == pytest.approx(0.75 * -2 * (math.cos(z) / z**3 + math.sin(z) / z**2), abs=1e-14)
    assert p.gamma_collective == pytest.approx(1.5 * -2 * (math.cos(z) / z**2 - math.sin(z) / z**3), abs=1e-14)


def test_free_space_far_field_decays():
    p = free_space_coupling(perpendicular(100.0))
    assert abs(p.v_coherent) < 1e-2 and abs(p.gamma_collective) < 1e-2


def test_free_space_refractive_index_enters_z():
    assert free_space_coupling(perpendicular(0.5, n=1.5)) == free_space_coupling(perpendicular(0.75))


unit = st.tuples(st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1)).filter(
    lambda v: np.linalg.norm(v) > 0.1
)


def _normed(v):
    v = np.asarray(v)
    return tuple(v / np.linalg.norm(v))


@given(unit, unit, unit, st.floats(0.05, 5.0))
def test_free_space_symmetries(m1, m2, r, sep):
    g = DipoleGeometry(_normed(m1), _normed(m2), _normed(r), sep)
    swapped = DipoleGeometry(g.mu2_hat, g.mu1_hat, g.r12_hat, sep)
    p, q = free_space_coupling(g), free_space_coupling(swapped)
    assert p.v_coherent == pytest.approx(q.v_coherent, abs=1e-12)
    assert p.gamma_collective == pytest.approx(q.gamma_collective, abs=1e-12)
    doubled = DipoleGeometry(g.mu1_hat, g.mu2_hat, g.r12_hat, sep, gamma1=2.0, gamma2=2.0)
    d = free_space_coupling(doubled)
    assert d.v_coherent == pytest.approx(2 * p.v_coherent, abs=1e-12)
    assert d.gamma_collective == pytest.approx(2 * p.gamma_collective, abs=1e-12)


def test_geometry_validation():
    with pytest.raises(ValueError):
        DipoleGeometry((1, 1, 0), (0, 0, 1), (1, 0, 0), 0.5)
    with pytest.raises(ValueError):
        perpendicular(0.0)


def test_beta_tilde_values():
    assert beta_tilde(PlasmonWaveguide(zeta=1.0, **FIG2)) == pytest.approx(0.8208824131527703, abs=1e-12)
    assert beta_tilde(PlasmonWaveguide(zeta=1.0, **FIG2)) == pytest.approx(0.82, abs=0.005)
    assert beta_tilde(PlasmonWaveguide(zeta=1e-12, **FIG2)) == pytest.approx(0.94, abs=1e-12)
    assert beta_tilde(PlasmonWaveguide(zeta=0.75, **FIG2)) == pytest.approx(0.8491661561777781, abs=1e-12)


def test_plasmonic_examples():
    p = plasmonic_coupling(PlasmonWaveguide(zeta=1.0, **FIG2))
    assert p.v_coherent == pytest.approx(0.0, abs=1e-12)
    assert p.gamma_collective == pytest.approx(0.8208824131527703, abs=1e-12)
    p = plasmonic_coupling(PlasmonWaveguide(zeta=0.75, **FIG2))
    assert p.gamma_collective == pytest.approx(0.0, abs=1e-12)
    assert p.v_coherent == pytest.approx(-0.42458307808888907, abs=1e-12)
    p = plasmonic_coupling(PlasmonWaveguide(zeta=0.5, **FIG2))
    assert p.v_coherent == pytest.approx(0.0, abs=1e-12)
    assert p.gamma_collective == pytest.approx(-0.8784244238200598, abs=1e-12)


def test_plasmonic_warns_below_quarter_wavelength():
    with pytest.warns(PlasmonApproximationWarning):
        p = plasmonic_coupling(PlasmonWaveguide(zeta=0.2, **FIG2))
    assert math.isfinite(p.v_coherent)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        plasmonic_coupling(PlasmonWaveguide(zeta=0.25, **FIG2))


waveguides = st.builds(
    PlasmonWaveguide,
    beta=st.floats(0.01, 1.0),
    propagation_length=st.floats(500.0, 1e5),
    plasmon_wavelength=st.floats(10.0, 2000.0),
    zeta=st.floats(0.25, 10.0),
)


@given(waveguides)
def test_plasmonic_invariants(w):
    p = plasmonic_coupling(w)
    bt = beta_tilde(w)
    assert (2 * p.v_coherent) ** 2 + p.gamma_collective**2 == pytest.approx(bt**2, abs=1e-12)
    assert abs(p.v_coherent) <= 0.5 + 1e-12
    assert abs(p.gamma_collective) <= 1 + 1e-12
    shifted = PlasmonWaveguide(w.beta, w.propagation_length, w.plasmon_wavelength, w.zeta + 1)
    q = plasmonic_coupling(shifted)
    bq = beta_tilde(shifted)
    assert p.v_coherent / bt == pytest.approx(q.v_coherent / bq, abs=1e-12)
    assert p.gamma_collective / bt == pytest.approx(q.gamma_collective / bq, abs=1e-12)


def test_feasibility_reproduces_required_ratio():
    rep = feasibility_check(0.94, 0.9)
    assert rep.required_ratio == pytest.approx(0.08697022387947756, abs=1e-12)
    assert rep.required_ratio == pytest.approx(0.08697, abs=5e-6)


def test_feasibility_equal_target_needs_zero_ratio():
    assert feasibility_check(0.94, 0.94).required_ratio == pytest.approx(0.0, abs=1e-15)


def test_feasibility_fig2_sample():
    rep = feasibility_check(0.94, 0.82, [(542.0, 2000.0), (542.0, 1500.0)])
    lam, length, ratio, bt, ok = rep.samples[0]
    assert ratio == pytest.approx(0.271)
    assert rep.required_ratio == pytest.approx(0.27315107001150146, abs=1e-12)
    assert ok and bt >= 0.82
    assert not rep.samples[1][-1]
    assert rep.any_feasible


def test_feasibility_rejects_unreachable_target():
    with pytest.raises(ValueError):
        feasibility_check(0.94, 0.95)


def test_collective_params_direct_construction():
    p = CollectiveParams(7.0, 0.2)
    assert p.gamma_individual == 1.0
    with pytest.raises(ValueError):
        CollectiveParams(0.0, 0.0, gamma_individual=0.0)
