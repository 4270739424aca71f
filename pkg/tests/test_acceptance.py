"""Acceptance criteria 1-8.

Each test prints one ``ACCEPTANCE <n> PASS|FAIL`` line; the same lines are
repeated in the pytest terminal summary. Run alone with

    python3 -m pytest tests/test_acceptance.py -s
"""

import dataclasses
import math
import time

import numpy as np
import pytest

from emitcorr.correlations import (
    classical_correlation,
    correlation_record,
    discord_direct,
    mutual_information,
    quantum_discord,
)
from emitcorr.coupling import PlasmonWaveguide, beta_tilde, feasibility_check, free_space_coupling
from emitcorr.dynamics import build_hamiltonian, evolve, lindblad_rhs
from emitcorr.scenario import FIGURES, figure_preset, run_steady
from emitcorr.state import PSI_MINUS, PSI_PLUS, basis_ket, kron, partial_trace, projector, von_neumann_entropy

RESULTS = {}


def report(n, ok, detail):
    line = f"ACCEPTANCE {n} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def preset_runs():
    """Trajectory, per-sample optimizer results and records for every preset."""
    runs = {}
    for fig in FIGURES:
        cfg = figure_preset(fig)
        traj = evolve(cfg.evolution_spec())
        cc = [classical_correlation(rho, cfg.measured_qubit, cfg.optimizer) for rho in traj.states]
        recs = [correlation_record(rho, t, cfg.optimizer, cfg.measured_qubit) for t, rho in zip(traj.times, traj.states)]
        runs[fig] = (cfg, traj, cc, recs)
    return runs


def test_criterion_1_fig2a_mixed_state():
    cfg = figure_preset("fig2a")
    start = time.perf_counter()
    traj = evolve(cfg.evolution_spec())
    elapsed = time.perf_counter() - start
    rho = traj.states[-1]
    p00 = rho[0, 0].real
    pm = (PSI_MINUS @ rho @ PSI_MINUS).real
    bt = beta_tilde(cfg.coupling)
    law = 0.5 * np.exp(-(1 - bt) * traj.times)
    law_err = np.abs(traj.population(PSI_MINUS) - law).max()
    ok = abs(p00 - 0.9166) <= 0.002 and abs(pm - 0.0834) <= 0.002 and elapsed < 1.0 and law_err < 1e-6
    report(1, ok, f"P00={p00:.4f} PPsi-={pm:.4f} subradiant-law err={law_err:.1e} runtime={elapsed:.3f}s")


def test_criterion_2_beta_tilde_and_feasibility():
    bt = beta_tilde(PlasmonWaveguide(0.94, 2000.0, 542.0, 1.0))
    ratio = feasibility_check(0.94, 0.9).required_ratio
    ok = abs(bt - 0.82) <= 0.005 and abs(ratio - 0.08697) <= 0.0005
    report(2, ok, f"beta~={bt:.5f} lambda/L for 0.9 = {ratio:.5f}")


def test_criterion_3_fig2a_correlations():
    cfg = figure_preset("fig2a")
    rho = evolve(cfg.evolution_spec()).states[-1]
    rec = correlation_record(rho, 10.0)
    ok = (
        abs(rec.concurrence - 0.0834) <= 0.001
        and abs(rec.eof - 0.0185) <= 0.001
        and abs(rec.mutual_information - 0.0860) <= 0.001
        and rec.discord > rec.eof
        and rec.classical < rec.discord
    )
    report(
        3,
        ok,
        f"C={rec.concurrence:.4f} EoF={rec.eof:.4f} I={rec.mutual_information:.4f} "
        f"D={rec.discord:.4f} CC={rec.classical:.4f}",
    )


def test_criterion_4_analytic_oracles():
    start = time.perf_counter()
    rng = np.random.default_rng(4)
    errs = []
    phi_plus = (basis_ket("00") + basis_ket("11")) / math.sqrt(2)
    phi_minus = (basis_ket("00") - basis_ket("11")) / math.sqrt(2)
    for psi in (PSI_PLUS, PSI_MINUS, phi_plus, phi_minus):
        rec = correlation_record(projector(psi), 0.0)
        errs.append(np.abs(np.subtract(rec.as_tuple()[1:], (2, 1, 1, 1, 1))).max())
    bell_err = max(errs)

    def rand_qubit():
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        w = rng.dirichlet([1, 1])
        u = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))[0]
        return u @ np.diag(w) @ u.conj().T if rng.random() < 0.5 else projector(v / np.linalg.norm(v))

    prod_err = max(
        max(abs(x) for x in correlation_record(kron(rand_qubit(), rand_qubit()), 0.0).as_tuple()[1:])
        for _ in range(10)
    )

    werner = 0.5 * projector(PSI_MINUS) + 0.5 * np.eye(4) / 4
    c = 0.5
    closed = sum((1 + s * c) / 2 * math.log2(1 + s * c) for s in (1, -1))
    werner_err = abs(classical_correlation(werner).value - closed)

    pure_err = 0.0
    for _ in range(100):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        rho = projector(psi / np.linalg.norm(psi))
        s_b = von_neumann_entropy(partial_trace(rho, "B"))
        pure_err = max(pure_err, abs(quantum_discord(rho) - s_b))
    elapsed = time.perf_counter() - start
    ok = bell_err <= 1e-6 and prod_err <= 1e-6 and werner_err <= 1e-4 and pure_err <= 1e-4 and elapsed < 30
    report(
        4,
        ok,
        f"bell err={bell_err:.1e} product err={prod_err:.1e} Werner CC err={werner_err:.1e} "
        f"pure |D-S_B| max={pure_err:.1e} runtime={elapsed:.2f}s",
    )


def test_criterion_5_trajectory_invariants(preset_runs):
    worst = dict(trace=0.0, herm=0.0, min_eig=np.inf, identity=0.0)
    for cfg, traj, cc, recs in preset_runs.values():
        for rho, res, rec in zip(traj.states, cc, recs):
            worst["trace"] = max(worst["trace"], abs(np.trace(rho) - 1))
            worst["herm"] = max(worst["herm"], np.abs(rho - rho.conj().T).max())
            worst["min_eig"] = min(worst["min_eig"], np.linalg.eigvalsh(rho).min())
            direct = discord_direct(rho, res.basis, cfg.measured_qubit)
            worst["identity"] = max(
                worst["identity"],
                abs(rec.discord - (rec.mutual_information - rec.classical)),
                abs(direct - (mutual_information(rho) - res.value)),
            )
    ok = worst["trace"] <= 1e-9 and worst["herm"] <= 1e-9 and worst["min_eig"] >= -1e-8 and worst["identity"] <= 1e-9
    report(
        5,
        ok,
        f"{len(preset_runs)} presets: trace defect={worst['trace']:.1e} hermiticity={worst['herm']:.1e} "
        f"min eig={worst['min_eig']:.1e} |D-(I-CC)|={worst['identity']:.1e}",
    )


def test_criterion_6_concurrence_anomaly(preset_runs):
    recs = preset_runs["fig1b"][3]
    above = [r.t for r in recs if r.concurrence > r.mutual_information]
    eof_gap = max(r.eof - r.concurrence for run in preset_runs.values() for r in run[3])
    ok = len(above) > 0 and eof_gap <= 0
    report(6, ok, f"fig1b samples with C > I: {len(above)}/{len(recs)}; max(EoF - C) over all presets={eof_gap:.2e}")


def test_criterion_7_free_space_fig1b():
    p = free_space_coupling(figure_preset("fig1b").coupling)
    ok = abs(p.v_coherent + 0.0338) <= 1e-4 and abs(p.gamma_collective + 0.3040) <= 1e-4 and p.gamma_collective < 0
    report(7, ok, f"V={p.v_coherent:.5f} gamma={p.gamma_collective:.5f}")


def test_criterion_8_driven_steady_state():
    cfg = dataclasses.replace(figure_preset("fig3a"), t_final=50.0, sample_count=2)
    rho = evolve(cfg.evolution_spec()).states[-1]
    p = cfg.collective_params()
    rate = np.abs(lindblad_rhs(rho, build_hamiltonian(p, cfg.drive), p)).max()
    last = correlation_record(rho, 50.0)
    ss = run_steady(cfg)
    gap = np.abs(np.subtract(last.as_tuple()[1:], ss.as_tuple()[1:])).max()
    ok = rate <= 1e-6 and gap <= 1e-4 and ss.discord > 0 and ss.discord > ss.eof
    report(8, ok, f"max|drho/dt| at 50={rate:.2e} record gap={gap:.1e} D_ss={ss.discord:.4f} EoF_ss={ss.eof:.4f}")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-s"]))
