"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the three hot paths (DOPRI5 integration of the 16x16 generator, the
64x128 measurement grid, one full correlation record) on both backends and
checks that their outputs agree.
"""

import argparse
import math
import sys
import timeit

import numpy as np

from emitcorr import _fallback, kernels
from emitcorr.correlations import OptimizerSettings, correlation_record
from emitcorr.dynamics import build_hamiltonian, liouvillian
from emitcorr.scenario import figure_preset
from emitcorr.state import basis_ket, projector


def _swap_backend(impl):
    for name in ("integrate_linear", "conditional_entropy", "conditional_entropy_grid"):
        setattr(kernels, name, getattr(impl, name))


def _cases():
    cfg = figure_preset("fig3a")
    p = cfg.collective_params()
    gen = np.ascontiguousarray(liouvillian(build_hamiltonian(p, cfg.drive), p))
    y0 = np.ascontiguousarray(projector(basis_ket("01")).reshape(-1).astype(complex))
    ts = np.linspace(0.0, 10.0, 500)
    # a generic mixed state for the measurement kernels
    rng = np.random.default_rng(7)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    rho = np.ascontiguousarray(rho / np.trace(rho).real)
    opt = OptimizerSettings()
    thetas = np.linspace(0.0, math.pi / 2, opt.grid_theta)
    phis = np.linspace(0.0, 2 * math.pi, opt.grid_phi, endpoint=False)
    return {
        "integrate fig3a, t=10, 500 samples": lambda: kernels.integrate_linear(gen, y0, ts, 1e-9, 1e-12),
        "conditional entropy grid 64x128": lambda: kernels.conditional_entropy_grid(rho, thetas, phis),
        "correlation record": lambda: correlation_record(rho, 0.0),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)

    if not kernels.compiled_available():
        print("compiled extension not built; only the fallback can be timed", file=sys.stderr)
    impls = {"python": _fallback}
    if kernels.compiled_available():
        from emitcorr import _kernels

        impls["compiled"] = _kernels

    results = {}
    outputs = {}
    for label, impl in impls.items():
        _swap_backend(impl)
        for name, fn in _cases().items():
            timer = timeit.Timer(fn)
            n, _ = timer.autorange()
            best = min(timer.repeat(repeat=args.repeat, number=n)) / n
            results[(name, label)] = best
            outputs[(name, label)] = fn()

    print(f"{'kernel':40s} {'python':>12s} {'compiled':>12s} {'speedup':>8s}")
    for name in _cases():
        py = results[(name, "python")]
        line = f"{name:40s} {py * 1e3:10.3f}ms"
        if "compiled" in impls:
            c = results[(name, "compiled")]
            line += f" {c * 1e3:10.3f}ms {py / c:7.1f}x"
        print(line)

    if "compiled" in impls:
        integ = [outputs[("integrate fig3a, t=10, 500 samples", k)][0] for k in ("python", "compiled")]
        grid = [outputs[("conditional entropy grid 64x128", k)] for k in ("python", "compiled")]
        rec = [outputs[("correlation record", k)].as_tuple()[1:] for k in ("python", "compiled")]
        print(
            f"max backend difference: integrator {np.abs(integ[0] - integ[1]).max():.1e}, "
            f"grid {np.abs(grid[0] - grid[1]).max():.1e}, "
            f"record {np.abs(np.subtract(*rec)).max():.1e}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(main())
