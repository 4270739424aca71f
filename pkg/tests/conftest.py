import numpy as np
import pytest

from emitcorr import _fallback, kernels
from emitcorr.state import PSI_MINUS, basis_ket, projector

BACKENDS = ["python"] + (["compiled"] if kernels.compiled_available() else [])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    if request.param == "compiled":
        from emitcorr import _kernels as impl
    else:
        impl = _fallback
    for name in ("integrate_linear", "conditional_entropy", "conditional_entropy_grid"):
        monkeypatch.setattr(kernels, name, getattr(impl, name))
    return request.param


def random_pure(rng, n=4):
    psi = rng.normal(size=n) + 1j * rng.normal(size=n)
    return psi / np.linalg.norm(psi)


def random_density(rng, rank=4):
    """Mixture of ``rank`` random pure states with random weights."""
    w = rng.dirichlet(np.ones(rank))
    rho = sum(wi * np.outer(p, p.conj()) for wi, p in zip(w, (random_pure(rng) for _ in range(rank))))
    return 0.5 * (rho + rho.conj().T)


def random_unitary(rng, n=2):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def fig2a_state():
    """0.9166|00><00| + 0.0834|Psi-><Psi-|."""
    return 0.9166 * projector(basis_ket("00")) + 0.0834 * projector(PSI_MINUS)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
