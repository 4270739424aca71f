"""Dense two-qubit state utilities.

Basis ordering is ``|00>, |01>, |10>, |11>`` with qubit A as the left
(slow) tensor index. All entropies are in bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_TOL = 1e-8
ENTROPY_CUTOFF = 1e-12

I2 = np.eye(2, dtype=complex)
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)  # |1><0|
SIGMA_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

for _m in (I2, SIGMA_PLUS, SIGMA_MINUS, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _m.setflags(write=False)

BASIS_LABELS = ("00", "01", "10", "11")


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


def basis_ket(label: str) -> np.ndarray:
    """Computational basis ket for a label such as ``"10"``."""
    try:
        idx = BASIS_LABELS.index(label)
    except ValueError:
        raise ValueError(f"unknown basis label {label!r}") from None
    psi = np.zeros(4, dtype=complex)
    psi[idx] = 1.0
    psi.setflags(write=False)
    return psi


PSI_PLUS = _frozen(np.array([0, 1, 1, 0]) / np.sqrt(2))
PSI_MINUS = _frozen(np.array([0, 1, -1, 0]) / np.sqrt(2))


def pure_state(amplitudes) -> np.ndarray:
    """Validate four amplitudes over the computational basis.

    Raises
    ------
    ValueError
        If there are not exactly four amplitudes or the norm differs from
        one by more than 1e-12.
    """
    psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if psi.shape != (4,):
        raise ValueError(f"expected 4 amplitudes, got {psi.size}")
    norm2 = float(np.vdot(psi, psi).real)
    if abs(norm2 - 1.0) > 1e-12:
        raise ValueError(f"amplitudes not normalized (sum |c|^2 = {norm2!r})")
    return _frozen(psi)


def alpha_state(alpha: float) -> np.ndarray:
    """``sqrt(alpha)|01> + sqrt(1 - alpha)|10>`` for alpha in [0, 1]."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    psi = np.zeros(4, dtype=complex)
    psi[1] = np.sqrt(alpha)
    psi[2] = np.sqrt(1.0 - alpha)
    return _frozen(psi)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return _frozen(np.outer(psi, psi.conj()))


def kron(a, b) -> np.ndarray:
    """Kronecker product of two square matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    for name, m in (("a", a), ("b", b)):
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"{name} must be a square matrix, got shape {m.shape}")
    return np.kron(a, b)


def partial_trace(rho, keep: str) -> np.ndarray:
    """Reduced 2x2 state of qubit ``keep`` ("A" or "B")."""
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("abcb->ac", r)
    if keep == "B":
        return np.einsum("abad->bd", r)
    raise ValueError(f"subsystem label must be 'A' or 'B', got {keep!r}")


def hermitian_defect(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T)))


def eig_hermitian(m):
    """Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.

    Raises ``ValueError`` if ``m`` departs from Hermiticity by more than 1e-10.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    defect = hermitian_defect(m)
    if defect > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian (defect {defect:.3e})")
    return np.linalg.eigh(0.5 * (m + m.conj().T))


def entropy_of_spectrum(eigenvalues) -> float:
    """Shannon entropy in bits of a spectrum, with 0 log 0 = 0."""
    w = np.asarray(eigenvalues, dtype=float)
    if w.size and w.min() < -PSD_TOL:
        raise ValueError(f"negative eigenvalue {w.min():.3e} below -{PSD_TOL}")
    w = w[w > ENTROPY_CUTOFF]
    return float(max(0.0, -np.sum(w * np.log2(w))))


def von_neumann_entropy(rho) -> float:
    """``-Tr(rho log2 rho)`` for a (possibly reduced) density matrix."""
    w, _ = eig_hermitian(rho)
    return entropy_of_spectrum(w)


@dataclass(frozen=True)
class StateReport:
    hermitian_defect: float
    trace_defect: float
    min_eigenvalue: float

    @property
    def ok(self) -> bool:
        return (
            self.hermitian_defect <= HERMITIAN_TOL
            and self.trace_defect <= TRACE_TOL
            and self.min_eigenvalue >= -PSD_TOL
        )

    def __bool__(self) -> bool:
        return self.ok


def validate_state(rho) -> StateReport:
    """Diagnose a candidate density matrix without raising."""
    m = np.asarray(rho, dtype=complex)
    herm = hermitian_defect(m)
    tr = abs(complex(np.trace(m)) - 1.0)
    lo = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0])
    return StateReport(herm, tr, lo)


def density_matrix(rho) -> np.ndarray:
    """Return a read-only 4x4 density matrix, raising if it is invalid.

    A length-4 vector is accepted as a pure state and converted to its
    projector.
    """
    m = np.asarray(rho, dtype=complex)
    if m.shape == (4,):
        return projector(pure_state(m))
    if m.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {m.shape}")
    report = validate_state(m)
    if not report.ok:
        raise ValueError(f"invalid density matrix: {report}")
    return _frozen(m)
