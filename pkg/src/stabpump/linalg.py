"""Dense complex linear algebra primitives shared by all simulation modules.

Conventions used throughout the package:

- Atom 1 is the leftmost Kronecker factor; local level order is
  |0> = 0, |1> = 1, |r> = 2, |p> = 3.
- Angular frequencies in rad/s, times in seconds.  Unit conversion from
  config-file MHz / ns happens at the I/O boundary only.
- Quasienergies of a periodic drive are folded into (-pi/T, pi/T].
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

HERMITICITY_TOL = 1e-10
UNITARITY_TOL = 1e-8

# Single-qubit computational / rotated basis vectors.
KET0 = np.array([1.0, 0.0], dtype=complex)
KET1 = np.array([0.0, 1.0], dtype=complex)
PLUS = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2.0)
MINUS = np.array([1.0, -1.0], dtype=complex) / np.sqrt(2.0)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def ket(dim: int, index: int) -> np.ndarray:
    """Computational basis vector |index> in a `dim`-dimensional space."""
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def projector(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def kron(*ops: np.ndarray) -> np.ndarray:
    """Kronecker product of one or more operators, leftmost factor first."""
    if not ops:
        raise ValueError("kron requires at least one operator")
    out = np.asarray(ops[0], dtype=complex)
    for op in ops[1:]:
        out = np.kron(out, np.asarray(op, dtype=complex))
    return out


def is_hermitian(a: np.ndarray, tol: float = HERMITICITY_TOL) -> bool:
    a = np.asarray(a)
    scale = max(1.0, float(np.abs(a).max(initial=0.0)))
    return bool(np.abs(a - a.conj().T).max(initial=0.0) <= tol * scale)


def is_unitary(u: np.ndarray, tol: float = UNITARITY_TOL) -> bool:
    u = np.asarray(u)
    if u.shape[0] != u.shape[1]:
        return False
    res = u @ u.conj().T - np.eye(u.shape[0])
    return bool(np.abs(res).max() <= tol)


def matexp(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary propagator exp(-i h t) of a Hermitian generator.

    Uses an eigendecomposition, so the result is unitary to machine
    precision even for long times.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise ValueError("matexp requires a Hermitian generator")
    w, v = np.linalg.eigh(h)
    return (v * np.exp(-1j * w * t)) @ v.conj().T


def matlog_unitary(u: np.ndarray, period: float) -> np.ndarray:
    """Hermitian generator H with exp(-i H period) = u, eigenvalues folded
    into (-pi/period, pi/period].

    Degenerate eigenphases are handled by the (complex) Schur
    decomposition, which returns an orthonormal eigenbasis for any normal
    matrix.  The branch convention maps the eigenphase -pi to the
    quasienergy +pi/period.
    """
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("matlog_unitary requires a unitary input")
    # Schur form of a normal matrix is diagonal with orthonormal columns.
    t, z = scipy.linalg.schur(u, output="complex")
    phases = np.angle(np.diagonal(t))  # in (-pi, pi]
    eps = -phases / period
    # angle() puts lambda = -1 at +pi, i.e. eps = -pi/period; fold to +pi/period.
    eps = np.where(eps <= -np.pi / period * (1 - 1e-15), eps + 2 * np.pi / period, eps)
    h = (z * eps) @ z.conj().T
    return 0.5 * (h + h.conj().T)


def quasienergies(u: np.ndarray, period: float) -> tuple[np.ndarray, np.ndarray]:
    """Folded quasienergies and eigenvectors of a one-period propagator.

    Returns (eps, v) with eps sorted ascending in (-pi/period, pi/period]
    and v[:, k] the matching eigenvector.
    """
    u = np.asarray(u, dtype=complex)
    t, z = scipy.linalg.schur(u, output="complex")
    eps = -np.angle(np.diagonal(t)) / period
    eps = np.where(eps <= -np.pi / period * (1 - 1e-15), eps + 2 * np.pi / period, eps)
    order = np.argsort(eps)
    return eps[order], z[:, order]


def hs_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Hilbert-Schmidt distance sqrt(Tr[(a-b)(a-b)^dag])."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    d = a - b
    return float(np.sqrt(np.abs(np.sum(d * d.conj()))))


def eig_herm(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Real eigenvalues (ascending) and orthonormal eigenvectors of a
    Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eig_herm requires a square matrix")
    return np.linalg.eigh(m)


def eig_general(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a general matrix, sorted by descending Re(lambda)."""
    m = np.asarray(m, dtype=complex)
    if m.shape[0] != m.shape[1]:
        raise ValueError("eig_general requires a square matrix")
    w, v = np.linalg.eig(m)
    order = np.argsort(-w.real, kind="stable")
    return w[order], v[:, order]


def check_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-10,
    trace_tol: float = 1e-9,
    psd_tol: float = 1e-8,
) -> None:
    """Raise ValueError unless rho is Hermitian, unit trace, and PSD
    within the stated tolerances."""
    rho = np.asarray(rho, dtype=complex)
    scale = max(1.0, float(np.abs(rho).max(initial=0.0)))
    herm_err = float(np.abs(rho - rho.conj().T).max(initial=0.0))
    if herm_err > herm_tol * scale:
        raise ValueError(f"density matrix not Hermitian: deviation {herm_err:.3e}")
    tr_err = abs(np.trace(rho) - 1.0)
    if tr_err > trace_tol:
        raise ValueError(f"density matrix trace off by {tr_err:.3e}")
    wmin = float(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min())
    if wmin < -psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {wmin:.3e}")


def pure_state_density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def maximally_mixed(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=complex) / dim
