"""Dense complex matrix kernel.

Hermitian eigendecomposition, Kronecker products, partial trace and
transpose on bipartite systems, Hadamard products, and the realification
of Hermitian matrices used to feed complex problems to the real SDP
solver.  Everything here is a pure function of immutable inputs; matrices
in scope never exceed 32x32 after realification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian


@dataclass(frozen=True)
class Tolerances:
    """Single knob for every numerical acceptance threshold."""

    hermiticity: float = 1e-10
    psd_floor: float = -1e-8
    equality: float = 1e-8


TOL = Tolerances()


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2D complex array, rejecting NaN/Inf entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("non-finite entries are not admitted")
    return m


def hermiticity_defect(a: np.ndarray) -> float:
    """Relative Frobenius defect ||a - a^dag|| / max(1, ||a||)."""
    return float(np.linalg.norm(a - a.conj().T) / max(1.0, np.linalg.norm(a)))


def check_hermitian(a, tol: float = TOL.hermiticity) -> np.ndarray:
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NotHermitian(f"matrix is {m.shape[0]}x{m.shape[1]}, not square")
    defect = hermiticity_defect(m)
    if defect > tol:
        raise NotHermitian(f"Hermiticity defect {defect:.3e} exceeds {tol:.1e}")
    return m


def hermitize(a: np.ndarray) -> np.ndarray:
    """Hermitian part (a + a^dag) / 2."""
    return (a + a.conj().T) / 2


@dataclass(frozen=True)
class EigenDecomposition:
    """Spectral data of a Hermitian matrix, eigenvalues ascending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def eig_hermitian(a) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending.

    Raises NotHermitian when the input fails the Hermiticity check and
    NoConvergence when the underlying iteration gives up.  No ordering is
    promised for eigenvectors inside a degenerate cluster beyond
    orthonormality.
    """
    m = check_hermitian(a)
    try:
        w, v = np.linalg.eigh(hermitize(m))
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return EigenDecomposition(eigenvalues=w, eigenvectors=v)


def kron(a, b) -> np.ndarray:
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def _split_bipartite(m: np.ndarray, dims: tuple[int, int]) -> np.ndarray:
    d1, d2 = dims
    if m.shape != (d1 * d2, d1 * d2):
        raise DimensionMismatch(
            f"matrix of shape {m.shape} does not match dims {dims}"
        )
    return m.reshape(d1, d2, d1, d2)


def partial_trace(m, subsystem: int, dims: tuple[int, int]) -> np.ndarray:
    """Trace out the given subsystem (1 or 2) of a bipartite matrix."""
    t = _split_bipartite(as_complex_matrix(m), dims)
    if subsystem == 1:
        return np.einsum("kikj->ij", t)
    if subsystem == 2:
        return np.einsum("ikjk->ij", t)
    raise DimensionMismatch(f"subsystem must be 1 or 2, got {subsystem}")


def partial_transpose(m, subsystem: int, dims: tuple[int, int]) -> np.ndarray:
    """Transpose the given subsystem (1 or 2) of a bipartite matrix."""
    t = _split_bipartite(as_complex_matrix(m), dims)
    if subsystem == 1:
        return t.transpose(2, 1, 0, 3).reshape(m.shape)
    if subsystem == 2:
        return t.transpose(0, 3, 2, 1).reshape(m.shape)
    raise DimensionMismatch(f"subsystem must be 1 or 2, got {subsystem}")


def hadamard_product(a, b) -> np.ndarray:
    """Entry-wise product; shapes must agree."""
    ma, mb = as_complex_matrix(a), as_complex_matrix(b)
    if ma.shape != mb.shape:
        raise DimensionMismatch(f"shapes {ma.shape} and {mb.shape} differ")
    return ma * mb


def frob_inner(a: np.ndarray, b: np.ndarray) -> float:
    """Tr(a b) for Hermitian a, b (real by construction)."""
    return float(np.real(np.sum(a.conj() * b)))


def realify(h) -> np.ndarray:
    """Embed a Hermitian matrix as [[Re, -Im], [Im, Re]].

    The image is real symmetric, PSD iff the input is PSD, and carries
    every eigenvalue of the input twice.
    """
    m = check_hermitian(h)
    re, im = m.real, m.imag
    return np.block([[re, -im], [im, re]])


def derealify(r: np.ndarray) -> np.ndarray:
    """Inverse of realify, averaging the two redundant copies."""
    n2 = r.shape[0]
    if n2 % 2 != 0 or r.shape[0] != r.shape[1]:
        raise DimensionMismatch("realified matrix must be square of even size")
    n = n2 // 2
    re = (r[:n, :n] + r[n:, n:]) / 2
    im = (r[n:, :n] - r[:n, n:]) / 2
    return hermitize(re + 1j * im)


def herm_to_vec(h: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix in an orthonormal basis.

    Coordinates are (diagonal, sqrt(2) Re upper, sqrt(2) Im upper), so the
    Euclidean inner product of coordinate vectors equals Tr(a b).
    """
    n = h.shape[0]
    iu = np.triu_indices(n, k=1)
    return np.concatenate(
        [h.diagonal().real, np.sqrt(2.0) * h[iu].real, np.sqrt(2.0) * h[iu].imag]
    )


def vec_to_herm(v: np.ndarray, n: int) -> np.ndarray:
    """Inverse of herm_to_vec for an n x n Hermitian matrix."""
    if v.shape != (n * n,):
        raise DimensionMismatch(f"expected {n * n} coordinates, got {v.shape}")
    k = n * (n - 1) // 2
    h = np.zeros((n, n), dtype=complex)
    iu = np.triu_indices(n, k=1)
    np.fill_diagonal(h, v[:n])
    upper = (v[n : n + k] + 1j * v[n + k :]) / np.sqrt(2.0)
    h[iu] = upper
    h[(iu[1], iu[0])] = upper.conj()
    return h
