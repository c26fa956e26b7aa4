"""Closed-form quantum metrology quantities.

Variance, quantum Fisher information, Wigner-Yanase skew information, and
the generalized family built from standard matrix-monotone functions,
including the Hadamard conversion kernels that map one member of the
family onto another in the eigenbasis of the state.

Conventions for the generalized family:

    F_Q^f[rho, H]  = 2 sum_{kl} m_f(1,0)/m_f(l_k, l_l) (l_k - l_l)^2 |H_kl|^2
    var_f          = (1/2) sum_{kl} m_f(l_k, l_l)/m_f(1,0) |H_kl|^2
                     - <H>^2 / (2 m_f(1,0))

with m_f(a, b) = a f(b/a) the operator mean of f.  Terms whose eigenvalue
pair lies in the kernel of rho (l_k + l_l below support_tol) are skipped;
pairs closer than deg_tol are treated as degenerate and take the zero
branch of every kernel, which is consistent because the (l_k - l_l)^2
numerators vanish there anyway.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import DimensionMismatch, IrregularFunction, NotHermitian
from .qstates import DensityMatrix, HermitianOperator, as_density, as_operator

DEG_TOL = 1e-9
SUPPORT_TOL = 1e-12


def _pair(rho, h):
    r = as_density(rho)
    op = as_operator(h)
    if r.dim != op.dim:
        raise DimensionMismatch(f"state dim {r.dim} != operator dim {op.dim}")
    return r.matrix, op.matrix


def expectation(rho, h) -> float:
    """<H>_rho = Tr(rho H)."""
    rm, hm = _pair(rho, h)
    val = np.trace(rm @ hm)
    if abs(val.imag) > 1e-10:
        raise NotHermitian(f"imaginary expectation residue {val.imag:.3e}")
    return float(val.real)


def variance(rho, h) -> float:
    """(Delta H)^2_rho = <H^2> - <H>^2."""
    rm, hm = _pair(rho, h)
    mean = np.trace(rm @ hm).real
    return float(np.trace(rm @ hm @ hm).real - mean**2)


@dataclass(frozen=True)
class SpectralContext:
    """Eigendata of a state plus the observable in its eigenbasis."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    h_eig: np.ndarray  # <k|H|l>

    @classmethod
    def build(cls, rho, h) -> "SpectralContext":
        rm, hm = _pair(rho, h)
        eig = linalg.eig_hermitian(rm)
        lam = np.clip(eig.eigenvalues, 0.0, None)
        v = eig.eigenvectors
        return cls(lam, v, v.conj().T @ hm @ v)


def qfi(rho, h) -> float:
    """Quantum Fisher information
    F_Q = 2 sum_{kl} (l_k - l_l)^2 / (l_k + l_l) |<k|H|l>|^2."""
    ctx = SpectralContext.build(rho, h)
    lam = ctx.eigenvalues
    num = np.subtract.outer(lam, lam) ** 2
    den = np.add.outer(lam, lam)
    mask = den > SUPPORT_TOL
    terms = np.zeros_like(num)
    terms[mask] = num[mask] / den[mask]
    return float(2.0 * np.sum(terms * np.abs(ctx.h_eig) ** 2))


def skew_information(rho, h) -> float:
    """Wigner-Yanase skew information Tr(H^2 rho) - Tr(H sqrt(rho) H sqrt(rho))."""
    rm, hm = _pair(rho, h)
    eig = linalg.eig_hermitian(rm)
    sqrt_rho = (eig.eigenvectors * np.sqrt(np.clip(eig.eigenvalues, 0.0, None))) @ (
        eig.eigenvectors.conj().T
    )
    return float(
        np.trace(hm @ hm @ rm).real - np.trace(hm @ sqrt_rho @ hm @ sqrt_rho).real
    )


@dataclass(frozen=True)
class MonotoneFunction:
    """A standard matrix-monotone f with its mean m_f(a,b) = a f(b/a).

    Standard means f(1) = 1 and f(t) = t f(1/t); regular means f(0) > 0.
    User-defined functions are admitted if they pass ``validate``.
    """

    name: str
    f: Callable[[float], float]

    @property
    def f_zero(self) -> float:
        return float(self.f(0.0))

    def mean(self, a: float, b: float) -> float:
        # Larger argument factored out for stability at the spectrum edge.
        if a < b:
            a, b = b, a
        if a <= 0.0:
            return 0.0
        return a * self.f(b / a)

    def require_regular(self):
        if self.f_zero <= 1e-14:
            raise IrregularFunction(f"{self.name}: f(0) = {self.f_zero!r} <= 0")

    def validate(self, samples: int = 25, seed: int = 5) -> "MonotoneFunction":
        rng = np.random.default_rng(seed)
        if abs(self.f(1.0) - 1.0) > 1e-12:
            raise IrregularFunction(f"{self.name}: f(1) != 1")
        for a, b in rng.uniform(1e-3, 3.0, size=(samples, 2)):
            if abs(self.mean(a, b) - self.mean(b, a)) > 1e-12 * max(a, b):
                raise IrregularFunction(f"{self.name}: mean not symmetric")
            if abs(self.mean(a, a) - a) > 1e-12 * a:
                raise IrregularFunction(f"{self.name}: m_f(a,a) != a")
        return self


F_MAX = MonotoneFunction("f_max", lambda x: (1.0 + x) / 2.0)
F_WY = MonotoneFunction("f_wy", lambda x: (np.sqrt(x) + 1.0) ** 2 / 4.0)


def _masks(lam: np.ndarray):
    support = np.add.outer(lam, lam) > SUPPORT_TOL
    degenerate = np.abs(np.subtract.outer(lam, lam)) < DEG_TOL
    return support, degenerate


def gen_qfi(rho, h, f: MonotoneFunction) -> float:
    """Generalized quantum Fisher information for a regular f."""
    f.require_regular()
    ctx = SpectralContext.build(rho, h)
    lam = ctx.eigenvalues
    support, _ = _masks(lam)
    total = 0.0
    for k in range(len(lam)):
        for l in range(len(lam)):
            if not support[k, l]:
                continue
            mf = f.mean(lam[k], lam[l])
            if mf <= 0.0:
                continue
            total += (
                f.f_zero / mf * (lam[k] - lam[l]) ** 2 * abs(ctx.h_eig[k, l]) ** 2
            )
    return 2.0 * total


def gen_variance(rho, h, f: MonotoneFunction) -> float:
    """Generalized variance for a regular f; equals the usual variance
    for pure states and for f = f_max."""
    f.require_regular()
    ctx = SpectralContext.build(rho, h)
    lam = ctx.eigenvalues
    mean = float(np.sum(lam * np.diag(ctx.h_eig).real))
    total = 0.0
    for k in range(len(lam)):
        for l in range(len(lam)):
            total += f.mean(lam[k], lam[l]) * abs(ctx.h_eig[k, l]) ** 2
    return total / (2.0 * f.f_zero) - mean**2 / (2.0 * f.f_zero)


def _x_kernel(lam: np.ndarray, f: MonotoneFunction) -> np.ndarray:
    """(X_f)_{kl} = sqrt(m_f(1,0) / m_f(l_k, l_l)) on the support."""
    d = len(lam)
    x = np.zeros((d, d))
    for k in range(d):
        for l in range(d):
            mf = f.mean(lam[k], lam[l])
            if mf > 0.0:
                x[k, l] = np.sqrt(f.f_zero / mf)
    return x


def _ratio_kernel(rho, f1: MonotoneFunction, f2: MonotoneFunction):
    f1.require_regular()
    f2.require_regular()
    rm = as_density(rho).matrix
    eig = linalg.eig_hermitian(rm)
    lam = np.clip(eig.eigenvalues, 0.0, None)
    x1, x2 = _x_kernel(lam, f1), _x_kernel(lam, f2)
    _, degenerate = _masks(lam)
    q = np.zeros_like(x1)
    ok = (~degenerate) & (x2 > 0.0)
    q[ok] = x1[ok] / x2[ok]
    return q, eig.eigenvectors, lam


def conversion_matrix(rho, f1: MonotoneFunction, f2: MonotoneFunction):
    """Kernel Q_{f1,f2} in the eigenbasis of rho, zero on degenerate pairs.

    Satisfies F_Q^{f1}[rho, H] = F_Q^{f2}[rho, Q o H] with the Hadamard
    product taken in the eigenbasis of rho.
    """
    q, _, _ = _ratio_kernel(rho, f1, f2)
    return HermitianOperator(q.astype(complex))


def roof_kernel_Y(rho, f: MonotoneFunction) -> HermitianOperator:
    """(Y_f)_{kl} = (X_f)_{kl} / (X_{f_max})_{kl}; identity kernel off the
    degenerate clusters when f = f_max."""
    return conversion_matrix(rho, f, F_MAX)


def general_kernel_Z(rho, f: MonotoneFunction) -> HermitianOperator:
    """(Z_f)_{kl} = (X_f)_{kl} / (X_{f_WY})_{kl}."""
    return conversion_matrix(rho, f, F_WY)


def hadamard_transform(rho, kernel, h) -> HermitianOperator:
    """Return the observable Q o H, with the Hadamard product taken in the
    eigenbasis of rho and the result expressed in the computational basis."""
    rm, hm = _pair(rho, h)
    km = as_operator(kernel).matrix
    v = linalg.eig_hermitian(rm).eigenvectors
    transformed = v @ linalg.hadamard_product(km, v.conj().T @ hm @ v) @ v.conj().T
    return HermitianOperator(linalg.hermitize(transformed), as_operator(h).dims)
