"""Feasible sets of bipartite couplings as SDP constraint data.

A coupling is a bipartite state whose marginals are the two states being
compared.  Each variant of the feasible set is described by a Hermitian
variable space, linear equality constraints on it, and a list of cone
maps whose images must all be PSD:

  general           the full state set, cone = identity
  ppt               adds the partial transpose as a second cone
  symmetric_ppt     variable compressed to the symmetric subspace, plus PPT
  ppt_extension(n)  an n:1 symmetric extension with PPT across every cut
  classical_quantum block-diagonal in the eigenbasis of the first marginal
  quantum_classical mirrored on the second factor
  product           no free variables at all

The DPT convention fixes the first marginal to rho^T and the GMPC
convention to rho; the second marginal is sigma in both.  "separable" is
accepted as an alias for the PPT set; the exactness flag records whether
PPT actually coincides with separability at the given dimension.

Problems are posed in compressed coordinates X = (T_1 x T_2) Y (T_1 x
T_2)^dag, which is exact: couplings are automatically supported on
supp(marg1) x supp(marg2), and partial transposes conjugate covariantly.
Well-conditioned marginals use the support isometry for T; marginals
with tiny eigenvalues are whitened (T absorbs the eigenvalue square
roots), which makes the product coupling the identity matrix and keeps
the feasible region's interior O(1) wide even when a marginal is nearly
singular or outright rank-deficient.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import (
    DegenerateEigenbasis,
    DimensionMismatch,
    InvalidDimension,
    MarginalMismatch,
)
from .qstates import DensityMatrix, as_density

PPT_EXTENSION_CAP = 3
SUPPORT_CUTOFF = 1e-12

EXACT_SEPARABLE = "ExactSeparable"
LOWER_BOUND_ONLY = "LowerBoundOnly"


@dataclass(frozen=True)
class CouplingSet:
    kind: str
    n_copies: int | None = None

    def label(self) -> str:
        if self.kind == "ppt_extension":
            return f"ppt_extension_{self.n_copies}"
        return self.kind


GENERAL = CouplingSet("general")
PPT = CouplingSet("ppt")
SEPARABLE = PPT  # alias: realized as PPT plus the exactness flag
SYMMETRIC_PPT = CouplingSet("symmetric_ppt")
CLASSICAL_QUANTUM = CouplingSet("classical_quantum")
QUANTUM_CLASSICAL = CouplingSet("quantum_classical")
PRODUCT = CouplingSet("product")


def ppt_extension(n: int) -> CouplingSet:
    return CouplingSet("ppt_extension", n)


_SET_BY_NAME = {
    "general": GENERAL,
    "ppt": PPT,
    "separable": SEPARABLE,
    "symmetric_ppt": SYMMETRIC_PPT,
    "classical_quantum": CLASSICAL_QUANTUM,
    "quantum_classical": QUANTUM_CLASSICAL,
    "product": PRODUCT,
}


def coupling_set(name: str) -> CouplingSet:
    """Parse a set name, including ppt_extension_<n>."""
    key = name.strip().lower()
    if key in _SET_BY_NAME:
        return _SET_BY_NAME[key]
    if key.startswith("ppt_extension_"):
        return ppt_extension(int(key.rsplit("_", 1)[1]))
    raise InvalidDimension(f"unknown coupling set {name!r}")


def exactness(cset: CouplingSet, d: int):
    """Whether optimizing over the set solves the separable problem exactly.

    Returns (flag, note).  PPT and its symmetric extensions coincide with
    separability for qubit couplings (2 x 2); for d >= 3 they only bound
    it.  Sets that are not separability relaxations get the vacuous
    ExactSeparable flag with an explanatory note.
    """
    if cset.kind in ("ppt", "symmetric_ppt", "ppt_extension"):
        if d == 2:
            return EXACT_SEPARABLE, "PPT equals separability on 2x2 couplings"
        return LOWER_BOUND_ONLY, "PPT only bounds separability for d >= 3"
    if cset.kind == "general":
        return EXACT_SEPARABLE, "not applicable: unrestricted optimization"
    return (
        EXACT_SEPARABLE,
        "not applicable: optimization over an explicitly parametrized subset",
    )


@dataclass
class CouplingProblem:
    """Constraint data for one coupling optimization.

    The Hermitian variable lives on ``var_cdim`` complex dimensions;
    ``cone_maps`` sends it to the matrices that must be PSD (the first map
    always reproducing the variable itself), ``eq_rows`` are (A, b)
    equality pairs on the variable, and ``lift_cost`` / ``extract_coupling``
    translate between the d^2 coupling space and the variable space.
    """

    rho: DensityMatrix
    sigma: DensityMatrix
    cset: CouplingSet
    convention: str
    var_cdim: int
    cone_maps: list
    eq_rows: list
    lift_cost: object
    extract_coupling: object
    feasible_witness: np.ndarray | None = None
    notes: list = field(default_factory=list)

    @property
    def local_dim(self) -> int:
        return self.rho.dim


def _herm_basis(d: int):
    """Orthonormal Hermitian basis matching linalg.herm_to_vec coordinates."""
    basis = []
    for i in range(d * d):
        v = np.zeros(d * d)
        v[i] = 1.0
        basis.append(linalg.vec_to_herm(v, d))
    return basis


def _marginal_rows(m1, m2, embed1, embed2):
    """Marginal constraints in compressed coordinates: the reduced states
    must equal m1 and m2 (the trace constraint sits in their span)."""
    rows = []
    for e in _herm_basis(m1.shape[0]):
        rows.append((embed1(e), linalg.frob_inner(e, m1)))
    for e in _herm_basis(m2.shape[0]):
        rows.append((embed2(e), linalg.frob_inner(e, m2)))
    return rows


def permute_systems(m: np.ndarray, dims, perm) -> np.ndarray:
    """Reorder tensor factors of an operator."""
    k = len(dims)
    t = m.reshape(*dims, *dims)
    axes = list(perm) + [k + p for p in perm]
    n = int(np.prod(dims))
    return t.transpose(axes).reshape(n, n)


WHITEN_THRESHOLD = 1e-2


@dataclass(frozen=True)
class _MarginalFactor:
    """Compression data for one marginal.

    ``t`` maps the compressed space into the full one, ``g`` = t^dag t,
    and ``m`` is the marginal in compressed coordinates, so the marginal
    constraint reads Tr_other[(. x g) Y] = m.  Well-conditioned marginals
    are only support-compressed (t = the isometry, m = diag(lam));
    marginals with tiny eigenvalues are whitened (t absorbs sqrt(lam),
    m = 1), which keeps the feasible set's interior O(1) wide at the cost
    of rescaling the variable.
    """

    t: np.ndarray
    g: np.ndarray
    m: np.ndarray
    lam: np.ndarray
    isometry: np.ndarray

    @property
    def rank(self) -> int:
        return len(self.lam)


def _marginal_factor(mat: np.ndarray) -> _MarginalFactor:
    eig = linalg.eig_hermitian(mat)
    keep = eig.eigenvalues > SUPPORT_CUTOFF
    lam = eig.eigenvalues[keep]
    v = eig.eigenvectors[:, keep]
    r = len(lam)
    diag = np.diag(lam).astype(complex)
    if lam.min() < WHITEN_THRESHOLD:
        return _MarginalFactor(v * np.sqrt(lam), diag, np.eye(r, dtype=complex), lam, v)
    return _MarginalFactor(v, np.eye(r, dtype=complex), diag, lam, v)


def _flip(d: int) -> np.ndarray:
    f = np.zeros((d * d, d * d))
    for mm in range(d):
        for nn in range(d):
            f[nn * d + mm, mm * d + nn] = 1.0
    return f


def _sym_isometry(d: int) -> np.ndarray:
    cols = []
    for i in range(d):
        v = np.zeros(d * d, dtype=complex)
        v[i * d + i] = 1.0
        cols.append(v)
    for i in range(d):
        for j in range(i + 1, d):
            v = np.zeros(d * d, dtype=complex)
            v[i * d + j] = v[j * d + i] = 1.0 / np.sqrt(2.0)
            cols.append(v)
    return np.column_stack(cols)


def marginals(rho: DensityMatrix, sigma: DensityMatrix, convention: str):
    """The matrices the two reduced states must equal under a convention."""
    if convention not in ("dpt", "gmpc"):
        raise InvalidDimension(f"unknown convention {convention!r}")
    marg1 = rho.matrix.T.copy() if convention == "dpt" else rho.matrix
    return marg1, sigma.matrix


def build(rho, sigma, cset: CouplingSet, convention: str = "dpt") -> CouplingProblem:
    """Assemble the constraint data for a coupling optimization."""
    rho, sigma = as_density(rho), as_density(sigma)
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"state dims {rho.dim} and {sigma.dim} differ")
    d = rho.dim
    marg1, marg2 = marginals(rho, sigma, convention)
    common = dict(rho=rho, sigma=sigma, cset=cset, convention=convention)
    notes = []

    if cset.kind == "product":
        coupling = np.kron(marg1, marg2)
        return CouplingProblem(
            **common,
            var_cdim=0,
            cone_maps=[],
            eq_rows=[],
            lift_cost=None,
            extract_coupling=lambda _x: coupling,
            notes=["product coupling is fully determined by the marginals"],
        )

    f1 = _marginal_factor(marg1)
    if cset.kind == "symmetric_ppt":
        # Symmetry forces equal marginals and a shared compression factor;
        # under the DPT convention that additionally requires rho^T = rho.
        if np.linalg.norm(rho.matrix - sigma.matrix) > 1e-8:
            raise MarginalMismatch(
                "symmetric couplings force equal marginals; rho != sigma"
            )
        if np.linalg.norm(marg1 - marg2) > 1e-8:
            raise MarginalMismatch(
                "symmetric couplings under the transposed convention need "
                "a transpose-invariant state"
            )
        f2 = f1
    else:
        f2 = _marginal_factor(marg2)
    g1, g2, m1, m2 = f1.g, f2.g, f1.m, f2.m
    r1, r2 = f1.rank, f2.rank
    if r1 < d or r2 < d:
        notes.append(f"variable compressed to marginal supports ({r1} x {r2})")
    lift = np.kron(f1.t, f2.t)

    def lift_cost_base(c):
        return linalg.hermitize(lift.conj().T @ c @ lift)

    def lift_back(y):
        return lift @ y @ lift.conj().T

    if cset.kind in ("general", "ppt", "classical_quantum", "quantum_classical"):
        rows = _marginal_rows(
            m1,
            m2,
            lambda e: np.kron(e, g2),
            lambda e: np.kron(g1, e),
        )
        cones = [("state", lambda y: y)]
        if cset.kind == "ppt":
            cones.append(
                ("ppt_t1", lambda y: linalg.partial_transpose(y, 1, (r1, r2)))
            )
        if cset.kind in ("classical_quantum", "quantum_classical"):
            # The compression basis diagonalizes the anchor marginal, so
            # the block structure is literal in these coordinates.
            on_first = cset.kind == "classical_quantum"
            anchor = f1.lam if on_first else f2.lam
            if len(anchor) > 1 and np.min(np.diff(anchor)) < 1e-8:
                warnings.warn(
                    "eigenbasis of the anchor marginal is not unique; using "
                    "the decomposition as returned",
                    DegenerateEigenbasis,
                )
            block = (lambda p: p // r2) if on_first else (lambda p: p % r2)
            dd = r1 * r2
            for p in range(dd):
                for q in range(p + 1, dd):
                    if block(p) == block(q):
                        continue
                    e = np.zeros((dd, dd), dtype=complex)
                    e[p, q] = 1.0
                    rows.append((e + e.conj().T, 0.0))
                    rows.append((1j * e - 1j * e.conj().T, 0.0))
            notes.append(f"block structure in the recorded eigenbasis ({cset.kind})")
        return CouplingProblem(
            **common,
            var_cdim=r1 * r2,
            cone_maps=cones,
            eq_rows=rows,
            lift_cost=lift_cost_base,
            extract_coupling=lift_back,
            feasible_witness=np.kron(m1, m2),
            notes=notes,
        )

    if cset.kind == "symmetric_ppt":
        vs = _sym_isometry(r1)
        ds = vs.shape[1]
        rows = _marginal_rows(
            m1,
            m2,
            lambda e: vs.conj().T @ np.kron(e, g2) @ vs,
            lambda e: vs.conj().T @ np.kron(g1, e) @ vs,
        )
        cones = [
            ("state", lambda z: z),
            (
                "ppt_t1",
                lambda z: linalg.partial_transpose(
                    vs @ z @ vs.conj().T, 1, (r1, r2)
                ),
            ),
        ]
        return CouplingProblem(
            **common,
            var_cdim=ds,
            cone_maps=cones,
            eq_rows=rows,
            lift_cost=lambda c: vs.conj().T @ lift_cost_base(c) @ vs,
            extract_coupling=lambda z: lift_back(vs @ z @ vs.conj().T),
            notes=notes + ["variable compressed to the symmetric subspace"],
        )

    if cset.kind == "ppt_extension":
        # Support-compressed but never whitened: the extension variable
        # blows up like 1/lambda^n in whitened coordinates, which ruins
        # the gap certificate; the isometry form keeps it a state.
        n = cset.n_copies or 2
        if n < 2 or n > PPT_EXTENSION_CAP:
            raise InvalidDimension(
                f"extension order {n} outside 2..{PPT_EXTENSION_CAP}"
            )
        v1, v2 = f1.isometry, f2.isometry
        mc1 = linalg.hermitize(v1.conj().T @ marg1 @ v1)
        mc2 = linalg.hermitize(v2.conj().T @ marg2 @ v2)
        iso = np.kron(v1, v2)
        rest = r1 ** (n - 1)
        nc = r1**n * r2
        rows = [(np.eye(nc, dtype=complex), 1.0)]
        for e in _herm_basis(r1):
            rows.append(
                (np.kron(e, np.eye(rest * r2)), linalg.frob_inner(e, mc1))
            )
        for e in _herm_basis(r2):
            rows.append((np.kron(np.eye(r1**n), e), linalg.frob_inner(e, mc2)))
        # Permutation symmetry of the A copies via adjacent transpositions.
        f = _flip(r1)
        basis = _herm_basis(nc)
        for t in range(n - 1):
            swap = np.kron(
                np.kron(np.eye(r1**t), f), np.eye(r1 ** (n - t - 2) * r2)
            )
            for e in basis:
                rows.append((swap @ e @ swap - e, 0.0))
        cones = [("state", lambda y: y)]
        for k in range(1, n + 1):
            dims_cut = (r1**k, r1 ** (n - k) * r2)
            cones.append(
                (
                    f"ppt_cut_{k}",
                    lambda y, dims_cut=dims_cut: linalg.partial_transpose(
                        y, 1, dims_cut
                    ),
                )
            )

        def lift_ext(c):
            cc = linalg.hermitize(iso.conj().T @ c @ iso)  # acts on (A1, B)
            k = np.kron(cc, np.eye(rest))  # order [A1, B, mid]
            return permute_systems(k, (r1, r2, rest), (0, 2, 1))

        def extract(x):
            per = permute_systems(
                x, (r1,) * n + (r2,), (0, n) + tuple(range(1, n))
            )
            reduced = linalg.partial_trace(per, 2, (r1 * r2, rest))
            return iso @ reduced @ iso.conj().T

        witness = m2
        for _ in range(n):
            witness = np.kron(m1, witness)
        return CouplingProblem(
            **common,
            var_cdim=nc,
            cone_maps=cones,
            eq_rows=rows,
            lift_cost=lift_ext,
            extract_coupling=extract,
            feasible_witness=witness,
            notes=notes + [f"{n}:1 symmetric extension, PPT across every cut"],
        )

    raise InvalidDimension(f"unknown coupling set kind {cset.kind!r}")
