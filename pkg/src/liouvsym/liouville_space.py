"""Superoperators on Liouville space.

Operators are vectorized by stacking columns, ``vec(rho) = rho.reshape(-1,
order="F")``. With this convention ``vec(A rho B) = (B.T kron A) vec(rho)``,
so the left promotion ``A_l`` is ``1 kron A`` and the right promotion
``A_r`` is ``A.T kron 1``. Column stacking maps the standard operator basis
onto an orthonormal basis of Liouville space, so the adjoint with respect to
the trace inner product is the plain conjugate transpose of the matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .operator_core import (
    EQ_TOL,
    DimensionError,
    NotHermitianError,
    as_operator,
    is_hermitian,
    random_operator,
)

VECTORIZATION = "column-stacking"
PROBE_SEED = 20240611
N_PROBES = 32


def vec(rho) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1, order="F")


def unvec(v, n: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape((n, n), order="F")


@dataclass(frozen=True, eq=False)
class SuperOp:
    """Linear map on ``N x N`` operators, stored as an ``N^2 x N^2`` matrix."""

    matrix: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        n2 = m.shape[0]
        n = int(round(np.sqrt(n2)))
        if m.ndim != 2 or m.shape[1] != n2 or n * n != n2:
            raise DimensionError(f"superoperator matrix must be N^2 x N^2, got {m.shape}")
        object.__setattr__(self, "matrix", m)

    @property
    def hdim(self) -> int:
        return int(round(np.sqrt(self.matrix.shape[0])))

    def __call__(self, rho) -> np.ndarray:
        rho = as_operator(rho)
        if rho.shape[0] != self.hdim:
            raise DimensionError(f"operator dim {rho.shape[0]} != superoperator hdim {self.hdim}")
        return unvec(self.matrix @ vec(rho), self.hdim)

    apply = __call__

    def _check(self, other: "SuperOp") -> None:
        if other.hdim != self.hdim:
            raise DimensionError(f"hdim mismatch: {self.hdim} vs {other.hdim}")

    def __matmul__(self, other: "SuperOp") -> "SuperOp":
        self._check(other)
        return SuperOp(self.matrix @ other.matrix)

    def __add__(self, other: "SuperOp") -> "SuperOp":
        self._check(other)
        return SuperOp(self.matrix + other.matrix)

    def __sub__(self, other: "SuperOp") -> "SuperOp":
        self._check(other)
        return SuperOp(self.matrix - other.matrix)

    def __mul__(self, c) -> "SuperOp":
        return SuperOp(c * self.matrix)

    __rmul__ = __mul__

    def __neg__(self) -> "SuperOp":
        return SuperOp(-self.matrix)

    def dag(self) -> "SuperOp":
        return SuperOp(self.matrix.conj().T, self.label + "^dag" if self.label else "")

    def norm(self) -> float:
        return float(np.linalg.norm(self.matrix))

    @classmethod
    def identity(cls, n: int) -> "SuperOp":
        return cls(np.eye(n * n, dtype=complex), "1")

    @classmethod
    def zero(cls, n: int) -> "SuperOp":
        return cls(np.zeros((n * n, n * n), dtype=complex), "0")

    @classmethod
    def from_function(cls, f, n: int, label: str = "") -> "SuperOp":
        """Tabulate an arbitrary linear map ``f`` on ``n x n`` operators."""
        cols = []
        for k in range(n * n):
            e = np.zeros(n * n, dtype=complex)
            e[k] = 1.0
            cols.append(vec(f(unvec(e, n))))
        return cls(np.stack(cols, axis=1), label)


def supercommutator(s1: SuperOp, s2: SuperOp) -> SuperOp:
    return s1 @ s2 - s2 @ s1


def promote_left(a) -> SuperOp:
    """``A_l(rho) = A rho``."""
    a = as_operator(a)
    return SuperOp(np.kron(np.eye(a.shape[0]), a))


def promote_right(a) -> SuperOp:
    """``A_r(rho) = rho A``."""
    a = as_operator(a)
    return SuperOp(np.kron(a.T, np.eye(a.shape[0])))


def liouvillian_from_h(h) -> SuperOp:
    """``L = i(H_r - H_l)``, i.e. ``L(rho) = i[rho, H]``.

    Raises:
        NotHermitianError: for non-Hermitian ``h``.
    """
    h = as_operator(h)
    if not is_hermitian(h, EQ_TOL * max(1.0, float(np.max(np.abs(h), initial=0.0)))):
        raise NotHermitianError("Liouvillian requires a Hermitian Hamiltonian")
    return SuperOp(1j * (promote_right(h).matrix - promote_left(h).matrix), "L")


def probe_operators(n: int, count: int = N_PROBES, seed: int = PROBE_SEED) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [random_operator(n, rng) for _ in range(count)]


def is_anti_hermitian(s: SuperOp, tol: float = EQ_TOL) -> float:
    """Largest violation of ``<A, S(B)> = -<S(A), B>``.

    Checks both the matrix representation (``S + S^dagger``) and a seeded set of
    random operator pairs. The caller compares the returned residual to ``tol``.
    """
    residual = float(np.max(np.abs(s.matrix + s.matrix.conj().T), initial=0.0))
    probes = probe_operators(s.hdim)
    for a, b in zip(probes[::2], probes[1::2]):
        lhs = np.vdot(a, s(b))
        rhs = np.vdot(s(a), b)
        scale = np.linalg.norm(a) * np.linalg.norm(b)
        residual = max(residual, abs(lhs + rhs) / scale)
    return residual


def hermitian_operator_basis(n: int) -> list[np.ndarray]:
    """Orthogonal Hermitian basis: ``E_jj``, ``E_jk + E_kj`` and ``i(E_jk - E_kj)``."""
    basis = []
    for j in range(n):
        for k in range(n):
            m = np.zeros((n, n), dtype=complex)
            if j == k:
                m[j, j] = 1.0
            elif j < k:
                m[j, k] = m[k, j] = 1.0
            else:
                m[j, k], m[k, j] = 1j, -1j
            basis.append(m)
    return basis


def is_real_superop(s: SuperOp, tol: float = EQ_TOL) -> bool:
    """True iff ``s`` maps Hermitian operators to Hermitian operators."""
    for b in hermitian_operator_basis(s.hdim):
        out = s(b)
        if np.max(np.abs(out - out.conj().T), initial=0.0) > tol:
            return False
    return True


def _relative_gap(s: SuperOp, t: SuperOp) -> float:
    return np.linalg.norm(s.matrix - t.matrix) / max(1.0, s.norm())


def is_left_multiplication(s: SuperOp, tol: float = EQ_TOL) -> np.ndarray | None:
    """Return ``S(1)`` if ``S = S(1)_l``, else ``None``."""
    a = s(np.eye(s.hdim))
    return a if _relative_gap(s, promote_left(a)) <= tol else None


def is_right_multiplication(s: SuperOp, tol: float = EQ_TOL) -> np.ndarray | None:
    """Return ``S(1)`` if ``S = S(1)_r``, else ``None``."""
    a = s(np.eye(s.hdim))
    return a if _relative_gap(s, promote_right(a)) <= tol else None


def _check_eigvecs(eigvecs, *indices) -> np.ndarray:
    v = np.asarray(eigvecs, dtype=complex)
    for i in indices:
        if not 0 <= i < v.shape[1]:
            raise IndexError(f"eigenvector index {i} out of range for {v.shape[1]} vectors")
    if np.max(np.abs(v.conj().T @ v - np.eye(v.shape[1])), initial=0.0) > 1e-10:
        raise ValueError("eigenvectors must be orthonormal")
    return v


def eigen_projector_superop(j: int, k: int, eigvecs) -> SuperOp:
    """``P_jk(rho) = P_j rho P_k`` with ``P_i = |psi_i><psi_i|`` (0-based indices)."""
    v = _check_eigvecs(eigvecs, j, k)
    pj = np.outer(v[:, j], v[:, j].conj())
    pk = np.outer(v[:, k], v[:, k].conj())
    return SuperOp((promote_left(pj) @ promote_right(pk)).matrix, f"P_{j}{k}")


def transfer_superop(j: int, k: int, eigvecs) -> SuperOp:
    """``T_jk(rho) = |psi_k><psi_j| rho |psi_j><psi_k|`` (0-based indices)."""
    v = _check_eigvecs(eigvecs, j, k)
    kj = np.outer(v[:, k], v[:, j].conj())
    return SuperOp((promote_left(kj) @ promote_right(kj.conj().T)).matrix, f"T_{j}{k}")


def commute_residual(s1: SuperOp, s2: SuperOp) -> float:
    """``|[s1, s2]|_F / (|s1|_F |s2|_F)``; zero if either operand vanishes."""
    s1._check(s2)
    denom = s1.norm() * s2.norm()
    if denom == 0.0:
        return 0.0
    return float(np.linalg.norm(supercommutator(s1, s2).matrix) / denom)


# -- Liouville subspaces -----------------------------------------------------


class SubspaceKind(enum.Enum):
    CONVENTIONAL = "conventional"
    UNCONVENTIONAL = "unconventional"
    NOT_DAGGER_CLOSED = "not-dagger-closed"


@dataclass
class LiouvilleSubspace:
    """Span of a list of ``N x N`` operators.

    ``dagger_closed`` and ``gram_condition`` are computed on construction.
    """

    basis: list
    tol: float = 1e-10
    dagger_closed: bool = field(init=False)
    gram_condition: float = field(init=False)

    def __post_init__(self):
        if not self.basis:
            raise ValueError("empty basis")
        self.basis = [as_operator(b) for b in self.basis]
        n = self.basis[0].shape[0]
        if any(b.shape != (n, n) for b in self.basis):
            raise DimensionError("basis operators must share a dimension")
        m = self._matrix()
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[-1] <= self.tol * sv[0]:
            raise ValueError("degenerate basis: elements are linearly dependent")
        self.gram_condition = float((sv[0] / sv[-1]) ** 2)
        daggers = np.stack([vec(b.conj().T) for b in self.basis], axis=1)
        coeffs, *_ = np.linalg.lstsq(m, daggers, rcond=None)
        miss = np.linalg.norm(m @ coeffs - daggers, axis=0) / np.linalg.norm(daggers, axis=0)
        self.dagger_closed = bool(np.all(miss <= self.tol))

    @property
    def hdim(self) -> int:
        return self.basis[0].shape[0]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _matrix(self) -> np.ndarray:
        return np.stack([vec(b) for b in self.basis], axis=1)

    def projector(self) -> SuperOp:
        """Orthogonal (trace inner product) projector onto the span."""
        q, _ = np.linalg.qr(self._matrix())
        return SuperOp(q @ q.conj().T)


@dataclass
class SubspaceClassification:
    kind: SubspaceKind
    projector: np.ndarray | None = None
    rank: int | None = None
    singular_values: np.ndarray | None = None
    rank_margin: float | None = None
    marginal: bool = False

    @property
    def conventional(self) -> bool:
        return self.kind is SubspaceKind.CONVENTIONAL


def classify_subspace(v: LiouvilleSubspace, tol: float = 1e-10) -> SubspaceClassification:
    """Decide whether ``v = P L P`` for a Hilbert-space projector ``P``.

    ``W`` is the span of all columns ``A e`` for basis elements ``A``; ``P`` is
    its orthogonal projector. The subspace is conventional iff every basis
    element satisfies ``A = P A P`` and ``dim v = rank(P)^2``. The rank decision
    uses a relative singular-value threshold ``tol``; ``rank_margin`` is the
    log10 distance of the nearest singular value from that threshold and
    ``marginal`` flags a decision within one decade.
    """
    if not v.dagger_closed:
        return SubspaceClassification(SubspaceKind.NOT_DAGGER_CLOSED)
    cols = np.concatenate(v.basis, axis=1)
    u, sv, _ = np.linalg.svd(cols)
    thresh = tol * sv[0]
    rank = int(np.sum(sv > thresh))
    with np.errstate(divide="ignore"):
        margin = float(np.min(np.abs(np.log10(np.maximum(sv, 1e-300) / thresh))))
    w = u[:, :rank]
    p = w @ w.conj().T
    inside = all(np.linalg.norm(a - p @ a @ p) <= tol * max(1.0, np.linalg.norm(a)) for a in v.basis)
    kind = SubspaceKind.CONVENTIONAL if inside and v.dim == rank * rank else SubspaceKind.UNCONVENTIONAL
    return SubspaceClassification(kind, p, rank, sv, margin, margin < 1.0)


# -- partial trace -----------------------------------------------------------


def partial_trace(rho, dims: tuple[int, int], which: int = 1) -> np.ndarray:
    """Trace out factor ``which`` (0 or 1) of a bipartite operator."""
    n1, n2 = dims
    rho = as_operator(rho)
    if rho.shape[0] != n1 * n2:
        raise DimensionError(f"operator dim {rho.shape[0]} != {n1} * {n2}")
    r = rho.reshape(n1, n2, n1, n2)
    if which == 1:
        return np.einsum("ikjk->ij", r)
    if which == 0:
        return np.einsum("kikj->ij", r)
    raise ValueError("which must be 0 or 1")


def partial_trace_superop(dims: tuple[int, int], which: int = 1) -> np.ndarray:
    """Rectangular matrix taking ``vec(rho)`` to ``vec(Tr_which rho)``.

    The result has shape ``(K^2, (N1 N2)^2)`` with ``K`` the dimension of the
    surviving factor, in the same column-stacking convention as ``SuperOp``.
    """
    n1, n2 = dims
    if n1 < 1 or n2 < 1:
        raise DimensionError("factor dimensions must be positive")
    n = n1 * n2
    cols = []
    for k in range(n * n):
        e = np.zeros(n * n, dtype=complex)
        e[k] = 1.0
        cols.append(vec(partial_trace(unvec(e, n), dims, which)))
    return np.stack(cols, axis=1)


def tensor_superop(s1: SuperOp, s2: SuperOp) -> SuperOp:
    """``S(rho1 kron rho2) = S1(rho1) kron S2(rho2)``, extended linearly."""
    n1, n2 = s1.hdim, s2.hdim
    t1 = s1.matrix.reshape((n1,) * 4, order="F")
    t2 = s2.matrix.reshape((n2,) * 4, order="F")
    # t[a', b', a, b]: output element (a', b') from input element (a, b).
    full = np.einsum("IJij,KLkl->IKJLikjl", t1, t2).reshape(n1 * n2, n1 * n2, n1 * n2, n1 * n2)
    n = n1 * n2
    return SuperOp(full.reshape(n * n, n * n, order="F"))
