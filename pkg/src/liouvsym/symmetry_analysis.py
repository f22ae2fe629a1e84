"""Structural detection of Liouville symmetries."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.sparse.csgraph import connected_components

from .liouville_space import SuperOp, commute_residual

MAX_COMMUTANT_HDIM = 8


@dataclass
class DifferenceClass:
    difference: float
    pairs: list[tuple[int, int]]
    spread: float


@dataclass
class DifferenceDegeneracyReport:
    """Ordered pairs ``(j, k)``, ``j != k``, grouped by ``w[k] - w[j]``.

    Indices refer to ``eigenvalues`` (sorted ascending, 0-based). Classes are
    ordered by increasing difference.
    """

    eigenvalues: np.ndarray
    classes: list[DifferenceClass]
    tol: float

    def class_of(self, pair: tuple[int, int]) -> int:
        for i, c in enumerate(self.classes):
            if pair in c.pairs:
                return i
        raise KeyError(pair)

    def degenerate_classes(self) -> list[DifferenceClass]:
        """Classes holding more than one pair at a nonzero difference."""
        return [c for c in self.classes if len(c.pairs) > 1 and abs(c.difference) > self.tol]

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [float(w) for w in self.eigenvalues],
            "tol": self.tol,
            "classes": [
                {"difference": c.difference, "spread": c.spread, "pairs": [list(p) for p in c.pairs]}
                for c in self.classes
            ],
        }


def difference_degeneracies(eigenvalues, tol: float = 1e-9) -> DifferenceDegeneracyReport:
    """Group ordered eigenvalue pairs by their difference.

    Differences are sorted and split wherever consecutive values are more
    than ``tol`` apart, so grouping is transitive and deterministic.
    """
    w = np.sort(np.asarray(eigenvalues, dtype=float))
    if not np.all(np.isfinite(w)):
        raise ValueError("eigenvalues must be finite")
    n = len(w)
    pairs = [(j, k) for j in range(n) for k in range(n) if j != k]
    if not pairs:
        return DifferenceDegeneracyReport(w, [], tol)
    diffs = np.array([w[k] - w[j] for j, k in pairs])
    order = np.argsort(diffs, kind="stable")
    classes: list[DifferenceClass] = []
    group = [order[0]]
    for prev, cur in zip(order[:-1], order[1:]):
        if diffs[cur] - diffs[prev] > tol:
            classes.append(_make_class(group, pairs, diffs))
            group = []
        group.append(cur)
    classes.append(_make_class(group, pairs, diffs))
    return DifferenceDegeneracyReport(w, classes, tol)


def _make_class(group, pairs, diffs) -> DifferenceClass:
    vals = diffs[group]
    members = sorted(pairs[i] for i in group)
    return DifferenceClass(float(np.mean(vals)), members, float(vals.max() - vals.min()))


@dataclass
class BlockDecomposition:
    """Partition of basis labels into mutually uncoupled blocks."""

    basis_labels: list[str]
    blocks: list[list[int]]
    permutation: list[int] = field(init=False)
    residual: float = 0.0

    def __post_init__(self):
        self.permutation = [i for b in self.blocks for i in b]

    def block_labels(self) -> list[list[str]]:
        return [[self.basis_labels[i] for i in b] for b in self.blocks]

    def sizes(self) -> list[int]:
        return [len(b) for b in self.blocks]

    def to_dict(self) -> dict:
        return {
            "basis_labels": list(self.basis_labels),
            "blocks": self.block_labels(),
            "sizes": self.sizes(),
            "permutation": self.permutation,
            "residual": self.residual,
        }

    def table(self) -> str:
        width = max(len(str(lbl)) for lbl in self.basis_labels)
        lines = [f"{'label':<{width}}  block"]
        for bi, block in enumerate(self.blocks):
            for i in block:
                lines.append(f"{self.basis_labels[i]:<{width}}  {bi}")
        return "\n".join(lines)


def block_decompose(m, labels=None, tol: float | None = None) -> BlockDecomposition:
    """Connected components of the coupling graph of a square matrix.

    Nodes ``i`` and ``j`` are joined when ``|m_ij|`` or ``|m_ji|`` exceeds
    ``tol`` (default ``1e-12`` times the largest entry). Blocks are sorted by
    their smallest index.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    labels = list(range(n)) if labels is None else list(labels)
    if len(labels) != n:
        raise ValueError("labels do not match matrix size")
    mag = np.abs(m)
    if tol is None:
        tol = 1e-12 * float(mag.max(initial=0.0))
    adj = (mag > tol) | (mag.T > tol)
    _, comp = connected_components(adj, directed=False)
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(comp):
        groups.setdefault(int(c), []).append(i)
    blocks = sorted(groups.values(), key=min)
    block_of = np.empty(n, dtype=int)
    for bi, b in enumerate(blocks):
        block_of[b] = bi
    off = block_of[:, None] != block_of[None, :]
    residual = float(mag[off].max(initial=0.0))
    return BlockDecomposition(labels, blocks, residual)


def commutant_basis(l: SuperOp, tol: float = 1e-10) -> list[SuperOp]:
    """Orthonormal basis of ``{S : [l, S] = 0}``.

    Solves ``(1 kron l - l.T kron 1) vec(S) = 0`` by SVD. The system has
    ``N^4`` unknowns, so ``hdim`` is capped at 8.
    """
    if l.hdim > MAX_COMMUTANT_HDIM:
        raise ValueError(f"commutant requires hdim <= {MAX_COMMUTANT_HDIM}, got {l.hdim}")
    m = l.matrix
    d = m.shape[0]
    eye = np.eye(d)
    ad = np.kron(eye, m) - np.kron(m.T, eye)
    ns = null_space(ad, rcond=tol)
    basis = [SuperOp(ns[:, i].reshape(d, d, order="F")) for i in range(ns.shape[1])]
    for s in basis:
        if commute_residual(l, s) > tol:
            raise RuntimeError("null-space vector fails the commutation check")
    return basis


def commutant_residual(l: SuperOp, s: SuperOp, basis: list[SuperOp] | None = None) -> float:
    """Distance of ``s`` from the span of the commutant, relative to ``|s|``."""
    basis = commutant_basis(l) if basis is None else basis
    q = np.stack([b.matrix.reshape(-1) for b in basis], axis=1)
    x = s.matrix.reshape(-1)
    return float(np.linalg.norm(x - q @ (q.conj().T @ x)) / np.linalg.norm(x))


@dataclass
class DFLSCheck:
    annihilated: bool
    residual_left: float
    residual_right: float
    weak_condition: bool = False
    weak_factor: complex = 0.0


def dfls_check(l_d: SuperOp, p: SuperOp, tol: float = 1e-10) -> DFLSCheck:
    """Test the strict condition ``P L_d = L_d P = 0`` for a projector ``P``.

    Also reports the weaker ``P L_d = L_d P = c P``; ``weak_factor`` is the
    best-fit ``c``. Only the strict condition makes the range of ``P``
    decoherence free.

    Raises:
        ValueError: if ``p`` is not idempotent within ``tol``.
    """
    if np.linalg.norm((p @ p - p).matrix) > tol * max(1.0, p.norm()):
        raise ValueError("p is not idempotent")
    pl, lp = (p @ l_d).matrix, (l_d @ p).matrix
    left = float(np.linalg.norm(pl))
    right = float(np.linalg.norm(lp))
    pn = p.norm() ** 2
    c = complex(np.vdot(p.matrix, pl) / pn) if pn > 0 else 0.0
    scale = max(1.0, l_d.norm())
    weak = (np.linalg.norm(pl - lp) <= tol * scale and np.linalg.norm(pl - c * p.matrix) <= tol * scale)
    return DFLSCheck(left <= tol and right <= tol, left, right, bool(weak), c)
