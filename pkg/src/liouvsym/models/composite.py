"""Two uncoupled subsystems, ``H = H1 kron 1 + 1 kron H2``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from ..liouville_space import SuperOp, liouvillian_from_h, partial_trace_superop
from ..operator_core import as_operator, hermitian_eig
from ..symmetry_analysis import DifferenceDegeneracyReport, difference_degeneracies


@dataclass
class CompositeReport:
    h: np.ndarray
    report: DifferenceDegeneracyReport
    identities_checked: int
    identities_confirmed: int

    @property
    def confirmed(self) -> bool:
        return self.identities_checked == self.identities_confirmed


def uncoupled_composite(h1, h2, tol: float = 1e-9) -> CompositeReport:
    """Build ``H`` and confirm ``w_ik - w_il = w_jk - w_jl`` for all ``i, j, k, l``.

    Composite eigenvalues are ``w_ik = w1_i + w2_k``. Each identity instance
    with ``k != l`` is confirmed when both ordered pairs land in the same class
    of ``difference_degeneracies``.
    """
    h1, h2 = as_operator(h1), as_operator(h2)
    n1, n2 = h1.shape[0], h2.shape[0]
    h = np.kron(h1, np.eye(n2)) + np.kron(np.eye(n1), h2)
    w1, _ = hermitian_eig(h1)
    w2, _ = hermitian_eig(h2)
    w = (w1[:, None] + w2[None, :]).reshape(-1)
    order = np.argsort(w, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(len(w))
    report = difference_degeneracies(w, tol)

    def idx(i, k):
        return int(rank[i * n2 + k])

    checked = confirmed = 0
    for i, j in itertools.product(range(n1), repeat=2):
        for k, l in itertools.permutations(range(n2), 2):
            checked += 1
            # Ordered pair (a, b) carries the difference w_b - w_a.
            if report.class_of((idx(i, l), idx(i, k))) == report.class_of((idx(j, l), idx(j, k))):
                confirmed += 1
    return CompositeReport(h, report, checked, confirmed)


def forgetful_residual(h1, h2) -> float:
    """``|Tr_2 o L_H - L_H1 o Tr_2|`` for the uncoupled ``H``."""
    h1, h2 = as_operator(h1), as_operator(h2)
    n1, n2 = h1.shape[0], h2.shape[0]
    h = np.kron(h1, np.eye(n2)) + np.kron(np.eye(n1), h2)
    tr2 = partial_trace_superop((n1, n2), which=1)
    lhs = tr2 @ liouvillian_from_h(h).matrix
    rhs = liouvillian_from_h(h1).matrix @ tr2
    return float(np.linalg.norm(lhs - rhs))


def forgetful_superop(dims: tuple[int, int]) -> SuperOp:
    """``rho -> Tr_2{rho} kron 1_2``: the forgetful map lifted back to the composite space."""
    n1, n2 = dims
    tr2 = partial_trace_superop(dims, which=1)
    n = n1 * n2
    cols = []
    for k in range(n * n):
        r1 = tr2[:, k].reshape((n1, n1), order="F")
        cols.append(np.kron(r1, np.eye(n2)).reshape(-1, order="F"))
    return SuperOp(np.stack(cols, axis=1), "Tr2")
