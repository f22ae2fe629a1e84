"""Lindblad dissipators, evolution, and decoherence-free Liouville subspaces.

Dissipators use the GKS-Lindblad convention with explicit rates,

    L_d(rho) = sum_a g_a (F_a rho F_a^dagger - {F_a^dagger F_a, rho} / 2).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .liouville_space import SuperOp, commute_residual, promote_left, promote_right
from .operator_core import PauliBasis, as_operator, expm, hermitian_eig, pauli
from .symmetry_analysis import BlockDecomposition, dfls_check


class InvalidStateError(ValueError):
    """Initial state is not a density matrix."""


@dataclass
class Dissipator:
    jump_ops: list
    rates: list = field(default_factory=list)

    def __post_init__(self):
        self.jump_ops = [as_operator(f) for f in self.jump_ops]
        if not self.rates:
            self.rates = [1.0] * len(self.jump_ops)
        if len(self.rates) != len(self.jump_ops):
            raise ValueError("one rate per jump operator")
        if any(r < 0 for r in self.rates):
            raise ValueError("rates must be non-negative")


def lindblad_superop(d: Dissipator) -> SuperOp:
    if not d.jump_ops:
        raise ValueError("dissipator has no jump operators")
    n = d.jump_ops[0].shape[0]
    total = SuperOp.zero(n)
    for f, rate in zip(d.jump_ops, d.rates):
        fd = f.conj().T
        ff = fd @ f
        term = promote_left(f) @ promote_right(fd) - 0.5 * (promote_left(ff) + promote_right(ff))
        total = total + rate * term
    return SuperOp(total.matrix, "L_d")


def check_density(rho, tol: float = 1e-10) -> np.ndarray:
    rho = as_operator(rho)
    if np.max(np.abs(rho - rho.conj().T)) > tol:
        raise InvalidStateError("initial state is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvalidStateError("initial state does not have unit trace")
    if hermitian_eig(rho)[0][0] < -tol:
        raise InvalidStateError("initial state is not positive semidefinite")
    return rho


def evolve(l_total: SuperOp, rho0, times, validate: bool = True) -> np.ndarray:
    """``rho(t) = exp(L t)(rho0)`` for each ``t``; returns shape ``(len(times), N, N)``."""
    rho0 = check_density(rho0) if validate else as_operator(rho0)
    out = [SuperOp(expm(l_total.matrix, t))(rho0) for t in np.atleast_1d(np.asarray(times, dtype=float))]
    return np.array(out)


def evolve_schedule(segments, rho0, validate: bool = True) -> np.ndarray:
    """Piecewise-constant evolution.

    ``segments`` is a sequence of ``(duration, SuperOp)``; returns the state
    after each segment, shape ``(len(segments), N, N)``.
    """
    rho = check_density(rho0) if validate else as_operator(rho0)
    out = []
    for duration, gen in segments:
        if duration < 0:
            raise ValueError("segment durations must be non-negative")
        rho = SuperOp(expm(gen.matrix, duration))(rho)
        out.append(rho)
    return np.array(out)


def label_projector(labels, basis_ops) -> SuperOp:
    """Orthogonal projector onto the span of the operators named by ``labels``."""
    cols = np.stack([np.asarray(basis_ops[lbl], dtype=complex).reshape(-1, order="F") for lbl in labels], axis=1)
    q, _ = np.linalg.qr(cols)
    return SuperOp(q @ q.conj().T)


def restrict_to_block(s: SuperOp, p: SuperOp) -> SuperOp:
    """``P S P``: the part of ``s`` acting inside the range of ``p``."""
    return p @ s @ p


@dataclass
class BlockReport:
    labels: list
    preserved_by_unitary: bool
    annihilated_by_dissipator: bool
    unitary_residual: float
    residual_left: float
    residual_right: float

    @property
    def decoherence_free(self) -> bool:
        return self.preserved_by_unitary and self.annihilated_by_dissipator


def dfls_scan(l_u: SuperOp, l_d: SuperOp, blocks: BlockDecomposition, tol: float = 1e-10,
              basis_ops=None) -> list[BlockReport]:
    """Check each block for being a decoherence-free Liouville subspace.

    A block is preserved by the unitary part when its projector commutes with
    ``l_u`` and annihilated by the dissipator when ``P L_d = L_d P = 0``. Block
    labels are looked up in ``basis_ops``; by default they name Pauli strings.
    """
    if basis_ops is None:
        n_qubits = int(round(np.log2(l_u.hdim)))
        pb = PauliBasis(n_qubits)
        basis_ops = {lbl: pb[lbl] for lbl in pb.labels}
    out = []
    for labels in blocks.block_labels():
        p = label_projector(labels, basis_ops)
        u_res = commute_residual(l_u, p)
        chk = dfls_check(l_d, p, tol)
        out.append(BlockReport(labels, u_res <= tol, chk.annihilated, u_res, chk.residual_left, chk.residual_right))
    return out


def block_leakage(rhos, p: SuperOp) -> np.ndarray:
    """``|(1 - P) rho|_F`` for each state in ``rhos``."""
    q = SuperOp.identity(p.hdim) - p
    return np.array([np.linalg.norm(q(r)) for r in rhos])


def sigma_minus(n_qubits: int = 1, which: int = 0) -> np.ndarray:
    """Lowering operator ``|0><1|`` (basis ``|0>`` = spin up) on one qubit of a register."""
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    ops = [np.eye(2)] * n_qubits
    ops[which] = lower
    out = np.ones((1, 1))
    for op in ops:
        out = np.kron(out, op)
    return out


def pauli_dephasing(labels, rates) -> Dissipator:
    """Dissipator with Hermitian Pauli-string jump operators."""
    return Dissipator([pauli(lbl) for lbl in labels], list(rates))


def projected_dissipator(l_d: SuperOp, q: SuperOp) -> SuperOp:
    """``Q L_d Q``: a dissipator confined to the range of the projector ``q``.

    When ``q`` commutes with the unitary generator, everything in the
    complement of ``q`` is decoherence free.
    """
    return SuperOp((q @ l_d @ q).matrix, "Q L_d Q")
