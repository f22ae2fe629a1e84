"""Truncated harmonic oscillator and Stark ladder with their ladder superoperators.

``S+ = a^dagger_l a_r`` raises both indices of ``|m><n|``, ``S- = a_l
a^dagger_r`` lowers them. Truncation to ``D`` levels spoils the algebra near
the top level, so identities are compared on an interior window of levels.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..liouville_space import SuperOp, liouvillian_from_h, promote_left, promote_right, supercommutator
from ..operator_core import expm


@dataclass
class Ladder:
    h: np.ndarray
    a: np.ndarray

    @property
    def a_dagger(self) -> np.ndarray:
        return self.a.conj().T


def harmonic_oscillator(D: int) -> Ladder:
    """``h = a^dagger a + 1/2`` on the lowest ``D`` Fock states."""
    if D < 2:
        raise ValueError("truncation dimension must be at least 2")
    a = np.diag(np.sqrt(np.arange(1, D, dtype=float)), 1).astype(complex)
    h = np.diag(np.arange(D) + 0.5).astype(complex)
    return Ladder(h, a)


def stark_ladder(D: int, Delta: float) -> Ladder:
    """``h = sum n |n><n| - Delta (a + a^dagger)`` with the shift ``a = sum |n><n+1|``."""
    if D < 2:
        raise ValueError("truncation dimension must be at least 2")
    a = np.eye(D, k=1, dtype=complex)
    h = np.diag(np.arange(D, dtype=float)).astype(complex) - Delta * (a + a.conj().T)
    return Ladder(h, a)


def ladder_superops(a) -> tuple[SuperOp, SuperOp]:
    """``(S+, S-) = (a^dagger_l a_r, a_l a^dagger_r)``."""
    a = np.asarray(a, dtype=complex)
    ad = a.conj().T
    return promote_left(ad) @ promote_right(a), promote_left(a) @ promote_right(ad)


def coherent_state(alpha: complex, D: int) -> np.ndarray:
    """``exp(alpha a^dagger - alpha^* a)|0>`` in the truncated Fock space."""
    a = harmonic_oscillator(D).a
    gen = alpha * a.conj().T - np.conj(alpha) * a
    ket = expm(gen)[:, 0]
    return ket


def window_residual(s: SuperOp, window: tuple[int, int]) -> float:
    """Largest ``|s|`` entry between ``|m><n|`` with both ``m, n`` inside ``window``."""
    lo, hi = window
    n = s.hdim
    t = s.matrix.reshape((n,) * 4, order="F")
    return float(np.max(np.abs(t[lo:hi, lo:hi, lo:hi, lo:hi]), initial=0.0))


@dataclass
class LadderAlgebraReport:
    window: tuple[int, int]
    l_splus: float
    l_sminus: float
    splus_sminus: float
    splus_sminus_minus_iL: float
    splus_sminus_plus_hl_hr: float
    hl_splus_minus_splus: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def ladder_superop_algebra(a, h, interior: tuple[int, int]) -> LadderAlgebraReport:
    """Residuals of the ladder-superoperator commutation relations on a window.

    Reports the largest entry, restricted to ``interior``, of ``[L, S+]``,
    ``[L, S-]``, ``[S+, S-]``, ``[S+, S-] - iL``, ``[S+, S-] + H_l + H_r`` and
    ``[H_l, S+] - S+``.
    """
    a = np.asarray(a, dtype=complex)
    h = np.asarray(h, dtype=complex)
    n = a.shape[0]
    lo, hi = interior
    if not 0 <= lo < hi <= n - 1:
        raise ValueError(f"window {interior} must lie inside [0, {n - 1}) to avoid the truncation edge")
    l = liouvillian_from_h(h)
    sp, sm = ladder_superops(a)
    hl, hr = promote_left(h), promote_right(h)
    c = supercommutator(sp, sm)
    return LadderAlgebraReport(
        window=(lo, hi),
        l_splus=window_residual(supercommutator(l, sp), interior),
        l_sminus=window_residual(supercommutator(l, sm), interior),
        splus_sminus=window_residual(c, interior),
        splus_sminus_minus_iL=window_residual(c - 1j * l, interior),
        splus_sminus_plus_hl_hr=window_residual(c + hl + hr, interior),
        hl_splus_minus_splus=window_residual(supercommutator(hl, sp) - sp, interior),
    )
