"""Polynomial phase-space dynamics in one degree of freedom.

Observables are polynomials in ``(p, q)``. Coefficients are exact
``Fraction`` values, so algebraic identities hold with zero residual; floats
are converted exactly. Monomials ``p^a q^b`` with ``a + b <= D`` are indexed
degree-major, then by increasing power of ``p``.

The Poisson bracket is ``{f, g} = f_q g_p - f_p g_q`` and the Liouvillian is
``L rho = {H, rho}``. A first-order operator ``L = v_p d_p + v_q d_q`` transports
functions along the characteristics ``d(p, q)/dt = -(v_p, v_q)``; for the
oscillator this is the Hamiltonian flow ``p' = -q, q' = p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import solve_ivp


class DegreeOverflowError(ValueError):
    """A result has terms above the maximum degree of its polynomial space."""


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@lru_cache(maxsize=None)
def monomials(D: int) -> tuple[tuple[int, int], ...]:
    """Exponent pairs ``(a, b)`` of ``p^a q^b``, degree-major."""
    return tuple((a, d - a) for d in range(D + 1) for a in range(d + 1))


@lru_cache(maxsize=None)
def _index(D: int) -> dict[tuple[int, int], int]:
    return {m: i for i, m in enumerate(monomials(D))}


def basis_size(D: int) -> int:
    return (D + 1) * (D + 2) // 2


@dataclass(frozen=True)
class PolyFunction:
    """Polynomial ``sum c_ab p^a q^b`` with total degree at most ``max_degree``."""

    coeffs: dict
    max_degree: int

    def __post_init__(self):
        clean = {}
        for (a, b), c in self.coeffs.items():
            if a < 0 or b < 0:
                raise ValueError("negative exponent")
            c = _q(c)
            if c != 0:
                if a + b > self.max_degree:
                    raise DegreeOverflowError(f"term p^{a} q^{b} exceeds degree {self.max_degree}")
                clean[(a, b)] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def p(cls, D: int) -> "PolyFunction":
        return cls({(1, 0): 1}, D)

    @classmethod
    def q(cls, D: int) -> "PolyFunction":
        return cls({(0, 1): 1}, D)

    @classmethod
    def constant(cls, c, D: int) -> "PolyFunction":
        return cls({(0, 0): c}, D)

    @classmethod
    def oscillator_hamiltonian(cls, D: int) -> "PolyFunction":
        return cls({(2, 0): Fraction(1, 2), (0, 2): Fraction(1, 2)}, D)

    @classmethod
    def random(cls, rng: np.random.Generator, degree: int, D: int, span: int = 5) -> "PolyFunction":
        """Integer-over-small-denominator coefficients on all monomials up to ``degree``."""
        coeffs = {
            m: Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, 4)))
            for m in monomials(degree)
        }
        return cls(coeffs, D)

    @classmethod
    def from_vector(cls, v, D: int) -> "PolyFunction":
        return cls({m: c for m, c in zip(monomials(D), v)}, D)

    def to_vector(self, D: int | None = None) -> np.ndarray:
        D = self.max_degree if D is None else D
        idx = _index(D)
        out = np.array([Fraction(0)] * basis_size(D), dtype=object)
        for m, c in self.coeffs.items():
            if m not in idx:
                raise DegreeOverflowError(f"term {m} does not fit degree {D}")
            out[idx[m]] = c
        return out

    @property
    def degree(self) -> int:
        return max((a + b for a, b in self.coeffs), default=0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def _combine(self, other, sign):
        D = max(self.max_degree, other.max_degree)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, Fraction(0)) + sign * c
        return PolyFunction(out, D)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return PolyFunction({m: -c for m, c in self.coeffs.items()}, self.max_degree)

    def __mul__(self, other):
        if not isinstance(other, PolyFunction):
            c = _q(other)
            return PolyFunction({m: c * v for m, v in self.coeffs.items()}, self.max_degree)
        D = max(self.max_degree, other.max_degree)
        out: dict = {}
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                key = (a1 + a2, b1 + b2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return PolyFunction(out, D)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = PolyFunction.constant(1, self.max_degree)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, PolyFunction) and self.coeffs == other.coeffs

    def dp(self) -> "PolyFunction":
        return PolyFunction({(a - 1, b): a * c for (a, b), c in self.coeffs.items() if a > 0}, self.max_degree)

    def dq(self) -> "PolyFunction":
        return PolyFunction({(a, b - 1): b * c for (a, b), c in self.coeffs.items() if b > 0}, self.max_degree)

    def __call__(self, p: float, q: float) -> float:
        return float(sum(float(c) * p**a * q**b for (a, b), c in self.coeffs.items()))


def poisson_bracket(f: PolyFunction, g: PolyFunction) -> PolyFunction:
    """``{f, g} = df/dq dg/dp - df/dp dg/dq`` in the larger of the two spaces.

    Raises:
        DegreeOverflowError: if the result does not fit that space.
    """
    return f.dq() * g.dp() - f.dp() * g.dq()


@dataclass
class PhaseSpaceOp:
    """Linear operator on the monomial basis of degree ``<= D``.

    ``matrix[i, j]`` is the coefficient of monomial ``i`` in the image of
    monomial ``j``. ``truncated`` marks operators whose images were clipped at
    degree ``D``.
    """

    matrix: np.ndarray
    D: int
    degree_shift: int = 0
    truncated: bool = False

    def __call__(self, f: PolyFunction) -> PolyFunction:
        return PolyFunction.from_vector(self.matrix.dot(f.to_vector(self.D)), self.D)

    def __matmul__(self, other: "PhaseSpaceOp") -> "PhaseSpaceOp":
        return PhaseSpaceOp(self.matrix.dot(other.matrix), self.D, self.degree_shift + other.degree_shift,
                            self.truncated or other.truncated)

    def __add__(self, other: "PhaseSpaceOp") -> "PhaseSpaceOp":
        return PhaseSpaceOp(self.matrix + other.matrix, self.D, self.degree_shift, self.truncated or other.truncated)

    def __sub__(self, other: "PhaseSpaceOp") -> "PhaseSpaceOp":
        return PhaseSpaceOp(self.matrix - other.matrix, self.D, self.degree_shift, self.truncated or other.truncated)

    def __mul__(self, c) -> "PhaseSpaceOp":
        return PhaseSpaceOp(self.matrix * _q(c), self.D, self.degree_shift, self.truncated)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(x == 0 for x in self.matrix.flat)

    def max_abs(self) -> float:
        return float(max((abs(x) for x in self.matrix.flat), default=0))

    def as_float(self) -> np.ndarray:
        return self.matrix.astype(float)

    def respects_grading(self) -> bool:
        """True iff nonzero entries only connect degrees differing by ``degree_shift``."""
        mons = monomials(self.D)
        for i, j in zip(*np.nonzero(self.matrix != 0)):
            if sum(mons[i]) - sum(mons[j]) != self.degree_shift:
                return False
        return True


def op_commutator(a: PhaseSpaceOp, b: PhaseSpaceOp) -> PhaseSpaceOp:
    return a @ b - b @ a


def tabulate(fn, D: int, degree_shift: int = 0) -> PhaseSpaceOp:
    """Matrix of a linear map on polynomials; images above degree ``D`` are dropped."""
    idx = _index(D)
    mons = monomials(D)
    m = np.array([[Fraction(0)] * len(mons) for _ in mons], dtype=object)
    truncated = False
    big = 2 * D + 2
    for j, mono in enumerate(mons):
        img = fn(PolyFunction({mono: 1}, big))
        for key, c in img.coeffs.items():
            if key in idx:
                m[idx[key], j] = c
            else:
                truncated = True
    return PhaseSpaceOp(m, D, degree_shift, truncated)


def multiplication_op(f: PolyFunction, D: int) -> PhaseSpaceOp:
    """``g -> f g``."""
    return tabulate(lambda g: f * g, D, degree_shift=f.degree)


def classical_liouvillian(h: PolyFunction, D: int) -> PhaseSpaceOp:
    """Matrix of ``rho -> {h, rho}``; degree-preserving when ``deg h = 2``."""
    return tabulate(lambda rho: poisson_bracket(h, rho), D, degree_shift=h.degree - 2)


def linear_vector_field(D: int, pp=0, pq=0, qp=0, qq=0) -> PhaseSpaceOp:
    """``(pp p + pq q) d_p + (qp p + qq q) d_q``, a degree-preserving operator."""
    pp, pq, qp, qq = map(_q, (pp, pq, qp, qq))

    def fn(f):
        vp = PolyFunction({(1, 0): pp, (0, 1): pq}, f.max_degree)
        vq = PolyFunction({(1, 0): qp, (0, 1): qq}, f.max_degree)
        return vp * f.dp() + vq * f.dq()

    return tabulate(fn, D)


def scaling_generator(D: int) -> PhaseSpaceOp:
    """Euler operator ``p d_p + q d_q``: multiplies ``p^a q^b`` by ``a + b``."""
    return linear_vector_field(D, pp=1, qq=1)


def damped_liouvillian(gamma, mu, D: int) -> PhaseSpaceOp:
    """``q d_p - p d_q + gamma p d_p + mu q d_q``."""
    return linear_vector_field(D, pp=gamma, pq=1, qp=-1, qq=mu)


def flow_matrix(op: PhaseSpaceOp) -> np.ndarray:
    """Matrix ``M`` with ``d(p, q)/dt = M (p, q)`` along the characteristics of ``op``.

    Read off from the images of the coordinate functions, ``op(p) = v_p`` and
    ``op(q) = v_q``; the flow is ``-(v_p, v_q)``.
    """
    D = op.D
    vp = op(PolyFunction.p(D))
    vq = op(PolyFunction.q(D))
    if vp.degree > 1 or vq.degree > 1 or (0, 0) in vp.coeffs or (0, 0) in vq.coeffs:
        raise ValueError("operator is not a linear vector field")
    return -np.array([
        [float(vp.coeffs.get((1, 0), 0)), float(vp.coeffs.get((0, 1), 0))],
        [float(vq.coeffs.get((1, 0), 0)), float(vq.coeffs.get((0, 1), 0))],
    ])


def damped_eigenfrequencies(gamma: float, mu: float) -> np.ndarray:
    """``w = +-sqrt(1 - (gamma - mu)^2 / 4) - i (gamma + mu) / 2``, ordered ``(+, -)``.

    Modes evolve as ``exp(-i w t)``, so ``-i w`` are the eigenvalues of the
    linear flow matrix.
    """
    root = np.sqrt(complex(1 - (gamma - mu) ** 2 / 4))
    damp = 0.5j * (gamma + mu)
    return np.array([root - damp, -root - damp])


def flow_trajectory(gamma: float, mu: float, start, times, rtol: float = 1e-12,
                    atol: float = 1e-14) -> np.ndarray:
    """Integrate the characteristics of the damped Liouvillian; returns ``(T, 2)`` of ``(p, q)``.

    Raises:
        RuntimeError: if the adaptive integrator fails.
    """
    m = flow_matrix(damped_liouvillian(gamma, mu, 1))
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if len(times) == 0:
        return np.empty((0, 2))
    sol = solve_ivp(lambda t, x: m @ x, (times[0], times[-1]) if len(times) > 1 else (times[0], times[0]),
                    np.asarray(start, dtype=float), method="DOP853", t_eval=times, rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(f"flow integration failed: {sol.message}")
    return sol.y.T


def scaling_map(alpha, D: int) -> PhaseSpaceOp:
    """Pullback of ``(p, q) -> (alpha p, alpha q)``: ``g -> g o A^{-1}``."""
    alpha = _q(alpha)
    if alpha == 0:
        raise ValueError("scaling map must be invertible")
    return tabulate(lambda f: PolyFunction(
        {(a, b): c / alpha ** (a + b) for (a, b), c in f.coeffs.items()}, f.max_degree), D)


@dataclass
class ScalingCheck:
    residual: float
    jacobian_determinant: float
    canonical: bool


def scaling_map_symmetry_check(alpha, D: int, gamma=0, mu=0) -> ScalingCheck:
    """Commutator of the constant scaling map with the damped Liouvillian."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    a = scaling_map(alpha, D)
    l = damped_liouvillian(gamma, mu, D)
    det = _q(alpha) ** 2
    return ScalingCheck(op_commutator(l, a).max_abs(), float(det), det == 1)
