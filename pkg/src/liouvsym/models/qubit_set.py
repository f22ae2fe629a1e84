"""Qubit coupled to a single-electron transistor (SET).

The effective Hamiltonian on the qubit (``b``) tensor SET (``s``) space is

    H = alpha sx_b + beta sy_b + gamma sx_s + delta sy_s + epsilon sz_s
        + zeta sy_b sz_s + eta sz_b sy_s

The qubit is the left tensor factor, so the basis is ``|++>, |+->, |-+>,
|-->`` in terms of the ``sz_b, sz_s`` eigenvalues. Pauli coefficients use ``rho = sum rho_jk
s^j_b s^k_s`` with ``rho_jk = Tr{s^j_b s^k_s rho} / 4``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from ..liouville_space import SuperOp, liouvillian_from_h, partial_trace
from ..open_system import check_density
from ..operator_core import PauliBasis, as_operator, expm, pauli

PAULI2 = PauliBasis(2)

# Row/column order of the 15-dimensional Bloch Liouvillian.
BLOCH_LABELS = (
    "y0", "z0", "xx", "xy", "xz",
    "x0", "yx", "yy", "yz", "zx", "zy", "zz", "0x", "0y", "0z",
)
FIVE_BLOCK = BLOCH_LABELS[:5]
TEN_BLOCK = BLOCH_LABELS[5:]

_PARITY = {"0": 1, "x": -1, "y": -1, "z": 1}


class ParameterError(ValueError):
    """Parameter point outside the domain of an analytic formula."""


@dataclass(frozen=True)
class EffParams:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0
    epsilon: float = 0.0
    zeta: float = 0.0
    eta: float = 0.0

    def __post_init__(self):
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if not np.isfinite(v):
                raise ValueError(f"{f.name} must be finite, got {v}")

    def as_tuple(self) -> tuple[float, ...]:
        return dataclasses.astuple(self)

    def replace(self, **kw) -> "EffParams":
        return dataclasses.replace(self, **kw)

    @classmethod
    def random(cls, rng: np.random.Generator, scale: float = 3.0, minimum: float = 0.0,
               beta: float = 0.0, epsilon: float = 0.0) -> "EffParams":
        """Draw alpha, gamma, delta, zeta, eta with ``minimum <= |x| <= scale``."""
        mag = rng.uniform(minimum, scale, size=5)
        sign = rng.choice([-1.0, 1.0], size=5)
        a, g, d, z, e = mag * sign
        return cls(a, beta, g, d, epsilon, z, e)


@dataclass(frozen=True)
class CircuitParams:
    """Circuit quantities of the qubit-SET loop, in one consistent unit system."""

    Delta: float = 0.0
    E1: float = 0.0
    E2: float = 0.0
    phi0: float = 0.0
    phie: float = 0.0
    C1: float = 0.0
    C2: float = 0.0
    Cb: float = 1.0
    Cg: float = 0.0
    Vg: float = 0.0
    Q0: float = 0.0
    q: float = 0.0
    e: float = 0.0

    def __post_init__(self):
        if not self.Cb > 0:
            raise ValueError("Cb must be positive")
        if not self.C1 + self.C2 + self.Cg > 0:
            raise ValueError("C1 + C2 + Cg must be positive")


def circuit_to_coefficients(c: CircuitParams) -> EffParams:
    c_sum = c.C1 + c.C2 + c.Cg
    q_eff = c.Q0 + c.e + c.Cg * c.Vg
    return EffParams(
        alpha=-c.Delta,
        beta=c.C1 * c.q * q_eff / (c.Cb * c_sum),
        gamma=-(c.E1 * np.cos(c.phi0) + c.E2 * np.cos(c.phie)) / 2,
        delta=-c.E2 * np.sin(c.phie) / 2,
        epsilon=c.e * q_eff / c_sum,
        zeta=c.C1 * c.q * c.e / (c.Cb * c_sum),
        eta=-c.E1 * np.sin(c.phi0) / 2,
    )


_TERMS = ("x0", "y0", "0x", "0y", "0z", "yz", "zy")


def build_heff(p: EffParams) -> np.ndarray:
    return sum(c * pauli(lbl) for c, lbl in zip(p.as_tuple(), _TERMS))


def charge_conjugation_symmetry(p: EffParams) -> np.ndarray:
    """Conventional symmetry of ``H`` at ``beta = epsilon = 0``.

    ``H^2 = (alpha^2 + ... + eta^2) + 2A`` with this ``A``, hence ``[H, A] = 0``.
    """
    a, _, g, d, _, z, e = p.as_tuple()
    return d * e * pauli("z0") + (a * g + z * e) * pauli("xx") + a * d * pauli("xy")


def _require_reduced(p: EffParams) -> None:
    if p.beta != 0.0 or p.epsilon != 0.0:
        raise ParameterError(
            "analytic formulas need beta = epsilon = 0 (the quartic reduces to a "
            "quadratic in omega^2 only when beta*epsilon*zeta = 0)"
        )


def _omega_squared(p: EffParams) -> tuple[float, float]:
    a, _, g, d, _, z, e = p.as_tuple()
    s = a * a + g * g + d * d + z * z + e * e
    root = np.sqrt((a * g + z * e) ** 2 + d * d * (a * a + e * e))
    hi = s + 2 * root
    # Product of the two roots, written as a sum of squares to avoid the
    # cancellation in s - 2*root.
    prod = (a * a + e * e - g * g - d * d - z * z) ** 2 + 4 * (a * z - e * g) ** 2
    lo = prod / hi if hi > 0 else 0.0
    return lo, hi


def analytic_spectrum(p: EffParams) -> np.ndarray:
    """Eigenvalues ``w1 < w2 < w3 < w4`` of ``build_heff(p)`` in closed form.

    With ``beta = epsilon = 0`` the spectrum is ``(-w+, -w-, w-, w+)`` where
    ``w^2 = S +- 2 sqrt((alpha gamma + zeta eta)^2 + delta^2 (alpha^2 + eta^2))``.
    In particular ``w3 - w1 = w4 - w2``.
    """
    _require_reduced(p)
    lo, hi = _omega_squared(p)
    wm, wp = np.sqrt(lo), np.sqrt(hi)
    return np.array([-wp, -wm, wm, wp])


def analytic_eigenvectors(p: EffParams, tol: float = 1e-12):
    """Unnormalized eigenvectors (columns) and their squared norms.

    Ordered like ``analytic_spectrum``. With ``u = -2(alpha gamma + zeta eta -
    i alpha delta)`` and ``v_n = alpha^2 + gamma^2 + (delta + eta)^2 + zeta^2 -
    w_n^2`` the n-th vector is::

        (u w_n,
         u (gamma + i(eta + delta)) + v_n (alpha + i zeta),
         u (alpha + i zeta) + v_n (gamma + i(eta - delta)),
         v_n w_n)

    and its squared norm is ``4 w_n^2 v_n (v_n - 2 delta eta)``.

    Raises:
        ParameterError: at points where a vector or its norm vanishes.
    """
    _require_reduced(p)
    a, _, g, d, _, z, e = p.as_tuple()
    w = analytic_spectrum(p)
    scale = max(1.0, float(np.max(np.abs(w))))
    u = -2 * (a * g + z * e - 1j * a * d)
    vecs = np.empty((4, 4), dtype=complex)
    norms = np.empty(4)
    for n, wn in enumerate(w):
        v = a * a + g * g + (d + e) ** 2 + z * z - wn * wn
        norms[n] = 4 * wn * wn * v * (v - 2 * d * e)
        if abs(wn) <= tol * scale or abs(v) <= tol * scale**2 or abs(norms[n]) <= tol * scale**6:
            raise ParameterError("degenerate parameter point for the analytic eigenvectors")
        vecs[:, n] = [
            u * wn,
            u * (g + 1j * (e + d)) + v * (1j * z + a),
            u * (1j * z + a) + v * (g + 1j * (e - d)),
            v * wn,
        ]
    return vecs, norms


# -- correlators ---------------------------------------------------------------


@dataclass(frozen=True)
class CorrelatorSpec:
    """``f_jkl(t) = Tr{s^j_b(t) s^k_b s^l_s}`` with ``j`` in xyz and ``k, l`` in 0xyz."""

    j: str
    k: str
    l: str

    def __post_init__(self):
        if self.j not in "xyz" or len(self.j) != 1:
            raise ValueError(f"j must be one of x, y, z, got {self.j!r}")
        for v in (self.k, self.l):
            if v not in "0xyz" or len(v) != 1:
                raise ValueError(f"k and l must be one of 0, x, y, z, got {v!r}")

    @classmethod
    def parse(cls, text: str) -> "CorrelatorSpec":
        text = text.replace(",", "").strip()
        if len(text) != 3:
            raise ValueError(f"correlator spec must have three letters, got {text!r}")
        return cls(*text)

    @property
    def name(self) -> str:
        return self.j + self.k + self.l

    @property
    def parity_product(self) -> int:
        return _PARITY[self.j] * _PARITY[self.k] * _PARITY[self.l]

    def probe(self) -> np.ndarray:
        return pauli(self.j + "0")

    def partner(self) -> np.ndarray:
        return pauli(self.k + self.l)


def all_correlator_specs() -> list[CorrelatorSpec]:
    """The 45 triples left after dropping the trivially vanishing ``f_j00``."""
    return [
        CorrelatorSpec(j, k, l)
        for j in "xyz" for k in "0xyz" for l in "0xyz"
        if not (k == "0" and l == "0")
    ]


VANISHING_TRIPLES = frozenset(
    ["yx0", "zx0", "xy0", "xz0"]
    + [f"{j}{k}{l}" for j in "yz" for k in "yz0" for l in "xyz"]
    + [f"xx{l}" for l in "xyz"]
)


def correlator_numeric(h, spec: CorrelatorSpec, times) -> np.ndarray:
    """``Tr{exp(iht) s^j_b exp(-iht) s^k_b s^l_s}`` by matrix exponentials."""
    h = as_operator(h)
    probe, partner = spec.probe(), spec.partner()
    out = []
    for t in np.atleast_1d(np.asarray(times, dtype=float)):
        u = expm(-1j * h, t)
        out.append(np.trace(u.conj().T @ probe @ u @ partner).real)
    return np.array(out)


def correlator_analytic(p: EffParams, spec: CorrelatorSpec, times) -> np.ndarray:
    """Closed-form correlator from the analytic eigenvectors.

    The cosine branch applies when the parity product is +1, the sine branch
    when it is -1.
    """
    vecs, norms = analytic_eigenvectors(p)
    w = analytic_spectrum(p)
    t = np.atleast_1d(np.asarray(times, dtype=float))
    a = vecs.conj().T @ spec.probe() @ vecs
    b = vecs.conj().T @ spec.partner() @ vecs
    x = a * b.T / np.outer(norms, norms)  # x[n, m] = a_nm b_mn / (<n|n><m|m>)
    w_mn = w[None, :] - w[:, None]        # w_mn[n, m] = w_m - w_n
    phase = w_mn[None, :, :] * t[:, None, None]
    if spec.parity_product == 1:
        return np.sum(x.real[None] * np.cos(phase), axis=(1, 2))
    return np.sum(x.imag[None] * np.sin(phase), axis=(1, 2))


@dataclass
class CancellationReport:
    vanishing: list[str]
    nonvanishing: list[str]
    max_abs: dict[str, float]
    method: str

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def cancellation_report(p: EffParams, times=None, tol: float = 1e-10,
                        method: str = "auto") -> CancellationReport:
    """Classify all 45 nontrivial correlators as vanishing or not on a time grid.

    ``method="auto"`` uses the closed form when ``beta = epsilon = 0`` and the
    analytic eigenvectors are nondegenerate, matrix exponentials otherwise.
    """
    times = default_times() if times is None else np.asarray(times, dtype=float)
    if method == "auto":
        method = "numeric"
        if p.beta == 0.0 and p.epsilon == 0.0:
            try:
                analytic_eigenvectors(p)
                method = "analytic"
            except ParameterError:
                pass
    h = build_heff(p)
    max_abs = {}
    for spec in all_correlator_specs():
        if method == "analytic":
            f = correlator_analytic(p, spec, times)
        else:
            f = correlator_numeric(h, spec, times)
        max_abs[spec.name] = float(np.max(np.abs(f)))
    vanishing = [k for k, v in max_abs.items() if v <= tol]
    nonvanishing = [k for k, v in max_abs.items() if v > tol]
    return CancellationReport(vanishing, nonvanishing, max_abs, method)


def default_times() -> np.ndarray:
    return np.linspace(0.0, 20.0, 50)


# -- Bloch representation --------------------------------------------------------


def bloch_liouvillian(p: EffParams) -> np.ndarray:
    """Real 15x15 generator of the Pauli coefficients, rows/cols in ``BLOCH_LABELS``.

    ``d/dt rho_jk = sum M[jk, lm] rho_lm`` for ``d rho/dt = i[rho, H]``. For
    ``beta = 0`` the first five and last ten labels decouple.
    """
    a, b, g, d, e, z, n = p.as_tuple()
    m = np.array([
        # y0  z0  xx  xy  xz  x0  yx  yy  yz  zx  zy  zz  0x  0y  0z
        [0, -a, 0, n, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0],        # y0
        [a, 0, 0, 0, -z, -b, 0, 0, 0, 0, 0, 0, 0, 0, 0],       # z0
        [0, 0, 0, -e, d, 0, 0, 0, 0, b, 0, 0, 0, 0, 0],        # xx
        [-n, 0, e, 0, -g, 0, 0, 0, 0, 0, b, 0, 0, 0, 0],       # xy
        [0, z, -d, g, 0, 0, 0, 0, 0, 0, 0, b, 0, 0, 0],        # xz
        [0, b, 0, 0, 0, 0, 0, -n, 0, 0, 0, z, 0, 0, 0],        # x0
        [0, 0, 0, 0, 0, 0, 0, -e, d, -a, 0, 0, 0, -z, 0],      # yx
        [0, 0, 0, 0, 0, n, e, 0, -g, 0, -a, 0, z, 0, 0],       # yy
        [0, 0, 0, 0, 0, 0, -d, g, 0, 0, 0, -a, 0, 0, 0],       # yz
        [0, 0, -b, 0, 0, 0, a, 0, 0, 0, -e, d, 0, 0, n],       # zx
        [0, 0, 0, -b, 0, 0, 0, a, 0, e, 0, -g, 0, 0, 0],       # zy
        [0, 0, 0, 0, -b, -z, 0, 0, a, -d, g, 0, -n, 0, 0],     # zz
        [0, 0, 0, 0, 0, 0, 0, -z, 0, 0, 0, n, 0, -e, d],       # 0x
        [0, 0, 0, 0, 0, 0, z, 0, 0, 0, 0, 0, e, 0, -g],        # 0y
        [0, 0, 0, 0, 0, 0, 0, 0, 0, -n, 0, 0, -d, g, 0],       # 0z
    ], dtype=float)
    return 2.0 * m


def pauli_liouvillian(h) -> np.ndarray:
    """Generator of all 16 Pauli coefficients of a two-qubit ``rho``, lexicographic order.

    Works for any Hermitian 4x4 ``h``; entries are ``<B_a, i[B_b, h]> / 4``.
    """
    h = as_operator(h)
    if h.shape != (4, 4):
        raise ValueError("pauli_liouvillian needs a 4x4 Hamiltonian")
    out = np.empty((16, 16))
    for col, bb in enumerate(PAULI2.elements):
        out[:, col] = PAULI2.coefficients(1j * (bb @ h - h @ bb)).real
    return out


def bloch_permutation() -> list[int]:
    """Indices into the lexicographic Pauli order for each entry of ``BLOCH_LABELS``."""
    return [PAULI2.index(lbl) for lbl in BLOCH_LABELS]


def pauli_coefficients(rho) -> dict[str, float]:
    """Real Pauli coefficients ``rho_jk`` of a Hermitian two-qubit operator."""
    return dict(zip(PAULI2.labels, PAULI2.coefficients(rho).real))


def _pauli_block_superop(labels) -> SuperOp:
    basis = PAULI2.matrix()
    idx = [PAULI2.index(lbl) for lbl in labels]
    q = basis[:, idx] / 2.0
    return SuperOp(q @ q.conj().T)


def block_projector(p: EffParams | None = None) -> SuperOp:
    """``(P^x_b - P^0_s)^2`` on two-qubit Liouville space.

    ``P^x_b(rho) = sx_b kron Tr_b{sx_b rho} / 2`` and ``P^0_s(rho) = Tr_s{rho}
    kron 1_s / 2``. The result fixes ``1``, ``y0``, ``z0``, ``xx``, ``xy``, ``xz``
    and annihilates the other Pauli strings. It does not depend on ``p``.
    """
    sx = pauli("x")

    def pbx(rho):
        return np.kron(sx, partial_trace(np.kron(sx, np.eye(2)) @ rho, (2, 2), which=0)) / 2

    def ps0(rho):
        return np.kron(partial_trace(rho, (2, 2), which=1), np.eye(2)) / 2

    d = SuperOp.from_function(pbx, 4) - SuperOp.from_function(ps0, 4)
    return SuperOp((d @ d).matrix, "P")


def five_block_projector() -> SuperOp:
    """Projector onto the span of ``y0, z0, xx, xy, xz`` only (identity excluded)."""
    return _pauli_block_superop(FIVE_BLOCK)


def ten_block_projector() -> SuperOp:
    return _pauli_block_superop(TEN_BLOCK)


def qubit_liouvillian(p: EffParams) -> SuperOp:
    return liouvillian_from_h(build_heff(p))


def qubit_marginal_trajectory(p: EffParams, r: float, theta: float, rho_s, times) -> np.ndarray:
    """Qubit ``(<sy_b>, <sz_b>)`` after preparing the qubit in the y-z plane.

    ``rho(0) = (1 + r cos(theta) sy + r sin(theta) sz) / 2 kron rho_s``. For
    ``beta = 0`` the result does not depend on ``rho_s``. Returns an array of
    shape ``(len(times), 2)``.
    """
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    rho_s = check_density(rho_s)
    if rho_s.shape != (2, 2):
        raise ValueError("rho_s must be 2x2")
    qubit = 0.5 * (np.eye(2) + r * np.cos(theta) * pauli("y") + r * np.sin(theta) * pauli("z"))
    rho0 = np.kron(qubit, rho_s)
    l = qubit_liouvillian(p)
    sy, sz = pauli("y0"), pauli("z0")
    out = []
    for t in np.atleast_1d(np.asarray(times, dtype=float)):
        rho = SuperOp(expm(l.matrix, t))(rho0)
        out.append([np.trace(sy @ rho).real, np.trace(sz @ rho).real])
    return np.array(out)
