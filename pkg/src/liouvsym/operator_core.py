"""Dense operator algebra on finite Hilbert spaces.

Operators are plain complex ``numpy`` arrays of shape ``(N, N)``. Tensor
products follow ``numpy.kron``: for ``kron(a, b)`` the flat index of the pair
``(j, k)`` is ``j * b.shape[0] + k`` (left factor major). Every module in the
package relies on this convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

# Default tolerances for O(1)-normalized operators.
EQ_TOL = 1e-12
RESIDUAL_TOL = 1e-10

PAULI_LABELS = "0xyz"

_PAULI = {
    "0": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DimensionError(ValueError):
    """Operands have incompatible dimensions."""


class NotHermitianError(ValueError):
    """An operation requiring a Hermitian operator got something else."""


def as_operator(a) -> np.ndarray:
    """Coerce to a square complex matrix with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("operator has non-finite entries")
    return m


def pauli(label: str) -> np.ndarray:
    """Pauli string such as ``"x"``, ``"y0"`` or ``"zzx"`` (``"0"`` is the identity)."""
    out = np.ones((1, 1), dtype=complex)
    for ch in label:
        out = np.kron(out, _PAULI[ch])
    return out


def dag(a) -> np.ndarray:
    return np.asarray(a).conj().T


def kron(*ops) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, as_operator(op))
    return out


def _same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch: {a.shape} vs {b.shape}")


def commutator(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    _same_dim(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = as_operator(a), as_operator(b)
    _same_dim(a, b)
    return a @ b + b @ a


def trace_inner_product(a, b) -> complex:
    """``Tr{a^dagger b}``, the Liouville-space inner product."""
    a, b = as_operator(a), as_operator(b)
    _same_dim(a, b)
    return complex(np.vdot(a, b))


def is_hermitian(a, tol: float = EQ_TOL) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def hermitian_eig(h, tol: float = EQ_TOL, max_sweeps: int = 50):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with ``w`` ascending and the columns of ``v`` the
    orthonormal eigenvectors, so that ``h @ v = v @ diag(w)``.

    Raises:
        NotHermitianError: if ``h`` deviates from Hermitian by more than
            ``tol * max(1, |h|)``.
    """
    a = as_operator(h).copy()
    n = a.shape[0]
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    if np.max(np.abs(a - a.conj().T), initial=0.0) > tol * scale:
        raise NotHermitianError("hermitian_eig needs a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    v = np.eye(n, dtype=complex)
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n), v

    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= 1e-17 * norm:
            break
        for p, q in itertools.combinations(range(n), 2):
            apq = a[p, q]
            mag = abs(apq)
            if mag <= 1e-300 or mag <= 1e-18 * norm:
                continue
            app, aqq = a[p, p].real, a[q, q].real
            theta = (aqq - app) / (2.0 * mag)
            t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
            c = 1.0 / np.hypot(1.0, t)
            s = t * c
            phase = apq / mag
            # Unitary J = diag(1, conj(phase)) @ [[c, s], [-s, c]] on the (p, q) plane.
            j = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
            idx = [p, q]
            a[:, idx] = a[:, idx] @ j
            a[idx, :] = j.conj().T @ a[idx, :]
            a[p, q] = a[q, p] = 0.0
            a[p, p], a[q, q] = a[p, p].real, a[q, q].real
            v[:, idx] = v[:, idx] @ j
    else:
        raise RuntimeError("Jacobi iteration did not converge")

    w = np.diag(a).real
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def expm(a, t: float = 1.0) -> np.ndarray:
    """``exp(a * t)`` by scaling and squaring around a Taylor core.

    The argument is scaled by ``2**-s`` until its 1-norm is at most 0.5, the
    series is summed until terms fall below machine precision, and the result
    is squared ``s`` times.
    """
    m = np.asarray(a, dtype=complex) * t
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    norm = np.max(np.sum(np.abs(m), axis=0), initial=0.0)
    s = 0
    if norm > 0.5:
        s = int(np.ceil(np.log2(norm / 0.5)))
        m = m / 2.0**s

    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ m / k
        result = result + term
        if np.max(np.abs(term), initial=0.0) <= 1e-18 * np.max(np.abs(result)):
            break
    for _ in range(s):
        result = result @ result
    return result


@dataclass(frozen=True)
class PauliBasis:
    """Tensor products of ``{1, sx, sy, sz}`` on ``n_qubits`` qubits.

    Elements are ordered lexicographically in ``"0xyz"``, so for two qubits
    the labels run ``00, 0x, 0y, 0z, x0, ...``. Elements satisfy
    ``<B_a, B_b> = 2**n * delta_ab``.
    """

    n_qubits: int
    labels: tuple[str, ...] = field(init=False)
    elements: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        labels = tuple("".join(p) for p in itertools.product(PAULI_LABELS, repeat=self.n_qubits))
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "elements", tuple(pauli(lbl) for lbl in labels))

    @property
    def dim(self) -> int:
        return 2**self.n_qubits

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def __getitem__(self, label: str) -> np.ndarray:
        return self.elements[self.index(label)]

    def __len__(self) -> int:
        return len(self.labels)

    def coefficients(self, op) -> np.ndarray:
        """Expansion coefficients ``<B_a, op> / 2**n``."""
        op = as_operator(op)
        return np.array([np.vdot(b, op) for b in self.elements]) / self.dim

    def reconstruct(self, coeffs) -> np.ndarray:
        return np.tensordot(np.asarray(coeffs, dtype=complex), np.array(self.elements), axes=1)

    def matrix(self) -> np.ndarray:
        """Columns are the column-stacked basis elements (unnormalized)."""
        return np.stack([b.reshape(-1, order="F") for b in self.elements], axis=1)


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * 0.5 * (x + x.conj().T)


def random_operator(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_density_matrix(n: int, rng: np.random.Generator) -> np.ndarray:
    x = random_operator(n, rng)
    rho = x @ x.conj().T
    return rho / np.trace(rho).real
