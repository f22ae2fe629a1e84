import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from liouvsym.operator_core import (
    DimensionError,
    NotHermitianError,
    PauliBasis,
    anticommutator,
    commutator,
    dag,
    expm,
    hermitian_eig,
    is_hermitian,
    kron,
    pauli,
    random_density_matrix,
    random_hermitian,
    random_operator,
    trace_inner_product,
)


def kron_loop(a, b):
    """Index-loop Kronecker product used as an independent oracle."""
    n, m = a.shape[0], b.shape[0]
    out = np.zeros((n * m, n * m), dtype=complex)
    for i in range(n):
        for j in range(n):
            for k in range(m):
                for l in range(m):
                    out[i * m + k, j * m + l] = a[i, j] * b[k, l]
    return out


def test_pauli_algebra():
    x, y, z = pauli("x"), pauli("y"), pauli("z")
    assert np.allclose(x @ y, 1j * z)
    assert np.allclose(commutator(x, y), 2j * z)
    assert np.allclose(anticommutator(x, x), 2 * np.eye(2))
    assert np.allclose(pauli("xz"), kron_loop(x, z))


def test_kron_matches_loop(rng):
    a, b = random_operator(3, rng), random_operator(2, rng)
    assert np.allclose(kron(a, b), kron_loop(a, b), atol=1e-14)


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        commutator(np.eye(2), np.eye(3))
    with pytest.raises(DimensionError):
        expm(np.ones((2, 3)))


def test_trace_inner_product(rng):
    a, b = random_operator(4, rng), random_operator(4, rng)
    assert np.isclose(trace_inner_product(a, b), np.trace(dag(a) @ b))


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_hermitian_eig_against_eigh(rng, n):
    h = random_hermitian(n, rng)
    w, v = hermitian_eig(h)
    assert np.allclose(w, np.linalg.eigvalsh(h), atol=1e-12)
    assert np.allclose(h @ v, v * w, atol=1e-12)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-12)


def test_hermitian_eig_degenerate_and_zero():
    w, _ = hermitian_eig(pauli("xx") + pauli("zz"))
    assert np.allclose(w, [-2, 0, 0, 2], atol=1e-13)
    w, v = hermitian_eig(np.zeros((3, 3)))
    assert np.all(w == 0) and np.allclose(v, np.eye(3))


def test_hermitian_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitianError):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


@pytest.mark.parametrize("scale", [0.01, 1.0, 30.0])
def test_expm_against_scipy(rng, scale):
    a = scale * random_operator(5, rng)
    ref = scipy.linalg.expm(a)
    assert np.max(np.abs(expm(a) - ref)) <= 1e-11 * max(1.0, np.max(np.abs(ref)))


def test_expm_unitary(rng):
    h = random_hermitian(4, rng)
    u = expm(-1j * h, 2.5)
    assert np.allclose(u @ u.conj().T, np.eye(4), atol=1e-12)


def test_pauli_basis_roundtrip(rng):
    pb = PauliBasis(2)
    assert pb.labels[:5] == ("00", "0x", "0y", "0z", "x0")
    gram = np.array([[trace_inner_product(a, b) for b in pb.elements] for a in pb.elements])
    assert np.allclose(gram, 4 * np.eye(16))
    op = random_operator(4, rng)
    assert np.allclose(pb.reconstruct(pb.coefficients(op)), op)
    assert np.allclose(pb["xy"], kron_loop(pauli("x"), pauli("y")))


def test_density_matrix_generator(rng):
    rho = random_density_matrix(3, rng)
    assert is_hermitian(rho)
    assert np.isclose(np.trace(rho), 1)
    assert np.linalg.eigvalsh(rho).min() >= -1e-14


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=4, max_size=4))
def test_eig_of_real_symmetric_2x2(vals):
    a, b, c, d = vals
    h = np.array([[a, b + 1j * d], [b - 1j * d, c]])
    assert np.allclose(hermitian_eig(h)[0], np.linalg.eigvalsh(h), atol=1e-12)
