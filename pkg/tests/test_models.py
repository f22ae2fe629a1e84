import numpy as np
import pytest
import scipy.linalg

from liouvsym.liouville_space import SuperOp, commute_residual, promote_left, promote_right
from liouvsym.models import (
    BLOCH_LABELS,
    VANISHING_TRIPLES,
    CircuitParams,
    CorrelatorSpec,
    EffParams,
    ParameterError,
    all_correlator_specs,
    analytic_eigenvectors,
    analytic_spectrum,
    bloch_liouvillian,
    bloch_permutation,
    block_projector,
    build_heff,
    cancellation_report,
    charge_conjugation_symmetry,
    circuit_to_coefficients,
    coherent_state,
    correlator_analytic,
    correlator_numeric,
    forgetful_residual,
    forgetful_superop,
    harmonic_oscillator,
    ladder_superop_algebra,
    ladder_superops,
    pauli_coefficients,
    pauli_liouvillian,
    qubit_liouvillian,
    qubit_marginal_trajectory,
    stark_ladder,
    uncoupled_composite,
)
from liouvsym.operator_core import PauliBasis, pauli, random_density_matrix, random_hermitian

GENERIC = EffParams(alpha=0.7, gamma=-1.1, delta=0.4, zeta=0.9, eta=-0.3)


def draws(n, seed=7, minimum=0.0):
    rng = np.random.default_rng(seed)
    return [EffParams.random(rng, minimum=minimum) for _ in range(n)]


# -- parameters and Hamiltonian ------------------------------------------------


def test_circuit_mapping():
    c = CircuitParams(Delta=0.3, E1=1.0, E2=0.5, phi0=0.2, phie=0.7, C1=1.0, C2=2.0, Cb=3.0,
                      Cg=0.5, Vg=2.0, Q0=0.0, q=0.4, e=1.0)
    p = circuit_to_coefficients(c)
    cs, qt = 3.5, 0.0 + 1.0 + 1.0
    assert np.isclose(p.alpha, -0.3)
    assert np.isclose(p.beta, 1.0 * 0.4 * qt / (3.0 * cs))
    assert np.isclose(p.gamma, -(np.cos(0.2) + 0.5 * np.cos(0.7)) / 2)
    assert np.isclose(p.delta, -0.5 * np.sin(0.7) / 2)
    assert np.isclose(p.epsilon, qt / cs)
    assert np.isclose(p.zeta, 0.4 / (3.0 * cs))
    assert np.isclose(p.eta, -np.sin(0.2) / 2)


def test_circuit_special_cases():
    p = circuit_to_coefficients(CircuitParams(E1=1.0, q=0.3, C1=1.0, Cg=1.0, Vg=0.5, e=1.0, Q0=-1.5))
    assert p.beta == 0.0 and p.epsilon == 0.0
    p = circuit_to_coefficients(CircuitParams(E1=0.0, q=0.0, E2=1.0, phie=0.3, C1=1.0, e=1.0, Q0=0.2))
    assert p.beta == 0.0 and p.zeta == 0.0 and p.eta == 0.0
    assert circuit_to_coefficients(CircuitParams(Delta=1.0, C1=1.0)) == EffParams(alpha=-1.0)
    with pytest.raises(ValueError):
        CircuitParams(Cb=0.0, C1=1.0)
    with pytest.raises(ValueError):
        EffParams(alpha=np.nan)


def test_build_heff():
    assert np.allclose(build_heff(EffParams()), 0)
    assert np.allclose(build_heff(EffParams(alpha=1.0)), np.kron(pauli("x"), np.eye(2)))
    p = EffParams(0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7)
    c = pauli_coefficients(build_heff(p))
    got = [c[k] for k in ("x0", "y0", "0x", "0y", "0z", "yz", "zy")]
    assert np.allclose(got, p.as_tuple(), atol=1e-14)
    assert sum(abs(v) for k, v in c.items() if k not in ("x0", "y0", "0x", "0y", "0z", "yz", "zy")) <= 1e-14


def test_charge_conjugation_symmetry():
    for p in draws(20):
        h, a = build_heff(p), charge_conjugation_symmetry(p)
        assert np.max(np.abs(h @ a - a @ h)) <= 1e-12


# -- analytic spectrum and eigenvectors -----------------------------------------


def test_spectrum_simple_and_precondition():
    assert np.allclose(analytic_spectrum(EffParams(alpha=1.0)), [-1, -1, 1, 1])
    with pytest.raises(ParameterError):
        analytic_spectrum(GENERIC.replace(beta=0.1))


def test_spectrum_matches_eigh():
    for p in draws(50):
        w = analytic_spectrum(p)
        assert np.max(np.abs(w - np.linalg.eigvalsh(build_heff(p)))) <= 1e-10
        assert abs((w[2] - w[0]) - (w[3] - w[1])) <= 1e-12


def test_eigenvectors():
    for p in draws(20, minimum=0.1):
        vecs, norms = analytic_eigenvectors(p)
        h = build_heff(p)
        w = analytic_spectrum(p)
        for n in range(4):
            v = vecs[:, n]
            assert np.linalg.norm(h @ v - w[n] * v) <= 1e-9 * np.linalg.norm(v)
            assert abs(norms[n] - np.vdot(v, v).real) <= 1e-9 * abs(norms[n])
        s = pauli("zz")
        for n in range(4):
            assert np.allclose(s @ vecs[:, n], -vecs[:, 3 - n], atol=1e-12 * np.abs(vecs).max())


def test_eigenvectors_degenerate_point():
    with pytest.raises(ParameterError):
        analytic_eigenvectors(EffParams(alpha=1.0))


# -- correlators ------------------------------------------------------------------


def test_correlator_spec():
    s = CorrelatorSpec.parse("y,x,0")
    assert s.name == "yx0" and s.parity_product == 1
    assert CorrelatorSpec("x", "0", "x").parity_product == 1
    assert CorrelatorSpec("x", "0", "z").parity_product == -1
    assert len(all_correlator_specs()) == 45
    assert len(VANISHING_TRIPLES) == 25
    with pytest.raises(ValueError):
        CorrelatorSpec("0", "x", "x")


def test_correlator_special_values():
    t = np.linspace(0, 5, 7)
    assert np.allclose(correlator_numeric(build_heff(GENERIC), CorrelatorSpec("y", "0", "0"), t), 0)
    assert np.isclose(correlator_analytic(GENERIC, CorrelatorSpec("x", "x", "0"), [0.0])[0], 4.0)
    f = correlator_numeric(np.zeros((4, 4)), CorrelatorSpec("x", "x", "0"), t)
    assert np.allclose(f, 4.0)


def test_correlator_analytic_matches_numeric():
    times = np.linspace(0, 10, 20)
    for p in draws(15, minimum=0.1):
        h = build_heff(p)
        for spec in all_correlator_specs():
            fa = correlator_analytic(p, spec, times)
            fn = correlator_numeric(h, spec, times)
            assert np.max(np.abs(fa - fn)) <= 1e-8, spec.name


def test_time_reversal_and_initial_slope():
    p = draws(1, seed=3, minimum=0.1)[0]
    h = build_heff(p)
    t = np.array([0.3, 1.1, 2.9])
    for spec in all_correlator_specs():
        fp = correlator_numeric(h, spec, t)
        fm = correlator_numeric(h, spec, -t)
        assert np.allclose(fp, spec.parity_product * fm, atol=1e-12)
    eps = 1e-5
    for spec in all_correlator_specs():
        if spec.j == spec.k or spec.k == "0":
            d = (correlator_numeric(h, spec, [eps])[0] - correlator_numeric(h, spec, [-eps])[0]) / (2 * eps)
            assert abs(d) <= 1e-6


def test_cancellations_generic_and_broken():
    rep = cancellation_report(GENERIC)
    assert set(rep.vanishing) == VANISHING_TRIPLES
    rep = cancellation_report(GENERIC.replace(beta=0.3))
    assert rep.method == "numeric"
    assert VANISHING_TRIPLES - set(rep.vanishing)


def test_cancellations_free_evolution():
    rep = cancellation_report(EffParams())
    assert set(rep.nonvanishing) == {"xx0", "yy0", "zz0"}


# -- Bloch representation -----------------------------------------------------------


def test_bloch_liouvillian_alpha_entries():
    m = bloch_liouvillian(EffParams(alpha=1.0))
    i, j = BLOCH_LABELS.index("y0"), BLOCH_LABELS.index("z0")
    assert m[i, j] == -2.0 and m[j, i] == 2.0


def test_bloch_liouvillian_matches_oracle():
    perm = bloch_permutation()
    for p in draws(20) + [GENERIC.replace(beta=0.5, epsilon=-0.8)]:
        m = bloch_liouvillian(p)
        oracle = pauli_liouvillian(build_heff(p))[np.ix_(perm, perm)]
        assert np.max(np.abs(m - oracle)) <= 1e-13
        assert np.max(np.abs(m + m.T)) <= 1e-13


def test_bloch_liouvillian_generates_coefficients():
    p = GENERIC.replace(beta=0.2)
    rng = np.random.default_rng(1)
    rho0 = random_density_matrix(4, rng)
    pb = PauliBasis(2)
    perm = bloch_permutation()
    x0 = pb.coefficients(rho0).real[perm]
    t = 0.8
    rho_t = SuperOp(scipy.linalg.expm(t * qubit_liouvillian(p).matrix))(rho0)
    assert np.allclose(scipy.linalg.expm(t * bloch_liouvillian(p)) @ x0, pb.coefficients(rho_t).real[perm],
                       atol=1e-12)


def test_bloch_spectrum_is_energy_differences():
    ev = np.linalg.eigvals(bloch_liouvillian(GENERIC))
    w = analytic_spectrum(GENERIC)
    diffs = sorted(w[k] - w[j] for j in range(4) for k in range(4))
    diffs.remove(0.0) if 0.0 in diffs else diffs.pop(int(np.argmin(np.abs(diffs))))
    assert np.allclose(np.sort(ev.imag), np.sort(diffs), atol=1e-9)
    assert np.max(np.abs(ev.real)) <= 1e-9


def test_block_projector():
    p = block_projector()
    assert np.allclose((p @ p).matrix, p.matrix, atol=1e-13)
    pb = PauliBasis(2)
    fixed = {"00", "y0", "z0", "xx", "xy", "xz"}
    for lbl in pb.labels:
        out = p(pb[lbl])
        assert np.allclose(out, pb[lbl] if lbl in fixed else 0, atol=1e-13), lbl
    for q in draws(10):
        assert commute_residual(qubit_liouvillian(q), p) <= 1e-12
    assert commute_residual(qubit_liouvillian(GENERIC.replace(beta=0.5)), p) > 1e-3


def test_marginal_independence():
    rng = np.random.default_rng(4)
    t = np.linspace(0, 10, 21)
    r1, r2 = random_density_matrix(2, rng), random_density_matrix(2, rng)
    a = qubit_marginal_trajectory(GENERIC, 0.9, 0.4, r1, t)
    b = qubit_marginal_trajectory(GENERIC, 0.9, 0.4, r2, t)
    assert np.max(np.abs(a - b)) <= 1e-10
    pb = GENERIC.replace(beta=0.4)
    a = qubit_marginal_trajectory(pb, 0.9, 0.4, r1, t)
    b = qubit_marginal_trajectory(pb, 0.9, 0.4, r2, t)
    assert np.max(np.abs(a - b)) > 1e-3
    z = qubit_marginal_trajectory(EffParams(), 0.5, 0.3, r1, t)
    assert np.allclose(z, [0.5 * np.cos(0.3), 0.5 * np.sin(0.3)])


def test_marginal_rejects_bad_state():
    with pytest.raises(ValueError):
        qubit_marginal_trajectory(GENERIC, 0.5, 0.0, np.diag([1.5, -0.5]), [0.0])
    with pytest.raises(ValueError):
        qubit_marginal_trajectory(GENERIC, 1.5, 0.0, np.eye(2) / 2, [0.0])


# -- ladders --------------------------------------------------------------------------


def test_oscillator_factories():
    lad = harmonic_oscillator(5)
    assert np.allclose(np.diag(lad.h).real, [0.5, 1.5, 2.5, 3.5, 4.5])
    comm = lad.h @ lad.a - lad.a @ lad.h
    assert np.allclose(comm[:4, :4], -lad.a[:4, :4])
    with pytest.raises(ValueError):
        harmonic_oscillator(1)
    st = stark_ladder(6, 0.3)
    assert np.allclose(st.h, st.h.conj().T)


def test_splus_on_number_states():
    lad = harmonic_oscillator(6)
    sp, _ = ladder_superops(lad.a)
    for n in range(5):
        rho = np.zeros((6, 6))
        rho[n, n] = 1
        expect = np.zeros((6, 6))
        expect[n + 1, n + 1] = n + 1
        assert np.allclose(sp(rho), expect)
        assert np.allclose(sp(rho), lad.a_dagger @ rho @ lad.a)


def test_coherent_state_eigenrelation():
    alpha = 0.5 * np.exp(0.3j)
    ket = coherent_state(alpha, 30)
    rho = np.outer(ket, ket.conj())
    _, sm = ladder_superops(harmonic_oscillator(30).a)
    window = slice(0, 15)
    dev = np.abs(sm(rho) - abs(alpha) ** 2 * rho)[window, window].max()
    assert dev <= 1e-6 * np.abs(rho).max()


def test_ladder_algebra_oscillator():
    lad = harmonic_oscillator(20)
    rep = ladder_superop_algebra(lad.a, lad.h, (0, 15))
    assert rep.l_splus <= 1e-10 and rep.l_sminus <= 1e-10
    assert rep.hl_splus_minus_splus <= 1e-10
    # The exact relation on the window is [S+, S-] = -(H_l + H_r).
    assert rep.splus_sminus_plus_hl_hr <= 1e-10


def test_ladder_algebra_stark_and_zero():
    st = stark_ladder(20, 0.7)
    rep = ladder_superop_algebra(st.a, st.h, (3, 17))
    assert rep.l_splus <= 1e-10 and rep.l_sminus <= 1e-10 and rep.splus_sminus <= 1e-10
    rep = ladder_superop_algebra(np.zeros((5, 5)), harmonic_oscillator(5).h, (0, 3))
    assert rep.l_splus == 0 and rep.splus_sminus == 0
    with pytest.raises(ValueError):
        ladder_superop_algebra(st.a, st.h, (3, 20))


# -- composites -------------------------------------------------------------------------


def test_uncoupled_composite():
    rep = uncoupled_composite(np.diag([0.0, 1.0]), np.diag([0.0, np.pi]))
    assert rep.confirmed and rep.identities_checked == 8
    rng = np.random.default_rng(2)
    rep = uncoupled_composite(random_hermitian(3, rng), random_hermitian(2, rng))
    assert rep.confirmed
    h1 = random_hermitian(2, rng)
    rep = uncoupled_composite(h1, np.zeros((3, 3)))
    assert np.allclose(rep.report.eigenvalues, np.repeat(np.linalg.eigvalsh(h1), 3))


def test_forgetful_map():
    rng = np.random.default_rng(3)
    h1, h2 = random_hermitian(2, rng), random_hermitian(3, rng)
    assert forgetful_residual(h1, h2) <= 1e-12
    f = forgetful_superop((2, 3))
    rho = random_density_matrix(6, rng)
    out = f(rho)
    assert np.isclose(np.trace(out), 3 * np.trace(rho))
    h = np.kron(h1, np.eye(3)) + np.kron(np.eye(2), h2)
    l = SuperOp(1j * (promote_right(h).matrix - promote_left(h).matrix))
    assert commute_residual(l, f) <= 1e-12
