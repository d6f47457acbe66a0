import numpy as np
import pytest

from statmon import group_core as gc
from statmon import observables as ob
from statmon import states as st
from statmon.errors import ContractError, ValidationError

AB, BC, AC = (gc.exchange_operator(3, p) for p in gc.canonical_pairs(3))


def test_expectation_examples():
    assert abs(ob.expectation(st.named_state("sym_plus"), AB) - 1.0) < 1e-12
    assert abs(ob.expectation(st.named_state("eq5"), BC) + 0.5) < 1e-12
    assert abs(ob.expectation(st.named_state("nontransitive_3_5"), AC) + 0.6) < 1e-12


def test_expectation_accepts_matrices_and_mixed_states():
    psi = st.named_state("eq5")
    assert abs(ob.expectation(psi, AB.matrix()) - 1.0) < 1e-12
    rho = st.MixedState.from_mixture([1.0], [psi])
    assert abs(ob.expectation(rho, BC) + 0.5) < 1e-12
    assert abs(ob.expectation(rho, BC.matrix()) + 0.5) < 1e-12


def test_expectation_rejects_non_hermitian():
    psi = st.named_state("sym_plus")
    M = np.zeros((6, 6))
    M[0, 1] = 1.0
    with pytest.raises(ContractError):
        ob.expectation(psi, M)
    with pytest.raises(ContractError):
        ob.expectation(psi, gc.cyclic_operator())  # not an involution
    with pytest.raises(ValidationError):
        ob.expectation(psi, np.eye(4))


def test_v_vector_examples():
    assert np.abs(ob.v_vector(st.named_state("antisym_minus")) + 1.0).max() < 1e-12
    v = ob.v_vector(st.named_state("eq6"))
    assert np.abs(v - np.array([-1.0, 0.5, 0.5])).max() < 1e-12
    mix = st.MixedState.from_mixture(
        [0.5, 0.5], [st.named_state("sym_plus"), st.named_state("antisym_minus")]
    )
    assert np.abs(ob.v_vector(mix)).max() < 1e-12


def test_w_frame_vectors():
    f = ob.w_frame()
    assert np.allclose(f.w1, np.ones(3) / 3.0)
    assert np.allclose(f.w2, np.array([2.0, -1.0, -1.0]) / 3.0)
    assert np.allclose(f.w3, np.array([0.0, 1.0, -1.0]) / np.sqrt(3.0))
    mats = [op.matrix() for op in (AB, BC, AC)]
    for w, W in zip(f.vectors(), f.matrices()):
        assert np.abs(W - sum(c * M for c, M in zip(w, mats))).max() < 1e-15


def test_w_theta_endpoints_exact():
    f = ob.w_frame()
    assert np.array_equal(ob.w_theta(0.0), f.W2)
    assert np.abs(ob.w_theta(np.pi / 2.0) - f.W3).max() < 1e-15


def test_w_theta_square_is_theta_independent():
    f = ob.w_frame()
    W2sq = f.W2 @ f.W2
    for theta in (0.3, 1.7, 4.0):
        Wt = ob.w_theta(theta)
        assert np.abs(Wt @ Wt - W2sq).max() < 1e-12


def test_w_algebra_identities():
    f = ob.w_frame()
    assert np.abs(f.W1 @ f.W2 - f.W2 @ f.W1).max() < 1e-12
    assert np.abs(f.W1 @ f.W3 - f.W3 @ f.W1).max() < 1e-12
    assert np.abs(f.W1 @ f.W2).max() < 1e-12
    assert np.abs(f.W1 @ f.W3).max() < 1e-12
    assert np.abs(f.W2 @ f.W3 + f.W3 @ f.W2).max() < 1e-12
    assert np.abs(f.W2 @ f.W2 - f.W3 @ f.W3).max() < 1e-12


def test_w1_spectrum():
    dec = ob.symmetric_spectrum(ob.w_frame().W1)
    assert np.abs(dec.eigenvalues - np.array([1.0, 0, 0, 0, 0, -1.0])).max() < 1e-12


def test_w23_eigenvalues_in_unit_set():
    for M in (ob.w_frame().W2, ob.w_frame().W3):
        vals = ob.symmetric_spectrum(M).eigenvalues
        assert np.abs(vals - np.round(vals)).max() < 1e-9
        assert set(np.round(vals).astype(int)) <= {-1, 0, 1}


def test_exchange_operator_spectrum():
    dec = ob.symmetric_spectrum(AB.matrix())
    assert np.abs(dec.eigenvalues - np.array([1, 1, 1, -1, -1, -1])).max() < 1e-12


def test_w_projection_matches_v():
    f = ob.w_frame()
    for seed in range(50):
        psi = st.random_pure_state(3, 1000 + seed)
        v = ob.v_vector(psi)
        for w, W in zip(f.vectors(), f.matrices()):
            assert abs(ob.expectation(psi, W) - w @ v) < 1e-10


def test_chi_state_expectations():
    # phi = 0 collapses to the symmetric/antisymmetric state
    chi = ob.chi_state(1.2, 0.0, +1, -1)
    assert st.equal_up_to_global_phase(chi, st.named_state("sym_plus"))
    # phi = pi/2, theta = 0, s2 = + gives <W1> = 0, <W2> = 1
    chi = ob.chi_state(0.0, np.pi / 2.0, +1, +1)
    f = ob.w_frame()
    assert abs(ob.expectation(chi, f.W1)) < 1e-12
    assert abs(ob.expectation(chi, f.W2) - 1.0) < 1e-9
    v = ob.v_vector(chi)
    assert np.abs(v - np.array([1.0, -0.5, -0.5])).max() < 1e-9


def test_chi_tradeoff_saturation():
    rng = np.random.default_rng(17)
    f = ob.w_frame()
    for _ in range(25):
        theta = rng.uniform(0.0, 2.0 * np.pi)
        phi = rng.uniform(0.0, np.pi / 2.0)
        s1, s2 = rng.choice([-1, 1]), rng.choice([-1, 1])
        chi = ob.chi_state(theta, phi, s1, s2)
        total = abs(ob.expectation(chi, f.W1)) + abs(
            ob.expectation(chi, ob.w_theta(theta))
        )
        assert abs(total - 1.0) < 1e-9


def test_angle_validation():
    with pytest.raises(ValidationError):
        ob.w_theta(-0.1)
    with pytest.raises(ValidationError):
        ob.w_theta(7.0)
    with pytest.raises(ValidationError):
        ob.chi_state(0.1, 2.0, +1, +1)  # phi beyond pi/2
    with pytest.raises(ValidationError):
        ob.chi_state(0.1, 0.1, 0, +1)


def test_bunching_probability():
    assert ob.bunching_probability(1.0) == 1.0
    assert abs(ob.bunching_probability(0.6) - 0.8) < 1e-15
    assert abs(ob.antibunching_probability(-0.6) - 0.8) < 1e-15
    assert ob.bunching_probability(0.6) > 0.75
    with pytest.raises(ValidationError):
        ob.bunching_probability(1.5)


def test_transitivity_of_perfect_simulation():
    rng = np.random.default_rng(7)
    sym = st.named_state("sym_plus").amplitudes
    for _ in range(10):
        noise = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        noise -= np.vdot(sym, noise) * sym
        noise /= np.linalg.norm(noise)
        psi = st.PureState(3, np.sqrt(1.0 - 1e-14) * sym + 1e-7 * noise)
        v = ob.v_vector(psi)
        assert abs(v[0] - 1.0) < 1e-12 and abs(v[1] - 1.0) < 1e-12
        assert abs(v[2] - 1.0) < 1e-9
