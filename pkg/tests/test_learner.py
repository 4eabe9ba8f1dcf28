import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from sib.errors import InvalidInput
from sib.learner import DualIterate, LearnerState, best_fixed_response_value, spectral_weights


def regret_bound(n, T, B=1.0):
    L = np.log(2 * n)
    return 2 * B * np.sqrt(L / T) + 2 * B * L / T


def play(learner, payoffs):
    gain = 0.0
    for g in payoffs:
        y = learner.current()
        gain += float(np.sum(y.y * g))
        learner.observe(g)
    return gain


def test_uniform_at_start():
    y = LearnerState(3, 2, 1.0).current()
    np.testing.assert_allclose(y.s, [1 / 3] * 3, rtol=0, atol=1e-16)
    assert not y.y.any()


def test_closed_form_example():
    c = 2.5
    eta = np.log(3.0) / c
    y = spectral_weights(np.array([[c, 0.0], [0.0, 0.0]]), eta)
    np.testing.assert_allclose(y.s, [0.625, 0.375], rtol=1e-15)
    np.testing.assert_allclose(y.y, [[0.5, 0.0], [0.0, 0.0]], rtol=1e-15, atol=1e-17)


def test_large_eta_concentrates_on_largest_block(rng):
    U = rng.standard_normal((6, 3))
    G = U / np.linalg.norm(U, axis=1, keepdims=True) * rng.permutation(6)[:, None] * 0.1
    y = spectral_weights(G, 1e3)
    i = np.argmax(np.linalg.norm(G, axis=1))
    assert y.s[i] == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.norm(y.y[i]) / y.s[i] == pytest.approx(1.0, abs=1e-12)


def test_observe_accumulates():
    L = LearnerState(1, 2, 1.0)
    L.observe([[1.0, 0.0]]).observe([[1.0, 0.0]])
    np.testing.assert_array_equal(L.G, [[2.0, 0.0]])
    assert L.t == 2


def test_zero_payoff_leaves_strategy_unchanged():
    L = LearnerState(4, 3, 1.0)
    before = L.current()
    L.observe(np.zeros((4, 3)))
    after = L.current()
    np.testing.assert_array_equal(before.s, after.s)
    np.testing.assert_array_equal(before.y, after.y)


def test_one_payoff_favours_that_block():
    L = LearnerState(2, 2, 1.0)
    L.observe([[1.0, 0.0], [0.0, 0.0]])
    y = L.current()
    assert y.s[0] > y.s[1]


def test_observe_shape_and_value_checks():
    L = LearnerState(2, 2, 1.0)
    with pytest.raises(InvalidInput):
        L.observe(np.zeros((3, 2)))
    with pytest.raises(InvalidInput):
        L.observe([[np.inf, 0.0], [0.0, 0.0]])
    with pytest.raises(InvalidInput):
        LearnerState(2, 2, 0.0)


def test_payoff_bound_doubles_until_it_covers():
    L = LearnerState(1, 1, 1.0)
    eta0 = L.eta
    L.observe([[5.0]])
    assert L.payoff_bound == 8.0
    assert L.eta == pytest.approx(eta0 / 8.0 / np.sqrt(2.0))


def test_best_fixed_response_examples():
    assert best_fixed_response_value([[3, 4], [1, 0]], 1) == 5.0
    assert best_fixed_response_value(np.zeros((3, 2)), 5) == 0.0
    assert best_fixed_response_value([[1, 1], [1, -1]], 2) == pytest.approx(np.sqrt(2) / 2)
    with pytest.raises(InvalidInput):
        best_fixed_response_value([[1.0]], 0)


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 40), d=st.integers(1, 6),
       log_scale=st.floats(-3, 8))
def test_membership_for_random_accumulations(seed, n, d, log_scale):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, d)) * 10.0 ** log_scale
    G[rng.uniform(size=n) < 0.2] = 0.0
    y = spectral_weights(G, float(rng.uniform(0.01, 10)))
    assert y.cone_violation() <= 1e-12
    assert y.mass_violation() <= 1e-12
    assert np.all(np.isfinite(y.y)) and np.all(y.s >= 0)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 20))
def test_shift_agrees_with_direct_formula(seed, n):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, 3)) * rng.uniform(0.1, 50)
    eta = float(rng.uniform(0.01, 5))
    w = np.linalg.norm(G, axis=1)
    with np.errstate(over="ignore"):
        Z = np.cosh(eta * w).sum()
    assume(np.isfinite(Z))
    s = np.cosh(eta * w) / Z
    y = (np.sinh(eta * w) / Z / np.where(w > 0, w, 1))[:, None] * G
    got = spectral_weights(G, eta)
    np.testing.assert_allclose(got.s, s, rtol=1e-12)
    np.testing.assert_allclose(got.y, y, rtol=1e-12, atol=1e-300)


def test_overflow_safe():
    y = spectral_weights(np.array([[1e6, 0.0], [0.0, 9e5]]), 10.0)
    assert np.all(np.isfinite(y.y)) and y.s[0] == pytest.approx(1.0)


def test_permutation_equivariance(rng):
    G = rng.standard_normal((7, 3))
    perm = rng.permutation(7)
    a, b = spectral_weights(G, 0.7), spectral_weights(G[perm], 0.7)
    np.testing.assert_allclose(b.s, a.s[perm], rtol=1e-14)
    np.testing.assert_allclose(b.y, a.y[perm], rtol=1e-14)


@pytest.mark.parametrize("n", [2, 8])
def test_regret_against_random_sequences(n, rng):
    T = 1000
    for _ in range(3):
        g = rng.standard_normal((T, n, 3))
        g /= np.maximum(np.linalg.norm(g, axis=2, keepdims=True), 1.0)
        L = LearnerState(n, 3, 1.0)
        gain = play(L, g)
        regret = best_fixed_response_value(L.G, T) - gain / T
        assert regret <= regret_bound(n, T)


def test_dual_iterate_helpers():
    y = DualIterate(y=np.array([[0.3, 0.4], [0.0, 0.0]]), s=np.array([0.5, 0.5]))
    assert y.is_valid()
    np.testing.assert_allclose(y.resultant(), [0.3, 0.4])
    assert y.cone_violation() == pytest.approx(0.0)
