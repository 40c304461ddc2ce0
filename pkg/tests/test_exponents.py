import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from grandsec.exponents import (
    binary_entropy,
    capacity_point,
    channel_summary,
    confident_query_exponent,
    guesswork_scgf,
    guesswork_scgf_derivative,
    max_cycle_mean,
    min_capacity_point,
    min_entropy_rate,
    rate_function,
    renyi_entropy_rate,
    shannon_entropy_rate,
    success_probability_estimate,
)
from grandsec.noise import BscNoise, MarkovNoise, all_log2_likelihoods
from grandsec.oracles import dense_grid_rate

# frozen high-precision reference values
H_MIN_QUARTER = 0.41503749927884381855
H_MIN_TENTH = 0.15200309344504998496
ENTROPY_0_11 = 0.49991595816452799564
SCGF_QUARTER_ONE = 0.89996862695299169784
CAPACITY_TENTH = 0.53100440641071877875
MIN_CAPACITY_TENTH = 0.84799690655495001504
RATE = 116 / 128
CAPACITY_POINT = 0.011995614191067819682
MIN_CAPACITY_POINT = 0.062916182944850049335
BSC_SCGF = {
    (0.05, -0.5): -0.072005151345759667604,
    (0.05, 0.5): 0.21038939799146673236,
    (0.05, 2.0): 1.3035267244983827493,
    (0.05, 10.0): 8.9437470205191892661,
    (0.25, -0.5): -0.33903595255631882606,
    (0.25, 0.5): 0.43445442059572153521,
    (0.25, 2.0): 1.8646319049655154254,
    (0.25, 10.0): 9.8122600692921489814,
    (0.4, -0.5): -0.47170823581681626767,
    (0.4, 0.5): 0.4902584293068583048,
    (0.4, 2.0): 1.9804282212739644594,
    (0.4, 10.0): 9.9732482515801680305,
}
BURSTY = MarkovNoise(((0.9, 0.1), (0.5, 0.5)), (1.0, 0.0))
BURSTY_SCGF = {-0.5: -0.14806935655999456211, 0.5: 0.35680970352768357733, 1.0: 0.79220700538169162436, 2.0: 1.7334965341038945849}
BURSTY_RENYI_2 = 0.29613871311998912422
BURSTY_ENTROPY = 0.55749632799106768438

probs = st.floats(0.01, 0.49)
markov_models = st.builds(
    lambda a, b: MarkovNoise(((1 - a, a), (b, 1 - b))),
    st.floats(0.03, 0.97), st.floats(0.03, 0.97),
)
any_model = st.one_of(probs.map(BscNoise), markov_models)


def test_entropies_reference_values():
    assert min_entropy_rate(BscNoise(0.25)) == pytest.approx(H_MIN_QUARTER, abs=1e-12)
    assert min_entropy_rate(BscNoise(0.1)) == pytest.approx(H_MIN_TENTH, abs=1e-12)
    assert binary_entropy(0.11) == pytest.approx(ENTROPY_0_11, abs=1e-12)
    assert binary_entropy(0.5) == 1.0
    s = channel_summary(BscNoise(0.1))
    assert s.capacity == pytest.approx(CAPACITY_TENTH, abs=1e-12)
    assert s.min_capacity == pytest.approx(MIN_CAPACITY_TENTH, abs=1e-12)


def test_near_uniform_limits():
    model = BscNoise(0.5 - 1e-9)
    for alpha in (0.5, 2.0, 7.0):
        assert renyi_entropy_rate(model, alpha) == pytest.approx(1.0, abs=1e-6)
    s = channel_summary(model)
    assert s.capacity == pytest.approx(0.0, abs=1e-6)
    assert s.min_capacity == pytest.approx(0.0, abs=1e-6)


def test_renyi_rejects_bad_order():
    with pytest.raises(ValueError):
        renyi_entropy_rate(BscNoise(0.2), 1.0)
    with pytest.raises(ValueError):
        renyi_entropy_rate(BscNoise(0.2), -0.5)


def test_reducible_markov_rejected():
    with pytest.raises(ValueError):
        shannon_entropy_rate(MarkovNoise(((1.0, 0.0), (0.0, 1.0))))


def test_markov_reference_values():
    assert renyi_entropy_rate(BURSTY, 2.0) == pytest.approx(BURSTY_RENYI_2, abs=1e-10)
    assert shannon_entropy_rate(BURSTY) == pytest.approx(BURSTY_ENTROPY, abs=1e-12)
    assert min_entropy_rate(BURSTY) == pytest.approx(H_MIN_TENTH, abs=1e-12)
    for alpha, ref in BURSTY_SCGF.items():
        assert guesswork_scgf(BURSTY, alpha) == pytest.approx(ref, abs=1e-10)


def test_markov_renyi_brute_force_trend():
    gaps = []
    for n in range(8, 15):
        ll = all_log2_likelihoods(BURSTY, n)
        brute = -math.log2(np.sum(np.exp2(2 * ll))) / n
        gaps.append(abs(brute - BURSTY_RENYI_2))
    assert np.all(np.diff(gaps) < 0)
    assert gaps[-1] < 0.02


def test_markov_min_entropy_brute_force():
    for n in range(4, 15):
        assert -all_log2_likelihoods(BURSTY, n).max() / n == pytest.approx(H_MIN_TENTH, abs=0.01)


def test_max_cycle_mean_periodic():
    w = np.array([[-np.inf, -1.0], [-3.0, -np.inf]])
    assert max_cycle_mean(w) == pytest.approx(-2.0)


def test_scgf_reference_values():
    for (p, alpha), ref in BSC_SCGF.items():
        assert guesswork_scgf(BscNoise(p), alpha) == pytest.approx(ref, abs=1e-12)
    assert guesswork_scgf(BscNoise(0.25), 1.0) == pytest.approx(SCGF_QUARTER_ONE, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(model=any_model)
def test_scgf_zero_and_lower_branch(model):
    assert guesswork_scgf(model, 0.0) == 0.0
    h_min = min_entropy_rate(model)
    assert guesswork_scgf(model, -1.0) == -h_min
    assert guesswork_scgf(model, -5.0) == -h_min
    # continuity at the branch point
    assert guesswork_scgf(model, -1.0 + 1e-9) == pytest.approx(-h_min, abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(model=any_model, a=st.floats(-3, 20), b=st.floats(-3, 20), lam=st.floats(0, 1))
def test_scgf_convex(model, a, b, lam):
    mid = lam * a + (1 - lam) * b
    lhs = guesswork_scgf(model, mid)
    rhs = lam * guesswork_scgf(model, a) + (1 - lam) * guesswork_scgf(model, b)
    assert lhs <= rhs + 1e-9 * (1 + abs(rhs))


@settings(max_examples=30, deadline=None)
@given(model=any_model, alpha=st.floats(-0.9, 30))
def test_derivative_matches_finite_difference(model, alpha):
    h = 1e-6
    fd = (guesswork_scgf(model, alpha + h) - guesswork_scgf(model, alpha - h)) / (2 * h)
    assert guesswork_scgf_derivative(model, alpha) == pytest.approx(fd, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(model=any_model)
def test_rate_function_zero_at_entropy(model):
    h = shannon_entropy_rate(model)
    # uniform noise makes Lambda linear and every alpha a maximizer
    assume(h - min_entropy_rate(model) > 1e-6)
    res = rate_function(model, h)
    assert res.value == pytest.approx(0.0, abs=1e-9)
    assert res.alpha_star == pytest.approx(0.0, abs=1e-6)


@settings(max_examples=60, deadline=None)
@given(model=any_model, g=st.floats(0, 1))
def test_rate_function_nonnegative(model, g):
    res = rate_function(model, g)
    assert res.value >= 0
    assert res.bracket_width <= 1e-9


def test_rate_function_increasing_above_entropy():
    model = BscNoise(0.2)
    h = binary_entropy(0.2)
    values = [rate_function(model, g).value for g in np.linspace(h + 1e-3, 0.99, 50)]
    assert values[0] > 0
    assert np.all(np.diff(values) > 0)


def test_rate_function_against_grid_search():
    model = BscNoise(0.05)
    assert rate_function(model, 0.25).value == pytest.approx(dense_grid_rate(model, 0.25), abs=1e-6)


def test_rate_function_markov_against_grid_search():
    for g in (0.3, 0.8):
        ref = dense_grid_rate(BURSTY, g, alpha_hi=20.0, step=5e-3)
        assert rate_function(BURSTY, g).value == pytest.approx(ref, abs=1e-5)


def test_capacity_points():
    assert capacity_point(RATE) == pytest.approx(CAPACITY_POINT, rel=1e-12)
    assert min_capacity_point(RATE) == pytest.approx(MIN_CAPACITY_POINT, rel=1e-12)


@settings(max_examples=100, deadline=None)
@given(model=any_model)
def test_capacity_below_min_capacity(model):
    s = channel_summary(model)
    assert 0 <= s.min_entropy_rate <= s.shannon_entropy_rate + 1e-12 <= 1 + 1e-12
    assert s.capacity <= s.min_capacity + 1e-12


def test_success_estimate():
    assert success_probability_estimate(BscNoise(CAPACITY_POINT), 128, RATE) == pytest.approx(1.0, abs=1e-9)
    model = BscNoise(0.03)
    est = [success_probability_estimate(model, n, RATE) for n in (64, 128, 192, 256)]
    assert np.all(np.diff(est) < 0)


def test_confident_exponent_absent_beyond_min_capacity():
    assert confident_query_exponent(BscNoise(MIN_CAPACITY_POINT), RATE) is None
    assert confident_query_exponent(BscNoise(0.1), RATE) is None


def test_confident_exponent_shape():
    grid = np.geomspace(CAPACITY_POINT, MIN_CAPACITY_POINT, 12)[:-1]
    values = [confident_query_exponent(BscNoise(p), RATE) for p in grid]
    assert all(v is not None and 0 < v <= 1 - RATE for v in values)
    assert np.all(np.diff(values) < 0)


def test_confident_exponent_exists_below_capacity():
    rng = np.random.default_rng(99)
    for _ in range(20):
        p = float(rng.uniform(0.01, 0.3))
        rate = float(rng.uniform(0.05, 0.98)) * (1 - binary_entropy(p))
        model = BscNoise(p)
        g = confident_query_exponent(model, rate)
        assert g is not None and g > 0
        # oracle: phi is negative just below g and not negative just above it
        phi = lambda x: rate_function(model, x).value - (1 - rate - x)
        assert phi(g) < 0
        if g + 1e-8 < 1 - rate:
            assert phi(g + 1e-8) > -1e-9
