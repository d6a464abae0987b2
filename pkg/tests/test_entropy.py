from itertools import product
from math import e, isclose, log

import numpy as np
from pytest import MonkeyPatch, mark, raises

from dyadim import (
    MarkovMeasure,
    WeightSequence,
    delta_recursion_check,
    entropy_bruteforce,
    entropy_profile,
    eta_bound,
    lemma2_scan,
    window_entropy,
    window_table,
)
from dyadim._config import DyadimError, Settings
from dyadim._entropy import EnumerationSizeError, binary_entropy, step_entropy
from dyadim._measure import AddressError
from dyadim._weights import WeightValueError

from .conftest import cylinder_masses, entropy_by_hand, random_weights, window_by_hand

LOG2 = log(2)


def test_binary_entropy() -> None:
    assert isclose(binary_entropy(0.3), -0.610864, abs_tol=1e-6)
    assert binary_entropy(0.0) == binary_entropy(1.0) == 0.0
    assert isclose(binary_entropy(0.5), -LOG2)
    assert isclose(binary_entropy(0.2), binary_entropy(0.8))
    with raises(WeightValueError):
        binary_entropy(1.5)


def test_step_entropy() -> None:
    measure = MarkovMeasure(WeightSequence.periodic([(0.5, 0.5), (0.3, 1.0)]))
    assert isclose(step_entropy(measure, 1, 0), binary_entropy(0.3))
    assert step_entropy(measure, 1, 1) == 0.0
    assert isclose(step_entropy(measure, 2, 1), -LOG2)
    with raises(AddressError):
        step_entropy(measure, 1, 2)
    with raises(WeightValueError):
        step_entropy(measure, 0, 0)


def test_first_generation() -> None:
    measure = MarkovMeasure(WeightSequence.explicit([(0.25, 0.5)], [(0.5, 0.5)]))
    profile = entropy_profile(measure, 1)
    assert isclose(profile.entropy(1), 0.562335, abs_tol=1e-6)
    assert isclose(profile.marginals[0], 0.25)


def test_profile_matches_enumeration() -> None:
    for seed in range(4):
        measure = MarkovMeasure(random_weights(seed))
        profile = entropy_profile(measure, 12)
        for n in range(1, 13):
            assert isclose(profile.entropy(n), entropy_bruteforce(measure, n), abs_tol=1e-9)
        for n in range(1, 8):
            assert isclose(profile.entropy(n), entropy_by_hand(measure, n), abs_tol=1e-9)


def test_profile_with_null_weights() -> None:
    measure = MarkovMeasure(WeightSequence.periodic([(1.0, 0.0), (0.5, 0.2), (0.0, 1.0)]))
    profile = entropy_profile(measure, 10)
    for n in range(1, 11):
        assert isclose(profile.entropy(n), entropy_bruteforce(measure, n), abs_tol=1e-12)
    assert np.all(np.isfinite(profile.entropies))


def test_constant_weights() -> None:
    profile = entropy_profile(MarkovMeasure(WeightSequence.constant(0.3, 0.7)), 10_000)
    # h(0.3) = h(0.7), so every step adds the same entropy
    assert np.allclose(profile.normalized, 0.881291, atol=1e-6)
    assert np.allclose(profile.cesaro_means(), 0.881291, atol=1e-6)
    assert isclose(profile.normalized_entropy(10_000), -binary_entropy(0.3) / LOG2)


def test_profile_properties() -> None:
    profile = entropy_profile(MarkovMeasure(random_weights(11, length=500)), 2_000)
    assert profile.horizon == 2_000
    assert np.all(np.diff(profile.entropies) >= -1e-12)
    assert np.all((profile.normalized >= 0.0) & (profile.normalized <= 1.0))
    assert np.all((profile.marginals >= 0.0) & (profile.marginals <= 1.0))
    with raises(WeightValueError):
        entropy_profile(MarkovMeasure(random_weights(11)), 0)


def test_compensated_summation() -> None:
    measure = MarkovMeasure(WeightSequence.random(2, period=7))
    long = entropy_profile(measure, Settings.COMPENSATED_FROM + 500)
    short = entropy_profile(measure, Settings.COMPENSATED_FROM)
    assert np.allclose(long.entropies[: Settings.COMPENSATED_FROM], short.entropies, rtol=1e-12)


def test_bruteforce_limits() -> None:
    measure = MarkovMeasure(WeightSequence.constant(0.5, 0.5))
    assert entropy_bruteforce(measure, 0) == 0.0
    assert isclose(entropy_bruteforce(measure, 5), 5 * LOG2)
    with raises(EnumerationSizeError):
        entropy_bruteforce(measure, Settings.BRUTEFORCE_LIMIT + 1)
    with raises(WeightValueError):
        entropy_bruteforce(measure, -1)
    assert issubclass(EnumerationSizeError, DyadimError)


def test_bruteforce_split(monkeypatch: MonkeyPatch) -> None:
    measure = MarkovMeasure(random_weights(21))
    whole = entropy_bruteforce(measure, 11)
    monkeypatch.setattr(Settings, "BRUTEFORCE_SPLIT_FROM", 6)
    monkeypatch.setattr(Settings, "BRUTEFORCE_PREFIX_BITS", 3)
    assert isclose(entropy_bruteforce(measure, 11), whole, abs_tol=1e-12)
    monkeypatch.setenv(Settings.THREADS_ENV, "1")
    assert isclose(entropy_bruteforce(measure, 11), whole, abs_tol=1e-12)


def test_bruteforce_deep() -> None:
    measure = MarkovMeasure(random_weights(4))
    assert isclose(
        entropy_bruteforce(measure, 17), entropy_profile(measure, 17).entropy(17), abs_tol=1e-9
    )


def test_window_entropy_matches_enumeration() -> None:
    measure = MarkovMeasure(random_weights(6))
    for n in (0, 1, 4):
        for k in (1, 2, 3, 6):
            gap = window_entropy(measure, n, k)
            assert isclose(gap.a, window_by_hand(measure, n, k, 0), abs_tol=1e-12)
            assert isclose(gap.b, window_by_hand(measure, n, k, 1), abs_tol=1e-12)
            assert isclose(gap.delta, abs(gap.a - gap.b) / k)
            assert gap.a <= 0.0 and gap.b <= 0.0


def test_window_entropy_edges() -> None:
    measure = MarkovMeasure(random_weights(6))
    gap = window_entropy(measure, 3, 1)
    assert gap.a == gap.b == gap.delta == 0.0

    iid = MarkovMeasure(WeightSequence.periodic([(0.2, 0.2), (0.7, 0.7)]))
    assert window_entropy(iid, 5, 9).delta == 0.0

    with raises(WeightValueError):
        window_entropy(measure, -1, 3)
    with raises(WeightValueError):
        window_entropy(measure, 0, 0)


def test_window_table() -> None:
    measure = MarkovMeasure(random_weights(13))
    table = window_table(measure, 6, 8)
    assert (table.n_max, table.k_max) == (6, 8)
    for n in range(7):
        for k in range(1, 9):
            single = window_entropy(measure, n, k)
            entry = table.gap(n, k)
            assert isclose(entry.a, single.a, abs_tol=1e-12)
            assert isclose(entry.b, single.b, abs_tol=1e-12)
            assert isclose(entry.delta, single.delta, abs_tol=1e-12)
    with raises(WeightValueError):
        window_table(measure, 3, 0)


def test_eta_bound() -> None:
    assert isclose(eta_bound(9), 0.512171, abs_tol=1e-6)
    assert isclose(eta_bound(1), 2.560854, abs_tol=1e-6)
    assert isclose(eta_bound(4), e**2 * LOG2 / 5)
    assert eta_bound(100) < eta_bound(10)
    with raises(WeightValueError):
        eta_bound(0)


def test_lemma2_scan() -> None:
    report = lemma2_scan(0.01)
    assert report.violations > 0
    assert report.max_excess >= 0.2836
    lhs, rhs = report.point(0.01, 0.5)  # type: ignore[misc]
    assert isclose(lhs, 0.637146, abs_tol=1e-6)
    assert isclose(rhs, 0.353505, abs_tol=1e-6)
    assert report.point(0.5, 0.5) is None
    assert report.companion_k == 9
    assert report.companion_violations >= 0
    assert len(report.grid) == 101


def test_lemma2_scan_subrange() -> None:
    report = lemma2_scan(0.05, 0.4, 0.6)
    # near 1/2 the entropy is flat, so the inequality holds
    assert report.violations == 0
    assert report.max_excess < 0.0
    with raises(WeightValueError):
        lemma2_scan(0.5)
    with raises(WeightValueError):
        lemma2_scan(0.01, 0.6, 0.4)


def test_delta_recursion() -> None:
    for seed in range(3):
        report = delta_recursion_check(MarkovMeasure(random_weights(seed, length=80)), 30, 40)
        assert report.lhs.shape == (30, 40)
        assert report.exact_violations == 0
        assert report.eta_violations == 0
        assert report.eta_slack > 0.0
        assert report.max_form_violations >= 0
        assert report.lemma_violations >= 0

    with raises(WeightValueError):
        delta_recursion_check(MarkovMeasure(random_weights(0)), 0, 4)


def test_delta_recursion_extreme_weights() -> None:
    # |h(p) - h(q)| exceeds (1 - |p - q|) log 2 here, the lemma form can fail
    weights = WeightSequence.periodic([(0.01, 0.5), (0.5, 0.01)])
    report = delta_recursion_check(MarkovMeasure(weights), 10, 10)
    assert report.exact_violations == 0
    assert report.lemma_violations > 0


@mark.slow
def test_profile_matches_enumeration_full_range() -> None:
    for seed in range(100):
        measure = MarkovMeasure(WeightSequence.random(seed, length=20))
        profile = entropy_profile(measure, 14)
        for n in range(1, 15):
            assert isclose(profile.entropy(n), entropy_bruteforce(measure, n), abs_tol=1e-10)


@mark.slow
def test_window_table_matches_enumeration() -> None:
    for seed in range(20):
        measure = MarkovMeasure(WeightSequence.random(100 + seed, length=30))
        table = window_table(measure, 8, 12)
        for n in range(9):
            for k in range(1, 13):
                gap = table.gap(n, k)
                assert isclose(gap.a, window_by_hand(measure, n, k, 0), abs_tol=1e-12)
                assert isclose(gap.b, window_by_hand(measure, n, k, 1), abs_tol=1e-12)


def test_delta_below_eta_on_large_tables() -> None:
    for seed in range(50):
        measure = MarkovMeasure(random_weights(seed, length=800))
        report = delta_recursion_check(measure, 200, 500)
        assert report.lhs.shape == (200, 500)
        assert report.eta_violations == 0
        assert report.exact_violations == 0


def test_lemma2_scan_central_grid() -> None:
    report = lemma2_scan(0.01, 0.2, 0.8)
    assert report.violations == 0
    assert len(report.grid) == 61


@mark.slow
def test_window_entropy_ignores_the_cylinder() -> None:
    measure = MarkovMeasure(random_weights(17))
    masses = {depth: cylinder_masses(measure, depth) for depth in range(1, 17)}
    for n in range(9):
        for k in range(1, 9):
            gap = window_entropy(measure, n, k)
            for head, mass in masses[n + 1].items():
                tail = (
                    masses[n + k][head + bits] / mass for bits in product((0, 1), repeat=k - 1)
                )
                conditional = sum(c * log(c) for c in tail if c > 0)
                expected = gap.a if head[-1] == 0 else gap.b
                assert isclose(conditional, expected, abs_tol=1e-10)


def test_additivity() -> None:
    measure = MarkovMeasure(random_weights(23))
    profile = entropy_profile(measure, 12)
    pi0 = measure.marginals(12)
    previous = 0.0
    for n in range(1, 13):
        entropy = entropy_bruteforce(measure, n)
        if n == 1:
            step = -binary_entropy(measure.weights.value_at(0)[0])
        else:
            step = -(
                pi0[n - 2] * step_entropy(measure, n - 1, 0)
                + (1.0 - pi0[n - 2]) * step_entropy(measure, n - 1, 1)
            )
        assert isclose(entropy - previous, step, abs_tol=1e-10)
        assert isclose(profile.entropy(n), entropy, abs_tol=1e-10)
        previous = entropy
