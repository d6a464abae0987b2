from itertools import product
from math import exp, isclose, log

import numpy as np
from pytest import MonkeyPatch, raises

from dyadim import CylinderAddress, MarkovMeasure, WeightSequence
from dyadim._config import Settings
from dyadim._measure import AddressError
from dyadim._weights import WeightValueError

from .conftest import cylinder_masses, random_weights


def test_address() -> None:
    address = CylinderAddress.parse("0110")
    assert address.bits == (0, 1, 1, 0)
    assert address.generation == 4
    assert address.last == 0
    assert str(address.child(1)) == "01101"
    assert CylinderAddress.parse([1, 0]) == CylinderAddress((1, 0))
    assert CylinderAddress().last is None

    with raises(AddressError):
        CylinderAddress.parse("0120")
    with raises(AddressError):
        CylinderAddress((0, 2))
    with raises(AddressError):
        address.child(3)


def test_cylinder_masses_match_products() -> None:
    measure = MarkovMeasure(random_weights(5))
    masses = cylinder_masses(measure, 6)
    for bits, mass in masses.items():
        assert isclose(exp(measure.cylinder_log_mass(CylinderAddress(bits))), mass, rel_tol=1e-12)
    assert isclose(sum(masses.values()), 1.0)


def test_first_bit_reads_p0() -> None:
    measure = MarkovMeasure(WeightSequence.explicit([(0.25, 0.9)], [(0.5, 0.5)]))
    assert isclose(measure.cylinder_log_mass("0"), log(0.25))
    assert isclose(measure.cylinder_log_mass("1"), log(0.75))
    assert measure.cylinder_log_mass("") == 0.0


def test_zero_mass() -> None:
    measure = MarkovMeasure(WeightSequence.constant(1.0, 0.5))
    assert measure.cylinder_log_mass("1") == float("-inf")
    assert measure.cylinder_log_mass("0001") == float("-inf")
    assert measure.cylinder_log_mass("000") == 0.0


def test_child_ratio() -> None:
    measure = MarkovMeasure(WeightSequence.periodic([(0.2, 0.6), (0.3, 0.9)]))
    assert measure.child_ratio(1, 0, 0) == 0.3
    assert isclose(measure.child_ratio(1, 0, 1), 0.7)
    assert measure.child_ratio(2, 1, 0) == 0.6
    assert isclose(measure.child_ratio(2, 1, 1), 0.4)

    base = measure.cylinder_log_mass("01")
    assert isclose(measure.cylinder_log_mass("011") - base, log(measure.child_ratio(2, 1, 1)))

    with raises(WeightValueError):
        measure.child_ratio(0, 0, 0)
    with raises(AddressError):
        measure.child_ratio(1, 2, 0)


def test_marginals() -> None:
    measure = MarkovMeasure(random_weights(9))
    pi0 = measure.marginals(7)
    for n in range(1, 8):
        ending_in_zero = sum(m for bits, m in cylinder_masses(measure, n).items() if bits[-1] == 0)
        assert isclose(pi0[n - 1], ending_in_zero, abs_tol=1e-12)

    zero, one = measure.marginal_last_symbol(7)
    assert isclose(zero + one, 1.0)
    assert zero == pi0[-1]

    with raises(WeightValueError):
        measure.marginals(0)


def test_sample_path() -> None:
    measure = MarkovMeasure(random_weights(3))
    trace = measure.sample_path(50, 11)
    assert trace == measure.sample_path(50, 11)
    assert trace.depth == 50
    assert isclose(trace.cumulative[-1], measure.cylinder_log_mass(trace.address))
    assert np.allclose(np.cumsum(trace.increments), trace.cumulative)
    assert isclose(trace.local_exponent(50), -trace.cumulative[-1] / (50 * log(2)))

    generator = np.random.default_rng(0)
    assert measure.sample_path(10, generator).depth == 10

    with raises(WeightValueError):
        measure.sample_path(0, 1)


def test_sample_path_avoids_null_branches() -> None:
    measure = MarkovMeasure(WeightSequence.constant(0.0, 1.0))
    trace = measure.sample_path(200, 5)
    # p_0 = 0 forces a 1, then symbols alternate
    assert trace.address.bits[:4] == (1, 0, 1, 0)
    assert np.all(np.isfinite(trace.cumulative))
    assert trace.cumulative[-1] == 0.0


def test_sample_paths_layout_independent(monkeypatch: MonkeyPatch) -> None:
    measure = MarkovMeasure(random_weights(8))
    reference = measure.sample_paths(300, 10, 4, (300, 10, 100, 10))
    assert reference.shape == (10, 3)

    monkeypatch.setattr(Settings, "PATH_BATCH", 3)
    monkeypatch.setattr(Settings, "SAMPLE_CHUNK", 7)
    monkeypatch.setenv(Settings.THREADS_ENV, "1")
    assert np.array_equal(measure.sample_paths(300, 10, 4, (10, 100, 300)), reference)

    single = measure.sample_path(300, 4)
    assert np.allclose(reference[0], single.cumulative[[9, 99, 299]])


def test_sample_paths_invalid() -> None:
    measure = MarkovMeasure(WeightSequence.constant(0.5, 0.5))
    with raises(WeightValueError):
        measure.sample_paths(10, 0, 1, (5,))
    with raises(WeightValueError):
        measure.sample_paths(10, 2, 1, (11,))
    with raises(WeightValueError):
        measure.sample_paths(10, 2, 1, ())


def test_max_workers(monkeypatch: MonkeyPatch) -> None:
    monkeypatch.setenv(Settings.THREADS_ENV, "3")
    assert Settings.max_workers() == 3
    monkeypatch.setenv(Settings.THREADS_ENV, "zero")
    assert Settings.max_workers() >= 1


def test_masses_sum_to_one_with_null_weights() -> None:
    weights = WeightSequence.periodic([(1.0, 0.0), (0.0, 0.5), (0.5, 1.0), (0.3, 0.7)])
    measure = MarkovMeasure(weights)
    for n in range(1, 15):
        total = sum(
            exp(measure.cylinder_log_mass(CylinderAddress(bits)))
            for bits in product((0, 1), repeat=n)
        )
        assert isclose(total, 1.0, abs_tol=1e-12)


def test_children_only_see_the_last_symbol() -> None:
    measure = MarkovMeasure(random_weights(12))
    masses = cylinder_masses(measure, 7)
    children = cylinder_masses(measure, 8)
    for bits, mass in masses.items():
        for sibling, other in masses.items():
            if bits[-1] != sibling[-1]:
                continue
            for symbol in (0, 1):
                assert isclose(
                    children[bits + (symbol,)] / mass,
                    children[sibling + (symbol,)] / other,
                    rel_tol=1e-12,
                )


def test_first_symbol_frequency() -> None:
    measure = MarkovMeasure(WeightSequence.explicit([(0.3, 0.5)], [(0.5, 0.5)]))
    first = measure.sample_paths(1, 4_000, 7, (1,))[:, 0]
    frequency = float(np.mean(np.isclose(first, log(0.3))))
    # four standard deviations of the binomial frequency
    assert abs(frequency - 0.3) < 4 * (0.3 * 0.7 / 4_000) ** 0.5
