from statistics import mean
from time import perf_counter
from typing import Iterator

from pympler.asizeof import asizeof  # type: ignore

import dyadim
from dyadim import MarkovMeasure, WeightSequence, entropy_profile


def test_speed() -> None:
    logger = dyadim.Logger("TEST")
    logger.add(lambda _: None)
    num_trials = 1_000

    def do_trials() -> Iterator[float]:
        for _ in range(num_trials):
            start = perf_counter()
            logger.info("msg")
            yield perf_counter() - start

    assert mean(do_trials()) < 1e-4


def test_size() -> None:
    assert asizeof(dyadim.logger) < 25_000


def test_entropy_profile_speed() -> None:
    measure = MarkovMeasure(WeightSequence.random(1, length=1_000))
    start = perf_counter()
    entropy_profile(measure, 1_000_000)
    assert perf_counter() - start < 5.0
