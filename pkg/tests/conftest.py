from io import StringIO
from itertools import product
from math import log
from typing import Callable

from dyadim import Logger, MarkovMeasure, WeightSequence
from dyadim._config import Config
from dyadim._record import Record
from dyadim._sink import Sink


def get_config(fmt: str | Callable[[Record], str], min_level: int = 0) -> Config:
    return Config(fmt, None, False, min_level)


def get_stringio_logger(log_format: Config) -> tuple[StringIO, Logger]:
    logger = Logger("TEST")
    io = StringIO()
    logger.add(io, log_format=log_format)
    return io, logger


class DummySink(Sink):
    def write(self, string: str) -> None:
        pass


def random_weights(seed: int, length: int = 40) -> WeightSequence:
    return WeightSequence.random(seed, length=length, low=0.05, high=0.95)


def transition(measure: MarkovMeasure, generation: int, last: int, symbol: int) -> float:
    """Probability of `symbol` at generation + 1 after `last` at generation."""
    p, q = measure.weights.value_at(generation)
    zero = p if last == 0 else q
    return zero if symbol == 0 else 1.0 - zero


def cylinder_masses(measure: MarkovMeasure, n: int) -> dict[tuple[int, ...], float]:
    masses = {}
    for bits in product((0, 1), repeat=n):
        mass = transition(measure, 0, 0, bits[0])
        for generation in range(1, n):
            mass *= transition(measure, generation, bits[generation - 1], bits[generation])
        masses[bits] = mass
    return masses


def entropy_by_hand(measure: MarkovMeasure, n: int) -> float:
    return -sum(m * log(m) for m in cylinder_masses(measure, n).values() if m > 0)


def window_by_hand(measure: MarkovMeasure, n: int, k: int, last: int) -> float:
    """Sum of P log P over the k - 1 symbols following `last` at generation n + 1."""
    total = 0.0
    for bits in product((0, 1), repeat=k - 1):
        mass, previous = 1.0, last
        for offset, bit in enumerate(bits):
            mass *= transition(measure, n + 1 + offset, previous, bit)
            previous = bit
        if mass > 0:
            total += mass * log(mass)
    return total
