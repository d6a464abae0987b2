"""
_weights.py:

This file contains the weight sequences (p_n, q_n) driving a non-homogeneous Markov measure.

Classes:
    - `WeightValueError` - Error raised for a weight outside [0, 1] or a malformed sequence.
    - `WeightKind` - How a sequence produces its values.
    - `PerturbMode` - How `perturb` moves a sequence.
    - `WeightSequence` - Immutable sequence of couples (p_n, q_n).
    - `DoublingBlocks` - Generator rule alternating two regimes on blocks of doubling length.
    - `Distance` - Result of `linf_distance`.
    - `Perturbation` - Result of `perturb`.

Functions:
    - `linf_distance` - Sup-norm distance between two weight sequences.
    - `perturb` - Move every weight by at most zeta.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from math import isfinite, lcm
from typing import Callable, Iterable, Sequence

import numpy as np
import numpy.typing as npt

from ._config import DyadimError, Settings

Pair = tuple[float, float]
FloatArray = npt.NDArray[np.float64]

_NOISE_BLOCK = 4_096


class WeightValueError(DyadimError):
    """
    This class should be used to raise an error when a weight lies outside [0, 1]
    or a weight sequence is declared inconsistently.
    """


class WeightKind(Enum):
    """How a sequence produces its values."""

    CONSTANT = "constant"
    PERIODIC = "periodic"
    EXPLICIT = "explicit"
    GENERATOR = "generator"


class PerturbMode(Enum):
    """How `perturb` moves a sequence."""

    UNIFORM_SHIFT = "uniform-shift"
    SEEDED_RANDOM = "seeded-random"


def _checked_pair(pair: Iterable[float], where: str) -> Pair:
    values = tuple(float(value) for value in pair)
    if len(values) != 2:
        raise WeightValueError(f"{where}: expected a couple (p, q), got {values!r}")
    for value in values:
        if not (isfinite(value) and 0.0 <= value <= 1.0):
            raise WeightValueError(f"{where}: weight {value!r} is outside [0, 1]")
    return values[0], values[1]


def _clamp(value: float) -> float:
    return min(1.0, max(0.0, value))


@dataclass(slots=True, frozen=True)
class WeightSequence:
    """
    Immutable sequence of couples (p_n, q_n), n >= 0. Index 0 only contributes p_0 (the mass
    of the first cylinder `0`); q_0 is stored but never consulted.

    Eventually periodic sequences are described by a finite `prefix` followed by a `period`
    repeated forever: `value_at(n)` is `prefix[n]` for `n < len(prefix)`, otherwise
    `period[(n - len(prefix)) % len(period)]`. Generator sequences evaluate `rule(n)`.

    Attributes:
        - `kind: WeightKind` - Constant, periodic, explicit-with-tail or generator.
        - `prefix: tuple[Pair, ...]` - Explicit leading couples.
        - `period: tuple[Pair, ...]` - Repeating tail, empty for generators.
        - `rule: Callable[[int], Pair] | None` - Generator rule.
        - `seed: int | None` - Seed the values were materialized from, if random.
    """

    kind: WeightKind
    prefix: tuple[Pair, ...] = ()
    period: tuple[Pair, ...] = ()
    rule: Callable[[int], Pair] | None = field(default=None, compare=False)
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.kind is WeightKind.GENERATOR:
            if self.rule is None:
                raise WeightValueError("a generator sequence needs a rule")
            return
        if not self.period:
            raise WeightValueError(f"a {self.kind.value} sequence needs a non-empty period")
        for index, pair in enumerate(self.prefix):
            _checked_pair(pair, f"prefix[{index}]")
        for index, pair in enumerate(self.period):
            _checked_pair(pair, f"period[{index}]")

    @classmethod
    def constant(cls, p: float, q: float) -> WeightSequence:
        """Sequence equal to (p, q) at every index."""
        return cls(WeightKind.CONSTANT, (), (_checked_pair((p, q), "constant"),))

    @classmethod
    def periodic(cls, pairs: Iterable[Iterable[float]]) -> WeightSequence:
        """Sequence repeating `pairs` forever from index 0."""
        period = tuple(_checked_pair(pair, "periodic") for pair in pairs)
        return cls(WeightKind.PERIODIC, (), period)

    @classmethod
    def explicit(
        cls, pairs: Iterable[Iterable[float]], tail: Iterable[Iterable[float]]
    ) -> WeightSequence:
        """
        Sequence listing `pairs` then repeating `tail` (one couple for a constant tail).

        Parameters:
            - `pairs` - Explicit leading couples.
            - `tail` - Couples repeated after the explicit ones.
        """
        prefix = tuple(_checked_pair(pair, "explicit") for pair in pairs)
        period = tuple(_checked_pair(pair, "tail") for pair in tail)
        return cls(WeightKind.EXPLICIT, prefix, period)

    @classmethod
    def generated(cls, rule: Callable[[int], Pair]) -> WeightSequence:
        """Sequence evaluating `rule(n)`; the rule must be deterministic."""
        return cls(WeightKind.GENERATOR, rule=rule)

    @classmethod
    def random(
        cls,
        seed: int,
        *,
        length: int | None = None,
        period: int | None = None,
        low: float = 0.0,
        high: float = 1.0,
        tail: Iterable[Iterable[float]] = ((0.5, 0.5),),
    ) -> WeightSequence:
        """
        Sequence materialized from a seed, either `length` uniform couples followed by `tail`
        or a periodic sequence of `period` uniform couples.

        Parameters:
            - `seed: int` - Seed of the numpy generator.
            - `length: int | None` - Number of explicit random couples.
            - `period: int | None` - Number of random couples repeated forever.
            - `low: float = 0.0`, `high: float = 1.0` - Range of the uniform draws.
            - `tail` - Tail used with `length`.

        Raises:
            - `WeightValueError` - Raised unless exactly one of `length`/`period` is given or
                                   the range is not inside [0, 1].
        """
        if (length is None) == (period is None):
            raise WeightValueError("give exactly one of 'length' and 'period'")
        if not 0.0 <= low <= high <= 1.0:
            raise WeightValueError(f"random range [{low}, {high}] is not inside [0, 1]")
        count = length if length is not None else period
        assert count is not None
        if count < 1:
            raise WeightValueError("a random sequence needs at least one couple")

        draws = np.random.default_rng(seed).uniform(low, high, size=(count, 2))
        pairs = tuple((float(p), float(q)) for p, q in draws)
        if period is not None:
            return cls(WeightKind.PERIODIC, (), pairs, seed=seed)
        checked_tail = tuple(_checked_pair(pair, "tail") for pair in tail)
        return cls(WeightKind.EXPLICIT, pairs, checked_tail, seed=seed)

    @property
    def is_eventually_periodic(self) -> bool:
        """Whether the sequence is a finite prefix followed by a repeated period."""
        return self.kind is not WeightKind.GENERATOR

    def value_at(self, n: int) -> Pair:
        """
        Couple (p_n, q_n).

        Parameters:
            - `n: int` - Generation index, n >= 0.

        Returns: `Pair` - The couple at index n.

        Raises:
            - `WeightValueError` - Raised for a negative index or a generator value outside
                                   [0, 1].
        """
        if n < 0:
            raise WeightValueError(f"index {n} is negative")
        if self.rule is not None:
            return _checked_pair(self.rule(n), f"rule({n})")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def arrays(self, start: int, stop: int) -> tuple[FloatArray, FloatArray]:
        """
        Values on the index range [start, stop) as two arrays.

        Parameters:
            - `start: int`, `stop: int` - Index range.

        Returns: `tuple[FloatArray, FloatArray]` - Arrays of p_n and q_n.
        """
        if start < 0 or stop < start:
            raise WeightValueError(f"invalid index range [{start}, {stop})")
        if self.rule is not None:
            values = np.array([self.value_at(n) for n in range(start, stop)], dtype=np.float64)
            values = values.reshape(-1, 2)
            return values[:, 0].copy(), values[:, 1].copy()

        indices = np.arange(start, stop)
        prefix = np.array(self.prefix, dtype=np.float64).reshape(-1, 2)
        period = np.array(self.period, dtype=np.float64)
        in_prefix = indices < len(prefix)
        table = np.empty((stop - start, 2), dtype=np.float64)
        table[in_prefix] = prefix[indices[in_prefix]]
        tail = indices[~in_prefix]
        table[~in_prefix] = period[(tail - len(prefix)) % len(period)]
        return table[:, 0].copy(), table[:, 1].copy()

    def describe(self) -> dict[str, object]:
        """Declaration echoing the sequence, used in manifests."""
        declaration: dict[str, object] = {"kind": self.kind.value}
        if self.rule is not None:
            declaration["rule"] = repr(self.rule)
        else:
            declaration["pairs"] = [list(pair) for pair in self.prefix or self.period]
            if self.kind is WeightKind.EXPLICIT:
                declaration["tail"] = [list(pair) for pair in self.period]
        if self.seed is not None:
            declaration["seed"] = self.seed
        return declaration


@dataclass(slots=True, frozen=True)
class DoublingBlocks:
    """
    Generator rule alternating two regimes on blocks of doubling length: index n uses `first`
    when the bit length of n + 1 is odd and `second` when it is even. Such sequences have
    different lower and upper entropies as soon as the two regimes have different entropies.
    """

    first: Pair
    second: Pair

    def __call__(self, n: int) -> Pair:
        return self.first if (n + 1).bit_length() % 2 == 1 else self.second


@lru_cache(maxsize=256)
def _noise_block(seed: int, block: int) -> FloatArray:
    """Uniform draws in [-1, 1] for indices [block * 4096, (block + 1) * 4096)."""
    stream = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))
    noise = stream.uniform(-1.0, 1.0, size=(_NOISE_BLOCK, 2))
    noise.setflags(write=False)
    return noise


@dataclass(slots=True, frozen=True)
class _ShiftedRule:
    base: WeightSequence
    zeta: float

    def __call__(self, n: int) -> Pair:
        p, q = self.base.value_at(n)
        return _clamp(p + self.zeta), _clamp(q + self.zeta)


@dataclass(slots=True, frozen=True)
class _NoisyRule:
    base: WeightSequence
    zeta: float
    seed: int

    def __call__(self, n: int) -> Pair:
        p, q = self.base.value_at(n)
        noise_p, noise_q = _noise_block(self.seed, n // _NOISE_BLOCK)[n % _NOISE_BLOCK]
        return _clamp(p + self.zeta * float(noise_p)), _clamp(q + self.zeta * float(noise_q))


@dataclass(slots=True, frozen=True)
class Distance:
    """
    Result of `linf_distance`.

    Attributes:
        - `value: float` - Sup over compared indices of max(|p_n - p_n'|, |q_n - q_n'|).
        - `exact: bool` - True if the sup covers every index, false if it is a lower bound.
        - `compared: int` - Number of leading indices compared.
    """

    value: float
    exact: bool
    compared: int


def linf_distance(first: WeightSequence, second: WeightSequence, horizon: int) -> Distance:
    """
    Sup-norm distance between two weight sequences. Exact when both are eventually periodic
    (indices up to the longer prefix plus the lcm of the periods), otherwise a lower bound
    over [0, horizon).

    Parameters:
        - `first: WeightSequence`, `second: WeightSequence` - Sequences to compare.
        - `horizon: int` - Number of indices compared for generator sequences, >= 1.

    Returns: `Distance` - The distance with its exactness flag.

    Raises:
        - `WeightValueError` - Raised if `horizon` < 1.
    """
    if horizon < 1:
        raise WeightValueError(f"horizon must be >= 1, got {horizon}")

    exact = first.is_eventually_periodic and second.is_eventually_periodic
    if exact:
        compared = max(len(first.prefix), len(second.prefix)) + lcm(
            len(first.period), len(second.period)
        )
    else:
        compared = horizon

    p_first, q_first = first.arrays(0, compared)
    p_second, q_second = second.arrays(0, compared)
    gap = np.maximum(np.abs(p_first - p_second), np.abs(q_first - q_second))
    return Distance(float(gap.max()), exact, compared)


@dataclass(slots=True, frozen=True)
class Perturbation:
    """
    Result of `perturb`.

    Attributes:
        - `weights: WeightSequence` - The perturbed sequence.
        - `zeta: float` - Requested bound on every coordinate move.
        - `mode: PerturbMode` - How the sequence was moved.
        - `seed: int` - Seed of the random moves.
        - `realized: Distance` - Distance actually achieved, smaller than zeta after clamping.
        - `clamped: bool` - Whether some moved weight was clamped to [0, 1] on the compared
                            indices.
    """

    weights: WeightSequence
    zeta: float
    mode: PerturbMode
    seed: int
    realized: Distance
    clamped: bool


def perturb(
    weights: WeightSequence,
    zeta: float,
    mode: PerturbMode | str = PerturbMode.UNIFORM_SHIFT,
    seed: int = 0,
    horizon: int | None = None,
) -> Perturbation:
    """
    Move every weight by at most zeta and clamp the result to [0, 1]. `uniform-shift` adds
    +zeta to both coordinates; `seeded-random` adds an independent value of [-zeta, zeta] per
    coordinate and index, drawn from a stream derived from the seed.

    Parameters:
        - `weights: WeightSequence` - Sequence to move.
        - `zeta: float` - Bound on every move, >= 0.
        - `mode: PerturbMode | str = "uniform-shift"` - How to move it.
        - `seed: int = 0` - Seed of the random moves.
        - `horizon: int | None = None` - Indices compared for the realized distance of
                                         non-periodic results, defaults to the package horizon.

    Returns: `Perturbation` - The moved sequence and its metadata.

    Raises:
        - `WeightValueError` - Raised if zeta is negative or not finite.
    """
    mode = PerturbMode(mode)
    if not (isfinite(zeta) and zeta >= 0.0):
        raise WeightValueError(f"zeta must be a finite non-negative number, got {zeta!r}")
    horizon = Settings.DEFAULT_HORIZON if horizon is None else horizon

    if zeta == 0.0:
        moved = weights
    elif mode is PerturbMode.UNIFORM_SHIFT and weights.is_eventually_periodic:
        shift = _ShiftedRule(weights, zeta)
        moved = WeightSequence(
            weights.kind,
            tuple(shift(n) for n in range(len(weights.prefix))),
            tuple(shift(len(weights.prefix) + j) for j in range(len(weights.period))),
            seed=weights.seed,
        )
    elif mode is PerturbMode.UNIFORM_SHIFT:
        moved = WeightSequence.generated(_ShiftedRule(weights, zeta))
    else:
        moved = WeightSequence.generated(_NoisyRule(weights, zeta, seed))

    realized = linf_distance(weights, moved, horizon)
    compared = realized.compared
    p_base, q_base = weights.arrays(0, compared)
    p_moved, q_moved = moved.arrays(0, compared)
    if mode is PerturbMode.UNIFORM_SHIFT:
        intended = (p_base + zeta, q_base + zeta)
        clamped = bool(np.any(intended[0] > 1.0) or np.any(intended[1] > 1.0)) and zeta > 0
    else:
        clamped = bool(
            np.any((p_moved == 0.0) & (p_base > 0.0))
            or np.any((p_moved == 1.0) & (p_base < 1.0))
            or np.any((q_moved == 0.0) & (q_base > 0.0))
            or np.any((q_moved == 1.0) & (q_base < 1.0))
        )
    return Perturbation(moved, zeta, mode, seed, realized, clamped)


def pairs_from_text(text: str) -> tuple[Pair, ...]:
    """
    Parse couples written as `p,q; p,q; ...`.

    Parameters:
        - `text: str` - Declaration text.

    Returns: `tuple[Pair, ...]` - Parsed couples.

    Raises:
        - `WeightValueError` - Raised for malformed couples or weights outside [0, 1].
    """
    pairs: list[Pair] = []
    for chunk in filter(None, (part.strip() for part in text.split(";"))):
        try:
            values: Sequence[float] = [float(value) for value in chunk.split(",")]
        except ValueError as exc:
            raise WeightValueError(f"malformed couple {chunk!r}") from exc
        pairs.append(_checked_pair(values, f"couple {chunk!r}"))
    if not pairs:
        raise WeightValueError(f"no couple found in {text!r}")
    return tuple(pairs)
