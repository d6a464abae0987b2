"""
_counterexample.py:

This file builds a pair of dyadic doubling measures whose conditional log-ratios stay
uniformly close while their lower Hausdorff dimensions differ by more than 1/4. Both measures
are concatenations of Bernoulli blocks; which Bernoulli measure governs the next block
depends on a zero-count classification of the previous one.

Classes:
    - `InseparableSpecsError` - Error raised when two governing specs coincide.
    - `Role` - Which of the two measures.
    - `BernoulliSpec` - I.i.d. measure with P(0) = p0.
    - `RegimeCut` - Classification of one block length inside one regime.
    - `StageResult` - One stage of the construction.
    - `StagePlan` - The stages built so far.
    - `PiecewiseMeasure` - One of the two constructed measures.
    - `RatioClass` - One of the four kinds of conditional steps.
    - `RatioReport` - Result of `verify_ratio_condition`.
    - `GapReport` - Result of `dimension_gap_report`.

Functions:
    - `smb_concentration` - Mass of the words whose per-symbol log-mass lies in a band.
    - `find_stage_depth` - Smallest block length meeting the stage conditions.
    - `build_pair` - Build both measures and their plan.
    - `verify_ratio_condition` - Sup of |X_n - Y_n| over all cylinders.
    - `dimension_gap_report` - Dimensions of both measures from the stage structure.
    - `construction_epsilon` - Epsilon giving a requested log-ratio gap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import ceil, exp, floor, isfinite, log
from typing import Iterable

import numpy as np
from scipy.stats import binom

from ._config import DyadimError
from ._entropy import LOG2, binary_entropy
from ._logger import logger
from ._measure import CylinderAddress
from ._weights import FloatArray, WeightValueError

_SNAP = 1e-9
_MAX_BLOCK = 2**40

LogRange = tuple[float, float]


class InseparableSpecsError(DyadimError):
    """
    This class should be used to raise an error when the two Bernoulli specs
    governing some regime coincide, so no block length can separate them.
    """


class Role(Enum):
    """Which of the two constructed measures."""

    MU = "mu"
    NU = "nu"


@dataclass(slots=True, frozen=True)
class BernoulliSpec:
    """
    I.i.d. measure on words: every symbol is 0 with probability `p0`. The log-mass of a word
    only depends on its length and its number of zeros.
    """

    p0: float

    def __post_init__(self) -> None:
        if not 0.0 < self.p0 < 1.0:
            raise WeightValueError(f"p0 must be in (0, 1), got {self.p0}")

    @property
    def log_mass_rate(self) -> float:
        """Expected per-symbol log-mass h(p0), nats."""
        return binary_entropy(self.p0)

    def log_mass(self, zeros: int, length: int) -> float:
        """Log-mass of one word of `length` symbols with `zeros` zeros."""
        return zeros * log(self.p0) + (length - zeros) * log(1.0 - self.p0)

    def count_mass(self, length: int, lower: int, upper: int) -> float:
        """
        Probability that a word of `length` symbols has between `lower` & `upper` zeros,
        both included, from binomial tails.
        """
        lower, upper = max(lower, 0), min(upper, length)
        if lower > upper:
            return 0.0
        below = float(binom.cdf(lower - 1, length, self.p0))
        above = float(binom.sf(upper, length, self.p0))
        if below + above > 0.5:
            inside = float(binom.cdf(upper, length, self.p0)) - below
        else:
            inside = 1.0 - below - above
        return min(1.0, max(0.0, inside))


def _band_counts(
    spec: BernoulliSpec, length: int, center: float, half_width: float
) -> tuple[int, int]:
    """Zero counts whose per-symbol log-mass lies in [center - half_width, center + half_width]."""
    base = log(1.0 - spec.p0)
    slope = (log(spec.p0) - base) / length
    if slope == 0.0:
        inside = abs(base - center) <= half_width + _SNAP
        return (0, length) if inside else (1, 0)
    ends = sorted(((center - half_width - base) / slope, (center + half_width - base) / slope))
    lower = ceil(ends[0] - _SNAP * max(1.0, abs(ends[0])))
    upper = floor(ends[1] + _SNAP * max(1.0, abs(ends[1])))
    return max(lower, 0), min(upper, length)


def smb_concentration(spec: BernoulliSpec, n: int, band: tuple[float, float]) -> float:
    """
    Mass, under the spec, of the words of length n whose per-symbol log-mass
    log(spec(word)) / n lies in the closed band [center - half_width, center + half_width].
    Per-symbol log-masses are negative, so a positive center is read as an entropy rate
    -log(spec(word)) / n and the band is mirrored. Computed from binomial tails of the zero
    count, never by enumerating words.

    Parameters:
        - `spec: BernoulliSpec` - The measure.
        - `n: int` - Word length, >= 1.
        - `band: tuple[float, float]` - (center, half_width) in nats per symbol; the typical
                                        center is `spec.log_mass_rate` or its opposite.

    Returns: `float` - The probability.
    """
    if n < 1:
        raise WeightValueError(f"word length must be >= 1, got {n}")
    center, half_width = band
    if half_width < 0.0:
        raise WeightValueError(f"half-width must be >= 0, got {half_width}")
    if center > 0.0:
        center = -center
    return spec.count_mass(n, *_band_counts(spec, n, center, half_width))


@dataclass(slots=True, frozen=True)
class RegimeCut:
    """
    Classification of blocks of one length inside one regime. Blocks whose zero count lies in
    [lower, upper] form the "1" part (nu-typical), the others the "0" part (mu-typical).

    Attributes:
        - `regime: int` - Regime of the parent cylinder.
        - `likelihood_cut: float` - Zero count where both governing specs give equal mass.
        - `lower: int`, `upper: int` - Zero counts of the "1" part.
        - `mu_mass: float` - Mass of the "0" part under the regime's mu spec.
        - `nu_mass: float` - Mass of the "1" part under the regime's nu spec.
        - `band_ok: bool` - Whether every cylinder ending with a block of the "0" part in
                            regime 0 has its log-mass, divided by the boundary depth,
                            within the stage tolerance of the mu rate.
    """

    regime: int
    likelihood_cut: float
    lower: int
    upper: int
    mu_mass: float
    nu_mass: float
    band_ok: bool

    def contains(self, zeros: int) -> bool:
        """Whether a block with `zeros` zeros is in the "1" part."""
        return self.lower <= zeros <= self.upper


@dataclass(slots=True, frozen=True)
class StageResult:
    """
    One stage of the construction: the block [depth - block, depth) and its classification
    in every regime present at that stage.
    """

    stage: int
    depth: int
    block: int
    target: float
    cuts: tuple[RegimeCut, ...]

    def cut(self, regime: int) -> RegimeCut:
        """Classification inside `regime`."""
        for cut in self.cuts:
            if cut.regime == regime:
                return cut
        raise KeyError(regime)

    @property
    def satisfied(self) -> bool:
        """Whether every regime reaches both tail masses and its band check."""
        return all(
            cut.mu_mass > 1.0 - self.target and cut.nu_mass > 1.0 - self.target and cut.band_ok
            for cut in self.cuts
        )


@dataclass(slots=True, frozen=True)
class StagePlan:
    """
    Stages built so far. Regime 0 is governed by lambda_0 = 1/2 for mu and
    rho_0 = 1/2 - epsilon for nu, regime 1 by lambda_1 = delta (1 - epsilon) for mu and
    rho_1 = delta for nu (probabilities of the symbol 0).

    Attributes:
        - `epsilon: float` - Closeness parameter.
        - `delta: float` - Weight of the low-dimensional regime.
        - `stages: tuple[StageResult, ...]` - Stages in order.
    """

    epsilon: float
    delta: float
    stages: tuple[StageResult, ...] = ()

    def __post_init__(self) -> None:
        if self.epsilon == 0.0:
            raise InseparableSpecsError(
                "epsilon = 0 makes rho_0 = lambda_0 and rho_1 = lambda_1, nothing to separate"
            )
        if not 0.0 < self.epsilon < 0.25:
            raise WeightValueError(f"epsilon must be in (0, 1/4), got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise WeightValueError(f"delta must be in (0, 1), got {self.delta}")

    def spec(self, role: Role | str, regime: int) -> BernoulliSpec:
        """Bernoulli spec governing `role` inside `regime`."""
        role = Role(role)
        if regime == 0:
            return BernoulliSpec(0.5 if role is Role.MU else 0.5 - self.epsilon)
        return BernoulliSpec(
            self.delta * (1.0 - self.epsilon) if role is Role.MU else self.delta
        )

    @property
    def depths(self) -> tuple[int, ...]:
        """Stage boundaries n_1 < n_2 < ..."""
        return tuple(stage.depth for stage in self.stages)

    @property
    def thresholds(self) -> list[list[dict[str, float]]]:
        """Per stage & regime: likelihood cut and zero counts of the "1" part."""
        return [
            [
                {
                    "regime": cut.regime,
                    "likelihood_cut": cut.likelihood_cut,
                    "lower": cut.lower,
                    "upper": cut.upper,
                }
                for cut in stage.cuts
            ]
            for stage in self.stages
        ]

    @property
    def achieved(self) -> list[dict[str, object]]:
        """Per stage: target and, per regime, the certified masses and band checks."""
        return [
            {
                "stage": stage.stage,
                "target": stage.target,
                "satisfied": stage.satisfied,
                "regimes": [
                    {
                        "regime": cut.regime,
                        "mu_mass": cut.mu_mass,
                        "nu_mass": cut.nu_mass,
                        "band_ok": cut.band_ok,
                    }
                    for cut in stage.cuts
                ],
            }
            for stage in self.stages
        ]

    def with_stage(self, result: StageResult) -> StagePlan:
        """Plan extended by one stage."""
        return StagePlan(self.epsilon, self.delta, (*self.stages, result))

    def to_json(self) -> dict[str, object]:
        """Export with the fields epsilon, delta, depths, thresholds & achieved."""
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "depths": list(self.depths),
            "thresholds": self.thresholds,
            "achieved": self.achieved,
        }


def _parts(lower: int, upper: int, length: int) -> Iterable[tuple[int, int, int]]:
    """(label, first, last) zero-count intervals of the "1" part [lower, upper] & the "0" part."""
    if lower > upper:
        yield 0, 0, length
        return
    yield 1, lower, upper
    if lower > 0:
        yield 0, 0, lower - 1
    if upper < length:
        yield 0, upper + 1, length


def _prefix_ranges(plan: StagePlan, role: Role) -> dict[int, LogRange]:
    """
    Smallest & largest log-mass under `role` of the cylinders ending at the last boundary of
    the plan, grouped by the regime they lead to. Block log-masses are linear in the zero
    count, so the extremes of every part are at its ends.
    """
    ranges: dict[int, LogRange] = {0: (0.0, 0.0)}
    for stage in plan.stages:
        reached: dict[int, LogRange] = {}
        for regime, (low, high) in ranges.items():
            spec = plan.spec(role, regime)
            cut = stage.cut(regime)
            for label, first, last in _parts(cut.lower, cut.upper, stage.block):
                ends = (spec.log_mass(first, stage.block), spec.log_mass(last, stage.block))
                low_end, high_end = low + min(ends), high + max(ends)
                if label in reached:
                    low_end = min(low_end, reached[label][0])
                    high_end = max(high_end, reached[label][1])
                reached[label] = (low_end, high_end)
        ranges = reached
    return ranges


def _cylinder_band(
    spec: BernoulliSpec, length: int, depth: int, tol: float, prefix: LogRange
) -> tuple[int, int]:
    """
    Zero counts of a block of `length` symbols for which every cylinder with a prefix
    log-mass in `prefix` keeps |log-mass / depth - rate| <= tol.
    """
    rate = spec.log_mass_rate
    lowest = (depth * (rate - tol) - prefix[0]) / length
    highest = (depth * (rate + tol) - prefix[1]) / length
    if lowest > highest:
        return 1, 0
    return _band_counts(spec, length, (lowest + highest) / 2.0, (highest - lowest) / 2.0)


def _cylinder_deviation(
    spec: BernoulliSpec, length: int, depth: int, zeros: Iterable[int], prefix: LogRange
) -> float:
    rate = spec.log_mass_rate
    return max(
        (
            abs((start + spec.log_mass(z, length)) / depth - rate)
            for z in zeros
            for start in prefix
        ),
        default=0.0,
    )


def _classify(
    plan: StagePlan,
    regime: int,
    length: int,
    tol: float,
    prefixes: dict[Role, dict[int, LogRange]] | None = None,
) -> RegimeCut:
    """
    Cut the blocks of `length` symbols inside `regime`, after the last boundary of the plan.
    The band conditions hold for whole cylinders: their log-mass divided by the new boundary
    depth. The nu band applies to the "1" part at the first stage and in regime 1, the mu band
    to the "0" part in regime 0.
    """
    if prefixes is None:
        prefixes = {role: _prefix_ranges(plan, role) for role in Role}
    depth = (plan.stages[-1].depth if plan.stages else 0) + length
    mu_spec, nu_spec = plan.spec(Role.MU, regime), plan.spec(Role.NU, regime)
    zero_gain = log(nu_spec.p0 / mu_spec.p0)
    one_gain = log((1.0 - nu_spec.p0) / (1.0 - mu_spec.p0))
    if zero_gain == one_gain:
        raise InseparableSpecsError(f"both specs of regime {regime} are p0 = {mu_spec.p0}")

    # nu is favoured when z * zero_gain + (length - z) * one_gain > 0
    cut = length * one_gain / (one_gain - zero_gain)
    if zero_gain < one_gain:
        lower, upper = 0, ceil(cut) - 1
    else:
        lower, upper = floor(cut) + 1, length
    nu_prefix = prefixes[Role.NU].get(regime)
    if nu_prefix is not None and (regime == 1 or not plan.stages):
        band = _cylinder_band(nu_spec, length, depth, tol, nu_prefix)
        lower, upper = max(lower, band[0]), min(upper, band[1])

    band_ok = True
    mu_prefix = prefixes[Role.MU].get(regime)
    if regime == 0 and mu_prefix is not None:
        ends = [
            z
            for label, first, last in _parts(lower, upper, length)
            if label == 0
            for z in (first, last)
        ]
        band_ok = _cylinder_deviation(mu_spec, length, depth, ends, mu_prefix) <= tol

    return RegimeCut(
        regime,
        cut,
        lower,
        upper,
        1.0 - mu_spec.count_mass(length, lower, upper),
        nu_spec.count_mass(length, lower, upper),
        band_ok,
    )


def find_stage_depth(
    plan: StagePlan, stage: int | None = None, target: float | None = None
) -> StageResult:
    """
    Smallest block length (doubling, then bisection) after the last boundary of the plan whose
    classification meets the stage conditions with margin `target` in every regime present:
    the "0" part carries more than 1 - target of the mu spec, the "1" part more than
    1 - target of the nu spec, and every cylinder ending with a block of a designated part has
    its whole log-mass, divided by the new boundary depth, within `target` of its spec's rate.
    Every mass is an exact binomial tail.

    Parameters:
        - `plan: StagePlan` - Stages built so far.
        - `stage: int | None` - Index of the new stage, defaults to the next one.
        - `target: float | None` - Margin, defaults to epsilon^(stage + 1).

    Returns: `StageResult` - The new stage; its depth is n_{stage + 1}.

    Raises:
        - `InseparableSpecsError` - Raised if the specs of some regime coincide or no block
                                    length up to 2^40 separates them.
    """
    stage = len(plan.stages) if stage is None else stage
    if stage != len(plan.stages):
        raise WeightValueError(f"the plan has {len(plan.stages)} stages, cannot build {stage}")
    target = plan.epsilon ** (stage + 1) if target is None else target
    regimes = (0,) if stage == 0 else (0, 1)
    start = plan.stages[-1].depth if plan.stages else 0
    prefixes = {role: _prefix_ranges(plan, role) for role in Role}

    def attempt(length: int) -> StageResult:
        cuts = tuple(_classify(plan, regime, length, target, prefixes) for regime in regimes)
        return StageResult(stage, start + length, length, target, cuts)

    length = 1
    found = attempt(length)
    while not found.satisfied:
        if length >= _MAX_BLOCK:
            raise InseparableSpecsError(f"no block length up to 2^40 separates stage {stage}")
        length *= 2
        found = attempt(length)

    failing = length // 2
    while length - failing > 1:
        middle = (failing + length) // 2
        candidate = attempt(middle)
        if candidate.satisfied:
            length, found = middle, candidate
        else:
            failing = middle
    logger.debug(f"stage {stage}: block of {length} symbols, boundary n={found.depth}")
    return found


@dataclass(slots=True, frozen=True)
class PiecewiseMeasure:
    """
    One of the two constructed measures. Inside the block [n_k, n_{k+1}) symbols are i.i.d.
    with the spec of the current regime; the regime of the next block is 1 if the zero count
    of the block falls in the "1" part of its stage, else 0. The first block is in regime 0
    and the regime reached at the last boundary governs every later symbol.

    Attributes:
        - `plan: StagePlan` - The stages.
        - `role: Role` - Whether this is mu or nu.
    """

    plan: StagePlan
    role: Role

    def _blocks(self, depth: int) -> Iterable[tuple[int, int, StageResult | None]]:
        start = 0
        for stage in self.plan.stages:
            if start >= depth:
                return
            yield start, min(stage.depth, depth), stage
            start = stage.depth
        if start < depth:
            yield start, depth, None

    def cylinder_log_mass(self, address: CylinderAddress | str) -> float:
        """
        Log-mass of a cylinder, from the zero count of each block.

        Parameters:
            - `address: CylinderAddress | str` - The cylinder.

        Returns: `float` - Log-mass in nats, 0 for the empty address.
        """
        if isinstance(address, str):
            address = CylinderAddress.parse(address)
        bits = address.bits
        regime = 0
        total = 0.0
        for start, stop, stage in self._blocks(len(bits)):
            zeros = (stop - start) - sum(bits[start:stop])
            total += self.plan.spec(self.role, regime).log_mass(zeros, stop - start)
            if stage is not None and stop == stage.depth:
                regime = int(stage.cut(regime).contains(zeros))
        return total

    def regime_distribution(self) -> list[tuple[float, float]]:
        """
        Probability, under this measure, of being in regime 0 & 1 after each stage.

        Returns: `list[tuple[float, float]]` - One (P(regime 0), P(regime 1)) per stage.
        """
        probabilities = (1.0, 0.0)
        history: list[tuple[float, float]] = []
        for stage in self.plan.stages:
            to_one = 0.0
            for regime, weight in enumerate(probabilities):
                if weight == 0.0:
                    continue
                cut = stage.cut(regime)
                spec = self.plan.spec(self.role, regime)
                to_one += weight * spec.count_mass(stage.block, cut.lower, cut.upper)
            probabilities = (1.0 - to_one, to_one)
            history.append(probabilities)
        return history

    def sample_exponent(self, depth: int, paths: int, seed: int) -> FloatArray:
        """
        Local exponents -log m(I_depth(x)) / (depth log 2) of sampled points. Path i draws the
        zero count of each block from the stream `SeedSequence(seed, spawn_key=(i,))`.

        Parameters:
            - `depth: int` - Depth, >= 1.
            - `paths: int` - Number of points, >= 1.
            - `seed: int` - Master seed.

        Returns: `FloatArray` - One exponent per path.
        """
        if depth < 1 or paths < 1:
            raise WeightValueError(f"need depth >= 1 and paths >= 1, got {depth}, {paths}")
        exponents = np.empty(paths)
        for index in range(paths):
            stream = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))
            regime = 0
            total = 0.0
            for start, stop, stage in self._blocks(depth):
                spec = self.plan.spec(self.role, regime)
                zeros = int(stream.binomial(stop - start, spec.p0))
                total += spec.log_mass(zeros, stop - start)
                if stage is not None and stop == stage.depth:
                    regime = int(stage.cut(regime).contains(zeros))
            exponents[index] = -total / (depth * LOG2)
        return exponents


def build_pair(
    epsilon: float, delta: float, stages: int
) -> tuple[PiecewiseMeasure, PiecewiseMeasure, StagePlan]:
    """
    Run `find_stage_depth` for every stage and assemble both measures.

    Parameters:
        - `epsilon: float` - In (0, 1/4).
        - `delta: float` - In (0, 1).
        - `stages: int` - Number of stages, >= 1.

    Returns: `tuple[PiecewiseMeasure, PiecewiseMeasure, StagePlan]` - mu, nu & their plan.

    Raises:
        - `InseparableSpecsError` - Raised if epsilon = 0.
        - `WeightValueError` - Raised for parameters out of range.
    """
    if stages < 1:
        raise WeightValueError(f"stages must be >= 1, got {stages}")
    plan = StagePlan(epsilon, delta)
    with logger.timed(f"{stages} stages for epsilon={epsilon}, delta={delta}"):
        for _ in range(stages):
            plan = plan.with_stage(find_stage_depth(plan))
    return PiecewiseMeasure(plan, Role.MU), PiecewiseMeasure(plan, Role.NU), plan


@dataclass(slots=True, frozen=True)
class RatioClass:
    """
    One kind of conditional step: symbol `symbol` inside `regime`, with ratios `step_mu` &
    `step_nu` and `log_gap` = |log step_mu - log step_nu|.
    """

    regime: int
    symbol: int
    step_mu: float
    step_nu: float
    log_gap: float
    reachable: bool

    @property
    def label(self) -> str:
        """Name such as `regime0:symbol1`."""
        return f"regime{self.regime}:symbol{self.symbol}"


@dataclass(slots=True, frozen=True)
class RatioReport:
    """
    Result of `verify_ratio_condition`: `sup_log_gap` is the largest |X_n - Y_n| over every
    cylinder up to `depth`, reached on one of the four `classes`.
    """

    depth: int
    sup_log_gap: float
    classes: tuple[RatioClass, ...]


def verify_ratio_condition(
    mu: PiecewiseMeasure, nu: PiecewiseMeasure, depth: int | None = None
) -> RatioReport:
    """
    Exact sup over all cylinders up to `depth` of |log mu(I)/mu(Î) - log nu(I)/nu(Î)|. Conditional
    ratios only depend on the regime and the symbol, so the sup is a max over four classes;
    regime 1 counts once some block before `depth` can switch to it.

    Parameters:
        - `mu: PiecewiseMeasure`, `nu: PiecewiseMeasure` - Measures sharing one plan.
        - `depth: int | None` - Depth, defaults to the last boundary of the plan.

    Returns: `RatioReport` - The sup and the four classes.
    """
    if mu.plan != nu.plan:
        raise WeightValueError("both measures must share the same plan")
    plan = mu.plan
    if depth is None:
        depth = plan.depths[-1] if plan.stages else 1
    if depth < 1:
        raise WeightValueError(f"depth must be >= 1, got {depth}")
    regime_one_open = any(
        stage.depth < depth and stage.cut(0).lower <= stage.cut(0).upper
        for stage in plan.stages
    )

    classes = []
    for regime in (0, 1):
        mu_spec, nu_spec = plan.spec(mu.role, regime), plan.spec(nu.role, regime)
        for symbol in (0, 1):
            step_mu = mu_spec.p0 if symbol == 0 else 1.0 - mu_spec.p0
            step_nu = nu_spec.p0 if symbol == 0 else 1.0 - nu_spec.p0
            classes.append(
                RatioClass(
                    regime,
                    symbol,
                    step_mu,
                    step_nu,
                    abs(log(step_mu) - log(step_nu)),
                    regime == 0 or regime_one_open,
                )
            )
    sup = max(ratio.log_gap for ratio in classes if ratio.reachable)
    return RatioReport(depth, sup, tuple(classes))


@dataclass(slots=True, frozen=True)
class GapReport:
    """
    Dimensions of the pair from the stage structure. Finitely many stages only bound the limit
    objects, so the values are labelled asymptotic.

    Attributes:
        - `dim_mu: float` - Lower dimension of mu, 1 when the mass leaving regime 0 is summable.
        - `dim_nu_bound: float` - Bound -h(delta) / log 2 on the lower dimension of nu.
        - `slack: float` - Band tolerance of the last stage in dimension units.
        - `gap: float` - dim_mu - dim_nu_bound.
        - `escape_masses: tuple[float, ...]` - Per stage, mu-mass of regime-0 blocks moving to
                                               regime 1.
        - `escape_bound: float` - Sum of the stage targets epsilon^(k + 1).
        - `asymptotic: bool` - Always true.
        - `method: str` - How the values were obtained.
    """

    dim_mu: float
    dim_nu_bound: float
    slack: float
    gap: float
    escape_masses: tuple[float, ...] = field(repr=False)
    escape_bound: float
    asymptotic: bool = True
    method: str = "stage-analysis"

    @property
    def summable(self) -> bool:
        """Whether every escape mass is below its stage target."""
        return sum(self.escape_masses) < self.escape_bound


def dimension_gap_report(
    mu: PiecewiseMeasure, nu: PiecewiseMeasure, plan: StagePlan
) -> GapReport:
    """
    Dimensions of the pair from the stage analysis: mu stays in regime 0 off a set of summable
    mass, so its lower dimension is that of lambda_0, i.e. 1; infinitely often nu has most of its
    mass on rho_1 blocks, which bounds its lower dimension by -h(delta) / log 2.

    Parameters:
        - `mu: PiecewiseMeasure`, `nu: PiecewiseMeasure` - The pair.
        - `plan: StagePlan` - Their plan, with at least one stage.

    Returns: `GapReport` - Both values, the gap and the summability premise.
    """
    if not plan.stages:
        raise WeightValueError("the plan has no stage")
    if mu.plan != plan or nu.plan != plan:
        raise WeightValueError("both measures must be built on the given plan")
    mu_spec = plan.spec(Role.MU, 0)
    escapes = tuple(
        mu_spec.count_mass(stage.block, stage.cut(0).lower, stage.cut(0).upper)
        for stage in plan.stages
    )
    dim_mu = -mu_spec.log_mass_rate / LOG2
    dim_nu = -plan.spec(Role.NU, 1).log_mass_rate / LOG2
    return GapReport(
        dim_mu,
        dim_nu,
        plan.stages[-1].target / LOG2,
        dim_mu - dim_nu,
        escapes,
        sum(stage.target for stage in plan.stages),
    )


def construction_epsilon(target_gap: float) -> float:
    """
    Epsilon whose lambda_0 / rho_0 step has log-ratio gap `target_gap`:
    -log(1 - 2 epsilon) = target_gap, i.e. epsilon = (1 - e^-target) / 2.

    Parameters:
        - `target_gap: float` - Requested sup of |X_n - Y_n|, in (0, log 2).

    Returns: `float` - Epsilon in (0, 1/4).
    """
    if not (isfinite(target_gap) and 0.0 < target_gap < LOG2):
        raise WeightValueError(f"target gap must be in (0, log 2), got {target_gap}")
    return (1.0 - exp(-target_gap)) / 2.0
