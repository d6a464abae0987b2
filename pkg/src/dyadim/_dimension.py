"""
_dimension.py:

This file turns entropy profiles into Hausdorff & packing dimension estimates of Markov
measures and checks them against sampled local exponents.

Classes:
    - `DimensionRangeError` - Error raised when the horizon is too short for the window.
    - `DegeneratePeriodError` - Error raised when periodic marginals have no unique cycle.
    - `DimensionMode` - Whether an estimate is an exact limit or a finite-horizon surrogate.
    - `DimensionEstimate` - Lower & upper dimension of a measure.
    - `SmbReport` - Deviations of sampled local exponents from c_n.
    - `ExponentBounds` - Empirical essential bounds of the local exponent.
    - `SweepRow` - One line of a continuity sweep.

Functions:
    - `exact_dimension_periodic` - lim c_n for eventually periodic weights.
    - `dimension_estimate` - Lower & upper dimension, exact when possible.
    - `smb_check` - Compare sampled local exponents with c_n at checkpoints.
    - `local_exponent_bounds` - Quantiles of the local exponent at a depth.
    - `continuity_sweep` - Dimension differences under perturbations of the weights.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

import numpy as np

from ._config import DyadimError, Settings
from ._entropy import LOG2, _entropy_terms, entropy_profile
from ._logger import logger
from ._measure import MarkovMeasure
from ._weights import FloatArray, PerturbMode, WeightSequence, WeightValueError, perturb


class DimensionRangeError(DyadimError):
    """
    This class should be used to raise an error when an estimate is requested
    with a horizon shorter than ten windows or a window shorter than ten generations.
    """


class DegeneratePeriodError(DyadimError):
    """
    This class should be used to raise an error when the marginals of periodic weights
    have no unique limit cycle, i.e. every |p_j - q_j| of the period equals 1.
    """


class DimensionMode(Enum):
    """How a `DimensionEstimate` was obtained."""

    EXACT_PERIODIC = "exact-periodic"
    HORIZON_NUMERIC = "horizon-numeric"


@dataclass(slots=True, frozen=True)
class DimensionEstimate:
    """
    Lower & upper dimension of a measure: `lower` estimates h_*/log 2, the lower Hausdorff
    dimension, `upper` estimates h^*/log 2, the upper packing dimension.

    Attributes:
        - `lower: float` - Min of c_n over the trailing window, or the exact limit.
        - `upper: float` - Max of c_n over the trailing window, or the exact limit.
        - `mode: DimensionMode` - Exact limit or finite-horizon surrogate.
        - `horizon: int` - Last generation used.
        - `window: int` - Length of the trailing window.
        - `cesaro_lower: float` - Min over the window of the running means of c_n.
        - `cesaro_upper: float` - Max over the window of the running means of c_n.
    """

    lower: float
    upper: float
    mode: DimensionMode
    horizon: int
    window: int
    cesaro_lower: float
    cesaro_upper: float


def exact_dimension_periodic(measure: MarkovMeasure) -> float:
    """
    lim c_n for eventually periodic weights. The marginals pi_n(0) follow the affine maps
    pi -> q_j + (p_j - q_j) pi; over one period they compose to pi -> A pi + B with
    |A| = prod |p_j - q_j| < 1, whose fixed point starts the limit cycle of the marginals.

    Parameters:
        - `measure: MarkovMeasure` - Measure with eventually periodic weights.

    Returns: `float` - (1 / (m log 2)) sum_j -[pi_j(0) h(p_j) + pi_j(1) h(q_j)] over the period.

    Raises:
        - `DegeneratePeriodError` - Raised if the weights are not eventually periodic or every
                                    element of the period has |p_j - q_j| = 1.
    """
    weights = measure.weights
    if not weights.is_eventually_periodic:
        raise DegeneratePeriodError("generator weights have no period")

    p = np.array([pair[0] for pair in weights.period])
    q = np.array([pair[1] for pair in weights.period])
    slope = 1.0
    intercept = 0.0
    for p_j, q_j in zip(p.tolist(), q.tolist()):
        slope, intercept = (p_j - q_j) * slope, q_j + (p_j - q_j) * intercept
    if abs(slope) >= 1.0:
        raise DegeneratePeriodError(
            "every element of the period has |p - q| = 1, the marginals do not converge"
        )

    cycle = np.empty(len(p))
    cycle[0] = intercept / (1.0 - slope)
    for j in range(1, len(p)):
        cycle[j] = q[j - 1] + (p[j - 1] - q[j - 1]) * cycle[j - 1]

    steps = -(cycle * _entropy_terms(p) + (1.0 - cycle) * _entropy_terms(q))
    return float(np.clip(np.sum(steps) / (len(p) * LOG2), 0.0, 1.0))


def _is_degenerate(weights: WeightSequence) -> bool:
    return all(abs(p - q) >= 1.0 for p, q in weights.period)


def dimension_estimate(
    measure: MarkovMeasure,
    horizon: int | None = None,
    window: int | None = None,
    *,
    exact: bool = True,
) -> DimensionEstimate:
    """
    Lower & upper dimension of a measure. Eventually periodic weights whose period has some
    |p_j - q_j| < 1 get the exact limit; otherwise the liminf & limsup of c_n are replaced by
    its min & max over the generations (horizon - window, horizon].

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `horizon: int | None = None` - Last generation, defaults to `Settings.DEFAULT_HORIZON`.
        - `window: int | None = None` - Trailing window, defaults to `Settings.DEFAULT_WINDOW`.
        - `exact: bool = True` - Whether the exact limit may be used.

    Returns: `DimensionEstimate` - The estimate.

    Raises:
        - `DimensionRangeError` - Raised unless horizon >= 10 * window >= 100.
    """
    horizon = Settings.DEFAULT_HORIZON if horizon is None else horizon
    window = Settings.DEFAULT_WINDOW if window is None else window
    if not horizon >= 10 * window >= 100:
        raise DimensionRangeError(
            f"need horizon >= 10 * window >= 100, got horizon={horizon}, window={window}"
        )

    weights = measure.weights
    if exact and weights.is_eventually_periodic and not _is_degenerate(weights):
        value = exact_dimension_periodic(measure)
        logger.debug(f"exact limit {value:.6f} from a period of {len(weights.period)}")
        return DimensionEstimate(
            value, value, DimensionMode.EXACT_PERIODIC, horizon, window, value, value
        )

    profile = entropy_profile(measure, horizon)
    tail = profile.normalized[horizon - window :]
    cesaro = profile.cesaro_means()[horizon - window :]
    logger.debug(f"numeric estimate over generations {horizon - window + 1}..{horizon}")
    return DimensionEstimate(
        float(tail.min()),
        float(tail.max()),
        DimensionMode.HORIZON_NUMERIC,
        horizon,
        window,
        float(cesaro.min()),
        float(cesaro.max()),
    )


@dataclass(slots=True, frozen=True, eq=False)
class SmbReport:
    """
    Local exponents -log mu(I_n(x)) / (n log 2) of sampled paths compared with c_n.

    Attributes:
        - `depth: int` - Depth of the paths.
        - `paths: int` - Number of paths.
        - `seed: int` - Master seed.
        - `checkpoints: tuple[int, ...]` - Generations compared, increasing.
        - `exponents: FloatArray` - Local exponents, shape (paths, checkpoints).
        - `reference: FloatArray` - c_n at the checkpoints.
        - `deviations: FloatArray` - |exponent - c_n|, shape (paths, checkpoints).
    """

    depth: int
    paths: int
    seed: int
    checkpoints: tuple[int, ...]
    exponents: FloatArray = field(repr=False)
    reference: FloatArray = field(repr=False)
    deviations: FloatArray = field(repr=False)

    @property
    def mean_deviation(self) -> FloatArray:
        """Mean deviation per checkpoint."""
        return np.asarray(self.deviations.mean(axis=0))

    @property
    def max_deviation(self) -> FloatArray:
        """Largest deviation per checkpoint."""
        return np.asarray(self.deviations.max(axis=0))

    @property
    def median_deviation(self) -> FloatArray:
        """Median deviation per checkpoint."""
        return np.asarray(np.median(self.deviations, axis=0))

    def summary(self) -> list[tuple[int, float, float, int]]:
        """Rows (checkpoint, mean deviation, max deviation, paths)."""
        return [
            (checkpoint, float(mean), float(top), self.paths)
            for checkpoint, mean, top in zip(
                self.checkpoints, self.mean_deviation, self.max_deviation
            )
        ]


def smb_check(
    measure: MarkovMeasure,
    depth: int | None = None,
    paths: int | None = None,
    seed: int | None = None,
    checkpoints: Iterable[int] | None = None,
) -> SmbReport:
    """
    Sample independent paths and compare their local exponents with c_n at the checkpoints.
    The report is a deterministic function of the measure, depth, paths & seed.

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `depth: int | None` - Depth of the paths, >= every checkpoint.
        - `paths: int | None` - Number of paths, >= 1.
        - `seed: int | None` - Master seed.
        - `checkpoints: Iterable[int] | None` - Generations compared.

    Returns: `SmbReport` - Exponents & deviations.

    Raises:
        - `WeightValueError` - Raised for no path, no checkpoint or a checkpoint deeper than
                               the paths.
    """
    depth = Settings.DEFAULT_DEPTH if depth is None else depth
    paths = Settings.DEFAULT_PATHS if paths is None else paths
    if depth < 1 or paths < 1:
        raise WeightValueError(f"need depth >= 1 and paths >= 1, got {depth}, {paths}")
    seed = Settings.DEFAULT_SEED if seed is None else seed
    if checkpoints is None:
        checkpoints = Settings.DEFAULT_CHECKPOINTS
    marks = tuple(sorted(set(checkpoints)))
    if not marks or marks[0] < 1:
        raise WeightValueError(f"checkpoints must be a non-empty set of depths >= 1, got {marks}")
    if marks[-1] > depth:
        raise WeightValueError(f"checkpoint {marks[-1]} is deeper than the paths ({depth})")

    with logger.timed(f"sampling {paths} paths"):
        log_mass = measure.sample_paths(depth, paths, seed, marks)
    generations = np.array(marks)
    entropies = entropy_profile(measure, marks[-1]).entropies[generations - 1]
    reference = entropies / (generations * LOG2)
    exponents = -log_mass / (generations * LOG2)
    deviations = np.abs(exponents - reference)
    return SmbReport(depth, paths, seed, marks, exponents, reference, deviations)


@dataclass(slots=True, frozen=True)
class ExponentBounds:
    """
    Empirical essential bounds of the local exponent at one depth: `low` & `high` are the
    `quantile` & 1 - `quantile` empirical quantiles over the sampled paths, estimating
    dim_* & dim^* respectively.
    """

    depth: int
    paths: int
    quantile: float
    low: float
    median: float
    high: float


def local_exponent_bounds(
    measure: MarkovMeasure,
    depth: int | None = None,
    paths: int | None = None,
    seed: int | None = None,
    quantile: float = 0.05,
) -> ExponentBounds:
    """
    Quantiles of the local exponent -log mu(I_depth(x)) / (depth log 2) over sampled paths.

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `depth: int | None` - Depth of the paths.
        - `paths: int | None` - Number of paths.
        - `seed: int | None` - Master seed.
        - `quantile: float = 0.05` - Lower quantile, in [0, 0.5].

    Returns: `ExponentBounds` - Low, median & high quantiles.
    """
    if not 0.0 <= quantile <= 0.5:
        raise WeightValueError(f"quantile must be in [0, 0.5], got {quantile}")
    depth = Settings.DEFAULT_DEPTH if depth is None else depth
    paths = Settings.DEFAULT_PATHS if paths is None else paths
    if depth < 1 or paths < 1:
        raise WeightValueError(f"need depth >= 1 and paths >= 1, got {depth}, {paths}")
    seed = Settings.DEFAULT_SEED if seed is None else seed
    log_mass = measure.sample_paths(depth, paths, seed, (depth,))[:, 0]
    exponents = -log_mass / (depth * LOG2)
    low, median, high = np.quantile(exponents, [quantile, 0.5, 1.0 - quantile])
    return ExponentBounds(depth, paths, quantile, float(low), float(median), float(high))


@dataclass(slots=True, frozen=True)
class SweepRow:
    """
    One line of a continuity sweep.

    Attributes:
        - `zeta: float` - Requested perturbation size.
        - `realized_distance: float` - Sup-norm distance actually achieved.
        - `lower_diff: float` - |lower(original) - lower(perturbed)|.
        - `upper_diff: float` - |upper(original) - upper(perturbed)|.
        - `mode: DimensionMode` - Mode shared by both estimates.
        - `distance_exact: bool` - Whether the realized distance covers every index.
        - `clamped: bool` - Whether clamping to [0, 1] shortened some move.
    """

    zeta: float
    realized_distance: float
    lower_diff: float
    upper_diff: float
    mode: DimensionMode
    distance_exact: bool
    clamped: bool


def continuity_sweep(
    weights: WeightSequence,
    zetas: Iterable[float],
    mode: PerturbMode | str = PerturbMode.UNIFORM_SHIFT,
    seed: int | None = None,
    horizon: int | None = None,
    window: int | None = None,
) -> list[SweepRow]:
    """
    For every zeta, perturb the weights and compare the dimensions of the original and
    perturbed measures, both estimated in the same mode with the same horizon & window.

    Parameters:
        - `weights: WeightSequence` - Original weights.
        - `zetas: Iterable[float]` - Perturbation sizes, non-empty.
        - `mode: PerturbMode | str = "uniform-shift"` - How weights are moved.
        - `seed: int | None` - Seed of random moves.
        - `horizon: int | None`, `window: int | None` - Passed to `dimension_estimate`.

    Returns: `list[SweepRow]` - One row per zeta, zeta descending.

    Raises:
        - `WeightValueError` - Raised for an empty list of zetas.
        - `DimensionRangeError` - Propagated from `dimension_estimate`.
    """
    sizes = sorted(zetas, reverse=True)
    if not sizes:
        raise WeightValueError("the sweep needs at least one zeta")
    horizon = Settings.DEFAULT_HORIZON if horizon is None else horizon
    window = Settings.DEFAULT_WINDOW if window is None else window
    seed = Settings.DEFAULT_SEED if seed is None else seed
    original = MarkovMeasure(weights)
    base = dimension_estimate(original, horizon, window)

    rows: list[SweepRow] = []
    for zeta in sizes:
        moved = perturb(weights, zeta, mode, seed, horizon)
        reference = base
        estimate = dimension_estimate(MarkovMeasure(moved.weights), horizon, window)
        if estimate.mode is not reference.mode:
            reference = dimension_estimate(original, horizon, window, exact=False)
            estimate = dimension_estimate(
                MarkovMeasure(moved.weights), horizon, window, exact=False
            )
        rows.append(
            SweepRow(
                zeta,
                moved.realized.value,
                abs(reference.lower - estimate.lower),
                abs(reference.upper - estimate.upper),
                estimate.mode,
                moved.realized.exact,
                moved.clamped,
            )
        )
        logger.debug(f"zeta={zeta}: lower diff {rows[-1].lower_diff:.3e} ({estimate.mode.value})")
    return rows
