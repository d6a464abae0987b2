"""
_entropy.py:

This file contains the entropy computations of Markov measures: per-generation entropies by
recursion & by enumeration, window entropies and the bounds relating them.

Classes:
    - `EnumerationSizeError` - Error raised when enumeration would exceed 2^22 cylinders.
    - `EntropyProfile` - Per-generation entropies, normalized entropies & marginals.
    - `WindowGap` - Window entropies a_n^k, b_n^k & their per-step gap.
    - `WindowTable` - Window entropies for every (n, k) of a rectangle.
    - `Lemma2Report` - Result of `lemma2_scan`.
    - `DeltaReport` - Result of `delta_recursion_check`.

Functions:
    - `binary_entropy` - h(p) = p log p + (1 - p) log(1 - p).
    - `step_entropy` - h(p_n) or h(q_n) depending on the last symbol.
    - `entropy_profile` - H_n, c_n & pi_n for n = 1..horizon in linear time.
    - `entropy_bruteforce` - H_n by enumeration of the 2^n cylinders.
    - `window_entropy` - a_n^k, b_n^k & their gap by the two-state recursion.
    - `window_table` - `window_entropy` for a whole rectangle of (n, k).
    - `eta_bound` - e^2 log 2 / (k + 1).
    - `lemma2_scan` - Where |h(p) - h(q)| <= (1 - |p - q|) log 2 fails on a grid.
    - `delta_recursion_check` - Compare consecutive window gaps with their bounds.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import e, log

import numpy as np
import numpy.typing as npt
from scipy.special import xlogy

from ._config import DyadimError, Settings
from ._logger import logger
from ._measure import AddressError, MarkovMeasure
from ._weights import FloatArray, WeightValueError

IntArray = npt.NDArray[np.int64]
BoolArray = npt.NDArray[np.bool_]

LOG2 = log(2.0)
_SLACK = 1e-12


class EnumerationSizeError(DyadimError):
    """
    This class should be used to raise an error when an enumeration
    over all cylinders of a generation exceeds the supported size.
    """


def _entropy_terms(p: FloatArray) -> FloatArray:
    return np.asarray(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p), dtype=np.float64)


def binary_entropy(p: float) -> float:
    """
    Negative binary entropy h(p) = p log p + (1 - p) log(1 - p), with 0 log 0 = 0.

    Parameters:
        - `p: float` - Probability in [0, 1].

    Returns: `float` - h(p) in nats, in [-log 2, 0].

    Raises:
        - `WeightValueError` - Raised if p is outside [0, 1].
    """
    if not 0.0 <= p <= 1.0:
        raise WeightValueError(f"probability {p!r} is outside [0, 1]")
    return float(xlogy(p, p) + xlogy(1.0 - p, 1.0 - p))


def step_entropy(measure: MarkovMeasure, n: int, last: int) -> float:
    """
    Entropy term of the step leaving a generation-n cylinder: h(p_n) after a 0, h(q_n) after
    a 1.

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `n: int` - Generation, >= 1.
        - `last: int` - Last symbol of the cylinder.

    Returns: `float` - The term in nats, in [-log 2, 0].
    """
    if last not in (0, 1):
        raise AddressError(f"last must be 0 or 1, got {last!r}")
    if n < 1:
        raise WeightValueError(f"step entropies start at generation 1, got {n}")
    p, q = measure.weights.value_at(n)
    return binary_entropy(p if last == 0 else q)


def _compensated_cumsum(values: FloatArray) -> FloatArray:
    """Running sums with Neumaier compensation."""
    out = np.empty_like(values)
    total = 0.0
    compensation = 0.0
    for index, value in enumerate(values.tolist()):
        running = total + value
        if abs(total) >= abs(value):
            compensation += (total - running) + value
        else:
            compensation += (value - running) + total
        total = running
        out[index] = total + compensation
    return out


@dataclass(slots=True, frozen=True, eq=False)
class EntropyProfile:
    """
    Per-generation entropies of a measure; entry n - 1 of each array refers to generation n.

    Attributes:
        - `horizon: int` - Last generation.
        - `entropies: FloatArray` - H_n = -sum mu(I) log mu(I) over generation-n cylinders, nats.
        - `normalized: FloatArray` - c_n = H_n / (n log 2), in [0, 1].
        - `marginals: FloatArray` - pi_n(0), the probability that the last symbol is 0.
    """

    horizon: int
    entropies: FloatArray = field(repr=False)
    normalized: FloatArray = field(repr=False)
    marginals: FloatArray = field(repr=False)

    def entropy(self, n: int) -> float:
        """H_n in nats."""
        return float(self.entropies[n - 1])

    def normalized_entropy(self, n: int) -> float:
        """c_n."""
        return float(self.normalized[n - 1])

    def cesaro_means(self) -> FloatArray:
        """Running means (1 / n) sum_{j <= n} c_j."""
        return np.cumsum(self.normalized) / np.arange(1, self.horizon + 1)


def entropy_profile(measure: MarkovMeasure, horizon: int) -> EntropyProfile:
    """
    Entropies H_n for n = 1..horizon by the chain rule H_1 = -h(p_0),
    H_{n+1} = H_n - [pi_n(0) h(p_n) + pi_n(1) h(q_n)]. Runs in linear time; past
    `Settings.COMPENSATED_FROM` generations the running sums are compensated.

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `horizon: int` - Last generation, >= 1.

    Returns: `EntropyProfile` - The profile.
    """
    if horizon < 1:
        raise WeightValueError(f"horizon must be >= 1, got {horizon}")
    p, q = measure.weights.arrays(0, horizon)
    pi0 = measure.marginals(horizon)

    steps = np.empty(horizon)
    steps[0] = -_entropy_terms(p[:1])[0]
    steps[1:] = -(pi0[:-1] * _entropy_terms(p[1:]) + (1.0 - pi0[:-1]) * _entropy_terms(q[1:]))

    if horizon > Settings.COMPENSATED_FROM:
        entropies = _compensated_cumsum(steps)
    else:
        entropies = np.cumsum(steps)
    normalized = np.clip(entropies / (np.arange(1, horizon + 1) * LOG2), 0.0, 1.0)
    return EntropyProfile(horizon, entropies, normalized, pi0)


def _grow(
    log_mass: FloatArray, last: IntArray, table: FloatArray, start: int, stop: int
) -> tuple[FloatArray, IntArray]:
    """Extend cylinders of generation `start` to generation `stop`, children 0 first."""
    for generation in range(start, stop):
        row = table[generation]
        log_mass = np.concatenate((log_mass + row[2 * last], log_mass + row[2 * last + 1]))
        last = np.concatenate((np.zeros_like(last), np.ones_like(last)))
    return log_mass, last


def _entropy_sum(log_mass: FloatArray) -> float:
    finite = np.isfinite(log_mass)
    return float(-np.sum(np.exp(log_mass[finite]) * log_mass[finite]))


def entropy_bruteforce(measure: MarkovMeasure, n: int) -> float:
    """
    H_n by enumeration of all 2^n cylinders, zero-mass cylinders contributing 0. From
    generation `Settings.BRUTEFORCE_SPLIT_FROM` the cylinders are split by their first bits and
    the parts are enumerated on a thread pool, then reduced in prefix order.

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `n: int` - Generation, 0 <= n <= `Settings.BRUTEFORCE_LIMIT`.

    Returns: `float` - H_n in nats.

    Raises:
        - `EnumerationSizeError` - Raised if n exceeds the enumeration limit.
    """
    if n > Settings.BRUTEFORCE_LIMIT:
        raise EnumerationSizeError(
            f"enumerating generation {n} needs 2^{n} cylinders, "
            f"the limit is 2^{Settings.BRUTEFORCE_LIMIT}"
        )
    if n < 0:
        raise WeightValueError(f"generation must be >= 0, got {n}")
    if n == 0:
        return 0.0

    table = measure.log_table(0, n)
    root = (table[0, [0, 1]].copy(), np.array([0, 1], dtype=np.int64))
    if n < Settings.BRUTEFORCE_SPLIT_FROM:
        return _entropy_sum(_grow(*root, table, 1, n)[0])

    bits = Settings.BRUTEFORCE_PREFIX_BITS
    prefix_mass, prefix_last = _grow(*root, table, 1, bits)

    def part(index: int) -> float:
        start = (prefix_mass[index : index + 1], prefix_last[index : index + 1])
        return _entropy_sum(_grow(*start, table, bits, n)[0])

    logger.debug(f"enumerating generation {n} in {len(prefix_mass)} parts")
    with ThreadPoolExecutor(max_workers=Settings.max_workers()) as pool:
        parts = list(pool.map(part, range(len(prefix_mass))))
    total = 0.0
    for value in parts:
        total += value
    return total


@dataclass(slots=True, frozen=True)
class WindowGap:
    """
    Window entropies of the k - 1 generations following a cylinder of generation n + 1.

    Attributes:
        - `n: int` - Generation of the parent cylinder.
        - `k: int` - Window length.
        - `a: float` - a_n^k, window entropy after a 0, nats (<= 0).
        - `b: float` - b_n^k, window entropy after a 1, nats (<= 0).
        - `delta: float` - Delta_n^k = |a - b| / k.
    """

    n: int
    k: int
    a: float
    b: float
    delta: float


def window_entropy(measure: MarkovMeasure, n: int, k: int) -> WindowGap:
    """
    Window entropies a_n^k = E(0, n + 1, k - 1) & b_n^k = E(1, n + 1, k - 1) of the two-state
    recursion E(s, m, 0) = 0, E(0, m, j) = h(p_m) + p_m E(0, m + 1, j - 1)
    + (1 - p_m) E(1, m + 1, j - 1) and likewise with q_m after a 1. Equals the sum of
    mu(IK) / mu(I) log(mu(IK) / mu(I)) over the extensions K of length k - 1 of any cylinder I
    of generation n + 1 ending in 0 (respectively 1). Runs in O(k).

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `n: int` - Generation, >= 0.
        - `k: int` - Window length, >= 1.

    Returns: `WindowGap` - a, b & Delta_n^k.
    """
    if n < 0 or k < 1:
        raise WeightValueError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    p, q = measure.weights.arrays(n + 1, n + k)
    h_p, h_q = _entropy_terms(p).tolist(), _entropy_terms(q).tolist()
    p_list, q_list = p.tolist(), q.tolist()
    after_zero = after_one = 0.0
    for m in reversed(range(k - 1)):
        after_zero, after_one = (
            h_p[m] + p_list[m] * after_zero + (1.0 - p_list[m]) * after_one,
            h_q[m] + q_list[m] * after_zero + (1.0 - q_list[m]) * after_one,
        )
    return WindowGap(n, k, after_zero, after_one, abs(after_zero - after_one) / k)


@dataclass(slots=True, frozen=True, eq=False)
class WindowTable:
    """
    Window entropies for n = 0..n_max and k = 1..k_max; column 0 is unused.

    Attributes:
        - `a: FloatArray` - a_n^k with shape (n_max + 1, k_max + 1).
        - `b: FloatArray` - b_n^k, same shape.
        - `delta: FloatArray` - Delta_n^k, same shape.
    """

    a: FloatArray = field(repr=False)
    b: FloatArray = field(repr=False)
    delta: FloatArray = field(repr=False)

    @property
    def n_max(self) -> int:
        """Largest generation of the table."""
        return self.a.shape[0] - 1

    @property
    def k_max(self) -> int:
        """Largest window of the table."""
        return self.a.shape[1] - 1

    def gap(self, n: int, k: int) -> WindowGap:
        """Entry (n, k) as a `WindowGap`."""
        return WindowGap(n, k, float(self.a[n, k]), float(self.b[n, k]), float(self.delta[n, k]))


def window_table(measure: MarkovMeasure, n_max: int, k_max: int) -> WindowTable:
    """
    `window_entropy` for every n in [0, n_max] and k in [1, k_max], vectorized over n.

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `n_max: int` - Largest generation, >= 0.
        - `k_max: int` - Largest window, >= 1.

    Returns: `WindowTable` - The table.
    """
    if n_max < 0 or k_max < 1:
        raise WeightValueError(f"need n_max >= 0 and k_max >= 1, got {n_max}, {k_max}")
    size = n_max + k_max + 1
    p, q = measure.weights.arrays(0, size)
    h_p, h_q = _entropy_terms(p), _entropy_terms(q)

    a = np.zeros((n_max + 1, k_max + 1))
    b = np.zeros((n_max + 1, k_max + 1))
    # after_*[m] holds E(s, m, j) for the current j
    after_zero = np.zeros(size + 1)
    after_one = np.zeros(size + 1)
    for j in range(k_max):
        a[:, j + 1] = after_zero[1 : n_max + 2]
        b[:, j + 1] = after_one[1 : n_max + 2]
        next_zero = np.zeros(size + 1)
        next_one = np.zeros(size + 1)
        next_zero[:size] = h_p + p * after_zero[1:] + (1.0 - p) * after_one[1:]
        next_one[:size] = h_q + q * after_zero[1:] + (1.0 - q) * after_one[1:]
        after_zero, after_one = next_zero, next_one

    delta = np.zeros_like(a)
    delta[:, 1:] = np.abs(a[:, 1:] - b[:, 1:]) / np.arange(1, k_max + 1)
    return WindowTable(a, b, delta)


def eta_bound(k: int) -> float:
    """
    Bound e^2 log 2 / (k + 1) on Delta_{n-1}^{k+1}, decreasing to 0.

    Parameters:
        - `k: int` - Window, >= 1.

    Raises:
        - `WeightValueError` - Raised if k < 1.
    """
    if k < 1:
        raise WeightValueError(f"k must be >= 1, got {k}")
    return e**2 * LOG2 / (k + 1)


@dataclass(slots=True, frozen=True, eq=False)
class Lemma2Report:
    """
    Result of `lemma2_scan`.

    Attributes:
        - `grid: FloatArray` - Grid used for both p and q.
        - `points: FloatArray` - Rows (p, q, lhs, rhs) of every violated grid point.
        - `max_excess: float` - Largest lhs - rhs over the grid (negative if never violated).
        - `companion_k: int` - Window used for the companion inequality.
        - `companion_violations: int` - Grid points where the companion inequality fails.
        - `companion_max_excess: float` - Largest lhs - rhs of the companion inequality.
    """

    grid: FloatArray = field(repr=False)
    points: FloatArray = field(repr=False)
    max_excess: float
    companion_k: int
    companion_violations: int
    companion_max_excess: float

    @property
    def violations(self) -> int:
        """Number of violated grid points."""
        return len(self.points)

    def point(self, p: float, q: float, tol: float = 1e-9) -> tuple[float, float] | None:
        """
        (lhs, rhs) of the violation at (p, q), `None` if (p, q) is not a violated grid point.
        """
        for row in self.points:
            if abs(row[0] - p) <= tol and abs(row[1] - q) <= tol:
                return float(row[2]), float(row[3])
        return None


def lemma2_scan(
    grid_step: float, low: float = 0.0, high: float = 1.0, companion_k: int = 9
) -> Lemma2Report:
    """
    Evaluate lhs = |h(p) - h(q)| and rhs = (1 - |p - q|) log 2 on the grid [low, high]^2 and
    report where lhs > rhs. Also checks, on a grid of alpha in [0, log 2], the companion
    inequality (1 - d) log 2 / (k + 1) + d (1 - 1 / (k + 1)) alpha
    <= max{(1 - 1 / (k + 1)) alpha, log 2 / (k + 1)} for the distances d = |p - q| of the grid.

    Parameters:
        - `grid_step: float` - Step of the grid, in (0, 0.1].
        - `low: float = 0.0`, `high: float = 1.0` - Range of the grid.
        - `companion_k: int = 9` - Window of the companion inequality.

    Returns: `Lemma2Report` - Violations & largest excesses; nothing is asserted.
    """
    if not 0.0 < grid_step <= 0.1:
        raise WeightValueError(f"grid_step must be in (0, 0.1], got {grid_step}")
    if not 0.0 <= low < high <= 1.0:
        raise WeightValueError(f"invalid grid range [{low}, {high}]")
    grid = np.linspace(low, high, int(round((high - low) / grid_step)) + 1)
    p, q = np.meshgrid(grid, grid, indexing="ij")
    entropies = _entropy_terms(grid)
    lhs = np.abs(entropies[:, None] - entropies[None, :])
    rhs = (1.0 - np.abs(p - q)) * LOG2
    violated = lhs > rhs + _SLACK
    points = np.column_stack((p[violated], q[violated], lhs[violated], rhs[violated]))

    distance = np.unique(np.abs(p - q))[:, None]
    alpha = np.linspace(0.0, LOG2, len(grid))[None, :]
    shrink = 1.0 - 1.0 / (companion_k + 1)
    companion = (1.0 - distance) * LOG2 / (companion_k + 1) + distance * shrink * alpha
    ceiling = np.maximum(shrink * alpha, LOG2 / (companion_k + 1))
    excess = companion - ceiling

    logger.debug(f"lemma scan on {len(grid)}^2 points: {int(violated.sum())} violations")
    return Lemma2Report(
        grid,
        points,
        float((lhs - rhs).max()),
        companion_k,
        int((excess > _SLACK).sum()),
        float(excess.max()),
    )


@dataclass(slots=True, frozen=True, eq=False)
class DeltaReport:
    """
    Result of `delta_recursion_check`. Arrays have shape (n_max, k_max), entry
    (n - 1, k - 1) comparing Delta_{n-1}^{k+1} with the bounds built from Delta_n^k.

    Attributes:
        - `lhs: FloatArray` - Delta_{n-1}^{k+1}.
        - `lemma_rhs: FloatArray` - ((1 - |p_n - q_n|) log 2 + |p_n - q_n| k Delta_n^k) / (k + 1).
        - `exact_rhs: FloatArray` - (|h(p_n) - h(q_n)| + |p_n - q_n| k Delta_n^k) / (k + 1).
        - `max_rhs: FloatArray` - max{(1 - 1 / (k + 1)) Delta_n^k, log 2 / (k + 1)}.
        - `eta: FloatArray` - eta(k) = e^2 log 2 / (k + 1).
    """

    lhs: FloatArray = field(repr=False)
    lemma_rhs: FloatArray = field(repr=False)
    exact_rhs: FloatArray = field(repr=False)
    max_rhs: FloatArray = field(repr=False)
    eta: FloatArray = field(repr=False)

    @property
    def lemma_violations(self) -> int:
        """Pairs where the recursion with the lemma bound fails."""
        return int(np.sum(self.lhs > self.lemma_rhs + _SLACK))

    @property
    def exact_violations(self) -> int:
        """Pairs where the exact recursion fails, 0 up to rounding."""
        return int(np.sum(self.lhs > self.exact_rhs + _SLACK))

    @property
    def max_form_violations(self) -> int:
        """Pairs where the max-form recursion fails."""
        return int(np.sum(self.lhs > self.max_rhs + _SLACK))

    @property
    def eta_violations(self) -> int:
        """Pairs where Delta_{n-1}^{k+1} > eta(k)."""
        return int(np.sum(self.lhs > self.eta))

    @property
    def eta_slack(self) -> float:
        """Smallest eta(k) - Delta_{n-1}^{k+1} over the range."""
        return float((self.eta - self.lhs).min())


def delta_recursion_check(measure: MarkovMeasure, n_max: int, k_max: int) -> DeltaReport:
    """
    Compare Delta_{n-1}^{k+1} with the recursion bounds built from Delta_n^k and with eta(k),
    for 1 <= n <= n_max and 1 <= k <= k_max. Violations are counted, never raised.

    Parameters:
        - `measure: MarkovMeasure` - The measure.
        - `n_max: int` - Largest n, >= 1.
        - `k_max: int` - Largest k, >= 1.

    Returns: `DeltaReport` - Every comparison.
    """
    if n_max < 1 or k_max < 1:
        raise WeightValueError(f"need n_max >= 1 and k_max >= 1, got {n_max}, {k_max}")
    with logger.timed(f"window table {n_max} x {k_max + 1}"):
        table = window_table(measure, n_max, k_max + 1)
    p, q = measure.weights.arrays(1, n_max + 1)
    spread = np.abs(p - q)[:, None]
    entropy_gap = np.abs(_entropy_terms(p) - _entropy_terms(q))[:, None]
    k = np.arange(1, k_max + 1)[None, :]

    lhs = table.delta[:n_max, 2:]
    current = table.delta[1:, 1 : k_max + 1]
    lemma_rhs = ((1.0 - spread) * LOG2 + spread * k * current) / (k + 1)
    exact_rhs = (entropy_gap + spread * k * current) / (k + 1)
    max_rhs = np.maximum((1.0 - 1.0 / (k + 1)) * current, LOG2 / (k + 1))
    eta = np.broadcast_to(e**2 * LOG2 / (k + 1), lhs.shape)
    return DeltaReport(lhs, lemma_rhs, exact_rhs, max_rhs, np.array(eta))
