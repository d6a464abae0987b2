"""
_measure.py:

This file contains the non-homogeneous Markov measure on the dyadic Cantor set: cylinder
masses, conditional child ratios, last-symbol marginals & path sampling.

Classes:
    - `AddressError` - Error raised for a symbol outside {0, 1}.
    - `CylinderAddress` - Finite binary word identifying a dyadic cylinder.
    - `PathTrace` - A sampled path with its log-ratio increments.
    - `MarkovMeasure` - Measure driven by a `WeightSequence`.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import numpy.typing as npt

from ._config import DyadimError, Settings
from ._logger import logger
from ._weights import FloatArray, WeightSequence, WeightValueError

BoolArray = npt.NDArray[np.bool_]


class AddressError(DyadimError):
    """
    This class should be used to raise an error when a cylinder address
    or a symbol contains something other than 0 or 1.
    """


def _check_symbol(symbol: int, what: str) -> int:
    if symbol not in (0, 1):
        raise AddressError(f"{what} must be 0 or 1, got {symbol!r}")
    return int(symbol)


@dataclass(slots=True, frozen=True)
class CylinderAddress:
    """
    Finite binary word ε_1...ε_n identifying a dyadic cylinder of generation n. The empty
    address is the whole space.

    Attributes:
        - `bits: tuple[int, ...]` - Symbols of the word.
    """

    bits: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for position, bit in enumerate(self.bits):
            _check_symbol(bit, f"bit {position}")

    @classmethod
    def parse(cls, word: str | Iterable[int]) -> CylinderAddress:
        """
        Build an address from a string such as `"0110"` or an iterable of symbols.

        Raises:
            - `AddressError` - Raised for a symbol other than 0 or 1.
        """
        if isinstance(word, str):
            if set(word) - {"0", "1"}:
                raise AddressError(f"address {word!r} contains symbols other than 0 and 1")
            return cls(tuple(int(char) for char in word))
        return cls(tuple(int(bit) for bit in word))

    @property
    def generation(self) -> int:
        """Length of the word."""
        return len(self.bits)

    @property
    def last(self) -> int | None:
        """Last symbol, `None` for the empty address."""
        return self.bits[-1] if self.bits else None

    def child(self, symbol: int) -> CylinderAddress:
        """Address of the child cylinder ending in `symbol`."""
        return CylinderAddress((*self.bits, _check_symbol(symbol, "symbol")))

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


@dataclass(slots=True, frozen=True, eq=False)
class PathTrace:
    """
    A sampled path down to some depth.

    Attributes:
        - `address: CylinderAddress` - Bits of the path.
        - `increments: FloatArray` - X_n = log(mu(I_n) / mu(I_{n-1})) in nats, n = 1..depth.
        - `cumulative: FloatArray` - log mu(I_n) in nats, n = 1..depth.
    """

    address: CylinderAddress
    increments: FloatArray = field(repr=False)
    cumulative: FloatArray = field(repr=False)

    @property
    def depth(self) -> int:
        """Number of generations of the path."""
        return self.address.generation

    def local_exponent(self, n: int) -> float:
        """
        Normalized log-mass -log mu(I_n) / (n log 2) of the cylinder containing the path.

        Parameters:
            - `n: int` - Generation, 1 <= n <= depth.
        """
        return float(-self.cumulative[n - 1] / (n * np.log(2.0)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PathTrace):
            return NotImplemented
        return (
            self.address == other.address
            and np.array_equal(self.increments, other.increments)
            and np.array_equal(self.cumulative, other.cumulative)
        )

    def __hash__(self) -> int:
        return hash((self.address, self.cumulative.tobytes()))


def _path_stream(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


@dataclass(slots=True, frozen=True)
class MarkovMeasure:
    """
    Measure whose conditional child ratios depend only on the generation and the last symbol:
    the first bit is 0 with probability p_0; from a cylinder of generation n >= 1 ending in 0
    the next bit is 0 with probability p_n, from one ending in 1 with probability q_n.

    All masses are handled in the log domain (nats), -inf standing for an exact zero mass.

    Attributes:
        - `weights: WeightSequence` - The couples (p_n, q_n).
    """

    weights: WeightSequence

    def log_table(self, start: int, stop: int) -> FloatArray:
        """
        Log-ratios of every transition on the generations [start, stop).

        Parameters:
            - `start: int`, `stop: int` - Index range of the weights.

        Returns: `FloatArray` - Shape (stop - start, 4); column `2 * last + next` holds
                                log mu(I next) / mu(I) for I ending in `last`, i.e. log p_n,
                                log(1 - p_n), log q_n & log(1 - q_n).
        """
        p, q = self.weights.arrays(start, stop)
        with np.errstate(divide="ignore"):
            return np.column_stack((np.log(p), np.log1p(-p), np.log(q), np.log1p(-q)))

    def cylinder_log_mass(self, address: CylinderAddress | str) -> float:
        """
        Log-mass of a cylinder.

        Parameters:
            - `address: CylinderAddress | str` - The cylinder.

        Returns: `float` - log mu(I) in nats, 0 for the empty address & -inf for zero mass.
        """
        if isinstance(address, str):
            address = CylinderAddress.parse(address)
        if not address.bits:
            return 0.0

        bits = np.asarray(address.bits, dtype=np.int64)
        table = self.log_table(0, address.generation)
        # the first bit behaves as if it followed a 0: it reads p_0
        previous = np.concatenate(([0], bits[:-1]))
        steps = table[np.arange(address.generation), 2 * previous + bits]
        return float(np.sum(steps))

    def child_ratio(self, n: int, last: int, next_symbol: int) -> float:
        """
        Ratio mu(I next) / mu(I) for any cylinder I of generation n ending in `last`.

        Parameters:
            - `n: int` - Generation of I, n >= 1.
            - `last: int` - Last symbol of I.
            - `next_symbol: int` - Symbol of the child.

        Returns: `float` - p_n or 1 - p_n when last is 0, q_n or 1 - q_n when last is 1.

        Raises:
            - `AddressError` - Raised for symbols outside {0, 1}.
            - `WeightValueError` - Raised if n < 1.
        """
        _check_symbol(last, "last")
        _check_symbol(next_symbol, "next")
        if n < 1:
            raise WeightValueError(f"child ratios start at generation 1, got {n}")
        p, q = self.weights.value_at(n)
        weight = p if last == 0 else q
        return weight if next_symbol == 0 else 1.0 - weight

    def marginals(self, horizon: int) -> FloatArray:
        """
        Probabilities pi_n(0) that a cylinder of generation n ends in 0, for n = 1..horizon.

        Parameters:
            - `horizon: int` - Last generation, >= 1.

        Returns: `FloatArray` - Array whose entry n - 1 holds pi_n(0).
        """
        if horizon < 1:
            raise WeightValueError(f"horizon must be >= 1, got {horizon}")
        p, q = self.weights.arrays(0, horizon)
        p_list, q_list = p.tolist(), q.tolist()
        pi0 = [p_list[0]]
        for n in range(1, horizon):
            pi0.append(q_list[n] + pi0[-1] * (p_list[n] - q_list[n]))
        return np.asarray(pi0, dtype=np.float64)

    def marginal_last_symbol(self, n: int) -> tuple[float, float]:
        """
        Distribution (pi_n(0), pi_n(1)) of the last symbol of a generation-n cylinder.

        Parameters:
            - `n: int` - Generation, n >= 1.
        """
        pi0 = float(self.marginals(n)[-1])
        return pi0, 1.0 - pi0

    def _walk(
        self,
        streams: Sequence[np.random.Generator],
        depth: int,
        checkpoints: npt.NDArray[np.int64] | None,
    ) -> tuple[BoolArray, FloatArray]:
        """
        Walk a batch of paths down to `depth`, every path drawing uniforms from its own stream.

        Returns: `tuple[BoolArray, FloatArray]` - With `checkpoints` set, an empty bit array and
                 the cumulative log-masses at the checkpoints (shape paths x checkpoints);
                 otherwise every bit and every increment (shape paths x depth).
        """
        table = self.log_table(0, depth)
        p, q = self.weights.arrays(0, depth)
        paths = len(streams)
        rows = np.arange(paths)
        last = np.zeros(paths, dtype=np.int64)
        total = np.zeros(paths)
        wanted: dict[int, int] = {}

        if checkpoints is None:
            bits = np.empty((paths, depth), dtype=np.bool_)
            increments = np.empty((paths, depth))
        else:
            bits = np.empty((paths, 0), dtype=np.bool_)
            increments = np.empty((paths, len(checkpoints)))
            wanted = {int(n): column for column, n in enumerate(checkpoints)}

        for chunk_start in range(0, depth, Settings.SAMPLE_CHUNK):
            chunk_stop = min(depth, chunk_start + Settings.SAMPLE_CHUNK)
            uniforms = np.stack([stream.random(chunk_stop - chunk_start) for stream in streams])
            for column in range(chunk_stop - chunk_start):
                index = chunk_start + column
                threshold = np.where(last == 0, p[index], q[index])
                bit = (uniforms[:, column] >= threshold).astype(np.int64)
                step = table[index, 2 * last + bit]
                last = bit
                if checkpoints is None:
                    bits[rows, index] = bit
                    increments[rows, index] = step
                else:
                    total = total + step
                    if index + 1 in wanted:
                        increments[:, wanted[index + 1]] = total
        return bits, increments

    def sample_path(self, depth: int, rng: np.random.Generator | int) -> PathTrace:
        """
        Sample one path with the conditional probabilities of the measure; a branch of
        probability 0 is never selected.

        Parameters:
            - `depth: int` - Number of generations, >= 1.
            - `rng: np.random.Generator | int` - Stream to draw from, or a seed whose path-0
                                                 stream is used (as in `sample_paths`).

        Returns: `PathTrace` - The sampled path.
        """
        if depth < 1:
            raise WeightValueError(f"depth must be >= 1, got {depth}")
        stream = _path_stream(rng, 0) if isinstance(rng, int) else rng
        bits, increments = self._walk([stream], depth, None)
        return PathTrace(
            CylinderAddress(tuple(int(bit) for bit in bits[0])),
            increments[0],
            np.cumsum(increments[0]),
        )

    def sample_paths(
        self, depth: int, paths: int, seed: int, checkpoints: Iterable[int]
    ) -> FloatArray:
        """
        Sample independent paths and record their log-masses at some generations. Path i draws
        from the stream `SeedSequence(seed, spawn_key=(i,))`, so results do not depend on the
        batch layout or the number of threads.

        Parameters:
            - `depth: int` - Depth of the paths.
            - `paths: int` - Number of paths, >= 1.
            - `seed: int` - Master seed.
            - `checkpoints: Iterable[int]` - Generations in [1, depth].

        Returns: `FloatArray` - log mu(I_n) with shape (paths, checkpoints), checkpoints sorted
                                & deduplicated.

        Raises:
            - `WeightValueError` - Raised for an empty or out of range checkpoint list.
        """
        marks = np.asarray(sorted(set(checkpoints)), dtype=np.int64)
        if paths < 1 or marks.size == 0 or marks[0] < 1 or marks[-1] > depth:
            raise WeightValueError(
                f"need paths >= 1 and checkpoints in [1, {depth}], got {paths} / {marks.tolist()}"
            )

        batches = [
            range(start, min(paths, start + Settings.PATH_BATCH))
            for start in range(0, paths, Settings.PATH_BATCH)
        ]

        def walk(batch: range) -> FloatArray:
            return self._walk([_path_stream(seed, i) for i in batch], depth, marks)[1]

        logger.debug(f"sampling {paths} paths to depth {depth} in {len(batches)} batches")
        with ThreadPoolExecutor(max_workers=Settings.max_workers()) as pool:
            return np.concatenate(list(pool.map(walk, batches)))
