"""Positive weight sequences indexed by the integers.

Every generator exposes pointwise values, vectorized log values, and an
exact-range log sum.  Products of weights over long index ranges overflow
or underflow doubles long before they stop being meaningful, so all norm
and product arithmetic elsewhere in the package happens on these log sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np


def _check_positive(value: float, what: str) -> float:
    v = float(value)
    if not math.isfinite(v) or v <= 0.0:
        raise ValueError(f"{what} must be positive and finite, got {value!r}")
    return v


class WeightSequence:
    """Base class; subclasses define value_at and the range/log machinery."""

    def value_at(self, index: int) -> float:
        raise NotImplementedError

    def log_at(self, index: int) -> float:
        return math.log(self.value_at(index))

    def log_values(self, indices: np.ndarray) -> np.ndarray:
        """log of the weights at an integer index array."""
        idx = np.asarray(indices, dtype=np.int64)
        out = np.empty(idx.shape, dtype=np.float64)
        flat_out = out.reshape(-1)
        for pos, i in enumerate(idx.reshape(-1)):
            flat_out[pos] = self.log_at(int(i))
        return out

    def log_range_sum(self, start: int, count: int) -> float:
        """Sum of log weights over the index window [start, start + count)."""
        if count < 0:
            raise ValueError("count must be >= 0")
        return math.fsum(self.log_at(i) for i in range(start, start + count))

    def sup(self) -> float:
        raise NotImplementedError

    def inf(self) -> float:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ConstantWeights(WeightSequence):
    value: float

    def __post_init__(self) -> None:
        _check_positive(self.value, "constant weight")

    def value_at(self, index: int) -> float:
        return self.value

    def log_values(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices)
        return np.full(idx.shape, math.log(self.value))

    def log_range_sum(self, start: int, count: int) -> float:
        if count < 0:
            raise ValueError("count must be >= 0")
        return count * math.log(self.value)

    def sup(self) -> float:
        return self.value

    def inf(self) -> float:
        return self.value

    def describe(self) -> dict:
        return {"kind": "constant", "c": self.value}


@dataclass(frozen=True)
class PiecewiseWeights(WeightSequence):
    """One constant on indices >= 0, another on indices < 0."""

    nonnegative: float
    negative: float

    def __post_init__(self) -> None:
        _check_positive(self.nonnegative, "weight on nonnegative indices")
        _check_positive(self.negative, "weight on negative indices")

    def value_at(self, index: int) -> float:
        return self.nonnegative if index >= 0 else self.negative

    def log_values(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices)
        return np.where(idx >= 0, math.log(self.nonnegative), math.log(self.negative))

    def log_range_sum(self, start: int, count: int) -> float:
        if count < 0:
            raise ValueError("count must be >= 0")
        end = start + count
        neg_count = max(0, min(end, 0) - start)
        pos_count = count - neg_count
        return pos_count * math.log(self.nonnegative) + neg_count * math.log(self.negative)

    def sup(self) -> float:
        return max(self.nonnegative, self.negative)

    def inf(self) -> float:
        return min(self.nonnegative, self.negative)

    def describe(self) -> dict:
        return {"kind": "piecewise", "pos": self.nonnegative, "neg": self.negative}


@dataclass(frozen=True)
class BlockWeights(WeightSequence):
    """Constant blocks of geometrically growing length on the nonnegative side.

    Block k (k = 0, 1, ...) covers ``base**k`` consecutive indices starting
    at index 0 and carries the value ``values[(k + phase) % len(values)]``.
    Negative indices mirror the reciprocal: w(-j) = 1 / w(j - 1).  The mirror
    makes the backward product along any window equal the forward product
    along the mirrored window, which is what the block constructions used by
    the criteria modules rely on.
    """

    base: int
    values: tuple[float, ...]
    phase: int = 0

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError("block base must be >= 2")
        if not self.values:
            raise ValueError("blocks need at least one value")
        object.__setattr__(self, "values", tuple(_check_positive(v, "block value") for v in self.values))
        if self.phase < 0:
            raise ValueError("phase must be >= 0")

    # -- block geometry -----------------------------------------------------
    def block_boundary(self, k: int) -> int:
        """First index of block k; boundary(k) = (base**k - 1) / (base - 1)."""
        return (self.base ** k - 1) // (self.base - 1)

    def block_of(self, index: int) -> int:
        if index < 0:
            raise ValueError("blocks are laid out on nonnegative indices")
        k = 0
        while self.block_boundary(k + 1) <= index:
            k += 1
        return k

    def block_value(self, k: int) -> float:
        return self.values[(k + self.phase) % len(self.values)]

    def block_ends(self, count: int, value: float) -> list[int]:
        """End indices (exclusive) of the first ``count`` blocks carrying ``value``."""
        ends: list[int] = []
        k = 0
        while len(ends) < count:
            if self.block_value(k) == value:
                ends.append(self.block_boundary(k + 1))
            k += 1
        return ends

    # -- weight values ------------------------------------------------------
    def value_at(self, index: int) -> float:
        if index < 0:
            return 1.0 / self.value_at(-index - 1)
        return self.block_value(self.block_of(index))

    def _nonneg_log_sum(self, start: int, count: int) -> float:
        """Sum of log weights over [start, start+count) with start >= 0."""
        total = 0.0
        k = self.block_of(start) if count else 0
        pos = start
        end = start + count
        while pos < end:
            block_end = self.block_boundary(k + 1)
            take = min(end, block_end) - pos
            total += take * math.log(self.block_value(k))
            pos += take
            k += 1
        return total

    def log_range_sum(self, start: int, count: int) -> float:
        if count < 0:
            raise ValueError("count must be >= 0")
        end = start + count
        total = 0.0
        if start < 0:
            m = min(end, 0)
            # sum over [start, m) of log w(j) = -sum over [-m, -start) of log w(u)
            total -= self._nonneg_log_sum(-m, m - start)
        if end > 0:
            total += self._nonneg_log_sum(max(start, 0), end - max(start, 0))
        return total

    def log_values(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        mirrored = np.where(idx < 0, -idx - 1, idx)
        top = int(mirrored.max(initial=0))
        boundaries = [0]
        while boundaries[-1] <= top:
            boundaries.append(self.block_boundary(len(boundaries)))
        block_ids = np.searchsorted(np.asarray(boundaries[1:], dtype=np.int64), mirrored, side="right")
        logs = np.array(
            [math.log(self.block_value(k)) for k in range(len(boundaries))], dtype=np.float64
        )[block_ids]
        return np.where(idx < 0, -logs, logs)

    def sup(self) -> float:
        return max(max(self.values), 1.0 / min(self.values))

    def inf(self) -> float:
        return min(min(self.values), 1.0 / max(self.values))

    def describe(self) -> dict:
        return {
            "kind": "blocks",
            "length_rule": f"{self.base}^k",
            "values": list(self.values),
            "phase": self.phase,
        }


@dataclass(frozen=True)
class TableWeights(WeightSequence):
    """Explicit finite window of weights with a constant default outside."""

    window: tuple[float, ...]
    start: int = 0
    default: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "window", tuple(_check_positive(v, "table weight") for v in self.window))
        _check_positive(self.default, "default weight")

    def value_at(self, index: int) -> float:
        offset = index - self.start
        if 0 <= offset < len(self.window):
            return self.window[offset]
        return self.default

    def log_values(self, indices: np.ndarray) -> np.ndarray:
        idx = np.asarray(indices, dtype=np.int64)
        out = np.full(idx.shape, math.log(self.default))
        offset = idx - self.start
        inside = (offset >= 0) & (offset < len(self.window))
        if inside.any():
            logs = np.array([math.log(v) for v in self.window])
            out[inside] = logs[offset[inside]]
        return out

    def log_range_sum(self, start: int, count: int) -> float:
        if count < 0:
            raise ValueError("count must be >= 0")
        end = start + count
        lo = max(start, self.start)
        hi = min(end, self.start + len(self.window))
        inside = math.fsum(
            math.log(self.window[i - self.start]) for i in range(lo, max(lo, hi))
        )
        outside = count - max(0, hi - lo)
        return inside + outside * math.log(self.default)

    def sup(self) -> float:
        return max((*self.window, self.default))

    def inf(self) -> float:
        return min((*self.window, self.default))

    def describe(self) -> dict:
        return {
            "kind": "table",
            "window": list(self.window),
            "start": self.start,
            "default": self.default,
        }
