"""Recursive history evaluation for compressed CQ kernels.

After time level n each accumulator of a family (m_j, r_j) holds

    m_j * sum_{k=lo}^{n-H} r_j^(n-k-offset) G(t_k)

where H is the kernel's head length and lo is 0 for a standalone sequence and
1 inside the time-stepping schemes, whose CQ sums leave out G(t_0). Advancing
one level costs one multiply-add per node plus a lag ring of H values.
"""

from collections import deque
from enum import Enum
from typing import Any, Deque, List, Optional

import numpy as np

from ..errors import SequencingError
from .base import FastKernel


class Variant(str, Enum):
    """Lower bound of the CQ sum."""

    STANDALONE = "standalone"  # sum from G(t_0)
    SCHEME = "scheme"  # sum from G(t_1)


class HistoryState:
    """Single-owner, strictly sequential history of one differentiated sequence."""

    def __init__(self, kernel: FastKernel, variant: Variant = Variant.STANDALONE):
        """
        Initialize history.

        Args:
            kernel: Compressed kernel
            variant: STANDALONE or SCHEME
        """
        self.kernel = kernel
        self.variant = Variant(variant)
        self.lower = 0 if self.variant is Variant.STANDALONE else 1
        self.depth = kernel.head_length

        self._ratios = [family.ratios for family in kernel.families]
        # feed multiplier m_j r_j^(H - offset) for the value leaving the exact head
        self._feeds = [
            family.multipliers * family.ratios ** (self.depth - kernel.offset)
            for family in kernel.families
        ]
        self._accumulators: Optional[List[np.ndarray]] = None
        self._ring: Deque[Any] = deque(maxlen=self.depth)
        self.n = -1
        self._committed = True

    @property
    def step(self) -> int:
        """Index of the current time level (-1 before the first value)."""
        return self.n

    @property
    def accumulators(self) -> List[np.ndarray]:
        """Per-family accumulators (zeros before the first feed)."""
        if self._accumulators is None:
            return [np.zeros(len(r)) for r in self._ratios]
        return self._accumulators

    def begin_step(self) -> None:
        """
        Advance to the next time level without knowing its value yet.

        Raises:
            SequencingError: If the previous level was never committed
        """
        if not self._committed:
            raise SequencingError(f"Value for time level {self.n} was never committed")
        self.n += 1
        self._committed = False

        if self._accumulators is not None:
            self._accumulators = [
                r.reshape(r.shape + (1,) * (acc.ndim - 1)) * acc
                for r, acc in zip(self._ratios, self._accumulators)
            ]

        fed_index = self.n - self.depth
        if fed_index >= self.lower and len(self._ring) == self.depth:
            value = np.asarray(self._ring[0], dtype=float)
            if self._accumulators is None:
                self._accumulators = [
                    np.zeros((len(r),) + value.shape) for r in self._ratios
                ]
            self._accumulators = [
                acc + np.multiply.outer(feed, value)
                for acc, feed in zip(self._accumulators, self._feeds)
            ]

    def commit(self, value) -> None:
        """
        Record the value of the current time level.

        Raises:
            SequencingError: If no level is open or it was already committed
        """
        if self.n < 0 or self._committed:
            raise SequencingError("commit() must follow begin_step()")
        self._ring.append(np.array(value, dtype=float, copy=True))
        self._committed = True

    def push(self, value) -> None:
        """Advance one level and record its value."""
        self.begin_step()
        self.commit(value)

    def _lagged(self, k: int):
        # ring ends at level n once committed, at n - 1 before
        newest = self.n if self._committed else self.n - 1
        return self._ring[len(self._ring) - 1 - (newest - k)]

    def tail(self):
        """
        Derivative at the current level without the d_0 G(t_n) term.

        Works before or after commit(), so implicit schemes can move the
        history part to the right-hand side.
        """
        if self.n < 0:
            raise SequencingError("History has no time level yet")
        head = self.kernel.head
        total: Any = 0.0
        for i in range(1, min(self.depth - 1, self.n - self.lower) + 1):
            total = total + head[i] * self._lagged(self.n - i)
        if self._accumulators is not None:
            for acc in self._accumulators:
                total = total + acc.sum(axis=0)
        elif self._ring:
            total = total + np.zeros_like(self._ring[-1])
        return total

    def derivative(self, current=None):
        """
        Fast CQ derivative at the current level.

        Args:
            current: Value at the current level; defaults to the committed one

        Returns:
            sum_i d_i G(t_(n-i)) with reconstructed weights beyond the head

        Raises:
            SequencingError: Before any value, or when the current value is
                neither committed nor given
        """
        if self.n < 0:
            raise SequencingError("fast_derivative() called before any value was pushed")
        if current is None:
            if not self._committed:
                raise SequencingError(f"No value for time level {self.n}")
            current = self._ring[-1]
        current = np.asarray(current, dtype=float)
        leading = self.kernel.head[0] * current if self.n >= self.lower else 0.0 * current
        return leading + self.tail()


def history_init(kernel: FastKernel, variant: Variant = Variant.STANDALONE) -> HistoryState:
    """Fresh history with zero accumulators and an empty lag ring."""
    return HistoryState(kernel, variant)


def history_push(state: HistoryState, value) -> HistoryState:
    """Advance the state to the next time level and record its value."""
    state.push(value)
    return state


def fast_derivative(state: HistoryState, current=None):
    """Fast CQ derivative at the state's current level (see HistoryState.derivative)."""
    return state.derivative(current)
