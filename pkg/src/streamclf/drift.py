"""ADWIN adaptive-windowing change detector.

Keeps a window of recent real values compressed into exponential-histogram
buckets (a bucket at level i aggregates 2^i values, storing their exact sum
and internal variance, so window totals stay exact in O(log n) memory).
On update it tries every bucket boundary as a cut between an older and a
newer sub-window and drops the older part whenever the two means differ by
more than a Hoeffding-style threshold derived from the confidence delta.
"""

from __future__ import annotations

import math

__all__ = ["Adwin"]


class _Row:
    """One histogram level: up to max_buckets+1 buckets of equal capacity."""

    __slots__ = ("sums", "variances")

    def __init__(self):
        self.sums: list[float] = []
        self.variances: list[float] = []

    def append(self, total: float, variance: float) -> None:
        self.sums.append(total)
        self.variances.append(variance)

    def drop_front(self, n: int) -> None:
        del self.sums[:n]
        del self.variances[:n]


class Adwin:
    """Adaptive windowing over values in [0, 1].

    ``update`` returns True when a change was detected (the window shrank).
    ``mean``/``width`` expose the retained window's exact statistics.
    """

    def __init__(self, delta: float = 0.002, max_buckets: int = 5,
                 min_clock: int = 32, min_window: int = 10, min_sub_window: int = 5):
        if not 0.0 < delta < 1.0:
            raise ValueError("delta must be in (0,1)")
        self.delta = delta
        self.max_buckets = max_buckets
        self.min_clock = min_clock
        self.min_window = min_window
        self.min_sub_window = min_sub_window
        self._init_window()

    def _init_window(self):
        self.rows: list[_Row] = [_Row()]  # rows[i] holds buckets of 2^i values
        self.width = 0
        self.total = 0.0
        self.variance_sum = 0.0
        self.ticks = 0
        self.n_detections = 0

    @property
    def mean(self) -> float:
        return self.total / self.width if self.width > 0 else 0.0

    @property
    def variance(self) -> float:
        # incremental bucket drops can leave tiny negative residue
        return max(0.0, self.variance_sum) / self.width if self.width > 0 else 0.0

    def reset(self) -> None:
        self._init_window()

    def update(self, value: float) -> bool:
        if not 0.0 <= value <= 1.0:
            raise ValueError("ADWIN consumes values in [0,1]")
        self.ticks += 1
        self._insert(value)
        return self._shrink()

    # -- exponential histogram maintenance ----------------------------------

    def _insert(self, value: float) -> None:
        self.rows[0].append(value, 0.0)
        if self.width > 0:
            mean = self.total / self.width
            self.variance_sum += self.width * (value - mean) ** 2 / (self.width + 1)
        self.width += 1
        self.total += value
        self._compress()

    def _compress(self) -> None:
        for level, row in enumerate(self.rows):
            if len(row.sums) <= self.max_buckets:
                break
            if level + 1 == len(self.rows):
                self.rows.append(_Row())
            nxt = self.rows[level + 1]
            n = float(2 ** level)
            s1, s2 = row.sums[0], row.sums[1]
            # variance of the merged bucket: internal parts plus the
            # between-bucket term for two equal-size groups
            between = n * n * (s1 / n - s2 / n) ** 2 / (n + n)
            nxt.append(s1 + s2, row.variances[0] + row.variances[1] + between)
            row.drop_front(2)

    def _drop_oldest_bucket(self) -> int:
        level = len(self.rows) - 1
        while not self.rows[level].sums:
            level -= 1
        row = self.rows[level]
        n = 2 ** level
        total = row.sums[0]
        internal_var = row.variances[0]
        self.width -= n
        self.total -= total
        if self.width > 0:
            mean_rest = self.total / self.width
            between = n * self.width * (total / n - mean_rest) ** 2 / (n + self.width)
            self.variance_sum -= internal_var + between
        else:
            self.variance_sum = 0.0
        row.drop_front(1)
        if not row.sums and level > 0:
            self.rows.pop()
        return n

    # -- cut detection -------------------------------------------------------

    def _shrink(self) -> bool:
        if self.ticks % self.min_clock != 0 or self.width <= self.min_window:
            return False
        changed = False
        reduced = True
        while reduced:
            reduced = False
            if self.width <= self.min_window:
                break
            n0, sum0 = 0.0, 0.0
            n1, sum1 = float(self.width), self.total
            # walk buckets oldest-first: rows from the tail, FIFO inside a row
            for level in range(len(self.rows) - 1, -1, -1):
                row = self.rows[level]
                size = float(2 ** level)
                for b in range(len(row.sums)):
                    if level == 0 and b == len(row.sums) - 1:
                        break  # never cut away the entire window
                    n0 += size
                    n1 -= size
                    sum0 += row.sums[b]
                    sum1 -= row.sums[b]
                    if n0 <= self.min_sub_window or n1 <= self.min_sub_window:
                        continue
                    if self._cut_detected(n0, n1, sum0 / n0 - sum1 / n1):
                        changed = True
                        reduced = self.width > 0
                        self._drop_oldest_bucket()
                        break
                else:
                    continue
                break
        if changed:
            self.n_detections += 1
        return changed

    def _cut_detected(self, n0: float, n1: float, mean_diff: float) -> bool:
        m = 1.0 / (n0 - self.min_sub_window + 1) + 1.0 / (n1 - self.min_sub_window + 1)
        dd = math.log(2.0 * math.log(self.width) / self.delta)
        eps_cut = math.sqrt(2.0 * m * self.variance * dd) + 2.0 / 3.0 * m * dd
        return abs(mean_diff) > eps_cut
