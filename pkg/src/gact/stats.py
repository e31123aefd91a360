"""Exact and empirical distribution comparison.

Exact histograms come from running a tape-driven sampler on every tape of a
finite tape space. Tapes the sampler cannot finish (rejection sampling ran
out of bits) are dropped, so the histogram is the output distribution
conditioned on the tape sufficing; ``exhausted`` records how many were dropped.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from statistics import NormalDist
from typing import Callable, Hashable, IO, Iterable, Optional

from .core import DEFAULT_ENUM_BOUND, EnumerationBoundExceeded
from .tape import RandomTape, TapeExhausted

CONFIDENCE = 0.99
Z_99 = NormalDist().inv_cdf(0.5 + CONFIDENCE / 2)


class EmptyHistogram(ValueError):
    pass


@dataclass
class Histogram:
    bins: Counter = field(default_factory=Counter)
    exhausted: int = 0

    @property
    def total(self) -> int:
        return sum(self.bins.values())

    def add(self, key: Hashable, count: int = 1) -> None:
        self.bins[key] += count

    def probability(self, key: Hashable) -> Fraction:
        return Fraction(self.bins.get(key, 0), self.total)

    @classmethod
    def from_samples(cls, samples: Iterable[Hashable]) -> "Histogram":
        return cls(Counter(samples))

    @classmethod
    def uniform(cls, keys: Iterable[Hashable]) -> "Histogram":
        return cls(Counter({k: 1 for k in keys}))

    def records(self) -> list:
        """``{"bin", "count"}`` dicts sorted by bin label; bytes bins shown as hex."""
        return [{"bin": label, "count": count}
                for label, count in sorted((_label(k), c) for k, c in self.bins.items())]

    def to_jsonl(self, fh: IO[str]) -> None:
        for rec in self.records():
            fh.write(json.dumps(rec, sort_keys=True) + "\n")


def _label(key) -> str:
    if isinstance(key, (bytes, bytearray)):
        return bytes(key).hex()
    return repr(key)


def exact_distribution(sampler: Callable[[RandomTape], Hashable],
                       tape_space: Iterable[RandomTape],
                       bound: int = DEFAULT_ENUM_BOUND,
                       size: Optional[int] = None) -> Histogram:
    """Histogram of ``sampler(tape)`` over every tape in ``tape_space``."""
    if size is not None and size > bound:
        raise EnumerationBoundExceeded(f"tape space of {size} exceeds bound {bound}")
    h = Histogram()
    seen = 0
    for tape in tape_space:
        seen += 1
        if seen > bound:
            raise EnumerationBoundExceeded(f"tape space exceeds bound {bound}")
        try:
            key = sampler(tape)
        except TapeExhausted:
            h.exhausted += 1
            continue
        h.bins[key] += 1
    return h


def tv_distance(h1: Histogram, h2: Histogram) -> Fraction:
    """Half the L1 distance between the normalised histograms, exactly."""
    t1, t2 = h1.total, h2.total
    if t1 <= 0 or t2 <= 0:
        raise EmptyHistogram("total variation needs non-empty histograms")
    keys = set(h1.bins) | set(h2.bins)
    # common denominator t1*t2 keeps the sum in integers
    num = sum(abs(h1.bins.get(k, 0) * t2 - h2.bins.get(k, 0) * t1) for k in keys)
    return Fraction(num, 2 * t1 * t2)


@dataclass(frozen=True)
class RateEstimate:
    successes: int
    n: int
    rate: float
    half_width: float

    def contains(self, p: float) -> bool:
        return abs(self.rate - p) <= self.half_width


def estimate_rate(trial: Callable[[RandomTape], bool], n: int, seed) -> RateEstimate:
    """Run ``trial`` on ``n`` per-trial tapes derived from ``seed``.

    The half-width is the normal-approximation 99% interval,
    ``z * sqrt(p (1 - p) / n)``.
    """
    if n < 100:
        raise ValueError("estimate_rate needs n >= 100")
    base = RandomTape.from_seed(seed)
    successes = sum(1 for i in range(1, n + 1) if trial(base.segment(i)))
    p = successes / n
    return RateEstimate(successes, n, p, Z_99 * math.sqrt(p * (1 - p) / n))


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(p * (1 - p) / n)
