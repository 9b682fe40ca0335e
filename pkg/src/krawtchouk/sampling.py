"""Monte Carlo side: categorical count sampling and Gram estimation.

The generator is the stdlib Mersenne Twister, whose `random()` stream is
stable across platforms and Python versions for a fixed seed.  Parallel
use derives per-stream generators by seed + stream index.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .system import KGSystem, kravchouk_level


@dataclass(frozen=True)
class RngSpec:
    """Named, seeded generator recipe; equal specs give equal streams."""

    seed: int
    algorithm: str = "mt19937"

    def stream(self, index: int = 0) -> random.Random:
        if self.algorithm != "mt19937":
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        return random.Random(self.seed + index)


@dataclass(frozen=True)
class ProcessSample:
    """Counts per non-distinguished category after `steps` draws."""

    counts: tuple[int, ...]
    steps: int


def _resolve(rng) -> random.Random:
    if isinstance(rng, RngSpec):
        return rng.stream()
    if isinstance(rng, random.Random):
        return rng
    raise TypeError(f"need an RngSpec or random.Random, got {type(rng).__name__}")


def _cumulative(system: KGSystem) -> list[float]:
    cum = []
    acc = 0.0
    for q in system.p:
        acc += float(q)
        cum.append(acc)
    return cum


def _draw_counts(cum: list[float], d: int, steps: int, rand: random.Random) -> list[int]:
    counts = [0] * (d + 1)
    last = d
    for _ in range(steps):
        u = rand.random()
        for idx, edge in enumerate(cum):
            if u < edge:
                counts[idx] += 1
                break
        else:
            counts[last] += 1  # guard for u landing on accumulated rounding
    return counts


def sample_counts(system: KGSystem, N: int, rng) -> ProcessSample:
    """N independent categorical draws from p, tallied by inverse CDF.

    Passing an RngSpec derives a fresh stream (deterministic per spec);
    passing a random.Random consumes from that generator.
    """
    if N < 0:
        raise ValueError(f"steps must be nonnegative, got {N}")
    rand = _resolve(rng)
    counts = _draw_counts(_cumulative(system), system.d, N, rand)
    return ProcessSample(tuple(counts[1:]), N)


def empirical_gram(system: KGSystem, N: int, m, n, trials: int, rng) -> tuple[float, float]:
    """Monte Carlo estimate of the level-N inner product of labels m and n.

    Values use the matrix normalization.  Returns (estimate, standard
    error); the estimator is the plain sample mean of pointwise products.
    """
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    level = kravchouk_level(system, N)
    m, n = tuple(m), tuple(n)
    if sum(m) > N or sum(n) > N:
        raise ValueError("labels must not exceed the level")
    vm = [float(v) for v in level.values(m, "matrix")]
    vn = [float(v) for v in level.values(n, "matrix")]
    position = {pt: i for i, pt in enumerate(level.lattice_points())}
    cum = _cumulative(system)
    rand = _resolve(rng)
    d = system.d

    total = 0.0
    total_sq = 0.0
    for _ in range(trials):
        counts = _draw_counts(cum, d, N, rand)
        pos = position[tuple(counts[1:])]
        y = vm[pos] * vn[pos]
        total += y
        total_sq += y * y
    estimate = total / trials
    if trials == 1:
        return estimate, 0.0
    variance = max(total_sq - trials * estimate * estimate, 0.0) / (trials - 1)
    return estimate, math.sqrt(variance / trials)
