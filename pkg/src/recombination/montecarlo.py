"""Seeded simulation of the partition chain.

Generator
---------
Every trajectory owns a 64-bit seed ``s``.  Its ``t``-th draw (``t = 1, 2,
...``) is the SplitMix64 output ``mix(s + t * 0x9E3779B97F4A7C15 mod 2**64)``
where ``mix`` is the standard SplitMix64 finalizer.  The draw depends only
on ``(s, t)``, so the sequence is reproducible everywhere, trajectories can
be computed in any order, and a batch vectorizes over seeds.

Sampling ``rho``
----------------
The support of ``rho`` is listed coarse first.  With exact cumulative sums
``c_1 < ... < c_m = 1``, set thresholds ``T_k = floor(c_k * 2**64)`` and
``T_m = 2**64``.  A draw ``u`` selects the first ``k`` with ``u < T_k``.
No floating point is involved.  Float-mode weights are converted to their
exact binary rational first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import numpy as np

from .chain import PartitionWeights, TransitionMatrix, build_chain
from .partitions import Partition, coarsest, join

GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MASK64 = (1 << 64) - 1
TWO64 = 1 << 64

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def splitmix64(seed: int, t: int) -> int:
    """The ``t``-th draw (``t >= 1``) of stream ``seed``."""
    z = (seed + t * GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def splitmix64_array(seeds: np.ndarray, t: int) -> np.ndarray:
    """Vectorized :func:`splitmix64` over an array of ``uint64`` seeds."""
    z = seeds.astype(np.uint64) + np.uint64((t * GOLDEN_GAMMA) & MASK64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def thresholds(rho: PartitionWeights) -> List[int]:
    """Integer thresholds on ``[0, 2**64)`` for each support member, coarse first."""
    acc = Fraction(0)
    out = []
    weights = [Fraction(w) for w in rho.values()]
    for w in weights[:-1]:
        acc += w
        out.append(math.floor(acc * TWO64))
    out.append(TWO64)
    return out


def draw_index(u: int, cuts: List[int]) -> int:
    for k, c in enumerate(cuts):
        if u < c:
            return k
    raise AssertionError("threshold table must end at 2**64")


@dataclass(frozen=True)
class Trajectory:
    seed: int
    states: tuple
    absorption_step: Optional[int]

    def state_at(self, n: int) -> Partition:
        """``Y_n``; after absorption the chain stays put."""
        if n < len(self.states):
            return self.states[n]
        if self.absorption_step is None:
            raise IndexError(f"trajectory stops at horizon {len(self.states) - 1}")
        return self.states[-1]


def sample_trajectory(rho: PartitionWeights, seed: int, horizon: int) -> Trajectory:
    """Run the chain from the coarsest partition for at most ``horizon`` steps."""
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    seed &= MASK64
    support = rho.support
    cuts = thresholds(rho)
    target = rho.absorbing
    y = coarsest(rho.n)
    states = [y]
    absorbed = 0 if y == target else None
    t = 0
    while absorbed is None and t < horizon:
        t += 1
        y = join(y, support[draw_index(splitmix64(seed, t), cuts)])
        states.append(y)
        if y == target:
            absorbed = t
    return Trajectory(seed, tuple(states), absorbed)


def simulate_counts(rho: PartitionWeights, seeds: int, horizon: int, base_seed: int = 0,
                    chain: Optional[TransitionMatrix] = None) -> np.ndarray:
    """Occupation counts ``counts[n, i]`` of state ``i`` at time ``n`` over ``seeds`` runs.

    Trajectory ``r`` uses seed ``base_seed + r (mod 2**64)``; the result is
    identical to collecting :func:`sample_trajectory` runs one by one.
    """
    if seeds < 1:
        raise ValueError("need at least one seed")
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    if chain is None:
        chain = build_chain(rho)
    cuts = np.array(thresholds(rho)[:-1], dtype=np.uint64)
    succ = np.asarray(chain.successor)
    stream = (np.arange(seeds, dtype=np.uint64) + np.uint64(base_seed & MASK64))
    state = np.zeros(seeds, dtype=np.int64)
    counts = np.zeros((horizon + 1, chain.size), dtype=np.int64)
    counts[0] = np.bincount(state, minlength=chain.size)
    for t in range(1, horizon + 1):
        u = splitmix64_array(stream, t)
        k = np.searchsorted(cuts, u, side="right")
        state = succ[state, k]
        counts[t] = np.bincount(state, minlength=chain.size)
    return counts


@dataclass(frozen=True)
class SurvivalEstimate:
    n: int
    estimate: float
    stderr: float
    survivors: int
    samples: int


def estimate_survival(rho: PartitionWeights, seeds: int, horizon: int, base_seed: int = 0,
                      chain: Optional[TransitionMatrix] = None) -> List[SurvivalEstimate]:
    """Empirical ``P(ζ > n)`` for ``n = 0..horizon`` with binomial standard errors."""
    if chain is None:
        chain = build_chain(rho)
    counts = simulate_counts(rho, seeds, horizon, base_seed, chain)
    a = chain.space.absorbing
    out = []
    for n in range(horizon + 1):
        alive = int(seeds - counts[n, a])
        p = alive / seeds
        out.append(SurvivalEstimate(n, p, math.sqrt(p * (1 - p) / seeds), alive, seeds))
    return out
