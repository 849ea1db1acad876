"""Small named models and a random model generator for checks and demos."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional

from .chain import PartitionWeights, build_chain
from .partitions import coarsest, finest, random_partition
from .quasistationary import DegenerateModelError, delta_set, eta_and_F


def three_site_model() -> PartitionWeights:
    """n = 3 with weights 1/5 on ``{1,2,3}``, 1/2 on ``{1}{2,3}``, 3/10 on ``{1,2}{3}``.

    Holding probabilities are 7/10 at ``{1}{2,3}`` and 1/2 at ``{1,2}{3}``,
    so a single state carries the decay rate.
    """
    return PartitionWeights({
        "{1,2,3}": Fraction(1, 5),
        "{1}{2,3}": Fraction(1, 2),
        "{1,2}{3}": Fraction(3, 10),
    })


def symmetric_three_site_model() -> PartitionWeights:
    """As :func:`three_site_model` with 2/5 on each split, so both splits tie."""
    return PartitionWeights({
        "{1,2,3}": Fraction(1, 5),
        "{1}{2,3}": Fraction(2, 5),
        "{1,2}{3}": Fraction(2, 5),
    })


def two_site_model(p_stay=Fraction(1, 2)) -> PartitionWeights:
    """n = 2: stay together with probability ``p_stay``, split otherwise."""
    p_stay = Fraction(p_stay)
    return PartitionWeights({coarsest(2): p_stay, finest(2): 1 - p_stay})


def random_weights(rng: random.Random, max_sites: int = 5, max_support: int = 4,
                   max_denominator: int = 12, mode: str = "exact") -> PartitionWeights:
    """Random rational weights on up to ``max_support`` random partitions."""
    n = rng.randint(1, max_sites)
    support = {random_partition(n, rng) for _ in range(rng.randint(1, max_support))}
    raw = [rng.randint(1, max_denominator) for _ in support]
    total = sum(raw)
    weights = {p: Fraction(r, total) for p, r in zip(sorted(support, key=lambda p: p.sort_key()), raw)}
    if mode != "exact":
        weights = {p: float(w) for p, w in weights.items()}
    return PartitionWeights(weights, mode=mode)


def random_nondegenerate(rng: random.Random, tries: int = 1000, **kwargs) -> PartitionWeights:
    """Like :func:`random_weights` but with ``0 < η`` (a quasi-stationary regime exists)."""
    for _ in range(tries):
        rho = random_weights(rng, **kwargs)
        P = build_chain(rho)
        try:
            eta_and_F(P, delta_set(P))
        except DegenerateModelError:
            continue
        return rho
    raise RuntimeError("no nondegenerate model found")
