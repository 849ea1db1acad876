"""The partition-valued Markov chain driven by a recombination model.

From state ``δ`` the chain draws ``D`` from ``rho`` and moves to ``δ ∨ D``.
Started at the coarsest partition, its law at time ``n`` gives the mixture
coefficients of the ``n``-th recombination iterate.  States are kept in a
coarse-first order, which makes the transition matrix upper triangular.
"""

from __future__ import annotations

import warnings
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from . import arith
from .partitions import (
    DEFAULT_STATE_CAP,
    Partition,
    PartitionError,
    ResourceLimitError,
    closure,
    coarsest,
    common_refinement,
    finer_eq,
    join,
    parse_partition,
    sorted_partitions,
)

WEIGHT_SUM_TOL = 1e-9
RENORMALIZE_NOTICE_TOL = 1e-12


class WeightsError(ValueError):
    pass


class HittingDivergenceError(ArithmeticError):
    """The generating function ``E(z**ζ_B)`` diverges for the requested ``z``."""


class PartitionWeights(Mapping):
    """Probability vector over partitions; only positive weights are kept.

    Accepts a mapping or pairs whose keys are :class:`Partition` objects or
    partition strings and whose values are numbers or ``"p/q"`` strings.
    Exact mode requires the weights to sum to exactly 1.  Float mode
    tolerates an error of ``1e-9`` and renormalizes, warning when the
    error exceeds rounding level (``1e-12``).
    """

    def __init__(self, entries, mode: Optional[str] = None, n: Optional[int] = None):
        pairs = list(entries.items()) if isinstance(entries, Mapping) else list(entries)
        if mode is None:
            mode = arith.infer_mode(w for _, w in pairs)
        arith.check_mode(mode)
        weights = {}
        for key, w in pairs:
            part = parse_partition(key, n) if isinstance(key, str) else key
            if not isinstance(part, Partition):
                raise WeightsError(f"not a partition: {key!r}")
            if n is None:
                n = part.n
            elif part.n != n:
                raise WeightsError(f"partition {part} has {part.n} sites, expected {n}")
            if part in weights:
                raise WeightsError(f"partition {part} listed twice")
            value = arith.convert(w, mode)
            if value < 0:
                raise WeightsError(f"negative weight {arith.format_number(value)} for {part}")
            weights[part] = value
        weights = {p: w for p, w in weights.items() if w > 0}
        if not weights:
            raise WeightsError("weights have empty support")
        total = sum(weights.values(), arith.zero(mode))
        if mode == arith.EXACT:
            if total != 1:
                raise WeightsError(f"weights sum to {arith.format_number(total)}, not 1")
        else:
            if abs(total - 1.0) > WEIGHT_SUM_TOL:
                raise WeightsError(f"weights sum to {total!r}, not 1 within {WEIGHT_SUM_TOL}")
            if abs(total - 1.0) > RENORMALIZE_NOTICE_TOL:
                warnings.warn(f"renormalizing float weights that sum to {total!r}", stacklevel=2)
            weights = {p: w / total for p, w in weights.items()}
        self._weights = {p: weights[p] for p in sorted_partitions(weights)}
        self.n = n
        self.mode = mode

    def __getitem__(self, key):
        if isinstance(key, str):
            key = parse_partition(key, self.n)
        return self._weights[key]

    def __iter__(self):
        return iter(self._weights)

    def __len__(self):
        return len(self._weights)

    def __repr__(self):
        body = ", ".join(f"{p}: {arith.format_number(w)}" for p, w in self._weights.items())
        return f"PartitionWeights({{{body}}})"

    @property
    def support(self) -> tuple:
        return tuple(self._weights)

    @property
    def absorbing(self) -> Partition:
        return common_refinement(self._weights)

    def coarsest_weight(self):
        return self._weights.get(coarsest(self.n), arith.zero(self.mode))


@dataclass(frozen=True, eq=False)
class StateSpace:
    """Reachable partitions in coarse-first order; ``absorbing`` is an index."""

    states: tuple
    index: dict
    absorbing: int

    def __len__(self):
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i) -> Partition:
        return self.states[i]

    def position(self, state) -> int:
        if isinstance(state, (int, np.integer)):
            if not 0 <= state < len(self.states):
                raise IndexError(f"state index {state} out of range")
            return int(state)
        if isinstance(state, str):
            state = parse_partition(state, self.states[0].n)
        try:
            return self.index[state]
        except KeyError:
            raise PartitionError(f"{state} is not a state of this chain") from None

    def positions(self, states) -> frozenset:
        if isinstance(states, (Partition, str, int, np.integer)):
            states = [states]
        return frozenset(self.position(s) for s in states)

    @property
    def start(self) -> int:
        return 0

    @property
    def transient(self) -> tuple:
        """Indices of all states except the absorbing one."""
        return tuple(i for i in range(len(self.states)) if i != self.absorbing)


def build_state_space(rho: PartitionWeights, cap: int = DEFAULT_STATE_CAP) -> StateSpace:
    """``{coarsest} ∪ closure(support of rho)``, coarse first."""
    states = set(closure(rho.support, cap=cap))
    states.add(coarsest(rho.n))
    if len(states) > cap:
        raise ResourceLimitError("state space exceeds the state cap", len(states), cap)
    ordered = tuple(sorted_partitions(states))
    index = {p: i for i, p in enumerate(ordered)}
    return StateSpace(ordered, index, index[rho.absorbing])


@dataclass(frozen=True, eq=False)
class TransitionMatrix:
    """Stochastic matrix over a :class:`StateSpace`.

    ``successor[i, k]`` is the index of ``states[i] ∨ support[k]``; the chain
    and the Monte Carlo sampler both move through this table.
    """

    space: StateSpace
    rho: PartitionWeights
    matrix: np.ndarray
    successor: np.ndarray

    @property
    def mode(self) -> str:
        return self.rho.mode

    @property
    def size(self) -> int:
        return len(self.space)

    @property
    def diagonal(self) -> list:
        return [self.matrix[i, i] for i in range(self.size)]

    def __getitem__(self, key):
        i, j = key
        return self.matrix[self.space.position(i), self.space.position(j)]

    def row(self, state) -> np.ndarray:
        return self.matrix[self.space.position(state)]

    def arrows(self, i: int) -> list:
        """Indices ``j`` with a positive entry in row ``i``."""
        row = self.matrix[i]
        return [j for j in range(self.size) if row[j] != 0]


def build_transition_matrix(rho: PartitionWeights, space: Optional[StateSpace] = None
                            ) -> TransitionMatrix:
    if space is None:
        space = build_state_space(rho)
    support = rho.support
    successor = np.empty((len(space), len(support)), dtype=np.int64)
    P = arith.zeros((len(space), len(space)), rho.mode)
    for i, state in enumerate(space.states):
        for k, D in enumerate(support):
            j = space.index.get(join(state, D))
            if j is None:
                raise PartitionError(f"{state} ∨ {D} left the state space; build it from the same weights")
            successor[i, k] = j
            P[i, j] += rho[D]
    successor.setflags(write=False)
    P.setflags(write=False)
    return TransitionMatrix(space, rho, P, successor)


def build_chain(rho: PartitionWeights, cap: int = DEFAULT_STATE_CAP) -> TransitionMatrix:
    return build_transition_matrix(rho, build_state_space(rho, cap))


# --- distributions -------------------------------------------------------------

def unit_vector(P: TransitionMatrix, state) -> np.ndarray:
    b = arith.zeros(P.size, P.mode)
    b[P.space.position(state)] = arith.one(P.mode)
    return b


def evolve(P: TransitionMatrix, b0: np.ndarray) -> Iterator[np.ndarray]:
    """Yield ``b0, b0 P, b0 P^2, ...`` forever."""
    b = np.asarray(b0)
    while True:
        yield b
        b = b @ P.matrix


def distribution_series(P: TransitionMatrix, n: int, start=None) -> list:
    """``[b_0, ..., b_n]`` from a unit mass at ``start`` (default: coarsest)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    it = evolve(P, unit_vector(P, P.space.start if start is None else start))
    return [next(it) for _ in range(n + 1)]


def distribution_at(P: TransitionMatrix, n: int, start=None) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be >= 0")
    it = evolve(P, unit_vector(P, P.space.start if start is None else start))
    for _ in range(n):
        next(it)
    return next(it)


def survival(P: TransitionMatrix, n: int, start=None):
    """``P(ζ > n)``, the probability of not being absorbed by time ``n``."""
    return arith.one(P.mode) - distribution_at(P, n, start)[P.space.absorbing]


def survival_series(P: TransitionMatrix, n: int, start=None) -> list:
    a = P.space.absorbing
    return [arith.one(P.mode) - b[a] for b in distribution_series(P, n, start)]


# --- reachability and hitting functionals ------------------------------------------

def can_reach(P: TransitionMatrix, B) -> np.ndarray:
    """Boolean vector: does a positive-probability path lead from each state into ``B``?"""
    targets = P.space.positions(B)
    out = np.zeros(P.size, dtype=bool)
    for i in reversed(range(P.size)):
        if i in targets:
            out[i] = True
            continue
        row = P.matrix[i]
        out[i] = any(out[j] for j in range(i + 1, P.size) if row[j] != 0)
    return out


def reachable(P: TransitionMatrix, source, B) -> bool:
    return bool(can_reach(P, B)[P.space.position(source)])


def hitting_vector(P: TransitionMatrix, B, z) -> np.ndarray:
    """``g(δ) = E_δ(z**ζ_B ; ζ_B < ∞)`` for every state, by back-substitution.

    Needs ``z * P[δ, δ] < 1`` on every state outside ``B`` that can reach
    ``B``; otherwise the series diverges and :class:`HittingDivergenceError`
    names the offending diagonal entry.
    """
    if z <= 0:
        raise ValueError("z must be positive")
    mode = P.mode
    z = arith.convert(z, mode)
    targets = P.space.positions(B)
    reach = can_reach(P, targets)
    one = arith.one(mode)
    g = arith.zeros(P.size, mode)
    for i in reversed(range(P.size)):
        if i in targets:
            g[i] = one
        elif reach[i]:
            d = one - z * P.matrix[i, i]
            if d <= 0:
                raise HittingDivergenceError(
                    f"z * P[{P.space[i]}, {P.space[i]}] = {arith.format_number(z)} * "
                    f"{arith.format_number(P.matrix[i, i])} >= 1"
                )
            acc = arith.zero(mode)
            row = P.matrix[i]
            for j in range(i + 1, P.size):
                if row[j] != 0 and g[j] != 0:
                    acc += row[j] * g[j]
            g[i] = z * acc / d
    return g


def hitting_functional(P: TransitionMatrix, B, z, start=None):
    """``E_start(z**ζ_B ; ζ_B < ∞)``; ``start`` defaults to the coarsest state."""
    s = P.space.start if start is None else P.space.position(start)
    return hitting_vector(P, B, z)[s]


# --- when the chain law describes the recombination iterates -----------------------

def splittable_atoms(rho: PartitionWeights, state: Partition) -> tuple:
    """Atoms of ``state`` that some member of the support of ``rho`` cuts."""
    out = []
    for atom in state.atoms:
        a = set(atom)
        if any(sum(1 for J in D.atoms if a & set(J)) > 1 for D in rho.support):
            out.append(atom)
    return tuple(out)


def several_atoms_split(P: TransitionMatrix) -> Optional[Partition]:
    """First state with two or more atoms the support can cut, else ``None``.

    From such a state the recombination map splits each atom with its own
    independent draw from ``rho``, while the chain uses one draw for all of
    them.  The iterates are then generally not the chain-law mixture of
    factorizations.  When no such state exists the two agree for every
    measure.
    """
    for s in P.space.states:
        if len(splittable_atoms(P.rho, s)) > 1:
            return s
    return None
