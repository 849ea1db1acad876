"""Probability measures on finite products ``A_1 × ... × A_n``.

A measure is a dense joint table whose axis ``i - 1`` indexes the alphabet
``A_i = {0, ..., k_i - 1}`` of site ``i``.  Marginals over a site set ``J``
keep the axes of ``J`` in ascending site order.  The recombination map

    Xi[mu] = sum_D rho_D  (product over atoms J of D of mu_J)

mixes the product-of-marginals factorizations of ``mu`` over the partitions
in the support of ``rho``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from . import arith
from .partitions import Partition, PartitionError, ResourceLimitError

DEFAULT_TABLE_CAP = 2**20


class MeasureError(ValueError):
    pass


def _check_table_cap(sizes: Sequence[int], cap: int) -> None:
    total = int(np.prod(sizes, dtype=object))
    if total > cap:
        raise ResourceLimitError("joint table exceeds the table cap", total, cap)


def _check_probability_table(table: np.ndarray, what: str) -> None:
    mode = arith.mode_of(table)
    if mode == arith.FLOAT:
        if not np.all(np.isfinite(table)):
            raise MeasureError(f"{what} has non-finite entries")
        if np.any(table < 0):
            raise MeasureError(f"{what} has negative entries")
    else:
        if any(not isinstance(x, Fraction) for x in table.flat):
            raise MeasureError(f"{what} mixes non-rational entries into exact mode")
        if any(x < 0 for x in table.flat):
            raise MeasureError(f"{what} has negative entries")
    total = table.sum()
    if not arith.is_unit_sum(total, mode):
        raise MeasureError(f"{what} sums to {arith.format_number(total)}, not 1")


@dataclass(frozen=True, eq=False)
class ProductMeasure:
    """Dense joint probability table over the product of the site alphabets."""

    alphabet_sizes: tuple
    table: np.ndarray

    def __post_init__(self):
        sizes = tuple(int(k) for k in self.alphabet_sizes)
        if not sizes or any(k < 1 for k in sizes):
            raise MeasureError(f"alphabet sizes must be >= 1, got {sizes}")
        if tuple(self.table.shape) != sizes:
            raise MeasureError(f"table shape {self.table.shape} does not match alphabet sizes {sizes}")
        _check_probability_table(self.table, "measure table")
        object.__setattr__(self, "alphabet_sizes", sizes)
        self.table.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.alphabet_sizes)

    @property
    def mode(self) -> str:
        return arith.mode_of(self.table)

    @classmethod
    def from_table(cls, values, alphabet_sizes=None, mode: Optional[str] = None,
                   table_cap: int = DEFAULT_TABLE_CAP) -> "ProductMeasure":
        """Build from nested lists or a flat row-major list (needs ``alphabet_sizes``)."""
        raw = np.array(values, dtype=object)
        if mode is None:
            mode = arith.infer_mode(raw.flat)
        table = arith.array(raw, mode)
        if alphabet_sizes is not None:
            _check_table_cap(alphabet_sizes, table_cap)
            if table.size != int(np.prod(alphabet_sizes)):
                raise MeasureError(
                    f"table has {table.size} entries, alphabet sizes {tuple(alphabet_sizes)} "
                    f"need {int(np.prod(alphabet_sizes))}"
                )
            table = table.reshape(tuple(alphabet_sizes))
        else:
            _check_table_cap(table.shape, table_cap)
        return cls(tuple(table.shape), table)

    @classmethod
    def uniform(cls, alphabet_sizes, mode: str = arith.EXACT,
                table_cap: int = DEFAULT_TABLE_CAP) -> "ProductMeasure":
        sizes = tuple(alphabet_sizes)
        _check_table_cap(sizes, table_cap)
        total = int(np.prod(sizes))
        value = Fraction(1, total) if mode == arith.EXACT else 1.0 / total
        table = arith.zeros(sizes, mode)
        table[...] = value
        return cls(sizes, table)

    @classmethod
    def random(cls, alphabet_sizes, seed: int, mode: str = arith.EXACT,
               table_cap: int = DEFAULT_TABLE_CAP) -> "ProductMeasure":
        """Seeded random measure with full support.

        Exact mode normalizes integers drawn from 1..1000; float mode
        normalizes unit exponentials (a flat Dirichlet draw).
        """
        sizes = tuple(alphabet_sizes)
        _check_table_cap(sizes, table_cap)
        rng = np.random.default_rng(seed)
        if mode == arith.EXACT:
            draws = rng.integers(1, 1001, size=sizes)
            total = int(draws.sum())
            table = arith.zeros(sizes, mode)
            for idx, v in np.ndenumerate(draws):
                table[idx] = Fraction(int(v), total)
        else:
            draws = rng.exponential(size=sizes)
            table = draws / draws.sum()
        return cls(sizes, table)

    def __eq__(self, other):
        if not isinstance(other, ProductMeasure):
            return NotImplemented
        return self.alphabet_sizes == other.alphabet_sizes and bool(np.all(self.table == other.table))

    __hash__ = None


def _axes(sites: Iterable[int], n: int) -> tuple:
    sites = sorted(set(sites))
    for s in sites:
        if isinstance(s, bool) or not isinstance(s, (int, np.integer)) or not 1 <= s <= n:
            raise MeasureError(f"unknown site {s!r}; sites are 1..{n}")
    return tuple(s - 1 for s in sites)


def marginal(m: ProductMeasure, J: Iterable[int]):
    """Marginal table over the sites in ``J`` (axes in ascending site order).

    ``J = I`` gives the table itself; ``J = ∅`` gives the scalar 1.
    """
    keep = _axes(J, m.n)
    if not keep:
        return arith.one(m.mode)
    drop = tuple(a for a in range(m.n) if a not in keep)
    if not drop:
        return m.table.copy()
    return m.table.sum(axis=drop)


@dataclass(frozen=True, eq=False)
class FactorizedMeasure:
    """A partition together with one probability table per atom."""

    partition: Partition
    block_marginals: tuple

    def __post_init__(self):
        blocks = tuple(np.asarray(b) if not isinstance(b, np.ndarray) else b
                       for b in self.block_marginals)
        atoms = self.partition.atoms
        if len(blocks) != len(atoms):
            raise MeasureError(f"{len(blocks)} block tables for {len(atoms)} atoms")
        sizes = [0] * self.partition.n
        for atom, tab in zip(atoms, blocks):
            if tab.ndim != len(atom):
                raise MeasureError(f"block table for atom {atom} has {tab.ndim} axes")
            _check_probability_table(tab, f"block table for atom {atom}")
            for site, k in zip(atom, tab.shape):
                sizes[site - 1] = k
        modes = {arith.mode_of(t) for t in blocks}
        if len(modes) > 1:
            raise MeasureError("block tables mix exact and float modes")
        object.__setattr__(self, "block_marginals", blocks)
        object.__setattr__(self, "_sizes", tuple(sizes))

    @property
    def alphabet_sizes(self) -> tuple:
        return self._sizes

    @property
    def mode(self) -> str:
        return arith.mode_of(self.block_marginals[0])


def tensor(f: FactorizedMeasure) -> ProductMeasure:
    """Dense table of the product measure ``⊗_J f_J``."""
    n = f.partition.n
    out = arith.one(f.mode)
    for atom, tab in zip(f.partition.atoms, f.block_marginals):
        shape = [1] * n
        for site, k in zip(atom, tab.shape):
            shape[site - 1] = k
        out = out * tab.reshape(shape)
    return ProductMeasure(f.alphabet_sizes, np.asarray(out))


def factorize(m: ProductMeasure, p: Partition) -> FactorizedMeasure:
    if p.n != m.n:
        raise PartitionError(f"partition over {p.n} sites, measure over {m.n}")
    blocks = tuple(np.asarray(marginal(m, atom)) for atom in p.atoms)
    if m.mode == arith.FLOAT:
        # a product of k marginals maps total mass s to s**k; renormalize so
        # rounding error cannot compound across iterations
        blocks = tuple(b / b.sum() for b in blocks)
    return FactorizedMeasure(p, blocks)


def product_of_marginals(m: ProductMeasure, p: Partition) -> ProductMeasure:
    """``⊗_{J ∈ p} m_J``."""
    if p.is_coarsest():
        return m
    return tensor(factorize(m, p))


def _weights_in_mode(items, mode: str):
    out = []
    for part, w in items:
        if mode == arith.EXACT and not isinstance(w, Fraction):
            raise MeasureError("float weights cannot act on an exact-mode measure")
        out.append((part, w if mode == arith.EXACT else float(w)))
    return out


def _mix(terms, m: ProductMeasure) -> ProductMeasure:
    acc = arith.zeros(m.alphabet_sizes, m.mode)
    for part, w in terms:
        if w == 0:
            continue
        acc = acc + w * product_of_marginals(m, part).table
    return ProductMeasure(m.alphabet_sizes, acc)


def xi_apply(m: ProductMeasure, rho) -> ProductMeasure:
    """One step of the recombination map for the partition weights ``rho``."""
    if rho.n != m.n:
        raise MeasureError(f"weights over {rho.n} sites, measure over {m.n}")
    return _mix(_weights_in_mode(rho.items(), m.mode), m)


def xi_iterate(m: ProductMeasure, rho, n: int) -> ProductMeasure:
    if n < 0:
        raise ValueError("number of iterations must be >= 0")
    for _ in range(n):
        m = xi_apply(m, rho)
    return m


def mixture_of_factorizations(b, m: ProductMeasure, states: Optional[Sequence[Partition]] = None
                              ) -> ProductMeasure:
    """``sum_δ b(δ) ⊗_{K∈δ} m_K``.

    ``b`` is a mapping partition -> weight, or a vector aligned with ``states``.
    """
    if states is not None:
        if len(b) != len(states):
            raise MeasureError(f"{len(b)} coefficients for {len(states)} states")
        items = list(zip(states, b))
    elif isinstance(b, Mapping):
        items = list(b.items())
    else:
        raise MeasureError("pass a partition mapping or supply the aligned states")
    for part, _ in items:
        if part.n != m.n:
            raise MeasureError(f"partition over {part.n} sites, measure over {m.n}")
    items = _weights_in_mode(items, m.mode)
    total = sum((w for _, w in items), arith.zero(m.mode))
    if not arith.is_unit_sum(total, m.mode, tol=1e-9):
        raise MeasureError(f"coefficients sum to {arith.format_number(total)}, not 1")
    return _mix(items, m)


def total_variation(a: ProductMeasure, b: ProductMeasure):
    if a.alphabet_sizes != b.alphabet_sizes:
        raise MeasureError("measures live on different product spaces")
    diff = a.table - b.table
    return sum(abs(x) for x in diff.flat) / 2
