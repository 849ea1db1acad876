"""Set partitions of ``I = {1, ..., n}`` in restricted-growth form.

A partition is stored as its restricted-growth string (RGS): site ``i``
carries the label of its block, labels are assigned in order of first
occurrence, so the encoding is canonical and hashable.  Sites are 1-based
in every public signature and in the text syntax; the RGS itself is the
0-based label vector.

Refinement runs "upwards": ``finer_eq(d, e)`` holds when ``e`` is finer
than ``d``.  The coarsest partition ``{I}`` is the bottom element and the
join ``d ∨ e`` (common refinement) is the least upper bound.
"""

from __future__ import annotations

import random as _random
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Optional, Sequence

DEFAULT_STATE_CAP = 50_000


class PartitionError(ValueError):
    """Invalid partition data (bad blocks, size mismatch, syntax)."""


class PartitionSyntaxError(PartitionError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column}: {text!r}")
        self.text = text
        self.column = column


class ResourceLimitError(RuntimeError):
    """A configured size cap was exceeded; ``count`` is the partial size."""

    def __init__(self, message: str, count: int, cap: int):
        super().__init__(f"{message} (reached {count}, cap {cap})")
        self.count = count
        self.cap = cap


@dataclass(frozen=True)
class Partition:
    rgs: tuple

    def __post_init__(self):
        rgs = tuple(int(x) for x in self.rgs)
        if not rgs:
            raise PartitionError("a partition needs at least one site")
        top = -1
        for i, label in enumerate(rgs):
            if label < 0 or label > top + 1:
                raise PartitionError(
                    f"not a restricted-growth string: label {label} at site {i + 1}"
                )
            top = max(top, label)
        object.__setattr__(self, "rgs", rgs)

    @property
    def n(self) -> int:
        return len(self.rgs)

    @property
    def num_blocks(self) -> int:
        return max(self.rgs) + 1

    @property
    def atoms(self) -> tuple:
        """Blocks as tuples of 1-based sites, ordered by least element."""
        blocks = [[] for _ in range(self.num_blocks)]
        for i, label in enumerate(self.rgs):
            blocks[label].append(i + 1)
        return tuple(tuple(b) for b in blocks)

    def is_coarsest(self) -> bool:
        return self.num_blocks == 1

    def is_finest(self) -> bool:
        return self.num_blocks == self.n

    def sort_key(self):
        return (self.num_blocks, self.rgs)

    def __str__(self) -> str:
        return format_partition(self)

    def __repr__(self) -> str:
        return f"Partition({format_partition(self)})"


def coarsest(n: int) -> Partition:
    return Partition((0,) * n)


def finest(n: int) -> Partition:
    return Partition(tuple(range(n)))


def canonicalize(blocks: Iterable[Iterable[int]], n: Optional[int] = None) -> Partition:
    """Turn a collection of disjoint 1-based site sets covering ``I`` into a Partition.

    If ``n`` is omitted it is taken to be the total number of sites listed.
    """
    blocks = [list(b) for b in blocks]
    if not blocks:
        raise PartitionError("a partition needs at least one block")
    owner = {}
    for k, block in enumerate(blocks):
        if not block:
            raise PartitionError(f"block {k + 1} is empty")
        for site in block:
            if isinstance(site, bool) or not isinstance(site, int):
                raise PartitionError(f"site {site!r} is not an integer")
            if site in owner:
                raise PartitionError(f"site {site} appears in more than one block")
            owner[site] = k
    if n is None:
        n = len(owner)
    for site in owner:
        if not 1 <= site <= n:
            raise PartitionError(f"site {site} is outside 1..{n}")
    for site in range(1, n + 1):
        if site not in owner:
            raise PartitionError(f"site {site} is not covered by any block")
    relabel = {}
    rgs = []
    for site in range(1, n + 1):
        rgs.append(relabel.setdefault(owner[site], len(relabel)))
    return Partition(tuple(rgs))


def _check_sizes(d: Partition, e: Partition) -> None:
    if d.n != e.n:
        raise PartitionError(f"partitions over different index sets: n={d.n} vs n={e.n}")


def join(d: Partition, e: Partition) -> Partition:
    """Common refinement: atoms are the nonempty intersections ``K ∩ K'``."""
    _check_sizes(d, e)
    labels = {}
    rgs = [labels.setdefault(pair, len(labels)) for pair in zip(d.rgs, e.rgs)]
    return Partition(tuple(rgs))


def finer_eq(d: Partition, e: Partition) -> bool:
    """True iff ``d ⪯ e``, i.e. every atom of ``e`` lies inside an atom of ``d``."""
    _check_sizes(d, e)
    seen = {}
    for a, b in zip(d.rgs, e.rgs):
        if seen.setdefault(b, a) != a:
            return False
    return True


def _check_family(G: Iterable[Partition]) -> list:
    members = list(dict.fromkeys(G))
    if not members:
        raise PartitionError("empty partition family")
    n = members[0].n
    for g in members:
        if g.n != n:
            raise PartitionError(f"family mixes index set sizes {n} and {g.n}")
    return members


def common_refinement(G: Iterable[Partition]) -> Partition:
    return reduce(join, _check_family(G))


def closure_step(X: Iterable[Partition], G: Iterable[Partition]) -> frozenset:
    """One application of ``X ↦ {g ∨ x : g ∈ G, x ∈ X}``."""
    G = list(G)
    return frozenset(join(g, x) for x in X for g in G)


def closure(G: Iterable[Partition], cap: int = DEFAULT_STATE_CAP) -> frozenset:
    """Smallest family containing ``G`` and closed under joining with members of ``G``."""
    members = _check_family(G)
    seen = set(members)
    if len(seen) > cap:
        raise ResourceLimitError("partition closure exceeds the state cap", len(seen), cap)
    work = list(members)
    while work:
        x = work.pop()
        for g in members:
            y = join(x, g)
            if y not in seen:
                seen.add(y)
                if len(seen) > cap:
                    raise ResourceLimitError(
                        "partition closure exceeds the state cap", len(seen), cap
                    )
                work.append(y)
    return frozenset(seen)


def sorted_partitions(parts: Iterable[Partition]) -> list:
    """Coarse first: by number of atoms, then RGS. A linear extension of ⪯."""
    return sorted(parts, key=Partition.sort_key)


# --- text syntax -------------------------------------------------------------

_BLOCK_RE = re.compile(r"\{([^{}]*)\}")


def format_partition(p: Partition) -> str:
    return "".join("{" + ",".join(map(str, atom)) + "}" for atom in p.atoms)


def format_rgs(p: Partition) -> str:
    return ",".join(map(str, p.rgs))


def parse_partition(text: str, n: Optional[int] = None) -> Partition:
    """Parse block form ``{1,3}{2}`` or RGS form ``0,1,0``."""
    if not isinstance(text, str):
        raise PartitionError(f"partition text must be a string, got {type(text).__name__}")
    stripped = text.strip()
    if not stripped:
        raise PartitionSyntaxError("empty partition text", text, 1)
    if stripped.startswith("{"):
        p = _parse_blocks(text, n)
    else:
        p = _parse_rgs(text)
    if n is not None and p.n != n:
        raise PartitionError(f"partition {text!r} has {p.n} sites, expected {n}")
    return p


def _parse_blocks(text: str, n: Optional[int]) -> Partition:
    blocks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _BLOCK_RE.match(text, pos)
        if m is None:
            raise PartitionSyntaxError("expected '{'", text, pos + 1)
        items = []
        body_start = m.start(1)
        for piece in m.group(1).split(","):
            offset = body_start
            body_start += len(piece) + 1
            piece = piece.strip()
            if not piece:
                raise PartitionSyntaxError("empty element", text, offset + 1)
            if not piece.isdigit():
                raise PartitionSyntaxError(f"bad site {piece!r}", text, offset + 1)
            items.append(int(piece))
        blocks.append(items)
        pos = m.end()
    return canonicalize(blocks, n)


def _parse_rgs(text: str) -> Partition:
    labels = []
    col = 1
    for piece in text.split(","):
        s = piece.strip()
        if not s.isdigit():
            raise PartitionSyntaxError(f"bad label {s!r}", text, col)
        labels.append(int(s))
        col += len(piece) + 1
    return Partition(tuple(labels))


# --- enumeration -------------------------------------------------------------

def all_partitions(n: int) -> Iterator[Partition]:
    """Every partition of ``{1..n}``, as restricted-growth strings in lex order."""
    if n < 1:
        raise PartitionError("n must be positive")

    def grow(prefix, top):
        if len(prefix) == n:
            yield Partition(tuple(prefix))
            return
        for label in range(top + 2):
            prefix.append(label)
            yield from grow(prefix, max(top, label))
            prefix.pop()

    yield from grow([0], 0)


def interval_partitions(n: int) -> Iterator[Partition]:
    """Partitions of ``{1..n}`` whose atoms are intervals (2**(n-1) of them)."""
    for mask in range(2 ** (n - 1)):
        rgs = [0]
        for i in range(1, n):
            rgs.append(rgs[-1] + ((mask >> (i - 1)) & 1))
        yield Partition(tuple(rgs))


def single_crossover_splits(n: int) -> list:
    """The ``n - 1`` dyadic splits ``{1..j}{j+1..n}``."""
    return [Partition((0,) * j + (1,) * (n - j)) for j in range(1, n)]


def random_partition(n: int, rng: Optional[_random.Random] = None) -> Partition:
    """A random RGS of length ``n`` (not uniform over partitions)."""
    rng = rng or _random.Random()
    rgs = [0]
    top = 0
    for _ in range(1, n):
        label = rng.randint(0, top + 1)
        top = max(top, label)
        rgs.append(label)
    return Partition(tuple(rgs))
