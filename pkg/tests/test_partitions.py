import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recombination.partitions import (
    Partition,
    PartitionError,
    PartitionSyntaxError,
    ResourceLimitError,
    all_partitions,
    canonicalize,
    closure,
    closure_step,
    coarsest,
    common_refinement,
    finer_eq,
    finest,
    format_partition,
    format_rgs,
    interval_partitions,
    join,
    parse_partition,
    single_crossover_splits,
)

from oracles import from_sets, layered_closure, naive_finer_eq, naive_join, to_sets


@st.composite
def rgs_partitions(draw, n=None, max_n=8):
    if n is None:
        n = draw(st.integers(1, max_n))
    rgs = [0]
    for _ in range(n - 1):
        rgs.append(draw(st.integers(0, max(rgs) + 1)))
    return Partition(tuple(rgs))


@st.composite
def same_size(draw, k, max_n=8):
    n = draw(st.integers(1, max_n))
    return [draw(rgs_partitions(n=n)) for _ in range(k)]


# --- canonical form ----------------------------------------------------------------

@pytest.mark.parametrize("blocks, rgs", [
    ([{1, 2, 3}], (0, 0, 0)),
    ([{2, 3}, {1}], (0, 1, 1)),
    ([{3}, {1}, {2}], (0, 1, 2)),
])
def test_canonicalize_examples(blocks, rgs):
    assert canonicalize(blocks).rgs == rgs


@pytest.mark.parametrize("blocks, n, site", [
    ([{1, 2}, {2, 3}], 3, "site 2"),
    ([{1}, {3}], 3, "site 2"),
    ([{1, 2}, set(), {3}], 3, "block 2"),
    ([{1, 4}], 3, "site 4"),
])
def test_canonicalize_errors_name_the_site(blocks, n, site):
    with pytest.raises(PartitionError, match=site):
        canonicalize(blocks, n)


@pytest.mark.parametrize("rgs", [(1, 0), (0, 2), (0, -1), ()])
def test_rejects_non_rgs(rgs):
    with pytest.raises(PartitionError):
        Partition(rgs)


@given(rgs_partitions())
def test_atoms_round_trip(p):
    assert canonicalize(p.atoms, p.n) == p
    atoms = p.atoms
    assert sorted(itertools.chain.from_iterable(atoms)) == list(range(1, p.n + 1))
    assert [a[0] for a in atoms] == sorted(a[0] for a in atoms)


def test_all_partitions_counts_bell_numbers():
    assert [sum(1 for _ in all_partitions(n)) for n in range(1, 8)] == [1, 2, 5, 15, 52, 203, 877]


# --- join and order ----------------------------------------------------------------

def test_join_examples():
    assert join(Partition((0, 1, 1)), Partition((0, 0, 1))).rgs == (0, 1, 2)
    for e in all_partitions(3):
        assert join(coarsest(3), e) == e


def test_finer_eq_examples():
    assert finer_eq(Partition((0, 0, 0)), Partition((0, 1, 1)))
    assert not finer_eq(Partition((0, 1, 1)), Partition((0, 0, 1)))


def test_size_mismatch():
    with pytest.raises(PartitionError):
        join(coarsest(2), coarsest(3))
    with pytest.raises(PartitionError):
        finer_eq(coarsest(2), coarsest(3))


@settings(max_examples=200)
@given(same_size(2))
def test_join_matches_intersection_oracle(pair):
    d, e = pair
    assert join(d, e) == from_sets(naive_join(to_sets(d), to_sets(e)), d.n)


@settings(max_examples=200)
@given(same_size(2))
def test_finer_eq_matches_oracle(pair):
    d, e = pair
    assert finer_eq(d, e) == naive_finer_eq(to_sets(d), to_sets(e))
    assert finer_eq(d, e) == (join(d, e) == e)


def test_random_idempotence_and_upper_bound():
    rng = random.Random(11)
    for _ in range(50):
        n = rng.randint(1, 8)
        d = Partition(_random_rgs(rng, n))
        e = Partition(_random_rgs(rng, n))
        assert join(d, d) == d
        assert finer_eq(d, join(d, e))


def _random_rgs(rng, n):
    rgs = [0]
    for _ in range(n - 1):
        rgs.append(rng.randint(0, max(rgs) + 1))
    return tuple(rgs)


@given(same_size(3))
def test_lattice_laws(triple):
    a, b, c = triple
    n = a.n
    assert join(a, b) == join(b, a)
    assert join(join(a, b), c) == join(a, join(b, c))
    assert join(a, a) == a
    assert join(coarsest(n), a) == a
    assert finer_eq(coarsest(n), a) and finer_eq(a, finest(n))


@given(same_size(3))
def test_order_axioms(triple):
    a, b, c = triple
    assert finer_eq(a, a)
    if finer_eq(a, b) and finer_eq(b, a):
        assert a == b
    if finer_eq(a, b) and finer_eq(b, c):
        assert finer_eq(a, c)


# --- families -----------------------------------------------------------------------

def test_common_refinement_examples():
    assert common_refinement([Partition((0, 1, 1)), Partition((0, 0, 1))]).rgs == (0, 1, 2)
    assert common_refinement([coarsest(3)]) == coarsest(3)
    with pytest.raises(PartitionError):
        common_refinement([])


@given(st.lists(rgs_partitions(n=6), min_size=1, max_size=5), st.randoms(use_true_random=False))
def test_common_refinement_is_order_free(G, rnd):
    shuffled = list(G)
    rnd.shuffle(shuffled)
    r = common_refinement(G)
    assert r == common_refinement(shuffled)
    assert all(finer_eq(g, r) and join(r, g) == r for g in G)


def test_closure_two_splits():
    G = [Partition((0, 1, 1)), Partition((0, 0, 1))]
    assert closure(G) == {Partition((0, 1, 1)), Partition((0, 0, 1)), Partition((0, 1, 2))}


def test_closure_identity_family():
    assert closure([coarsest(3)]) == {coarsest(3)}


def test_closure_of_single_crossovers():
    splits = single_crossover_splits(4)
    X = closure(splits)
    assert X == layered_closure_partitions(splits)
    # every interval partition except {1,2,3,4}, which only the chain's start adds
    assert X | {coarsest(4)} == set(interval_partitions(4))
    assert len(X | {coarsest(4)}) == 8


def layered_closure_partitions(G):
    return {from_sets(s, G[0].n) for s in layered_closure([to_sets(g) for g in G])}


@settings(max_examples=100)
@given(st.lists(rgs_partitions(n=6), min_size=1, max_size=4))
def test_closure_properties(G):
    X = closure(G)
    assert X == layered_closure_partitions(G)
    assert set(G) <= X
    assert closure_step(X, G) == X
    top = common_refinement(G)
    assert top in X
    assert all(finer_eq(x, top) for x in X)


def test_closure_cap():
    G = [Partition(r) for r in [(0, 1, 1, 1, 1, 1), (0, 0, 1, 1, 1, 1), (0, 0, 0, 1, 1, 1),
                                (0, 0, 0, 0, 1, 1), (0, 0, 0, 0, 0, 1)]]
    with pytest.raises(ResourceLimitError) as info:
        closure(G, cap=10)
    assert info.value.count == 11 and info.value.cap == 10
    assert len(closure(G)) == 31


# --- text syntax ---------------------------------------------------------------------

@pytest.mark.parametrize("text, rgs", [
    ("{1,3}{2}", (0, 1, 0)),
    ("{2} {1, 3}", (0, 1, 0)),
    ("0,1,0", (0, 1, 0)),
    ("{1}{2}{3}", (0, 1, 2)),
    ("{1,2,3}", (0, 0, 0)),
])
def test_parse(text, rgs):
    assert parse_partition(text).rgs == rgs


def test_emitters():
    p = Partition((0, 1, 0))
    assert format_partition(p) == "{1,3}{2}"
    assert str(p) == "{1,3}{2}"
    assert format_rgs(p) == "0,1,0"


@pytest.mark.parametrize("text", ["{1,2", "{1,,2}", "{a}", "1;0", "", "{1}{1}"])
def test_parse_errors(text):
    with pytest.raises(PartitionError):
        parse_partition(text)


def test_parse_error_reports_column():
    with pytest.raises(PartitionSyntaxError) as info:
        parse_partition("{1}x{2}")
    assert info.value.column == 4


def test_parse_checks_expected_size():
    with pytest.raises(PartitionError):
        parse_partition("{1}{2}", n=3)


@given(rgs_partitions())
def test_text_round_trip(p):
    assert parse_partition(format_partition(p)) == p
    assert parse_partition(format_rgs(p)) == p
