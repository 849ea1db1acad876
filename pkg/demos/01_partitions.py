"""Set partitions, their join, and the closure of a family.

Run with ``python demos/01_partitions.py``.
"""
# %%
from recombination.partitions import (
    all_partitions,
    closure,
    coarsest,
    common_refinement,
    finer_eq,
    join,
    parse_partition,
    single_crossover_splits,
    sorted_partitions,
)

# %% Partitions parse from block form or from a restricted growth string.
a = parse_partition("{1}{2,3}")
b = parse_partition("0,0,1")
print("a =", a, " rgs", a.rgs)
print("b =", b, " rgs", b.rgs)

# %% The join keeps every nonempty intersection of atoms.
print("a v b =", join(a, b))
print("a finer than coarsest:", finer_eq(coarsest(3), a))
print("coarsest finer than a:", finer_eq(a, coarsest(3)))

# %% There are Bell(n) partitions of n sites.
print("partitions of 1..4:", sum(1 for _ in all_partitions(4)))

# %% Closing the single-crossover splits of 4 sites under join.
G = single_crossover_splits(4)
print("splits:", [str(g) for g in G])
X = closure(G)
print(f"closure has {len(X)} members:")
for p in sorted_partitions(X):
    print("  ", p)
print("common refinement:", common_refinement(G))
