"""The partition chain behind the recombination map, and where it stops
describing it.

Each step draws one partition from ``rho`` and joins it into the state.
When the support never cuts two atoms of a reachable state, the law of
the state after ``k`` steps gives the iterates as a mixture of
factorizations.  Otherwise the map cuts atoms independently and the
single-draw chain no longer matches.
"""
# %%
from recombination.chain import (
    PartitionWeights,
    build_chain,
    distribution_at,
    several_atoms_split,
    survival_series,
)
from recombination.measures import ProductMeasure, mixture_of_factorizations, xi_iterate

# %% The three-site model.
rho = PartitionWeights({"{1,2,3}": "1/5", "{1}{2,3}": "1/2", "{1,2}{3}": "3/10"})
P = build_chain(rho)
print("states:", [str(s) for s in P.space.states])
print("P =")
for s in P.space.states:
    print(f"  {str(s):12s}", [str(P[s, t]) for t in P.space.states])
print("survival:", [str(x) for x in survival_series(P, 5)])

# %% Mixture of factorizations reproduces the iterates.
mu = ProductMeasure.random((2, 2, 2), seed=3)
print("state with two cuttable atoms:", several_atoms_split(P))
for k in range(5):
    same = xi_iterate(mu, rho, k) == mixture_of_factorizations(distribution_at(P, k), mu, P.space.states)
    print(f"k={k}: iterate == chain mixture: {same}")

# %% A model where two atoms of one state can be cut.
rho4 = PartitionWeights({"{1,2}{3,4}": "3/8", "{1}{2,3}{4}": "5/8"})
P4 = build_chain(rho4)
mu4 = ProductMeasure.random((2, 2, 2, 2), seed=1)
print("\nstate with two cuttable atoms:", several_atoms_split(P4))
for k in range(4):
    same = xi_iterate(mu4, rho4, k) == mixture_of_factorizations(distribution_at(P4, k), mu4, P4.space.states)
    print(f"k={k}: iterate == chain mixture: {same}")
