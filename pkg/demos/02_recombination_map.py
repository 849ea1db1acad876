"""The recombination map acting on a joint law of alleles.

Two sites with binary alleles start fully linked.  With weight 1/2 the
sites are kept together and with weight 1/2 they are split, so the
linkage decays geometrically towards the product of the marginals.
"""
# %%
from fractions import Fraction

from recombination.chain import PartitionWeights
from recombination.measures import (
    ProductMeasure,
    product_of_marginals,
    total_variation,
    xi_iterate,
)
from recombination.partitions import finest

# %%
mu = ProductMeasure.from_table([["1/2", "0"], ["0", "1/2"]])
rho = PartitionWeights({"{1,2}": "1/2", "{1}{2}": "1/2"})
target = product_of_marginals(mu, finest(2))
print("fixed point:", [[str(x) for x in row] for row in target.table])

# %% Distance to the fixed point halves every step.
for n in range(6):
    d = total_variation(xi_iterate(mu, rho, n), target)
    print(f"n={n}  TV={d}  ratio to 2^-n: {d / Fraction(1, 2**n)}")

# %% Three sites with a random joint law; the iterates settle on the
# product over the common refinement of the support.
rho3 = PartitionWeights({"{1,2,3}": "1/5", "{1}{2,3}": "1/2", "{1,2}{3}": "3/10"})
mu3 = ProductMeasure.random((2, 2, 2), seed=7)
star = product_of_marginals(mu3, rho3.absorbing)
for n in (0, 5, 10, 20):
    print(f"n={n:2d}  TV to fixed point = {float(total_variation(xi_iterate(mu3, rho3, n), star)):.3e}")
