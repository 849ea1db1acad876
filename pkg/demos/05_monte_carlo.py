"""Seeded simulation against the exact survival curve."""
# %%
import math

from recombination.chain import build_chain, survival_series
from recombination.models import three_site_model
from recombination.montecarlo import estimate_survival, sample_trajectory

rho = three_site_model()
P = build_chain(rho)

# %% One trajectory, reproducible from its seed.
t = sample_trajectory(rho, seed=42, horizon=20)
print("trajectory:", " -> ".join(str(s) for s in t.states), " absorbed at", t.absorption_step)

# %% 100000 trajectories.
est = estimate_survival(rho, 100_000, 12, base_seed=0, chain=P)
exact = survival_series(P, 12)
print(" n  estimate   exact      z")
for e in est:
    p = float(exact[e.n])
    se = math.sqrt(p * (1 - p) / e.samples)
    z = 0.0 if se == 0 else (e.estimate - p) / se
    print(f"{e.n:2d}  {e.estimate:.5f}   {p:.5f}  {z:+.2f}")
