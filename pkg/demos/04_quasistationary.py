"""Survival, the quasi-limiting law, and the Q-process of the three-site model."""
# %%
import itertools

from recombination.chain import build_chain, survival_series
from recombination.models import three_site_model
from recombination.quasistationary import analyze, conditioned_path_probability, q_path_probability

P = build_chain(three_site_model())
r = analyze(P)
print("Delta:", [str(s) for s in r.delta])
print("eta =", r.eta, " F =", [str(s) for s in r.F], " beta0 =", r.beta0)
print("phi:", {str(s): str(r.phi_of(s)) for s in r.transient})
print("limit constant:", r.limit_constant)

# %% eta^-n P(zeta > n) approaches the limit constant at rate about beta0/eta.
surv = survival_series(P, 60)
for n in (10, 20, 40, 60):
    err = abs(r.eta ** -n * surv[n] - r.limit_constant)
    print(f"n={n:2d}  error={float(err):.3e}  bound rate^n={float(r.rate_bound() ** n):.3e}")

# %% The Q-process: the chain conditioned never to be absorbed.
print("Q on", [str(s) for s in r.boundary])
for row in r.Q:
    print("  ", [str(x) for x in row])
start = P.space[P.space.start]
worst = 0.0
for path in itertools.product(r.boundary, repeat=3):
    finite = conditioned_path_probability(P, path, 300)
    worst = max(worst, abs(float(finite) - float(q_path_probability(r.boundary, r.Q, path, start))))
print(f"largest gap between conditioned paths at n=300 and Q: {worst:.1e}")
