# %% [markdown]
# # Humphreys' no-go and the law of large numbers
#
# Reading `P(E|C)` as a causal tendency means the effect cannot change the
# tendency of its cause: `P(C|E) = P(C)`. Feeding that into Bayes' rule forces
# `P(E|C) = P(E)`, which contradicts any genuine causal influence. The check is
# exact rational arithmetic.

# %%
from fractions import Fraction as F

from fiqprop import CausalModel, humphreys_check, lln_experiment
from fiqprop.calculus import binomial_deviation_probability

# %%
for model in (CausalModel(F(1, 2), 1, 0),
              CausalModel(F(1, 3), F(3, 4), F(1, 4)),
              CausalModel(F(1, 3), F(1, 2), F(1, 2))):
    v = humphreys_check(model)
    print(f"P(C)={model.p_C}  P(E|C)={model.p_E_given_C}  P(E)={v.p_E}  P(C|E)={v.bayes_reversal}"
          f"  contradiction={v.contradiction}")

# %% [markdown]
# Propensities still satisfy Bernoulli's law: the fraction of runs whose
# relative frequency misses `p` by at least `eps` goes to zero.

# %%
p, eps = F(1, 2), F(1, 20)
print("n      deviation  exact/Hoeffding")
for n in (10, 100, 1000, 10_000):
    r = lln_experiment(p, n, 500, eps, rng_seed=3)
    ref = float(binomial_deviation_probability(p, n, eps)) if n <= 1000 else r.hoeffding_bound
    print(f"{n:<6} {r.deviation_fraction:<10.3f} {ref:.4f}")
