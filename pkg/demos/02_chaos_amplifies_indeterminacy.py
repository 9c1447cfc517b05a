# %% [markdown]
# # Chaos turns finite information into indeterminism
#
# The doubling map `x -> 2x mod 1` shifts binary digits left. Starting from 20
# determined digits followed by fair ones, every step promotes an indeterminate
# digit by one place; after 20 steps nothing about the state is determined.

# %%
from fractions import Fraction

from fiqprop import (DoublingMap, Fiq, determined_prefix, ensemble_spread, fiq_interval,
                     fiq_total_information, run_trajectory)

# %%
x0 = Fiq([int(b) for b in "10011101000110111101"])
traj = run_trajectory(x0, DoublingMap, steps=22)
print("step  prefix  width        info")
for r in traj.records:
    n = determined_prefix(r.state)[1]
    print(f"{r.step:>4}  {n:>6}  {str(fiq_interval(r.state).width):<11}  {fiq_total_information(r.state):5.1f}")

# %% [markdown]
# The information that leaves the state is exactly what the map discards.

# %%
discarded = [q for r in traj.records for q in r.discarded_bits]
print(fiq_total_information(traj.final) + fiq_total_information(Fiq(discarded)),
      "==", fiq_total_information(x0))

# %% [markdown]
# ## Ensembles
# Identical initial states, measured after the shifts, spread over outcomes with
# the frequencies of the digits that reached the front.

# %%
x0 = Fiq([1, 0, 1, Fraction(3, 4), Fraction(1, 5)])
hist = ensemble_spread(x0, DoublingMap, steps=3, trials=20_000, rng_seed=5, precision=2)
for outcome in sorted(hist):
    print(outcome, hist[outcome] / 20_000)
print("expected: 00 0.2, 01 0.05, 10 0.6, 11 0.15 (digits 3/4 and 1/5 then fair)")
