# %% [markdown]
# # Two ways potentialities become actual
#
# * measurement-induced: at each step the leading `m` digits are actualized;
# * spontaneous: every indeterminate digit within a window collapses with rate
#   `lambda` per step, whether or not anyone looks.
#
# Both are driven by the same seeded exact sampler, so runs replay exactly.

# %%
from collections import Counter
from fractions import Fraction

from fiqprop import (DoublingMap, ExactSampler, Fiq, MeasurementInduced, Spontaneous,
                     determined_prefix, measure, run_trajectory)

# %%
x0 = Fiq([Fraction(1, 3)] * 6)
for mech in (MeasurementInduced(2), Spontaneous(Fraction(1, 4), 4)):
    traj = run_trajectory(x0, DoublingMap, steps=8, mechanism=mech, rng_seed=42)
    print(mech.describe())
    for line in traj.lines():
        print("   ", line)

# %% [markdown]
# Measuring twice at the same precision gives the same answer without new
# randomness: the first measurement already fixed those digits.

# %%
rng = ExactSampler(7)
first = measure(Fiq(), 3, rng)
second = measure(first.collapsed_state, 3, rng)
print(first.bits, first.consumed_randomness, "|", second.bits, second.consumed_randomness)

# %% [markdown]
# Three fair digits give an unbiased 8-outcome event.

# %%
rng = ExactSampler(8)
counts = Counter(measure(Fiq(), 3, rng).bits for _ in range(40_000))
print({k: round(v / 40_000, 4) for k, v in sorted(counts.items())})

# %% [markdown]
# Spontaneous collapse statistics: how many steps until the leading two digits
# are settled, as a function of the rate.

# %%
for rate in (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2)):
    waits = []
    for seed in range(400):
        traj = run_trajectory(Fiq(), DoublingMap, 40, Spontaneous(rate, 2), seed)
        waits.append(next((r.step for r in traj.records if determined_prefix(r.state)[1] >= 2), 40))
    print(f"lambda={rate}: mean wait {sum(waits) / len(waits):.2f} steps")
