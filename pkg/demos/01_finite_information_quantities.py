# %% [markdown]
# # Finite-information quantities
#
# A FIQ stores one propensity per binary digit. Determined digits (propensity
# 0 or 1) carry one bit each; a fair digit (1/2) carries nothing. Everything past
# the explicit digits is fair, so the total information is always finite.

# %%
from fractions import Fraction

from fiqprop import (ExactSampler, Fiq, actualize_digit, binary_entropy, determined_prefix,
                     fiq_interval, fiq_total_information, info_content, parse_fiq)

# %%
x = parse_fiq("0.1011(3/4)(1/3)(1/2)(9/10)")
print("state           ", x)
print("prefix          ", determined_prefix(x))
print("interval        ", fiq_interval(x))
print("total info (bit)", round(fiq_total_information(x), 6))

# %% [markdown]
# Per-digit accounting: information is `1 - H(q)`.

# %%
for j, q in enumerate(x.digits, start=1):
    print(f"digit {j}: q={str(q):>5}  H={binary_entropy(q):.6f}  I={info_content(q):.6f}")

# %% [markdown]
# ## Actualization
# Resolving the leading indeterminate digit samples it exactly against its
# rational propensity; information only grows and the interval shrinks.

# %%
rng = ExactSampler(seed=2024)
y = x
for _ in range(4):
    n = determined_prefix(y)[1]
    y, bit = actualize_digit(y, n + 1, rng)
    print(f"digit {n + 1} -> {bit}   {str(y):<28} width {fiq_interval(y).width}"
          f"  info {fiq_total_information(y):.4f}")
print("uniform draws consumed:", rng.draws)

# %% [markdown]
# Frequencies follow the designed propensity.

# %%
z = Fiq([Fraction(3, 4)])
rng = ExactSampler(1)
ones = sum(actualize_digit(z, 1, rng)[1] for _ in range(20_000))
print("empirical frequency of 1:", ones / 20_000, "(propensity 3/4)")
