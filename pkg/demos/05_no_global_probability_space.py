# %% [markdown]
# # When statistics do not fit in one probability space
#
# Each measurement context has a perfectly good distribution. Whether all of
# them come from one global space (deterministic hidden variables plus
# ignorance) is a linear feasibility question, solved here exactly.

# %%
import numpy as np

from fiqprop import StateVector, bipartite_behavior, check_global_space, rationalize
from fiqprop.feasibility import behavior_from_fiq, chsh_value, format_behavior, verdict_lines
from fiqprop.fiq import parse_fiq
from fiqprop.quantum import chsh_optimal_settings, singlet

# %% [markdown]
# The singlet at the CHSH-optimal settings reaches `2*sqrt(2)`.

# %%
sa, sb = chsh_optimal_settings()
behavior = bipartite_behavior(singlet(), sa, sb)
print("CHSH (binary64):", chsh_value(behavior))
exact = rationalize(behavior)
print("CHSH (exact):   ", float(chsh_value(exact)))
verdict = check_global_space(exact)
print("\n".join(verdict_lines(verdict)))

# %% [markdown]
# A product state gives local statistics: the solver returns mixing weights.

# %%
psi = StateVector.normalized(np.kron([1, 2j], [2, 1]))
verdict = check_global_space(rationalize(bipartite_behavior(psi, sa, sb)))
print("feasible:", verdict.feasible, "with", len(verdict.weights), "deterministic assignments")

# %% [markdown]
# A single FIQ measured once is always a single context, hence always feasible.

# %%
print(check_global_space(behavior_from_fiq(parse_fiq("0.(1/3)1(3/4)"), 3)).feasible)

# %% [markdown]
# The text format consumed by `fiqprop feasibility --behavior FILE`:

# %%
print(format_behavior(exact))
