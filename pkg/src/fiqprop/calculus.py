"""Single-case causal propensities: Humphreys' no-go and the law of large numbers.

The Humphreys check treats a cause/effect pair with full Kolmogorov
arithmetic and reports whether reading the conditional propensity causally
(the effect cannot change the tendency of its cause) collapses the model to
causal triviality. Everything is exact rational arithmetic; equality tests
carry no tolerance.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .fiq import Propensity
from .rng import ExactSampler, split_seed


class DegenerateModelError(ValueError):
    """Bayes reversal undefined because P(C) = 0 or P(E) = 0."""


@dataclass(frozen=True)
class CausalModel:
    p_C: Propensity
    p_E_given_C: Propensity
    p_E_given_notC: Propensity

    def __post_init__(self):
        for name in ("p_C", "p_E_given_C", "p_E_given_notC"):
            object.__setattr__(self, name, Propensity(getattr(self, name)))


@dataclass(frozen=True)
class HumphreysVerdict:
    causally_nontrivial: bool
    bayes_reversal: Propensity  # P(C|E)
    contradiction: bool
    p_E: Propensity
    forced_p_E_given_C: Fraction  # P(E|C) as fixed by Bayes once P(C|E) = P(C)


def marginal_effect(model: CausalModel) -> Propensity:
    pc = model.p_C
    return Propensity(pc * model.p_E_given_C + (1 - pc) * model.p_E_given_notC)


def humphreys_check(model: CausalModel) -> HumphreysVerdict:
    p_E = marginal_effect(model)
    if model.p_C == 0:
        raise DegenerateModelError("P(C) = 0: Bayes reversal divides by the cause propensity")
    if p_E == 0:
        raise DegenerateModelError("P(E) = 0: P(C|E) is undefined")
    p_CE = model.p_C * model.p_E_given_C
    reversal = Propensity(p_CE / p_E)
    nontrivial = model.p_E_given_C != p_E
    # causal reading: the effect cannot influence its cause, so P(C|E) = P(C)
    forced = model.p_C * p_E / model.p_C
    contradiction = nontrivial and forced == p_E and forced != model.p_E_given_C
    return HumphreysVerdict(nontrivial, reversal, contradiction, p_E, forced)


@dataclass(frozen=True)
class LLNResult:
    p: Propensity
    n: int
    runs: int
    eps: Fraction
    deviating_runs: int
    deviation_fraction: float
    hoeffding_bound: float


def hoeffding_bound(n: int, eps) -> float:
    return 2.0 * math.exp(-2.0 * n * float(eps) ** 2)


def lln_experiment(p, n: int, runs: int, eps, rng_seed: int) -> LLNResult:
    """Fraction of ``runs`` whose relative frequency over ``n`` trials misses ``p`` by >= eps.

    Run ``r`` draws from seed ``split_seed(rng_seed, r)``.
    """
    p = Propensity(p)
    eps = Fraction(eps)
    if n < 1 or runs < 1:
        raise ValueError("n and runs must be >= 1")
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    bad = 0
    for r in range(runs):
        k = ExactSampler(split_seed(rng_seed, r)).count_successes(p, n)
        if abs(Fraction(k, n) - p) >= eps:
            bad += 1
    return LLNResult(p, n, runs, eps, bad, bad / runs, hoeffding_bound(n, eps))


def binomial_deviation_probability(p, n: int, eps) -> Fraction:
    """Exact P(|K/n - p| >= eps) for K ~ Binomial(n, p)."""
    p, eps = Fraction(p), Fraction(eps)
    total = Fraction(0)
    for k in range(n + 1):
        if abs(Fraction(k, n) - p) >= eps:
            total += math.comb(n, k) * p**k * (1 - p) ** (n - k)
    return total
