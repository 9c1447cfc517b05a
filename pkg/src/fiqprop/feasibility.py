"""Global probability space detection.

A behavior is a family of per-context outcome distributions. It admits a
single probability space iff it is a convex mixture of deterministic global
assignments (one outcome for every measurement label). Membership is decided
by an exact rational phase-one simplex; the answer always carries a
certificate, either the mixing weights or a separating linear functional.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .fiq import Fiq, ResourceLimitError

DEFAULT_ASSIGNMENT_CAP = 10**6

ACCESSIBILITY_NOTE = ("a feasible verdict shows that hidden variables exist for these statistics; "
                      "it says nothing about whether they are accessible")


class BehaviorError(ValueError):
    """Inconsistent alphabets, malformed contexts, or a malformed behavior file."""


class RationalizeError(ValueError):
    pass


@dataclass(frozen=True)
class Context:
    settings: tuple
    probs: tuple  # indexed by itertools.product over the settings' alphabets


@dataclass(frozen=True)
class Behavior:
    alphabets: dict  # measurement label -> tuple of outcome labels
    contexts: tuple

    def __post_init__(self):
        object.__setattr__(self, "alphabets",
                           {str(k): tuple(str(o) for o in v) for k, v in self.alphabets.items()})
        ctxs = []
        for c in self.contexts:
            settings = tuple(str(s) for s in c.settings)
            if len(set(settings)) != len(settings):
                raise BehaviorError(f"context {settings} repeats a measurement")
            for s in settings:
                if s not in self.alphabets:
                    raise BehaviorError(f"context {settings} uses undeclared measurement {s!r}")
            if len(c.probs) != self.outcome_count(settings):
                raise BehaviorError(f"context {settings} has {len(c.probs)} entries, "
                                    f"alphabets give {self.outcome_count(settings)}")
            if any(p < 0 for p in c.probs):
                raise BehaviorError(f"context {settings} has a negative entry")
            ctxs.append(Context(settings, tuple(c.probs)))
        object.__setattr__(self, "contexts", tuple(ctxs))

    @property
    def measurements(self):
        return tuple(self.alphabets)

    def outcome_count(self, settings) -> int:
        return math.prod(len(self.alphabets[s]) for s in settings)

    def outcomes(self, settings):
        return list(itertools.product(*(self.alphabets[s] for s in settings)))

    @property
    def is_exact(self) -> bool:
        return all(isinstance(p, (int, Fraction)) for c in self.contexts for p in c.probs)

    def context(self, *settings) -> Context:
        for c in self.contexts:
            if c.settings == settings:
                return c
        raise KeyError(settings)

    def prob(self, settings, outcome):
        c = self.context(*settings)
        return c.probs[self.outcomes(settings).index(tuple(outcome))]

    def assignment_count(self) -> int:
        return math.prod(len(a) for a in self.alphabets.values())


def _simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """Rational with the smallest denominator in ``[lo, hi]`` (0 <= lo <= hi)."""
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / _simplest_between(1 / (hi - fl), 1 / (lo - fl))


def rationalize_value(x, tolerance=1e-9, max_denominator=10**6) -> Fraction:
    """Exact value if its denominator is small enough, else the simplest rational within tolerance."""
    if not isinstance(x, (Fraction, int)) and not math.isfinite(x):
        raise RationalizeError(f"non-finite entry {x!r}")
    exact = Fraction(x)
    if exact.denominator <= max_denominator:
        return exact
    tol = Fraction(tolerance)
    lo, hi = max(exact - tol, Fraction(0)), exact + tol
    if lo > hi:
        raise RationalizeError(f"entry {x!r} is negative beyond tolerance")
    q = _simplest_between(lo, hi)
    if q.denominator > max_denominator:
        raise RationalizeError(f"no rational with denominator <= {max_denominator} "
                               f"within {tolerance} of {x!r}")
    return q


def _marginal_table(behavior: Behavior):
    """Marginals ``g[(S, a)]`` of every measurement subset ``S`` on non-last outcomes ``a``.

    Values are collected from every context containing ``S``, exactly.
    """
    order = {m: i for i, m in enumerate(behavior.measurements)}
    table = {}
    for c in behavior.contexts:
        outs = behavior.outcomes(c.settings)
        pos = sorted(range(len(c.settings)), key=lambda i: order[c.settings[i]])
        for r in range(len(pos) + 1):
            for sub in itertools.combinations(pos, r):
                S = tuple(c.settings[i] for i in sub)
                nonlast = [behavior.alphabets[s][:-1] for s in S]
                for a in itertools.product(*nonlast):
                    total = sum((Fraction(p) for o, p in zip(outs, c.probs)
                                 if all(o[i] == ai for i, ai in zip(sub, a))), Fraction(0))
                    table.setdefault((S, a), []).append(total)
    return table


def _reconstruct(behavior: Behavior, g, settings, outcome) -> Fraction:
    """Inclusion-exclusion over the positions carrying their alphabet's last outcome."""
    order = {m: i for i, m in enumerate(behavior.measurements)}
    alph = [behavior.alphabets[s] for s in settings]
    fixed = {i for i, o in enumerate(outcome) if o != alph[i][-1]}
    free = [i for i in range(len(settings)) if i not in fixed]
    total = Fraction(0)
    for r in range(len(free) + 1):
        for T in itertools.combinations(free, r):
            for a_T in itertools.product(*(alph[i][:-1] for i in T)):
                vals = {i: outcome[i] for i in fixed}
                vals.update(zip(T, a_T))
                idx = sorted(vals, key=lambda i: order[settings[i]])
                key = (tuple(settings[i] for i in idx), tuple(vals[i] for i in idx))
                total += (-1) ** r * g[key]
    return total


def _rationalize_consistent(behavior: Behavior, tolerance, max_denominator):
    """Rationalize subset marginals once and rebuild every context from them.

    Returns None when contexts disagree on a shared marginal (signalling) or
    the rebuilt entries stray from the inputs.
    """
    tol = Fraction(tolerance)
    g = {}
    for key, values in _marginal_table(behavior).items():
        if max(values) - min(values) > tol:
            return None
        g[key] = rationalize_value(sum(values) / len(values), tolerance, max_denominator)
    contexts = []
    for c in behavior.contexts:
        outs = behavior.outcomes(c.settings)
        probs = tuple(_reconstruct(behavior, g, c.settings, o) for o in outs)
        slack = tol * 2 ** len(c.settings)
        if any(p < 0 or abs(p - Fraction(x)) > slack for p, x in zip(probs, c.probs)):
            return None
        contexts.append(Context(c.settings, probs))
    return Behavior(behavior.alphabets, tuple(contexts))


def rationalize(behavior: Behavior, tolerance=1e-9, max_denominator=10**6) -> Behavior:
    """Exact copy of ``behavior`` with every context summing to exactly 1.

    When contexts agree on shared marginals (within ``tolerance``) the subset
    marginals are rationalized and every context is rebuilt from them, so the
    exact behavior keeps that agreement. Otherwise entries are rationalized
    one by one and each context's residue goes to its largest entry (first
    one on ties).
    """
    if behavior.is_exact:
        for c in behavior.contexts:
            if sum(c.probs) != 1:
                break
        else:
            return behavior
    rebuilt = _rationalize_consistent(behavior, tolerance, max_denominator)
    if rebuilt is not None:
        return rebuilt
    contexts = []
    for c in behavior.contexts:
        probs = [rationalize_value(p, tolerance, max_denominator) for p in c.probs]
        residue = 1 - sum(probs)
        if abs(residue) > Fraction(tolerance) * len(probs):
            raise RationalizeError(f"context {c.settings} sums to {float(sum(probs))}, not 1")
        if residue:
            i = max(range(len(probs)), key=lambda k: (probs[k], -k))
            probs[i] += residue
            if probs[i] < 0:
                raise RationalizeError(f"renormalizing context {c.settings} went negative")
        contexts.append(Context(c.settings, tuple(probs)))
    return Behavior(behavior.alphabets, tuple(contexts))


@dataclass(frozen=True)
class SeparatingFunctional:
    """``sum coefficients[k] * p[k] <= bound`` on every global assignment, violated by the behavior."""

    coefficients: dict  # (settings, outcome) -> Fraction
    bound: Fraction
    value: Fraction

    @property
    def margin(self) -> Fraction:
        return self.value - self.bound

    def evaluate(self, behavior: Behavior) -> Fraction:
        return sum((coef * Fraction(behavior.prob(s, o)) for (s, o), coef in self.coefficients.items()),
                   Fraction(0))


@dataclass(frozen=True)
class FeasibilityVerdict:
    feasible: bool
    weights: dict | None = None  # assignment tuple (ordered as measurements) -> Fraction
    functional: SeparatingFunctional | None = None
    measurements: tuple = ()

    @property
    def certificate(self):
        return self.weights if self.feasible else self.functional


def deterministic_assignments(behavior: Behavior, cap: int = DEFAULT_ASSIGNMENT_CAP):
    count = behavior.assignment_count()
    if count > cap:
        raise ResourceLimitError(f"{count} deterministic assignments exceed cap {cap}")
    return list(itertools.product(*behavior.alphabets.values()))


def _rows(behavior: Behavior):
    """Row keys ``(settings, outcome)`` and target values, context by context."""
    keys, rhs = [], []
    for c in behavior.contexts:
        for o, p in zip(behavior.outcomes(c.settings), c.probs):
            keys.append((c.settings, o))
            rhs.append(Fraction(p))
    return keys, rhs


def phase_one(A, b):
    """Exact phase-one simplex for ``A w = b, w >= 0`` (Bland's rule).

    Returns ``(w, None)`` when feasible, else ``(None, y)`` with
    ``y @ A <= 0`` and ``y @ b > 0`` (a Farkas certificate).
    """
    m, n = len(A), len(A[0]) if A else 0
    sign = [(-1 if bi < 0 else 1) for bi in b]
    # tableau [A | I | b] with rows flipped so that b >= 0
    T = [[Fraction(sign[i] * A[i][j]) for j in range(n)]
         + [Fraction(int(i == k)) for k in range(m)] + [sign[i] * Fraction(b[i])]
         for i in range(m)]
    basis = list(range(n, n + m))
    cost = [0] * n + [1] * m
    width = n + m

    def reduced(j):
        return cost[j] - sum(cost[basis[r]] * T[r][j] for r in range(m) if T[r][j])

    while True:
        entering = next((j for j in range(width) if reduced(j) < 0), None)
        if entering is None:
            break
        best = None
        for r in range(m):
            a = T[r][entering]
            if a > 0:
                key = (T[r][-1] / a, basis[r])
                if best is None or key < best[0]:
                    best = (key, r)
        if best is None:  # cannot happen: phase one is bounded below by 0
            raise AssertionError("unbounded phase-one problem")
        r = best[1]
        piv = T[r][entering]
        T[r] = [v / piv for v in T[r]]
        for i in range(m):
            f = T[i][entering]
            if i != r and f:
                Ti, Tr = T[i], T[r]
                T[i] = [vi - f * vr for vi, vr in zip(Ti, Tr)]
        basis[r] = entering

    infeasibility = sum(T[r][-1] for r in range(m) if basis[r] >= n)
    if infeasibility == 0:
        w = [Fraction(0)] * n
        for r in range(m):
            if basis[r] < n:
                w[basis[r]] = T[r][-1]
        return w, None
    # y = c_B B^{-1}; B^{-1} sits in the artificial columns; undo the row flips
    y = [sign[i] * sum(cost[basis[r]] * T[r][n + i] for r in range(m)) for i in range(m)]
    return None, y


def check_global_space(behavior: Behavior, cap: int = DEFAULT_ASSIGNMENT_CAP) -> FeasibilityVerdict:
    """Decide whether ``behavior`` is a mixture of deterministic global assignments."""
    if not behavior.is_exact:
        raise BehaviorError("behavior has inexact entries; rationalize it first")
    for c in behavior.contexts:
        if sum(c.probs) != 1:
            raise BehaviorError(f"context {c.settings} sums to {sum(c.probs)}, not 1")
    names = behavior.measurements
    vertices = deterministic_assignments(behavior, cap)
    keys, rhs = _rows(behavior)
    pos = {name: i for i, name in enumerate(names)}
    idx = [[pos[s] for s in settings] for settings, _ in keys]
    A = [[int(tuple(v[i] for i in ix) == o) for v in vertices]
         for ix, (_, o) in zip(idx, keys)]
    A.append([1] * len(vertices))
    b = rhs + [Fraction(1)]

    w, y = phase_one(A, b)
    if w is not None:
        weights = {v: wi for v, wi in zip(vertices, w) if wi}
        return FeasibilityVerdict(True, weights=weights, measurements=names)

    # y.A <= 0 on every vertex column, y.b > 0: move the normalization term to the bound
    scale = math.lcm(*(yi.denominator for yi in y))
    y = [yi * scale for yi in y]
    coefficients = {k: yi for k, yi in zip(keys, y[:-1]) if yi}
    bound = -y[-1]
    value = sum((yi * bi for yi, bi in zip(y[:-1], rhs)), Fraction(0))
    return FeasibilityVerdict(False, functional=SeparatingFunctional(coefficients, bound, value),
                              measurements=names)


def mixture(behavior: Behavior, weights: dict) -> Behavior:
    """Behavior produced by mixing deterministic assignments with ``weights``."""
    names = behavior.measurements
    contexts = []
    for c in behavior.contexts:
        ix = [names.index(s) for s in c.settings]
        outs = behavior.outcomes(c.settings)
        probs = [Fraction(0)] * len(outs)
        for v, wv in weights.items():
            probs[outs.index(tuple(v[i] for i in ix))] += wv
        contexts.append(Context(c.settings, tuple(probs)))
    return Behavior(behavior.alphabets, tuple(contexts))


def functional_max_over_assignments(functional: SeparatingFunctional, behavior: Behavior,
                                    cap: int = DEFAULT_ASSIGNMENT_CAP) -> Fraction:
    """Largest value the functional takes on a deterministic global assignment."""
    names = behavior.measurements
    best = None
    for v in deterministic_assignments(behavior, cap):
        val = sum((coef for (s, o), coef in functional.coefficients.items()
                   if tuple(v[names.index(x)] for x in s) == o), Fraction(0))
        best = val if best is None else max(best, val)
    return best


def chsh_value(behavior: Behavior, a=("A0", "A1"), b=("B0", "B1")):
    """``E00 + E01 + E10 - E11`` with the first outcome of each alphabet scored +1."""
    def corr(x, y):
        outs = behavior.outcomes((x, y))
        c = behavior.context(x, y)
        ax, by = behavior.alphabets[x], behavior.alphabets[y]
        return sum(p * (1 if ax.index(o[0]) == 0 else -1) * (1 if by.index(o[1]) == 0 else -1)
                   for o, p in zip(outs, c.probs))
    return corr(a[0], b[0]) + corr(a[0], b[1]) + corr(a[1], b[0]) - corr(a[1], b[1])


def behavior_from_fiq(x: Fiq, m: int) -> Behavior:
    """Single-context behavior of measuring the first ``m`` digits of ``x``."""
    names = [f"D{j}" for j in range(1, m + 1)]
    probs = []
    for bits in itertools.product((0, 1), repeat=m):
        p = Fraction(1)
        for j, bit in enumerate(bits, start=1):
            q = x.digit(j)
            p *= q if bit else 1 - q
        probs.append(p)
    return Behavior({n: ("0", "1") for n in names}, (Context(tuple(names), tuple(probs)),))


# behavior text format
#   measurements A0=0,1 A1=0,1 B0=0,1 B1=0,1
#   A0,B0 1/2 0 0 1/2
# entries are ordered lexicographically over the context's outcome alphabets.

def _fmt(p) -> str:
    if isinstance(p, (int, Fraction)):
        p = Fraction(p)
        return f"{p.numerator}/{p.denominator}"
    return repr(float(p))


def format_behavior(behavior: Behavior) -> str:
    head = " ".join(f"{k}={','.join(v)}" for k, v in behavior.alphabets.items())
    lines = [f"measurements {head}"]
    for c in behavior.contexts:
        lines.append(" ".join([",".join(c.settings)] + [_fmt(p) for p in c.probs]))
    return "\n".join(lines) + "\n"


def _parse_entry(tok: str, lineno: int):
    try:
        if any(ch in tok for ch in ".eE") and "/" not in tok:
            return float(tok)
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise BehaviorError(f"line {lineno}: bad probability {tok!r}") from None


def parse_behavior(text: str) -> Behavior:
    alphabets, contexts = None, []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "measurements":
            if alphabets is not None:
                raise BehaviorError(f"line {lineno}: duplicate measurements header")
            alphabets = {}
            for item in parts[1:]:
                name, eq, outs = item.partition("=")
                if not eq or not name or not outs:
                    raise BehaviorError(f"line {lineno}: expected name=o1,o2,... got {item!r}")
                alphabets[name] = tuple(outs.split(","))
            if not alphabets:
                raise BehaviorError(f"line {lineno}: no measurements declared")
            continue
        if alphabets is None:
            raise BehaviorError(f"line {lineno}: context before measurements header")
        settings = tuple(parts[0].split(","))
        contexts.append(Context(settings, tuple(_parse_entry(t, lineno) for t in parts[1:])))
    if alphabets is None:
        raise BehaviorError("missing measurements header")
    if not contexts:
        raise BehaviorError("no contexts")
    return Behavior(alphabets, tuple(contexts))


def verdict_lines(verdict: FeasibilityVerdict) -> list[str]:
    out = [f"feasible\t{str(verdict.feasible).lower()}"]
    if verdict.feasible:
        out.append(f"certificate\tweights\t{','.join(verdict.measurements)}")
        for v, wv in verdict.weights.items():
            out.append(f"weight\t{','.join(v)}\t{wv.numerator}/{wv.denominator}")
    else:
        f = verdict.functional
        out.append("certificate\tseparating_functional")
        for (s, o), coef in f.coefficients.items():
            out.append(f"coef\t{','.join(s)}\t{','.join(o)}\t{coef.numerator}/{coef.denominator}")
        out.append(f"bound\t{f.bound.numerator}/{f.bound.denominator}")
        out.append(f"value\t{f.value.numerator}/{f.value.denominator}")
        out.append(f"margin\t{f.margin.numerator}/{f.margin.denominator}")
    out.append(f"note\t{ACCESSIBILITY_NOTE}")
    return out
