import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fiqprop.feasibility import (Behavior, BehaviorError, Context, RationalizeError, behavior_from_fiq,
                                 check_global_space, chsh_value, format_behavior,
                                 functional_max_over_assignments, mixture, parse_behavior,
                                 phase_one, rationalize, rationalize_value, verdict_lines)
from fiqprop.fiq import Fiq, Propensity, ResourceLimitError
from fiqprop.quantum import (StateVector, bipartite_behavior, chsh_optimal_settings, random_basis,
                             random_state, singlet)

from oracles import (CHSH_PATTERNS, chsh_local_bound, continued_fraction_approximant, local_oracle,
                     make_behavior, pr_box, random_behavior, uniform, mix)

F = Fraction


def assert_certificate_valid(beh, verdict):
    if verdict.feasible:
        assert verdict.functional is None
        assert all(w > 0 for w in verdict.weights.values())
        assert sum(verdict.weights.values()) == 1
        assert mixture(beh, verdict.weights) == beh
    else:
        assert verdict.weights is None
        f = verdict.functional
        assert f.evaluate(beh) == f.value
        assert functional_max_over_assignments(f, beh) <= f.bound < f.value


def test_chsh_local_bound_is_two():
    assert {chsh_local_bound(p) for p in CHSH_PATTERNS} == {2}


class TestPhaseOne:
    def test_feasible(self):
        w, y = phase_one([[1, 1, 0], [0, 1, 1]], [F(1), F(1, 2)])
        assert y is None and w[0] + w[1] == 1 and w[1] + w[2] == F(1, 2) and min(w) >= 0

    def test_infeasible_farkas(self):
        A, b = [[1, 1], [1, 1]], [F(1), F(2)]
        w, y = phase_one(A, b)
        assert w is None
        assert all(sum(y[i] * A[i][j] for i in range(2)) <= 0 for j in range(2))
        assert sum(yi * bi for yi, bi in zip(y, b)) > 0

    def test_negative_rhs(self):
        w, y = phase_one([[-1, 0], [0, 1]], [F(-1, 3), F(2)])
        assert w == [F(1, 3), F(2)]


class TestCheck:
    def test_single_context_always_feasible(self):
        beh = Behavior({"X": "abc", "Y": "01"},
                       (Context(("X", "Y"), (F(1, 6), 0, F(1, 3), F(1, 12), F(1, 4), F(1, 6))),))
        v = check_global_space(beh)
        assert v.feasible
        assert_certificate_valid(beh, v)

    def test_pr_box_infeasible(self):
        beh = make_behavior(pr_box())
        v = check_global_space(beh)
        assert not v.feasible
        assert_certificate_valid(beh, v)

    def test_uniform_feasible(self):
        beh = make_behavior(uniform())
        v = check_global_space(beh)
        assert v.feasible
        assert_certificate_valid(beh, v)

    def test_signalling_infeasible(self):
        table = uniform()
        table[0, 1] = (F(1, 2), F(1, 2), 0, 0)  # A0 marginal depends on B's setting
        beh = make_behavior(table)
        assert not check_global_space(beh).feasible

    def test_agrees_with_oracle(self):
        rnd = random.Random(7)
        seen = set()
        for _ in range(150):
            na, nb = rnd.choice([(2, 2), (2, 2), (1, 2), (2, 1), (1, 1)])
            beh = random_behavior(rnd, na, nb)
            v = check_global_space(beh)
            assert v.feasible == local_oracle(beh, na, nb)
            assert_certificate_valid(beh, v)
            seen.add(v.feasible)
        assert seen == {True, False}

    def test_cap(self):
        beh = Behavior({f"M{i}": "01" for i in range(5)},
                       (Context(("M0",), (F(1, 2), F(1, 2))),))
        with pytest.raises(ResourceLimitError):
            check_global_space(beh, cap=16)

    def test_requires_exact(self):
        beh = Behavior({"X": "01"}, (Context(("X",), (0.5, 0.5)),))
        with pytest.raises(BehaviorError):
            check_global_space(beh)

    def test_requires_normalized(self):
        beh = Behavior({"X": "01"}, (Context(("X",), (F(1, 2), F(1, 3))),))
        with pytest.raises(BehaviorError):
            check_global_space(beh)

    @pytest.mark.parametrize("alph,ctx", [
        ({"X": "01"}, Context(("Y",), (F(1),))),
        ({"X": "01"}, Context(("X",), (F(1),))),
        ({"X": "01"}, Context(("X", "X"), (F(1), 0, 0, 0))),
        ({"X": "01"}, Context(("X",), (F(3, 2), F(-1, 2)))),
    ])
    def test_inconsistent_alphabets(self, alph, ctx):
        with pytest.raises(BehaviorError):
            Behavior(alph, (ctx,))

    @given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=16), max_size=6),
           st.integers(1, 4))
    @settings(max_examples=40)
    def test_single_fiq_behaviors_feasible(self, digits, m):
        beh = behavior_from_fiq(Fiq([Propensity(q) for q in digits]), m)
        v = check_global_space(beh)
        assert v.feasible
        assert_certificate_valid(beh, v)


class TestRationalize:
    def test_dyadics_unchanged(self):
        beh = Behavior({"X": "01", "Y": "01"},
                       (Context(("X", "Y"), (0.25, 0.375, 0.3125, 0.0625)),))
        out = rationalize(beh)
        assert out.contexts[0].probs == (F(1, 4), F(3, 8), F(5, 16), F(1, 16))

    def test_snaps_near_half(self):
        beh = Behavior({"X": "01"}, (Context(("X",), (0.499999999, 0.500000001)),))
        assert rationalize(beh, 1e-6).contexts[0].probs == (F(1, 2), F(1, 2))

    def test_residue_goes_to_largest_entry(self):
        # contexts disagree on A's marginal, so entries are rationalized one by one
        beh = Behavior({"A": "01", "B": "01", "C": "01"},
                       (Context(("A", "B"), (0.1, 0.2, 0.3, 0.4000000001)),
                        Context(("A", "C"), (0.5, 0.25, 0.125, 0.125))))
        out = rationalize(beh, 1e-6)
        assert out.contexts[0].probs == (F(1, 10), F(1, 5), F(3, 10), F(2, 5))
        assert all(sum(c.probs) == 1 for c in out.contexts)
        beh = Behavior({"A": "01", "B": "01", "C": "01"},
                       (Context(("A", "B"), (0.1, 0.2, 0.3, 0.4 + 2e-12)),
                        Context(("A", "C"), (0.5, 0.25, 0.125, 0.125))))
        out = rationalize(beh, 1e-12, max_denominator=10**13)
        probs = out.contexts[0].probs
        assert probs[:3] == (F(1, 10), F(1, 5), F(3, 10))
        assert probs[3] == F(2, 5) and sum(probs) == 1

    def test_unreachable_tolerance(self):
        with pytest.raises(RationalizeError):
            rationalize_value(math.pi / 4, 1e-15, 1000)

    def test_chsh_approximants_against_continued_fractions(self):
        sa, sb = chsh_optimal_settings()
        beh = bipartite_behavior(singlet(), sa, sb)
        out = rationalize(beh)
        oracle_table = {}
        for c, e in zip(beh.contexts, out.contexts):
            for x, q in zip(c.probs, e.probs):
                assert abs(q - F(x)) <= F(1e-9)
            x_idx, y_idx = int(c.settings[0][1]), int(c.settings[1][1])
            oracle_table[x_idx, y_idx] = tuple(continued_fraction_approximant(x, 1e-9) for x in c.probs)
        assert chsh_value(make_behavior(oracle_table)) > 2
        assert chsh_value(out) > 2

    def test_keeps_product_behaviors_local(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            psi = StateVector(np.kron(random_state(2, rng).amplitudes, random_state(2, rng).amplitudes))
            sa = [random_basis(2, rng) for _ in range(2)]
            sb = [random_basis(2, rng) for _ in range(2)]
            out = rationalize(bipartite_behavior(psi, sa, sb))
            assert local_oracle(make_behavior({(x, y): out.context(f"A{x}", f"B{y}").probs
                                               for x in range(2) for y in range(2)}), 2, 2)


class TestFileFormat:
    def test_round_trip(self):
        beh = make_behavior(mix([(F(1, 3), pr_box()), (F(2, 3), uniform())]))
        text = format_behavior(beh)
        assert text.splitlines()[0] == "measurements A0=0,1 A1=0,1 B0=0,1 B1=0,1"
        assert parse_behavior(text) == beh

    def test_floats_and_comments(self):
        beh = parse_behavior("# header\nmeasurements X=u,d\nX 0.25 3/4  # trailing\n")
        assert beh.contexts[0].probs == (0.25, F(3, 4)) and not beh.is_exact

    @pytest.mark.parametrize("text", [
        "X 1/2 1/2\n",
        "measurements X=0,1\n",
        "measurements X\nX 1\n",
        "measurements X=0,1\nX 1/2 abc\n",
        "measurements X=0,1\nX 1/2\n",
        "measurements X=0,1\nmeasurements Y=0,1\nX 1 0\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(BehaviorError):
            parse_behavior(text)

    def test_verdict_lines(self):
        lines = verdict_lines(check_global_space(make_behavior(pr_box())))
        assert lines[0] == "feasible\tfalse"
        assert any(line.startswith("margin\t") for line in lines)
        lines = verdict_lines(check_global_space(make_behavior(uniform())))
        assert lines[0] == "feasible\ttrue" and lines[-1].startswith("note\t")
