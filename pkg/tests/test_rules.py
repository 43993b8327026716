import itertools
import random

from intprop.intervals import OpCounters
from intprop.model import (
    Add,
    Div,
    Lit,
    Mul,
    MultAtom,
    Pow,
    PowerAtom,
    Root,
    Var,
    normalize,
    parse,
)
from intprop.rules import (
    UNCHANGED,
    DiseqVarVarRule,
    LinearEqRule,
    LinearIneqRule,
    MultRule,
    ExpoRule,
    RootXRule,
    PolyEqRule,
    PolyIneqRule,
    build_rules,
    eval_int,
    is_bounds_consistent,
)


def constraint_of(text, domains):
    decls = "\n".join("var %s in [%d..%d];" % (name, lo, hi)
                      for name, (lo, hi) in domains)
    csp = parse(decls + "\n" + text)
    return csp, csp.constraints[-1]


class TestEvalInt:
    def test_monomial(self):
        store = [(1, 5), (1, 100)]
        e = Mul(Pow(Var(0), 3), Var(1))
        assert eval_int(e, store) == (1, 12500)

    def test_addition(self):
        assert eval_int(Add(Var(0), Var(1)), [(2, 4), (3, 8)]) == (5, 12)

    def test_literal(self):
        assert eval_int(Lit(7), []) == (7, 7)

    def test_extended_nodes(self):
        # cube root of (x^2 / y^2) style nesting
        e = Root(Div(Pow(Var(0), 2), Pow(Var(1), 2)), 3)
        store = [(2, 3), (1, 1)]
        assert eval_int(e, store) == (2, 2)
        e2 = Root(Pow(Var(0), 2), 2)
        assert eval_int(e2, [(2, 3)]) == (-3, 3)

    def test_counts_operations(self):
        c = OpCounters()
        eval_int(Mul(Pow(Var(0), 3), Var(1)), [(1, 5), (1, 100)], c)
        assert c.exp == 1 and c.multI == 1


class TestLinearRules:
    def test_equality_reduction(self):
        # 100u - 10v = 212 over [1..81]^2, isolate u
        rule = LinearEqRule(((100, 0), (-10, 1)), 212, 0)
        store = [(1, 81), (1, 81)]
        assert rule.apply(store, None) == 0
        assert store[0] == (3, 10)

    def test_equality_fixpoint_reaches_empty(self):
        rules = [LinearEqRule(((100, 0), (-10, 1)), 212, 0),
                 LinearEqRule(((100, 0), (-10, 1)), 212, 1)]
        store = [(1, 81), (1, 81)]
        for _ in range(30):
            changed = False
            for r in rules:
                w = r.apply(store, None)
                if w >= 0:
                    changed = True
                if store[0] is None or store[1] is None:
                    return
            if not changed:
                break
        assert False, "expected the iteration to empty a domain"

    def test_singleton_assignment(self):
        rule = LinearEqRule(((1, 0),), 5, 0)
        store = [(0, 9)]
        assert rule.apply(store, None) == 0
        assert store[0] == (5, 5)

    def test_parity_failure(self):
        rule = LinearEqRule(((2, 0),), 7, 0)
        store = [(0, 9)]
        assert rule.apply(store, None) == 0
        assert store[0] is None

    def test_inequality_shift(self):
        # x1 <= x2 - 1  ==  x1 - x2 <= -1
        rule = LinearIneqRule(((1, 0), (-1, 1)), -1, 0)
        store = [(1, 10 ** 5), (1, 10 ** 5)]
        assert rule.apply(store, None) == 0
        assert store[0] == (1, 99999)

    def test_inequality_on_aux(self):
        # u - x <= 40 with u in [1..10^8], x in [1..100]
        rule = LinearIneqRule(((1, 0), (-1, 1)), 40, 0)
        store = [(1, 10 ** 8), (1, 100)]
        assert rule.apply(store, None) == 0
        assert store[0] == (1, 140)

    def test_inequality_failure(self):
        rule = LinearIneqRule(((-1, 0),), -5, 0)
        store = [(0, 3)]
        assert rule.apply(store, None) == 0
        assert store[0] is None

    def test_unbounded_residue(self):
        # x <= y with y unbounded above leaves x alone
        rule = LinearIneqRule(((1, 0), (-1, 1)), 0, 0)
        store = [(1, 10), (1, None)]
        assert rule.apply(store, None) == UNCHANGED


class TestPolyRules:
    def test_even_root_lifts_lower_bound(self):
        csp, c = constraint_of("constraint x^2 - y = 0;",
                               [("x", (0, 10)), ("y", (25, 100))])
        rule = PolyEqRule(c, 0, 0)
        store = list(csp.domains)
        assert rule.apply(store, None) == 0
        assert store[0] == (5, 10)

    def test_two_product_constraint_makes_no_progress(self):
        csp, c = constraint_of("constraint 100*x*y - 10*y*z = 212;",
                               [("x", (1, 9)), ("y", (1, 9)), ("z", (1, 9))])
        store = list(csp.domains)
        for l, v in ((0, 0), (0, 1), (1, 1), (1, 2)):
            assert PolyEqRule(c, l, v).apply(store, None) == UNCHANGED

    def test_exact_division_on_singleton(self):
        csp, c = constraint_of("constraint x*y = 6;",
                               [("x", (2, 2)), ("y", (1, 10))])
        rule = PolyEqRule(c, 0, 1)
        store = list(csp.domains)
        assert rule.apply(store, None) == 1
        assert store[1] == (3, 3)

    def test_running_inequality_bounds(self):
        csp, c = constraint_of("constraint x^3*y - x <= 40;",
                               [("x", (1, 100)), ("y", (1, 100))])
        rx = PolyIneqRule(c, 0, 0)
        store = list(csp.domains)
        assert rx.apply(store, None) == 0
        assert store[0] == (1, 5)
        assert rx.apply(store, None) == 0
        assert store[0] == (1, 3)
        ry = PolyIneqRule(c, 0, 1)
        assert ry.apply(store, None) == 1
        assert store[1] == (1, 43)

    def test_optimized_inequality_is_tighter(self):
        csp, c = constraint_of("constraint x^3*y - x <= 40;",
                               [("x", (1, 100)), ("y", (1, 100))])
        store = list(csp.domains)
        PolyIneqRule(c, 0, 0).apply(store, None)   # x <= 5
        ry = PolyIneqRule(c, 0, 1, optimized=True)
        assert ry.optimized
        assert ry.apply(store, None) == 1
        assert store[1] == (1, 41)

    def test_optimized_falls_back_when_zero_in_divisor(self):
        csp, c = constraint_of("constraint x^3*y - x <= 40;",
                               [("x", (-2, 100)), ("y", (1, 100))])
        store = list(csp.domains)
        ry = PolyIneqRule(c, 0, 1, optimized=True)
        plain = PolyIneqRule(c, 0, 1)
        store2 = list(csp.domains)
        assert ry.apply(store, None) == plain.apply(store2, None)
        assert store == store2

    def test_optimized_equality_reduces_two_product_example(self):
        csp, c = constraint_of("constraint 100*x*y - 10*y*z = 212;",
                               [("x", (1, 9)), ("y", (1, 9)), ("z", (1, 9))])
        rule = PolyEqRule(c, 0, 0, optimized=True)
        store = list(csp.domains)
        assert rule.apply(store, None) == 0
        assert store[0] == (1, 3)

    def test_optimized_not_used_without_shared_variables(self):
        # product constraint of distinct variables: simplification is a no-op
        csp, c = constraint_of("constraint x*y - z = 0;",
                               [("x", (1, 9)), ("y", (1, 9)), ("z", (1, 81))])
        rule = PolyEqRule(c, 0, 0, optimized=True)
        assert not rule.optimized


class TestMultRules:
    def test_interacting_directions_solve_the_triple(self):
        store = [(1, 20), (9, 11), (155, 161)]
        assert MultRule(2, 0, 1, 2, "strong").apply(store, None) == 0
        assert store[0] == (16, 16)
        assert MultRule(3, 0, 1, 2, "strong").apply(store, None) == 1
        assert store[1] == (10, 10)
        assert MultRule(1, 0, 1, 2, "strong").apply(store, None) == 2
        assert store[2] == (160, 160)

    def test_integer_reasoning_beats_real_relaxation(self):
        store = [(-3, 3), (-1, 1), (1, 2)]
        assert MultRule(2, 0, 1, 2, "strong").apply(store, None) == 0
        assert store[0] == (-2, 2)

    def test_weak_direction(self):
        store = [(1, 20), (9, 11), (155, 161)]
        assert MultRule(2, 0, 1, 2, "weak").apply(store, None) == 0
        assert store[0] == (15, 17)

    def test_variant_names(self):
        assert MultRule(2, 0, 1, 2, "weak").variant == "Mult2w"
        assert MultRule(2, 0, 1, 2, "strong").variant == "Mult2"
        assert MultRule(1, 0, 1, 2, "weak").variant == "Mult1"


class TestExpoRoot:
    def test_root_direction(self):
        store = [(25, 100), (0, 10)]
        assert RootXRule(0, 1, 2).apply(store, None) == 1
        assert store[1] == (5, 10)

    def test_expo_direction(self):
        store = [(-100, 100), (-2, 3)]
        assert ExpoRule(0, 1, 3).apply(store, None) == 0
        assert store[0] == (-8, 27)

    def test_root_failure(self):
        store = [(2, 3), (0, 10)]
        assert RootXRule(0, 1, 2).apply(store, None) == 1
        assert store[1] is None


class TestDiseq:
    def test_bound_trim(self):
        rule = DiseqVarVarRule(1, 0, 0)
        store = [(3, 3), (3, 7)]
        assert rule.apply(store, None) == 1
        assert store[1] == (4, 7)

    def test_failure_on_equal_singletons(self):
        rule = DiseqVarVarRule(1, 0, 0)
        store = [(3, 3), (3, 3)]
        assert rule.apply(store, None) == 1
        assert store[1] is None

    def test_no_singleton_no_change(self):
        rule = DiseqVarVarRule(0, 1, 0)
        store = [(1, 5), (2, 9)]
        assert rule.apply(store, None) == UNCHANGED

    def test_trivially_true_disequalities_get_no_rule(self):
        c = normalize(Mul(Lit(2), Var(0)), "!=", Lit(7), 1)
        assert build_rules([c]) == []

    def test_general_disequality_checks_fixed_points_only(self):
        c = normalize(Add(Mul(Var(0), Var(1)), Var(0)), "!=", Lit(6), 2)
        (rule,) = build_rules([c])
        store = [(2, 2), (1, 5)]
        assert rule.apply(store, None) == UNCHANGED
        store = [(2, 2), (2, 2)]
        assert rule.apply(store, None) == 0
        assert store[0] is None


class TestBuildRules:
    def test_occurrence_counts(self):
        csp, c = constraint_of("constraint x^3*y - x <= 40;",
                               [("x", (1, 100)), ("y", (1, 100))])
        assert len(build_rules([c])) == 3
        assert len(build_rules([MultAtom(0, 1, 2)])) == 3
        assert len(build_rules([MultAtom(0, 0, 2)])) == 2   # squaring
        assert len(build_rules([PowerAtom(0, 1, 3)])) == 2

    def test_partial_rule_list_matches_hand_numbering(self):
        # partial decomposition of x^3*y - x <= 40 gives the five rules
        # 1. u = x^3*y   2. -> x   3. -> y   4. u - x <= 40   5. -> x
        from intprop.decompose import decompose

        csp = parse("""
            var x in [1..100]; var y in [1..100];
            constraint x^3*y - x <= 40;
        """)
        dec = decompose(csp, "pu")
        rules = dec.rules
        assert len(rules) == 5
        u = 2
        assert [r.writes for r in rules] == [u, 0, 1, u, 0]
        assert sorted(rules[0].reads) == [0, 1]
        assert sorted(rules[1].reads) == [1, u]
        assert sorted(rules[2].reads) == [0, u]
        assert sorted(rules[3].reads) == [0]
        assert sorted(rules[4].reads) == [u]


class TestBoundsConsistency:
    def test_known_cases(self):
        assert not is_bounds_consistent([(-2, 1), (-3, 10), (8, 10)], 0, 1, 2)
        assert is_bounds_consistent([(16, 16), (10, 10), (160, 160)], 0, 1, 2)
        assert is_bounds_consistent([(1, 2), (1, 2), (1, 4)], 0, 1, 2)

    def test_matches_witness_enumeration(self):
        # compare against a rational witness search on small boxes
        from fractions import Fraction

        def oracle(dx, dy, dz):
            def ext(av, other, target):
                # a*b = c solvable with b in other, c in target (reals)
                lo = min(av * other[0], av * other[1])
                hi = max(av * other[0], av * other[1])
                return not (hi < target[0] or target[1] < lo)

            for a in (dx[0], dx[1]):
                if not ext(Fraction(a), dy, dz):
                    return False
            for b in (dy[0], dy[1]):
                if not ext(Fraction(b), dx, dz):
                    return False
            ps = [dx[i] * dy[j] for i in (0, 1) for j in (0, 1)]
            for cv in (dz[0], dz[1]):
                if not min(ps) <= cv <= max(ps):
                    return False
            return True

        rng = random.Random(3)
        for _ in range(500):
            box = []
            for _ in range(3):
                a, b = sorted(rng.randint(-6, 6) for _ in range(2))
                box.append((a, b))
            assert is_bounds_consistent(box, 0, 1, 2) == oracle(*box)
