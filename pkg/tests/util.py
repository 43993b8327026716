"""Shared helpers for randomized solver tests."""

import itertools
import random

from intprop.intervals import iter_values
from intprop.model import (
    CSP,
    Add,
    Div,
    Lit,
    Mul,
    MultAtom,
    Neg,
    Pow,
    PowerAtom,
    Root,
    Sub,
    Var,
    check_assignment,
)
from intprop.rules import MultRule, build_rules


def random_box(rng, nvars, lo, hi):
    out = []
    for _ in range(nvars):
        a, b = sorted(rng.randint(lo, hi) for _ in range(2))
        out.append((a, b))
    return out


def random_polynomial_constraint(rng, nvars, max_monomials=3, coeff=3,
                                 rhs=8, ops=("=", "<=", "!=")):
    from intprop.model import normalize

    e = None
    for _ in range(rng.randint(1, max_monomials)):
        t = Var(rng.randrange(nvars))
        for _ in range(rng.randint(0, 2)):
            t = Mul(t, Var(rng.randrange(nvars)))
        c = rng.randint(-coeff, coeff)
        if c != 1:
            t = Mul(Lit(c), t)
        e = t if e is None else Add(e, t)
    return normalize(e, rng.choice(ops), Lit(rng.randint(-rhs, rhs)), nvars)


def solutions_in(domains, constraints):
    """Exhaustive solution set of bounded domains (None domain = no solutions)."""
    rngs = []
    for d in domains:
        if d is None:
            return set()
        rngs.append(range(d[0], d[1] + 1))
    out = set()
    for vals in itertools.product(*rngs):
        if all(check_assignment(c, vals) for c in constraints):
            out.add(vals)
    return out


def closed_under(rules, store):
    """True when no rule application changes the store."""
    from intprop.rules import UNCHANGED

    for r in rules:
        probe = list(store)
        if r.apply(probe, None) != UNCHANGED:
            return False
    return True


def mult_rules(division):
    return [MultRule(k, 0, 1, 2, division) for k in (1, 2, 3)]


def iterate_to_closure(rules, store, limit=10000):
    """Apply rules until none changes the store; None on failure."""
    for _ in range(limit):
        changed = False
        for r in rules:
            w = r.apply(store, None)
            if w >= 0:
                if store[w] is None:
                    return None
                changed = True
        if not changed:
            return store
    raise AssertionError("closure iteration did not settle")


# ---------------------------------------------------------------------------
# extended expressions with integer-valued evaluation paths

def random_extended_expr(rng, nvars, depth):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.7:
            return Var(rng.randrange(nvars))
        return Lit(rng.randint(-5, 5))
    k = rng.random()
    a = random_extended_expr(rng, nvars, depth - 1)
    if k < 0.2:
        return Add(a, random_extended_expr(rng, nvars, depth - 1))
    if k < 0.4:
        return Sub(a, random_extended_expr(rng, nvars, depth - 1))
    if k < 0.6:
        return Mul(a, random_extended_expr(rng, nvars, depth - 1))
    if k < 0.7:
        return Neg(a)
    if k < 0.8:
        return Pow(a, rng.randint(1, 3))
    if k < 0.9:
        return Div(a, random_extended_expr(rng, nvars, depth - 1))
    return Root(a, rng.randint(1, 3))


def eval_paths(e, point):
    """All integer values an extended expression can evaluate to.

    Division requires an exact integer quotient, an even root offers both
    signs; paths without an integer value are dropped.
    """
    if isinstance(e, Var):
        return {point[e.id]}
    if isinstance(e, Lit):
        return {e.value}
    if isinstance(e, Neg):
        return {-v for v in eval_paths(e.arg, point)}
    if isinstance(e, Pow):
        return {v ** e.n for v in eval_paths(e.arg, point)}
    if isinstance(e, Root):
        out = set()
        for v in eval_paths(e.arg, point):
            if e.n % 2 == 1:
                r = round(abs(v) ** (1.0 / e.n))
                for c in (r - 1, r, r + 1):
                    s = c if v >= 0 else -c
                    if s ** e.n == v:
                        out.add(s)
            elif v >= 0:
                r = round(v ** (1.0 / e.n))
                for c in (r - 1, r, r + 1):
                    if c >= 0 and c ** e.n == v:
                        out.update((c, -c))
        return out
    if isinstance(e, (Add, Sub, Mul, Div)):
        left = eval_paths(e.left, point)
        right = eval_paths(e.right, point)
        out = set()
        for a in left:
            for b in right:
                if isinstance(e, Add):
                    out.add(a + b)
                elif isinstance(e, Sub):
                    out.add(a - b)
                elif isinstance(e, Mul):
                    out.add(a * b)
                elif b != 0 and a % b == 0:
                    out.add(a // b)
        return out
    raise TypeError(type(e).__name__)
