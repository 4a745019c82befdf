"""Random generators and independent oracles shared by the tests."""

import random

from hypothesis import strategies as st

from smso.logic import (
    And, Eq, ExistsI, ExistsS, Falsum, In, Leq, Not, Succ, Verum, Zero, bounded,
)
from smso.mealy import LassoWord
from smso.omega import NBA


# --- formulas ----------------------------------------------------------------------


def random_formula(rng, depth, inds=("x", "y"), sets=("X",), fresh_inds=("u", "v"), fresh_sets=("Z",),
                   set_quantifiers=True):
    """Random formula with free variables among inds and sets."""
    def atom():
        k = rng.randrange(7 if inds else 2)
        if k == 0:
            return Verum() if rng.random() < 0.5 else Falsum()
        if k == 1 and sets and inds:
            return In(rng.choice(inds), rng.choice(sets))
        if not inds:
            return Verum()
        x, y = rng.choice(inds), rng.choice(inds)
        return [Eq(x, y), Leq(x, y), Succ(x, y), Zero(x), In(x, rng.choice(sets)) if sets else Zero(y)][k % 5]

    def go(d, inds, sets):
        if d == 0 or rng.random() < 0.25:
            return atom_in(inds, sets)
        k = rng.randrange(4)
        if k == 0:
            return Not(go(d - 1, inds, sets))
        if k == 1:
            return And(go(d - 1, inds, sets), go(d - 1, inds, sets))
        if k == 2 or not set_quantifiers:
            v = rng.choice(fresh_inds)
            return ExistsI(v, go(d - 1, tuple(set(inds) | {v}), sets))
        V = rng.choice(fresh_sets)
        return ExistsS(V, go(d - 1, inds, tuple(set(sets) | {V})))

    def atom_in(i, s):
        nonlocal inds, sets
        saved = inds, sets
        inds, sets = tuple(sorted(i)), tuple(sorted(s))
        try:
            return atom()
        finally:
            inds, sets = saved

    return go(depth, tuple(inds), tuple(sets))


def formulas(depth=3, inds=("x", "y"), sets=("X",), set_quantifiers=True):
    """Hypothesis strategy drawing random formulas from a seed."""
    return st.integers(0, 2**32 - 1).map(
        lambda seed: random_formula(random.Random(seed), depth, inds, sets, set_quantifiers=set_quantifiers))


def random_bounded(rng, depth, x="x", sets=("X",)):
    """Uniformly bounded formula: body with x as the only free individual, relativized to <= x."""
    return bounded(random_formula(rng, depth, (x,), sets, set_quantifiers=False), x)


# --- sexpr width oracle -----------------------------------------------------------------


def sexpr_width(text: str) -> int:
    """Move width computed directly from the printed s-expression."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()

    def read(i):
        if tokens[i] != "(":
            return tokens[i], i + 1
        items, i = [], i + 1
        while tokens[i] != ")":
            item, i = read(i)
            items.append(item)
        return items, i + 1

    def width(t):
        if not isinstance(t, list):
            return 0
        head = t[0]
        if head == "and":
            return width(t[1]) + width(t[2])
        if head in ("ex-i", "ex-s"):
            return 1 + width(t[2])
        return 0

    return width(read(0)[0])


# --- automata ------------------------------------------------------------------------------


def random_nba(rng, states, width, density=0.35, accepting=0.4):
    delta = tuple(
        tuple(tuple(r for r in range(states) if rng.random() < density) for _ in range(1 << width))
        for _ in range(states))
    init = frozenset(q for q in range(states) if rng.random() < 0.4) or frozenset({0})
    acc = frozenset(q for q in range(states) if rng.random() < accepting)
    return NBA(states, init, width, delta, acc)


def member_oracle(a: NBA, w: LassoWord) -> bool:
    """Lasso membership by macro steps: one edge per full pass over the period."""
    current = set(a.init)
    for c in w.prefix:
        current = {r for q in current for r in a.delta[q][c]}
    v = w.period
    # edges q -> (r, visited accepting) reading v once
    macro = {}
    for q in range(a.states):
        frontier = {(q, q in a.accepting)}
        for c in v:
            frontier = {(r, seen or r in a.accepting) for p, seen in frontier for r in a.delta[p][c]}
        macro[q] = frontier
    # reachable macro states
    reach, stack = set(current), list(current)
    while stack:
        q = stack.pop()
        for r, _ in macro[q]:
            if r not in reach:
                reach.add(r)
                stack.append(r)

    def reaches(src, dst):
        seen, stack = {src}, [src]
        while stack:
            q = stack.pop()
            if q == dst:
                return True
            for r, _ in macro[q]:
                if r not in seen:
                    seen.add(r)
                    stack.append(r)
        return False

    return any(good and reaches(r, q) for q in reach for r, good in macro[q])


def random_lassos(rng, width, count, max_prefix=4, max_period=4):
    out = []
    for _ in range(count):
        u = tuple(rng.randrange(1 << width) for _ in range(rng.randrange(max_prefix + 1)))
        v = tuple(rng.randrange(1 << width) for _ in range(rng.randint(1, max_period)))
        out.append(LassoWord(u, v, width))
    return out


# --- the running specification ------------------------------------------------------------


def thomas_oracle(x: LassoWord, y: LassoWord) -> bool:
    """Direct evaluation of: Y contains X, no two consecutive 0s in Y, inf. many 0s in X imply inf. many 0s in Y."""
    horizon = max(len(x.prefix), len(y.prefix)) + 2 * len(x.period) * len(y.period) + 2
    for t in range(horizon):
        if x[t] and not y[t]:
            return False
        if not y[t] and not y[t + 1]:
            return False
    x_inf_zero = 0 in x.period
    y_inf_zero = 0 in y.period
    return y_inf_zero or not x_inf_zero
