import itertools
import random

import pytest
from hypothesis import given, settings

from helpers import formulas
from smso.corpus import DELTA0, DELTA1
from smso.finite import (
    NotBounded, UnassignedVariable, bounded_to_mealy, compile_mso_finite, eval_finite,
    mealy_to_formula, word_letters,
)
from smso.logic import (
    FALSE, And, Context, ExistsI, ExistsS, In, Not, Or, Succ, Zero, free_sets, is_deterministic,
    is_uniformly_bounded, subformulas,
)
from smso.mealy import (
    LassoWord, behaviorally_equal, fig1_left, fig1_right, identity, random_machine, run_prefix,
    simulate_lasso,
)

XCTX = Context(("x",), ("X",))
SETS = Context((), ("X",))


def set_words(width, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(range(1 << width), repeat=n)


def assigned_words(ctx, max_len):
    """(letters, set word, positions) with every individual placed exactly once."""
    for w in set_words(len(ctx.sets), max_len):
        for pos in itertools.product(range(len(w)), repeat=len(ctx.individuals)):
            indiv = dict(zip(ctx.individuals, pos))
            yield word_letters(ctx, w, indiv), list(w), indiv


def test_eval_finite_examples():
    for w in set_words(1, 3):
        if w:
            assert eval_finite(Zero("x"), SETS, list(w), {"x": 0})
    assert eval_finite(DELTA1, SETS, [0, 0, 0], {"x": 1})
    assert not eval_finite(In("x", "X"), SETS, [1, 0], {"x": 1})


def test_eval_finite_unassigned():
    with pytest.raises(UnassignedVariable):
        eval_finite(Zero("x"), SETS, [0, 0], {})


def test_false_has_empty_language():
    assert compile_mso_finite(FALSE, XCTX).is_empty()


@pytest.mark.parametrize("phi", [In("x", "X"), DELTA1, Not(DELTA1), ExistsI("y", And(Succ("x", "y"), In("y", "X")))])
def test_dfa_matches_eval_finite(phi):
    dfa = compile_mso_finite(phi, XCTX)
    for letters, w, indiv in assigned_words(XCTX, 6):
        assert dfa.accepts(letters) == eval_finite(phi, XCTX, w, indiv)


def test_delta1_language():
    dfa = compile_mso_finite(DELTA1, XCTX)
    for letters, w, indiv in assigned_words(XCTX, 6):
        k = indiv["x"]
        assert dfa.accepts(letters) == (w[k] == 1 or (k >= 1 and w[k - 1] == 0))


@settings(max_examples=25, deadline=None)
@given(formulas(depth=3, inds=("x",), sets=("X",)))
def test_dfa_oracle_equivalence(phi):
    dfa = compile_mso_finite(phi, XCTX)
    for letters, w, indiv in assigned_words(XCTX, 4):
        assert dfa.accepts(letters) == eval_finite(phi, XCTX, w, indiv)


@settings(max_examples=25, deadline=None)
@given(formulas(depth=2, inds=("x",), sets=("X",)), formulas(depth=2, inds=("x",), sets=("X",)))
def test_dfa_complement_and_product(phi, psi):
    a, b = compile_mso_finite(phi, XCTX), compile_mso_finite(psi, XCTX)
    c, p = a.complement(), a.product(b)
    for n in range(5):
        for w in itertools.product(range(4), repeat=n):
            assert c.accepts(w) != a.accepts(w)
            assert p.accepts(w) == (a.accepts(w) and b.accepts(w))


def test_bounded_to_mealy_examples():
    assert behaviorally_equal(bounded_to_mealy(DELTA0, SETS), identity(), 8)
    m = bounded_to_mealy(DELTA1, SETS)
    assert simulate_lasso(m, LassoWord.parse("(0)")) == LassoWord.parse("0(1)")
    assert simulate_lasso(m, LassoWord.parse("(1)")) == LassoWord.parse("(1)")


def test_bounded_to_mealy_rejects_unbounded():
    with pytest.raises(NotBounded):
        bounded_to_mealy(ExistsI("t", Succ("x", "t")), SETS)


@pytest.mark.parametrize("phi", [DELTA0, DELTA1])
def test_representation_property(phi):
    m = bounded_to_mealy(phi, SETS)
    for w in itertools.product((0, 1), repeat=8):
        out = run_prefix(m, w)
        for n in range(8):
            assert out[n] == int(eval_finite(phi, SETS, w[: n + 1], {"x": n}))


def test_mealy_to_formula_fig1_right():
    phi = mealy_to_formula(fig1_right())
    assert is_deterministic(phi) and is_uniformly_bounded(phi, "x")
    assert free_sets(phi) == {"X"}
    state_tracks = {f.var for f in subformulas(phi) if isinstance(f, ExistsS) and f.var.startswith("Q")}
    assert len(state_tracks) == 1
    (q,) = state_tracks
    d = Or(Not(In("t", q)), And(In("t", q), In("t", "X")))
    assert d in set(subformulas(phi))


def test_mealy_to_formula_requires_one_output():
    with pytest.raises(ValueError):
        mealy_to_formula(identity(2))


def test_round_trip_fixtures():
    rng = random.Random(1)
    machines = [identity(), fig1_left(), fig1_right()] + [random_machine(rng, rng.randint(2, 4)) for _ in range(3)]
    for m in machines:
        assert behaviorally_equal(bounded_to_mealy(mealy_to_formula(m), SETS), m, 8)


def test_round_trip_two_inputs():
    m = random_machine(random.Random(4), 3, 2, 1)
    phi = mealy_to_formula(m, ("X", "Z"))
    assert behaviorally_equal(bounded_to_mealy(phi, Context((), ("X", "Z"))), m, 6)
