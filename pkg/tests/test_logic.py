import random

import pytest
from hypothesis import given, settings

from helpers import formulas, random_formula, sexpr_width
from smso.corpus import DELTA0, DELTA1
from smso.logic import (
    TRUE, And, CaptureError, Context, ExistsI, ExistsS, FormulaSyntaxError, In, Leq, Not, Succ, Zero,
    free_vars, is_deterministic, is_uniformly_bounded, moves_shape, parse_formula, relativize,
    substitute, substitute_set, to_sexpr,
)


def test_parse_implies():
    assert parse_formula("(implies (in t X) (in t Y))") == Not(And(In("t", "X"), Not(In("t", "Y"))))


def test_parse_true():
    assert parse_formula("true") == TRUE


def test_parse_exinf():
    expected = Not(ExistsI("z", Not(ExistsI("t", And(Leq("z", "t"), Not(In("t", "X")))))))
    assert parse_formula("(exinf t (not (in t X)))") == expected


@pytest.mark.parametrize("text", ["(in X x)", "(and (zero x)", "(frob x)", "(zero x) junk"])
def test_parse_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_deterministic_examples():
    assert is_deterministic(Not(And(In("x", "X"), Not(In("x", "Y")))))
    assert not is_deterministic(ExistsS("Y", In("x", "Y")))
    assert is_deterministic(And(Leq("x", "y"), Not(ExistsI("t", Succ("t", "x")))))


def test_relativize_examples():
    got = relativize(ExistsI("t", Succ("t", "x")), Leq("y", "x"), "y")
    assert got == ExistsI("t", And(Leq("t", "x"), Succ("t", "x")))
    assert relativize(In("x", "X"), Leq("y", "z"), "y") == In("x", "X")


def test_relativize_rejects_capture():
    with pytest.raises(CaptureError):
        relativize(ExistsI("x", Zero("x")), Leq("y", "x"), "y")


@settings(max_examples=100, deadline=None)
@given(formulas())
def test_relativize_homomorphic(phi):
    theta, y = Leq("y", "w"), "y"
    try:
        r = relativize(phi, theta, y)
    except CaptureError:
        return
    assert relativize(Not(phi), theta, y) == Not(r)
    assert relativize(And(phi, phi), theta, y) == And(r, r)


def test_uniformly_bounded_examples():
    assert is_uniformly_bounded(DELTA0, "x")
    assert is_uniformly_bounded(DELTA1, "x")
    assert not is_uniformly_bounded(ExistsI("t", Succ("x", "t")), "x")


def test_substitute_set_examples():
    assert substitute_set(In("t", "Y"), "Y", In("y", "X"), "y") == In("t", "X")
    assert substitute_set(Not(In("t", "Y")), "Y", DELTA1, "x") == Not(substitute(DELTA1, "x", "t"))
    assert substitute_set(Leq("t", "u"), "Y", DELTA1, "x") == Leq("t", "u")


@settings(max_examples=100, deadline=None)
@given(formulas(sets=("X",)))
def test_substitute_set_absent_is_identity(phi):
    assert "Y" not in free_vars(phi)
    assert substitute_set(phi, "Y", DELTA1, "x") == phi


def test_moves_shape_examples():
    assert moves_shape(In("x", "X")).width == 0
    assert moves_shape(ExistsS("Y", And(In("x", "Y"), Not(In("x", "X"))))).width == 1
    assert moves_shape(ExistsS("X", ExistsI("t", And(In("t", "X"), Not(Zero("t")))))).width == 2


@settings(max_examples=200, deadline=None)
@given(formulas(depth=4))
def test_moves_shape_recursion(phi):
    assert moves_shape(phi).width == sexpr_width(to_sexpr(phi))
    if is_deterministic(phi):
        assert moves_shape(phi).width == 0


@settings(max_examples=200, deadline=None)
@given(formulas(depth=4))
def test_print_parse_roundtrip(phi):
    assert parse_formula(to_sexpr(phi)) == phi


def test_context_rejects_duplicates():
    with pytest.raises(Exception):
        Context(("x", "x"), ())


def test_random_generator_respects_free_variables():
    rng = random.Random(3)
    for _ in range(50):
        phi = random_formula(rng, 3, ("x",), ("X",))
        assert free_vars(phi) <= {"x", "X"}
