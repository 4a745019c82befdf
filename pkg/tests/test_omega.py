import itertools
import random

import pytest

from helpers import member_oracle, random_lassos, random_nba, thomas_oracle
from smso.corpus import PHI0, PHI1, PHI2, THOMAS
from smso.logic import (
    TRUE, And, Context, Eq, ExistsI, In, Leq, Not, Succ, Zero, parse_formula,
)
from smso.mealy import (
    LassoWord, WidthError, all_lassos, compose, fig1_left, fig1_right, identity, random_machine,
    simulate_lasso,
)
from smso.omega import (
    NBA, atomic_nba, breakpoint_complement, empty, eval_on_lasso, lasso_member, mso_to_nba,
    nba_complement, nba_empty, nba_product, nba_project, nba_witness, rank_complement, sing_nba,
    subst_nba_along_mealy, universal, verify_realizer,
)

L = LassoWord.parse
XY = Context((), ("X", "Y"))


def test_sing():
    s = sing_nba(1, 0)
    assert lasso_member(s, L("1(0)"))
    assert not lasso_member(s, L("(0)"))
    assert not lasso_member(s, L("(1)"))
    w = nba_witness(s)
    assert w is not None and lasso_member(s, w)


def test_atomic_examples():
    le = atomic_nba(Leq("x", "y"), ("x", "y"))
    assert lasso_member(le, LassoWord.zip([LassoWord.position(0), LassoWord.position(1)]))
    assert not lasso_member(le, LassoWord.zip([LassoWord.position(2), LassoWord.position(1)]))
    for w in all_lassos(1, 2, 2):
        assert lasso_member(atomic_nba(TRUE, ("X",)), w)


@pytest.mark.parametrize("atom, truth", [
    (Eq("x", "y"), lambda a, b: a == b),
    (Leq("x", "y"), lambda a, b: a <= b),
    (Succ("x", "y"), lambda a, b: b == a + 1),
    (Zero("x"), lambda a, b: a == 0),
])
def test_atoms_on_positions(atom, truth):
    ctx = Context(("x", "y"), ())
    for a, b in itertools.product(range(5), repeat=2):
        assert eval_on_lasso(atom, ctx, {"x": a, "y": b}) == truth(a, b)


def test_arithmetic_axioms_on_positions():
    ctx = Context(("x", "y", "z"), ())
    axioms = [
        "(le x x)",
        "(implies (and (le x y) (le y z)) (le x z))",
        "(implies (and (le x y) (le y x)) (eq x y))",
        "(or (le x y) (le y x))",
        "(implies (succ x y) (le x y))",
        "(implies (succ x y) (not (eq x y)))",
        "(implies (succ x y) (not (zero y)))",
        "(implies (zero x) (le x y))",
        "(ex-i y (succ x y))",
        "(ex-i y (zero y))",
        "(implies (and (succ x y) (succ x z)) (eq y z))",
    ]
    for text in axioms:
        phi = parse_formula(text)
        for a, b, c in itertools.product(range(5), repeat=3):
            assert eval_on_lasso(phi, ctx, {"x": a, "y": b, "z": c}), (text, a, b, c)


def test_specification_examples():
    assert eval_on_lasso(PHI0, XY, {"X": L("(1)"), "Y": L("(1)")})
    assert not eval_on_lasso(PHI2, XY, {"X": L("(0)"), "Y": L("(1)")})
    assert eval_on_lasso(Zero("x"), Context(("x",), ()), {"x": L("1(0)")})
    y = Context((), ("Y",))
    assert eval_on_lasso(PHI1, y, {"Y": L("(10)")})
    assert not eval_on_lasso(PHI1, y, {"Y": L("(100)")})


def test_thomas_against_direct_oracle():
    nba = mso_to_nba(THOMAS, XY)
    for w in all_lassos(2, 2, 3):
        x, y = w.track(0), w.track(1)
        assert lasso_member(nba, w) == thomas_oracle(x, y)


def test_fig1_right_output_satisfies_spec():
    for x in all_lassos(1, 3, 3):
        y = simulate_lasso(fig1_right(), x)
        assert eval_on_lasso(THOMAS, XY, {"X": x, "Y": y})


def test_complement_examples():
    assert nba_empty(nba_complement(universal(1)))
    inf_ones = NBA(2, frozenset({0}), 1, (((0,), (1,)), ((0,), (1,))), frozenset({1}))
    c = nba_complement(inf_ones)
    assert lasso_member(c, L("1(0)"))
    assert not lasso_member(c, L("(10)"))


def test_complement_xor_sample():
    rng = random.Random(7)
    checked = 0
    for _ in range(60):
        a = random_nba(rng, rng.randint(1, 4), 1)
        c = nba_complement(a)
        for w in random_lassos(rng, 1, 20):
            assert lasso_member(a, w) != lasso_member(c, w)
            checked += 1
    assert checked >= 1000


def test_complement_constructions_agree():
    rng = random.Random(8)
    for _ in range(25):
        a = random_nba(rng, 3, 1)
        r = rank_complement(a)
        for w in random_lassos(rng, 1, 15):
            assert lasso_member(r, w) != member_oracle(a, w)
    # weak automata: every SCC all accepting or all rejecting
    weak = NBA(2, frozenset({0}), 1, (((0,), (0, 1)), ((1,), (1,))), frozenset({1}))
    b = breakpoint_complement(weak)
    for w in all_lassos(1, 3, 3):
        assert lasso_member(b, w) != member_oracle(weak, w)


def test_double_complement():
    # a second rank-based complement of a large first complement is out of desk reach
    rng = random.Random(12)
    done = 0
    while done < 10:
        a = random_nba(rng, 3, 1)
        c = nba_complement(a)
        if c.states > 12:
            continue
        cc = nba_complement(c)
        for w in random_lassos(rng, 1, 20):
            assert lasso_member(cc, w) == member_oracle(a, w)
        done += 1


def test_lasso_member_matches_oracle():
    rng = random.Random(13)
    for _ in range(200):
        a = random_nba(rng, rng.randint(1, 5), 2)
        for w in random_lassos(rng, 2, 5):
            assert lasso_member(a, w) == member_oracle(a, w)


def test_product_and_project():
    rng = random.Random(14)
    for _ in range(30):
        a, b = random_nba(rng, 3, 1), random_nba(rng, 3, 1)
        p, t = nba_product(a, b), nba_product(a, universal(1))
        for w in random_lassos(rng, 1, 20):
            assert lasso_member(p, w) == (member_oracle(a, w) and member_oracle(b, w))
            assert lasso_member(t, w) == member_oracle(a, w)
    some = nba_project(mso_to_nba(In("x", "X"), Context(("x",), ("X",))), 0)
    for w in all_lassos(1, 3, 3):
        assert lasso_member(some, w) == (1 in w.prefix + w.period)
    with pytest.raises(WidthError):
        nba_product(universal(1), universal(2))


def test_phi_and_negation_empty():
    for phi in (PHI0, PHI1, PHI2, THOMAS):
        both = nba_product(mso_to_nba(phi, XY), mso_to_nba(Not(phi), XY))
        assert nba_empty(both)
    assert nba_empty(empty(2))


def test_witness_is_member():
    rng = random.Random(15)
    for _ in range(100):
        a = random_nba(rng, rng.randint(1, 4), 1)
        w = nba_witness(a)
        if w is None:
            assert not any(member_oracle(a, v) for v in all_lassos(1, 3, 3))
        else:
            assert member_oracle(a, w)


def test_subst_along_machine():
    rng = random.Random(16)
    head = mso_to_nba(ExistsI("z", And(Zero("z"), In("z", "X"))), Context((), ("X",)))
    sub = subst_nba_along_mealy(head, fig1_left())
    for w in all_lassos(1, 3, 3):
        # the delay machine always writes 0 first
        assert not lasso_member(sub, w)
    same = subst_nba_along_mealy(head, identity())
    for w in all_lassos(1, 3, 3):
        assert lasso_member(same, w) == lasso_member(head, w)
    for _ in range(5):
        a = random_nba(rng, 3, 1)
        m, n = random_machine(rng, 3), random_machine(rng, 2)
        am = subst_nba_along_mealy(a, m)
        for w in random_lassos(rng, 1, 20):
            assert lasso_member(am, w) == member_oracle(a, simulate_lasso(m, w))
            assert lasso_member(subst_nba_along_mealy(am, n), w) == \
                lasso_member(subst_nba_along_mealy(a, compose(m, n)), w)


def test_verify_examples():
    assert verify_realizer(fig1_right(), THOMAS, ["X"], ["Y"]).valid
    assert verify_realizer(random_machine(random.Random(1), 3), TRUE, ["X"], ["Y"]).valid
    v = verify_realizer(identity(), THOMAS, ["X"], ["Y"])
    assert not v.valid
    assert not thomas_oracle(v.counterexample, v.output)
    assert not eval_on_lasso(THOMAS, XY, {"X": v.counterexample, "Y": v.output})
    assert v.to_json(["X"], ["Y"])["status"] == "counterexample"
    with pytest.raises(WidthError):
        verify_realizer(identity(2), THOMAS, ["X"], ["Y"])


def test_valid_verdict_consistent_with_direct_evaluation():
    rng = random.Random(17)
    for x in random_lassos(rng, 1, 50):
        assert thomas_oracle(x, simulate_lasso(fig1_right(), x))


def test_random_machines_verdicts_agree_with_oracle():
    rng = random.Random(18)
    for _ in range(15):
        m = random_machine(rng, rng.randint(1, 3))
        v = verify_realizer(m, THOMAS, ["X"], ["Y"])
        if v.valid:
            assert all(thomas_oracle(x, simulate_lasso(m, x)) for x in all_lassos(1, 3, 3))
        else:
            assert not thomas_oracle(v.counterexample, v.output)
