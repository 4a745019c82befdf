"""Hand-written fixture proofs: classical MSO derivations and SMSO derivations of Church specs."""

from __future__ import annotations

from .kernel import (
    Proof, all_intro, and_elim_l, and_elim_r, and_intro, arith, axiom, comprehension, cut, dne,
    eq_elim, ex_elim, ex_intro, glivenko_translate, imp_intro, induction, not_intro, or_intro_l,
    or_intro_r,
)
from .logic import (
    FALSE, And, Context, Eq, ExistsI, ExistsLe, ExistsS, ExistsInf, ForallI, Formula, Implies, Leq, Not, Or,
    In, Succ, Zero, substitute,
)

X, Y, Z = "X", "Y", "Z"
IN = Context((), (X,))

# The running example: Y must contain X, never skip twice, and be 0 infinitely often
# whenever X is.
PHI0 = ForallI("t", Implies(In("t", X), In("t", Y)))
PHI1 = ForallI("t", ForallI("t'", Implies(Succ("t", "t'"), Implies(Not(In("t", Y)), In("t'", Y)))))
PHI2 = Implies(ExistsInf("t", Not(In("t", X))), ExistsInf("t", Not(In("t", Y))))
THOMAS = And(PHI0, And(PHI1, PHI2))

DELTA0 = In("x", X)
DELTA1 = Or(In("x", X), ExistsLe("u", "x", And(Succ("u", "x"), Not(In("u", X)))))


def _delta1(v: str) -> Formula:
    return substitute(DELTA1, "x", v)


# --- MSO ------------------------------------------------------------------------------


def mso_identity() -> Proof:
    """|- all t (Xt -> Xt)"""
    ctx = Context(("t",), (X,))
    return all_intro(imp_intro(axiom(ctx, [In("t", X)])), "t")


def mso_comprehension() -> Proof:
    """|- exists Y all t (Xt -> Yt) by full comprehension on x in X."""
    return comprehension(mso_identity(), ExistsS(Y, PHI0), DELTA0, "x", rule="comp")


def mso_double_negation() -> Proof:
    """|- all t (not not Xt -> Xt)"""
    ctx = Context(("t",), (X,))
    nn = Not(Not(In("t", X)))
    return all_intro(imp_intro(dne(axiom(ctx, [nn]), deterministic=False)), "t")


def mso_induction() -> Proof:
    """x |- exists z (Zero(z) and z <= x), by induction on x."""
    phi = ExistsI("z", And(Zero("z"), Leq("z", "x")))
    base_ctx = Context(("x", "n"), ())
    hb = [Zero("n")]
    base = ex_intro(and_intro(axiom(base_ctx, hb), arith("le-refl", base_ctx, hb, Leq("n", "n"))),
                    substitute(phi, "x", "n"), "n")

    step_ctx = Context(("x", "m", "n"), ())
    hs = [Succ("m", "n"), substitute(phi, "x", "m")]
    inner_ctx = step_ctx.extend("z")
    hi = hs + [And(Zero("z"), Leq("z", "m"))]
    w = axiom(inner_ctx, hi)
    le_mn = arith("succ-le", inner_ctx, hi, Leq("m", "n"), axiom(inner_ctx, hi, Succ("m", "n")))
    le_zn = arith("le-trans", inner_ctx, hi, Leq("z", "n"), and_elim_r(w), le_mn)
    inner = ex_intro(and_intro(and_elim_l(w), le_zn), substitute(phi, "x", "n"), "z")
    step = ex_elim(axiom(step_ctx, hs), inner)
    return induction(base, step, phi, "x", "n", "m", rule="induction")


def mso_successor_nonzero() -> Proof:
    """|- all x all y (Succ(x,y) -> not Zero(y))"""
    ctx = Context(("x", "y"), ())
    h = [Succ("x", "y"), Zero("y")]
    bot = arith("succ-nonzero", ctx, h, FALSE, axiom(ctx, h, Succ("x", "y")), axiom(ctx, h))
    return all_intro(all_intro(imp_intro(not_intro(bot)), "y"), "x")


def mso_equality() -> Proof:
    """|- all x all y (x = y -> Zero(x) -> Zero(y))"""
    ctx = Context(("x", "y"), ())
    h = [Eq("x", "y"), Zero("x")]
    p = eq_elim(axiom(ctx, h), axiom(ctx, h, Eq("x", "y")), Zero("v"), "v")
    return all_intro(all_intro(imp_intro(imp_intro(p)), "y"), "x")


def _phi0_delta1() -> Proof:
    """|- phi0[delta1/Y], using only intuitionistic rules."""
    ctx = Context(("t",), (X,))
    e = ExistsLe("u", "t", And(Succ("u", "t"), Not(In("u", X))))
    return all_intro(imp_intro(or_intro_l(axiom(ctx, [In("t", X)]), e)), "t")


def mso_delta1() -> Proof:
    """|- (phi0 and phi1)[delta1/Y]"""
    ctx = Context(("t", "t'"), (X,))
    h = [Succ("t", "t'"), Not(_delta1("t"))]
    parts = dne(axiom(ctx, h), deterministic=False)  # not Xt and not (exists u ...)
    not_xt = and_elim_l(parts)
    succ = axiom(ctx, h, Succ("t", "t'"))
    le = arith("succ-le", ctx, h, Leq("t", "t'"), succ)
    e = ExistsLe("u", "t'", And(Succ("u", "t'"), Not(In("u", X))))
    back = ex_intro(and_intro(le, and_intro(succ, not_xt)), e, "t")
    step = or_intro_r(back, In("t'", X))
    p1 = all_intro(all_intro(imp_intro(imp_intro(step)), "t'"), "t")
    return and_intro(_phi0_delta1(), p1)


def mso_corpus() -> dict[str, Proof]:
    return {
        "identity": mso_identity(),
        "comprehension": mso_comprehension(),
        "double-negation": mso_double_negation(),
        "induction": mso_induction(),
        "successor-nonzero": mso_successor_nonzero(),
        "equality": mso_equality(),
        "delta1": mso_delta1(),
    }


# --- SMSO -------------------------------------------------------------------------------


def smso_delta0() -> Proof:
    """|- exists Y not not all t (Xt -> Yt), realized by the identity."""
    return comprehension(glivenko_translate(mso_identity()), ExistsS(Y, Not(Not(PHI0))), DELTA0, "x")


def smso_delta1() -> Proof:
    """|- exists Y not not (phi0 and phi1), realized by Y(n) = X(n) or not X(n-1)."""
    goal = ExistsS(Y, Not(Not(And(PHI0, PHI1))))
    return comprehension(glivenko_translate(mso_delta1()), goal, DELTA1, "x")


def smso_delta1_phi0() -> Proof:
    """|- exists Y all t (Xt -> Yt) with Y given by delta1."""
    return comprehension(_phi0_delta1(), ExistsS(Y, PHI0), DELTA1, "x")


def smso_witnesses() -> Proof:
    """|- exists Y exists a exists b (Zero(a) and Succ(a,b)), with Y copied from X."""
    body = ExistsI("a", ExistsI("b", And(Zero("a"), Succ("a", "b"))))
    ze = arith("zero-exists", IN, [], ExistsI("a", Zero("a")))
    ca = IN.extend("a")
    se = arith("succ-exists", ca, [Zero("a")], ExistsI("b", Succ("a", "b")))
    cab = ca.extend("b")
    h = [Zero("a"), Succ("a", "b")]
    conj = and_intro(axiom(cab, h, Zero("a")), axiom(cab, h))
    inner = ex_intro(ex_intro(conj, ExistsI("b", And(Zero("a"), Succ("a", "b"))), "b"), body, "a")
    got = ex_elim(ze, ex_elim(se, inner))
    return ex_intro(got, ExistsS(Y, body), X)


def smso_two_outputs() -> Proof:
    """|- exists Y exists Z (not not all t (Xt -> Yt) and not not all t (Zt -> Xt))"""
    psi_z = ForallI("t", Implies(In("t", Z), In("t", X)))
    lemma = glivenko_translate(mso_identity())  # |- nn all t (Xt -> Xt)
    nn = lemma.sequent.concl
    both = cut(lemma, and_intro(axiom(IN, [nn]), axiom(IN, [nn])))
    inner_goal = ExistsS(Z, And(nn, Not(Not(psi_z))))
    inner = comprehension(both, inner_goal, DELTA0, "x")
    goal = ExistsS(Y, ExistsS(Z, And(Not(Not(PHI0)), Not(Not(psi_z)))))
    return comprehension(inner, goal, DELTA0, "x")


def smso_corpus() -> dict[str, Proof]:
    return {
        "delta0": smso_delta0(),
        "delta1": smso_delta1(),
        "delta1-phi0": smso_delta1_phi0(),
        "witnesses": smso_witnesses(),
        "two-outputs": smso_two_outputs(),
    }


def write_fixtures(directory) -> list[str]:
    """Write the machine, specification and proof fixtures used by the command line."""
    import json
    from pathlib import Path

    from .kernel import proof_to_json
    from .mealy import fig1_left, fig1_right, identity

    root = Path(directory)
    (root / "corpus").mkdir(parents=True, exist_ok=True)
    (root / "mso").mkdir(parents=True, exist_ok=True)
    files = {
        "identity.json": identity().to_json(),
        "fig1left.json": fig1_left().to_json(),
        "fig1right.json": fig1_right().to_json(),
    }
    files.update({f"corpus/{n}.proof": proof_to_json(p) for n, p in smso_corpus().items()})
    files["corpus/ex44.proof"] = files["corpus/delta1.proof"]
    files.update({f"mso/{n}.proof": proof_to_json(p) for n, p in mso_corpus().items()})
    for name, data in files.items():
        (root / name).write_text(json.dumps(data) + "\n")
    (root / "thomas.formula").write_text(str(THOMAS) + "\n")
    return sorted(files) + ["thomas.formula"]
