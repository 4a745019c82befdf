"""Explicit natural-deduction proofs for MSO and its intuitionistic fragment SMSO.

A proof is a tree of rule applications. Each node states its sequent (ordered
hypotheses, a conclusion and the context of free variables) and carries every
parameter needed to reconstruct the rule instance; the checker never searches.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

from .logic import (
    FALSE, And, CaptureError, Context, Eq, ExistsI, ExistsS, Formula, FormulaError, Leq,
    Not, Succ, Zero, bounded, free_vars, is_deterministic, is_ind_var, is_set_var,
    is_uniformly_bounded, parse_formula, substitute, substitute_set,
)


class Mode(Enum):
    SMSO = "smso"
    MSO = "mso"


@dataclass(frozen=True)
class Sequent:
    hyps: tuple[Formula, ...]
    concl: Formula
    ctx: Context

    def __str__(self) -> str:
        hyps = ", ".join(map(str, self.hyps))
        return f"[{', '.join(self.ctx.tracks)}] {hyps} |- {self.concl}"

    def to_json(self) -> dict:
        return {
            "hyps": [str(h) for h in self.hyps],
            "concl": str(self.concl),
            "ctx": {"individuals": list(self.ctx.individuals), "sets": list(self.ctx.sets)},
        }

    @classmethod
    def from_json(cls, data: dict) -> "Sequent":
        ctx = data.get("ctx", {})
        return cls(tuple(parse_formula(h) for h in data.get("hyps", [])), parse_formula(data["concl"]),
                   Context(tuple(ctx.get("individuals", ())), tuple(ctx.get("sets", ()))))


@dataclass(frozen=True, eq=False)
class Proof:
    rule: str
    params: dict
    premises: tuple["Proof", ...]
    sequent: Sequent

    def __iter__(self):
        yield self
        for p in self.premises:
            yield from p

    def size(self) -> int:
        return sum(1 for _ in self)

    def rules_used(self) -> set[str]:
        return {p.rule for p in self}


# --- errors --------------------------------------------------------------------


class ProofError(Exception):
    def __init__(self, message: str, path: Sequence[int] = ()):
        self.message = message
        self.path = tuple(path)
        super().__init__(self._text())

    def _text(self) -> str:
        where = "/".join(map(str, self.path)) or "root"
        return f"{type(self).__name__} at {where}: {self.message}"

    def at(self, path: Sequence[int]) -> "ProofError":
        self.path = tuple(path)
        self.args = (self._text(),)
        return self


class RuleShapeMismatch(ProofError):
    pass


class SideConditionViolation(ProofError):
    def __init__(self, variable: str, message: str = "", path: Sequence[int] = ()):
        self.variable = variable
        super().__init__(message or f"side condition violated by {variable!r}", path)


class NotDeterministic(ProofError):
    pass


class UnboundedComprehension(ProofError):
    pass


class ModeViolation(ProofError):
    pass


class UnknownRule(ProofError):
    pass


def _need(cond: bool, message: str) -> None:
    if not cond:
        raise RuleShapeMismatch(message)


# --- rule table ---------------------------------------------------------------

LOGICAL = {
    "axiom", "weaken", "exchange", "duplicate", "var-weaken", "cut", "not-elim", "not-intro",
    "and-intro", "and-elim-l", "and-elim-r", "ex-i-intro", "ex-s-intro", "ex-i-elim", "ex-s-elim",
}
ARITHMETIC = {
    "eq-refl", "eq-elim", "le-refl", "le-trans", "le-antisym", "zero-exists", "zero-unique",
    "succ-exists", "succ-inj", "succ-fun", "succ-nonzero", "succ-le", "le-pred",
}
SMSO_ONLY = {"neg-comp", "det-induction", "dne-det", "sync-comp"}
MSO_ONLY = {"comp", "induction", "dne"}
RULES = LOGICAL | ARITHMETIC | SMSO_ONLY | MSO_ONLY

# premises, as (position, atom constructor arguments); conclusion in the same notation
_ARITH_SHAPES: dict[str, tuple[list, Any]] = {
    "le-trans": ([("Leq", "x", "y"), ("Leq", "y", "z")], ("Leq", "x", "z")),
    "le-antisym": ([("Leq", "x", "y"), ("Leq", "y", "x")], ("Eq", "x", "y")),
    "zero-unique": ([("Zero", "x"), ("Zero", "y")], ("Eq", "x", "y")),
    "succ-inj": ([("Succ", "y", "x"), ("Succ", "z", "x")], ("Eq", "y", "z")),
    "succ-fun": ([("Succ", "x", "y"), ("Succ", "x", "z")], ("Eq", "y", "z")),
    "succ-nonzero": ([("Succ", "x", "y"), ("Zero", "y")], ("False",)),
    "succ-le": ([("Succ", "x", "y")], ("Leq", "x", "y")),
    "le-pred": ([("Succ", "y", "v"), ("Leq", "x", "v"), ("NotEq", "x", "v")], ("Leq", "x", "y")),
}
_ATOM_CLS = {"Leq": Leq, "Eq": Eq, "Zero": Zero, "Succ": Succ}


def _match(shape: tuple, f: Formula, env: dict) -> bool:
    kind, names = shape[0], shape[1:]
    if kind == "False":
        return f == FALSE
    if kind == "NotEq":
        if not isinstance(f, Not):
            return False
        return _match(("Eq",) + names, f.body, env)
    cls = _ATOM_CLS[kind]
    if not isinstance(f, cls):
        return False
    vals = (f.x,) if cls is Zero else (f.x, f.y)
    for n, v in zip(names, vals):
        if env.setdefault(n, v) != v:
            return False
    return True


# --- checking ------------------------------------------------------------------


def check_proof(p: Proof, mode: Mode | str = Mode.SMSO) -> Sequent:
    """Verify p bottom-up and return its end-sequent."""
    mode = Mode(mode) if isinstance(mode, str) else mode
    _check(p, mode, [])
    return p.sequent


def _check(p: Proof, mode: Mode, path: list[int]) -> None:
    for i, q in enumerate(p.premises):
        _check(q, mode, path + [i])
    try:
        _check_node(p, mode)
    except ProofError as e:
        raise e.at(path)
    except CaptureError as e:
        raise SideConditionViolation(e.variable, str(e)).at(path)
    except FormulaError as e:
        raise RuleShapeMismatch(str(e)).at(path)


def _check_node(p: Proof, mode: Mode) -> None:
    s, P, prm, r = p.sequent, [q.sequent for q in p.premises], p.params, p.rule
    if r not in RULES:
        raise UnknownRule(f"unknown rule {r!r}")
    if mode is Mode.SMSO and r in MSO_ONLY:
        raise ModeViolation(f"rule {r!r} is not available in SMSO")
    for f in s.hyps + (s.concl,):
        missing = free_vars(f) - set(s.ctx.tracks)
        _need(not missing, f"free variables {sorted(missing)} not in context")

    def arity(n):
        _need(len(P) == n, f"rule {r!r} takes {n} premises, got {len(P)}")

    def same(q, concl=None):
        _need(q.ctx == s.ctx, "premise context differs from conclusion context")
        _need(q.hyps == s.hyps, "premise hypotheses differ from conclusion hypotheses")
        if concl is not None:
            _need(q.concl == concl, f"expected premise conclusion {concl}, got {q.concl}")

    if r == "axiom":
        arity(0)
        i = prm.get("index", len(s.hyps) - 1)
        _need(0 <= i < len(s.hyps), "axiom index out of range")
        _need(s.hyps[i] == s.concl, "axiom conclusion is not the indexed hypothesis")
    elif r == "weaken":
        arity(1)
        i = prm["index"]
        _need(0 <= i < len(s.hyps), "weakening index out of range")
        _need(P[0].hyps == s.hyps[:i] + s.hyps[i + 1:], "weakening premise hypotheses mismatch")
        _need(P[0].concl == s.concl and P[0].ctx == s.ctx, "weakening changes the conclusion")
    elif r == "exchange":
        arity(1)
        perm = list(prm["perm"])
        _need(sorted(perm) == list(range(len(s.hyps))), "exchange needs a permutation")
        _need(P[0].hyps == tuple(s.hyps[k] for k in perm), "exchange premise hypotheses mismatch")
        _need(P[0].concl == s.concl and P[0].ctx == s.ctx, "exchange changes the conclusion")
    elif r == "duplicate":
        arity(1)
        i = prm["index"]
        _need(0 <= i < len(s.hyps), "duplicate index out of range")
        _need(P[0].hyps == s.hyps + (s.hyps[i],), "duplicate premise hypotheses mismatch")
        _need(P[0].concl == s.concl and P[0].ctx == s.ctx, "duplicate changes the conclusion")
    elif r == "var-weaken":
        arity(1)
        _need(P[0].hyps == s.hyps and P[0].concl == s.concl, "variable weakening changes the sequent")
        _need(set(P[0].ctx.tracks) <= set(s.ctx.tracks), "premise context is not contained in the conclusion's")
    elif r == "cut":
        arity(2)
        same(P[0])
        _need(P[1].ctx == s.ctx and P[1].hyps == s.hyps + (P[0].concl,), "cut right premise hypotheses mismatch")
        _need(P[1].concl == s.concl, "cut conclusion mismatch")
    elif r == "not-elim":
        arity(2)
        same(P[0])
        same(P[1], Not(P[0].concl))
        _need(s.concl == FALSE, "negation elimination concludes false")
    elif r == "not-intro":
        arity(1)
        _need(isinstance(s.concl, Not), "negation introduction concludes a negation")
        _need(P[0].ctx == s.ctx and P[0].hyps == s.hyps + (s.concl.body,), "premise must assume the negated formula")
        _need(P[0].concl == FALSE, "premise must conclude false")
    elif r == "and-intro":
        arity(2)
        _need(isinstance(s.concl, And), "conjunction expected")
        same(P[0], s.concl.left)
        same(P[1], s.concl.right)
    elif r in ("and-elim-l", "and-elim-r"):
        arity(1)
        same(P[0])
        c = P[0].concl
        _need(isinstance(c, And), "premise must be a conjunction")
        _need(s.concl == (c.left if r == "and-elim-l" else c.right), "conjunction elimination mismatch")
    elif r in ("ex-i-intro", "ex-s-intro"):
        arity(1)
        cls = ExistsI if r == "ex-i-intro" else ExistsS
        _need(isinstance(s.concl, cls), "existential of the right sort expected")
        w = prm["witness"]
        _need((is_ind_var if cls is ExistsI else is_set_var)(w), "witness of the wrong sort")
        _need(w in s.ctx.tracks, f"witness {w!r} not in context")
        same(P[0], substitute(s.concl.body, s.concl.var, w))
    elif r in ("ex-i-elim", "ex-s-elim"):
        arity(2)
        cls = ExistsI if r == "ex-i-elim" else ExistsS
        same(P[0])
        ex = P[0].concl
        _need(isinstance(ex, cls), "first premise must be an existential of the right sort")
        v = prm.get("eigen", ex.var)
        _need((is_ind_var if cls is ExistsI else is_set_var)(v), "eigenvariable of the wrong sort")
        if v in s.ctx.tracks:
            raise SideConditionViolation(v, f"eigenvariable {v!r} occurs in the context of the conclusion")
        _need(P[1].ctx == s.ctx.extend(v), "second premise context must extend the conclusion's by the eigenvariable")
        _need(P[1].hyps == s.hyps + (substitute(ex.body, ex.var, v),), "second premise hypotheses mismatch")
        _need(P[1].concl == s.concl, "second premise conclusion mismatch")
    elif r == "eq-refl":
        arity(0)
        _need(isinstance(s.concl, Eq) and s.concl.x == s.concl.y, "x = x expected")
    elif r == "le-refl":
        arity(0)
        _need(isinstance(s.concl, Leq) and s.concl.x == s.concl.y, "x <= x expected")
    elif r == "zero-exists":
        arity(0)
        c = s.concl
        _need(isinstance(c, ExistsI) and c.body == Zero(c.var), "exists y Zero(y) expected")
    elif r == "succ-exists":
        arity(0)
        c = s.concl
        _need(isinstance(c, ExistsI) and isinstance(c.body, Succ) and c.body.y == c.var
              and c.body.x != c.var, "exists y Succ(x, y) expected")
    elif r == "eq-elim":
        arity(2)
        same(P[0])
        same(P[1])
        eq = P[1].concl
        _need(isinstance(eq, Eq), "second premise must be an equation")
        tmpl, x = prm["template"], prm["var"]
        _need(P[0].concl == substitute(tmpl, x, eq.x), "first premise is not the template at the left side")
        _need(s.concl == substitute(tmpl, x, eq.y), "conclusion is not the template at the right side")
    elif r in _ARITH_SHAPES:
        prem_shapes, concl_shape = _ARITH_SHAPES[r]
        arity(len(prem_shapes))
        env: dict = {}
        for q, sh in zip(P, prem_shapes):
            same(q)
            _need(_match(sh, q.concl, env), f"premise {q.concl} does not fit rule {r!r}")
        _need(_match(concl_shape, s.concl, env), f"conclusion {s.concl} does not fit rule {r!r}")
    elif r in ("comp", "neg-comp", "sync-comp"):
        arity(1)
        c = s.concl
        if r == "neg-comp":
            _need(isinstance(c, Not) and isinstance(c.body, Not), "negative comprehension concludes not not exists")
            c = c.body.body
        _need(isinstance(c, ExistsS), "set existential expected")
        y = prm["var"]
        phi = _comprehension_formula(prm)
        if r == "sync-comp" and not is_uniformly_bounded(phi, y):
            raise UnboundedComprehension(f"{phi} is not uniformly bounded by {y!r}")
        missing = free_vars(phi) - {y} - set(s.ctx.tracks)
        _need(not missing, f"comprehension formula has free variables {sorted(missing)} outside the context")
        same(P[0], substitute_set(c.body, c.var, phi, y))
    elif r in ("induction", "det-induction"):
        arity(2)
        phi, x, z, y = s.concl, prm["var"], prm["zero"], prm["pred"]
        if r == "det-induction" and not is_deterministic(phi):
            raise NotDeterministic(f"{phi} is not deterministic")
        for v in (z, y):
            if v in s.ctx.tracks:
                raise SideConditionViolation(v, f"{v!r} occurs in the context of the conclusion")
        if z == y:
            raise SideConditionViolation(z, "induction variables must be distinct")
        _need(P[0].ctx == s.ctx.extend(z) and P[0].hyps == s.hyps + (Zero(z),), "base premise shape mismatch")
        _need(P[0].concl == substitute(phi, x, z), "base premise conclusion mismatch")
        _need(P[1].ctx == s.ctx.extend(y, z), "step premise context mismatch")
        _need(P[1].hyps == s.hyps + (Succ(y, z), substitute(phi, x, y)), "step premise hypotheses mismatch")
        _need(P[1].concl == substitute(phi, x, z), "step premise conclusion mismatch")
    elif r in ("dne", "dne-det"):
        arity(1)
        same(P[0], Not(Not(s.concl)))
        if r == "dne-det" and not is_deterministic(s.concl):
            raise NotDeterministic(f"{s.concl} is not deterministic")


def _comprehension_formula(prm: dict) -> Formula:
    if "phi_hat" in prm:
        return prm["phi_hat"]
    if "phi" in prm:
        return prm["phi"]
    return bounded(prm["body"], prm["var"])


# --- serialization ---------------------------------------------------------------

_FORMULA_PARAMS = {"template", "phi_hat", "phi", "body"}


def proof_to_json(p: Proof) -> dict:
    return {
        "rule": p.rule,
        "params": {k: (str(v) if k in _FORMULA_PARAMS else v) for k, v in p.params.items()},
        "premises": [proof_to_json(q) for q in p.premises],
        "sequent": p.sequent.to_json(),
    }


def proof_from_json(data: dict | str) -> Proof:
    if isinstance(data, str):
        data = json.loads(data)
    params = {k: (parse_formula(v) if k in _FORMULA_PARAMS else v) for k, v in data.get("params", {}).items()}
    return Proof(data["rule"], params, tuple(proof_from_json(q) for q in data.get("premises", [])),
                 Sequent.from_json(data["sequent"]))


# --- builders --------------------------------------------------------------------
# Each builder computes the stated sequent; check_proof re-derives it independently.


def _node(rule, premises, hyps, concl, ctx, **params) -> Proof:
    return Proof(rule, params, tuple(premises), Sequent(tuple(hyps), concl, ctx))


def axiom(ctx: Context, hyps: Sequence[Formula], phi: Formula | None = None) -> Proof:
    hyps = tuple(hyps)
    if phi is None:
        return _node("axiom", [], hyps, hyps[-1], ctx, index=len(hyps) - 1)
    i = len(hyps) - 1 - hyps[::-1].index(phi)
    return _node("axiom", [], hyps, phi, ctx, index=i)


def weaken(p: Proof, phi: Formula, index: int | None = None) -> Proof:
    s = p.sequent
    i = len(s.hyps) if index is None else index
    return _node("weaken", [p], s.hyps[:i] + (phi,) + s.hyps[i:], s.concl, s.ctx, index=i)


def weaken_to(p: Proof, hyps: Sequence[Formula]) -> Proof:
    """Weaken p until its hypotheses are hyps (p's hypotheses must be a subsequence)."""
    hyps = tuple(hyps)
    have = p.sequent.hyps
    j = 0
    for i, h in enumerate(hyps):
        if j < len(have) and have[j] == h:
            j += 1
        else:
            p = weaken(p, h, i)
    if p.sequent.hyps != hyps:
        raise ValueError("hypotheses are not a subsequence of the target")
    return p


def exchange(p: Proof, perm: Sequence[int]) -> Proof:
    """perm[k] is the position in the conclusion of the premise's k-th hypothesis."""
    s = p.sequent
    hyps: list = [None] * len(perm)
    for k, pos in enumerate(perm):
        hyps[pos] = s.hyps[k]
    return _node("exchange", [p], hyps, s.concl, s.ctx, perm=list(perm))


def move_last(p: Proof, i: int) -> Proof:
    """Move hypothesis i to the end."""
    n = len(p.sequent.hyps)
    if i == n - 1:
        return p
    perm = [k if k < i else k - 1 for k in range(n)]
    perm[i] = n - 1
    return exchange(p, perm)


def move_from_last(p: Proof, i: int) -> Proof:
    """Move the last hypothesis to position i."""
    n = len(p.sequent.hyps)
    if i == n - 1:
        return p
    perm = [k if k < i else k + 1 for k in range(n - 1)] + [i]
    return exchange(p, perm)


def duplicate(p: Proof, index: int) -> Proof:
    s = p.sequent
    return _node("duplicate", [p], s.hyps[:-1], s.concl, s.ctx, index=index)


def var_weaken(p: Proof, ctx: Context) -> Proof:
    s = p.sequent
    return _node("var-weaken", [p], s.hyps, s.concl, ctx)


def cut(p1: Proof, p2: Proof) -> Proof:
    s = p1.sequent
    return _node("cut", [p1, p2], s.hyps, p2.sequent.concl, s.ctx)


def not_elim(p1: Proof, p2: Proof) -> Proof:
    s = p1.sequent
    return _node("not-elim", [p1, p2], s.hyps, FALSE, s.ctx)


def not_intro(p: Proof) -> Proof:
    s = p.sequent
    return _node("not-intro", [p], s.hyps[:-1], Not(s.hyps[-1]), s.ctx)


def and_intro(p1: Proof, p2: Proof) -> Proof:
    s = p1.sequent
    return _node("and-intro", [p1, p2], s.hyps, And(s.concl, p2.sequent.concl), s.ctx)


def and_elim_l(p: Proof) -> Proof:
    s = p.sequent
    return _node("and-elim-l", [p], s.hyps, s.concl.left, s.ctx)


def and_elim_r(p: Proof) -> Proof:
    s = p.sequent
    return _node("and-elim-r", [p], s.hyps, s.concl.right, s.ctx)


def ex_intro(p: Proof, goal: Formula, witness: str) -> Proof:
    s = p.sequent
    rule = "ex-i-intro" if isinstance(goal, ExistsI) else "ex-s-intro"
    return _node(rule, [p], s.hyps, goal, s.ctx, witness=witness)


def ex_elim(p1: Proof, p2: Proof, eigen: str | None = None) -> Proof:
    s = p1.sequent
    rule = "ex-i-elim" if isinstance(s.concl, ExistsI) else "ex-s-elim"
    params = {} if eigen is None or eigen == s.concl.var else {"eigen": eigen}
    return Proof(rule, params, (p1, p2), Sequent(s.hyps, p2.sequent.concl, s.ctx))


def arith(rule: str, ctx: Context, hyps: Sequence[Formula], concl: Formula, *premises: Proof) -> Proof:
    return _node(rule, premises, hyps, concl, ctx)


def eq_elim(p1: Proof, p2: Proof, template: Formula, var: str) -> Proof:
    s = p1.sequent
    return _node("eq-elim", [p1, p2], s.hyps, substitute(template, var, p2.sequent.concl.y), s.ctx,
                 template=template, var=var)


def comprehension(p: Proof, goal: Formula, phi: Formula, var: str, rule: str = "sync-comp") -> Proof:
    s = p.sequent
    key = "phi_hat" if rule == "sync-comp" else "phi"
    concl = Not(Not(goal)) if rule == "neg-comp" else goal
    return _node(rule, [p], s.hyps, concl, s.ctx, **{key: phi, "var": var})


def induction(base: Proof, step: Proof, goal: Formula, var: str, zero: str, pred: str,
              rule: str = "det-induction") -> Proof:
    s = base.sequent
    ctx = Context(tuple(v for v in s.ctx.individuals if v != zero), s.ctx.sets)
    return _node(rule, [base, step], s.hyps[:-1], goal, ctx, var=var, zero=zero, pred=pred)


def dne(p: Proof, deterministic: bool = True) -> Proof:
    s = p.sequent
    return _node("dne-det" if deterministic else "dne", [p], s.hyps, s.concl.body.body, s.ctx)


# --- admissible rules as macros ----------------------------------------------------


def dn_hyp_false(p: Proof) -> Proof:
    """From G, A |- false derive G, not not A |- false."""
    s = p.sequent
    a = s.hyps[-1]
    neg = not_intro(p)  # G |- not A
    w = weaken(neg, Not(Not(a)))
    return not_elim(w, axiom(s.ctx, s.hyps[:-1] + (Not(Not(a)),)))


def neg_swap(p: Proof) -> Proof:
    """From G, phi |- not psi derive G, psi |- not phi."""
    s = p.sequent
    phi, psi = s.hyps[-1], s.concl.body
    g = s.hyps[:-1]
    w = weaken(p, psi, len(g))  # G, psi, phi |- not psi
    bot = not_elim(axiom(s.ctx, g + (psi, phi), psi), w)
    return not_intro(bot)


def dn_intro(p: Proof) -> Proof:
    """From G |- phi derive G |- not not phi."""
    s = p.sequent
    w = weaken(p, Not(s.concl))
    return not_intro(not_elim(w, axiom(s.ctx, s.hyps + (Not(s.concl),))))


def dn_intro_hyp(ctx: Context, hyps: Sequence[Formula]) -> Proof:
    """G, phi |- not not phi."""
    return dn_intro(axiom(ctx, hyps))


def contrapose(p: Proof) -> Proof:
    """From G, phi |- psi derive G, not psi |- not phi."""
    s = p.sequent
    g, phi, psi = s.hyps[:-1], s.hyps[-1], s.concl
    w = weaken(p, Not(psi), len(g))  # G, not psi, phi |- psi
    bot = not_elim(w, axiom(s.ctx, g + (Not(psi), phi), Not(psi)))
    return not_intro(bot)


def triple_neg(ctx: Context, hyps: Sequence[Formula], phi: Formula) -> Proof:
    """G, not not not phi |- not phi."""
    return contrapose(dn_intro_hyp(ctx, tuple(hyps) + (phi,)))


def dn_hyp(p: Proof) -> Proof:
    """From G, psi |- not phi derive G, not not psi |- not phi."""
    s = p.sequent
    g, psi, phi = s.hyps[:-1], s.hyps[-1], s.concl.body
    w = weaken(p, phi)  # G, psi, phi |- not phi
    bot = not_elim(axiom(s.ctx, g + (psi, phi)), w)  # G, psi, phi |- false
    bot = move_last(bot, len(g))  # G, phi, psi |- false
    bot = dn_hyp_false(bot)  # G, phi, nn psi |- false
    bot = move_last(bot, len(g))  # G, nn psi, phi |- false
    return not_intro(bot)


def dn_lift(p: Proof, count: int = 1) -> Proof:
    """From G, phi_1..phi_n |- psi derive G, nn phi_1..nn phi_n |- nn psi (n = count)."""
    s = p.sequent
    n = len(s.hyps)
    w = weaken(p, Not(s.concl))
    bot = not_elim(w, axiom(s.ctx, s.hyps + (Not(s.concl),)))  # ..., not psi |- false
    for i in range(n - count, n):
        bot = move_last(bot, i)
        bot = dn_hyp_false(bot)
        bot = move_from_last(bot, i)
    return not_intro(bot)


def imp_intro(p: Proof) -> Proof:
    """From G, psi |- phi derive G |- psi -> phi."""
    s = p.sequent
    g, psi, phi = s.hyps[:-1], s.hyps[-1], s.concl
    h = And(psi, Not(phi))
    hyps = g + (h,)
    left = and_elim_l(axiom(s.ctx, hyps))
    got = cut(left, weaken(p, h, len(g)))
    right = and_elim_r(axiom(s.ctx, hyps))
    return not_intro(not_elim(got, right))


def imp_elim(p1: Proof, p2: Proof, deterministic: bool = True) -> Proof:
    """From G |- psi and G |- psi -> delta derive G |- delta (delta deterministic unless classical)."""
    s = p1.sequent
    imp = p2.sequent.concl
    delta = imp.body.right.body
    if deterministic and not is_deterministic(delta):
        raise NotDeterministic(f"{delta} is not deterministic")
    nd = Not(delta)
    hyps = s.hyps + (nd,)
    conj = and_intro(weaken(p1, nd), axiom(s.ctx, hyps))
    bot = not_elim(conj, weaken(p2, nd))
    return dne(not_intro(bot), deterministic)


def or_intro_l(p: Proof, right: Formula) -> Proof:
    s = p.sequent
    h = And(Not(s.concl), Not(right))
    hyps = s.hyps + (h,)
    return not_intro(not_elim(weaken(p, h), and_elim_l(axiom(s.ctx, hyps))))


def or_intro_r(p: Proof, left: Formula) -> Proof:
    s = p.sequent
    h = And(Not(left), Not(s.concl))
    hyps = s.hyps + (h,)
    return not_intro(not_elim(weaken(p, h), and_elim_r(axiom(s.ctx, hyps))))


def all_intro(p: Proof, var: str) -> Proof:
    """From G |- phi over ctx + var derive G |- forall var phi over ctx."""
    s = p.sequent
    ctx = Context(tuple(v for v in s.ctx.individuals if v != var), tuple(v for v in s.ctx.sets if v != var))
    if s.ctx != ctx.extend(var):
        p = var_weaken(p, ctx.extend(var))
    cls = ExistsS if is_set_var(var) else ExistsI
    ex = cls(var, Not(s.concl))
    hyps = s.hyps + (ex,)
    w = weaken(weaken(p, ex), Not(s.concl))
    inner = not_elim(w, axiom(p.sequent.ctx, hyps + (Not(s.concl),)))
    return not_intro(ex_elim(axiom(ctx, hyps), inner))


def all_elim(p: Proof, witness: str, deterministic: bool | None = True) -> Proof:
    """From G |- forall x phi derive G |- phi[w/x]; with deterministic=None stop at not not phi[w/x]."""
    s = p.sequent
    ex = s.concl.body  # exists x not phi
    inst = substitute(ex.body.body, ex.var, witness)
    hyps = s.hyps + (Not(inst),)
    intro = ex_intro(axiom(s.ctx, hyps), ex, witness)
    nn = not_intro(not_elim(intro, weaken(p, Not(inst))))
    if deterministic is None:
        return nn
    return dne(nn, deterministic)


def derived_rule_expander(name: str, premises: Sequence[Proof] = (), **params) -> Proof:
    """Expand a named admissible rule into primitive rules."""
    macros = {
        "neg-swap": lambda: neg_swap(*premises),
        "dn-intro": lambda: dn_intro(*premises) if premises else dn_intro_hyp(params["ctx"], params["hyps"]),
        "contrapose": lambda: contrapose(*premises),
        "triple-neg": lambda: triple_neg(params["ctx"], params.get("hyps", ()), params["phi"]),
        "dn-lift": lambda: dn_lift(premises[0], params.get("count", 1)),
        "dn-hyp": lambda: dn_hyp(*premises),
        "imp-intro": lambda: imp_intro(*premises),
        "imp-elim": lambda: imp_elim(*premises, deterministic=params.get("deterministic", True)),
        "or-intro-l": lambda: or_intro_l(premises[0], params["other"]),
        "or-intro-r": lambda: or_intro_r(premises[0], params["other"]),
        "all-intro": lambda: all_intro(premises[0], params["var"]),
        "all-elim": lambda: all_elim(premises[0], params["witness"], params.get("deterministic", True)),
    }
    if name not in macros:
        raise UnknownRule(f"unknown derived rule {name!r}")
    return macros[name]()


# --- Glivenko translation ------------------------------------------------------------


def glivenko_translate(p: Proof) -> Proof:
    """Turn an MSO proof of G |- phi into an SMSO proof of G |- not not phi."""
    check_proof(p, Mode.MSO)
    return _gl(p)


def _instance_on_axioms(p: Proof) -> Proof:
    """Apply p's rule to axioms: G, phi_1..phi_n |- psi, phi_i the premise conclusions."""
    s = p.sequent
    extra = tuple(q.sequent.concl for q in p.premises)
    hyps = s.hyps + extra
    prem = [_axiom_at(s.ctx, hyps, len(s.hyps) + i) for i in range(len(extra))]
    return Proof(p.rule, dict(p.params), tuple(prem), Sequent(hyps, s.concl, s.ctx))


def _axiom_at(ctx, hyps, i) -> Proof:
    return _node("axiom", [], hyps, hyps[i], ctx, index=i)


def _cut_all(lifted: Proof, translated: Sequence[Proof]) -> Proof:
    """Cut G, nn phi_1..nn phi_n |- X against G |- nn phi_i, last hypothesis first."""
    out = lifted
    for t in reversed(translated):
        hyps = out.sequent.hyps[:-1]
        out = cut(weaken_to(t, hyps), out)
    return out


def _gl(p: Proof) -> Proof:
    s = p.sequent
    r = p.rule
    T = [_gl(q) for q in p.premises]
    if r in ("weaken", "exchange", "duplicate", "var-weaken"):
        concl = Not(Not(s.concl))
        return Proof(r, dict(p.params), (T[0],), Sequent(s.hyps, concl, s.ctx))
    if r == "cut":
        return cut(T[0], dn_hyp(T[1]))
    if r == "not-intro":
        # G, phi |- nn false  gives  G, phi |- false, then G |- not phi
        t = T[0]
        g = t.sequent.hyps
        not_false = not_intro(axiom(s.ctx, g + (FALSE,)))
        bot = not_elim(not_false, t)
        return dn_intro(not_intro(bot))
    if r in ("ex-i-elim", "ex-s-elim"):
        ex = p.premises[0].sequent.concl
        v = p.params.get("eigen", ex.var)
        t2 = weaken(T[1], ex, len(s.hyps))  # G, ex, body |- nn psi
        elim = ex_elim(axiom(s.ctx, s.hyps + (ex,)), t2, v)  # G, ex |- nn psi
        return cut(T[0], dn_hyp(elim))
    if r in ("dne", "dne-det"):
        phi = s.concl
        tn = triple_neg(s.ctx, s.hyps, Not(phi))  # G, nnn(not phi) |- nn phi
        return cut(T[0], tn)
    if r in ("comp", "neg-comp", "sync-comp"):
        c = s.concl.body.body if r == "neg-comp" else s.concl
        phi = _comprehension_formula(p.params)
        inst = p.premises[0].sequent.concl
        ax = axiom(s.ctx, s.hyps + (inst,))
        nc = comprehension(ax, c, phi, p.params["var"], "neg-comp")  # G, inst |- nn ex
        out = cut(T[0], dn_hyp(nc))  # G |- nn ex
        return dn_intro(out) if r == "neg-comp" else out
    if r in ("induction", "det-induction"):
        nn = Not(Not(s.concl))
        step = dn_hyp(T[1])
        return induction(T[0], step, nn, p.params["var"], p.params["zero"], p.params["pred"])
    # rules whose premises share the conclusion's hypotheses: lift the instance through not not
    inst = _instance_on_axioms(p)
    lifted = dn_lift(inst, len(p.premises))
    return _cut_all(lifted, T)
