"""Splitting formulas at a position, and turning semantically bounded formulas into bounded ones.

Formulas are first translated into a small vocabulary (true, false, membership,
strict order, negation, disjunction, both existentials), where splitting is a
structural recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Union

from .logic import (
    FALSE, TRUE, And, Context, Eq, ExistsI, ExistsS, Falsum, Formula, FormulaError, Iff, Implies,
    In, Leq, Lt, Not, Or, Succ, Verum, Zero, all_vars, bounded, conj, disj, ForallI, ForallLe, ForallS,
    fresh, free_individuals, free_sets, free_vars, relativize, substitute,
)
from .mealy import LassoWord
from .omega import lasso_member, mso_to_nba


@dataclass(frozen=True)
class LTrue:
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class LFalse:
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class LIn:
    x: str
    X: str

    def __str__(self):
        return f"(in {self.x} {self.X})"


@dataclass(frozen=True)
class LLt:
    x: str
    y: str

    def __str__(self):
        return f"(lt {self.x} {self.y})"


@dataclass(frozen=True)
class LNot:
    body: "Lam"

    def __str__(self):
        return f"(not {self.body})"


@dataclass(frozen=True)
class LOr:
    left: "Lam"
    right: "Lam"

    def __str__(self):
        return f"(or {self.left} {self.right})"


@dataclass(frozen=True)
class LExS:
    var: str
    body: "Lam"

    def __str__(self):
        return f"(ex-s {self.var} {self.body})"


@dataclass(frozen=True)
class LExI:
    var: str
    body: "Lam"

    def __str__(self):
        return f"(ex-i {self.var} {self.body})"


Lam = Union[LTrue, LFalse, LIn, LLt, LNot, LOr, LExS, LExI]
LambdaFormula = Lam


def l_and(a: Lam, b: Lam) -> Lam:
    return LNot(LOr(LNot(a), LNot(b)))


def l_conj(*fs: Lam) -> Lam:
    if not fs:
        return LTrue()
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = l_and(f, out)
    return out


def l_vars(f: Lam) -> set[str]:
    if isinstance(f, LIn):
        return {f.x, f.X}
    if isinstance(f, LLt):
        return {f.x, f.y}
    if isinstance(f, LNot):
        return l_vars(f.body)
    if isinstance(f, LOr):
        return l_vars(f.left) | l_vars(f.right)
    if isinstance(f, (LExS, LExI)):
        return {f.var} | l_vars(f.body)
    return set()


def l_free_individuals(f: Lam) -> set[str]:
    if isinstance(f, LIn):
        return {f.x}
    if isinstance(f, LLt):
        return {f.x, f.y}
    if isinstance(f, LNot):
        return l_free_individuals(f.body)
    if isinstance(f, LOr):
        return l_free_individuals(f.left) | l_free_individuals(f.right)
    if isinstance(f, LExI):
        return l_free_individuals(f.body) - {f.var}
    if isinstance(f, LExS):
        return l_free_individuals(f.body)
    return set()


def _l_rename(f: Lam, old: str, new: str) -> Lam:
    """Replace free occurrences of the individual old by new (new must be fresh)."""
    if isinstance(f, LIn):
        return LIn(new if f.x == old else f.x, f.X)
    if isinstance(f, LLt):
        return LLt(new if f.x == old else f.x, new if f.y == old else f.y)
    if isinstance(f, LNot):
        return LNot(_l_rename(f.body, old, new))
    if isinstance(f, LOr):
        return LOr(_l_rename(f.left, old, new), _l_rename(f.right, old, new))
    if isinstance(f, LExI):
        return f if f.var == old else LExI(f.var, _l_rename(f.body, old, new))
    if isinstance(f, LExS):
        return LExS(f.var, _l_rename(f.body, old, new))
    return f


def _l_empty_sets(f: Lam, sets: frozenset[str]) -> Lam:
    """Replace the free set variables in sets by the empty set."""
    if isinstance(f, LIn):
        return LFalse() if f.X in sets else f
    if isinstance(f, LNot):
        return LNot(_l_empty_sets(f.body, sets))
    if isinstance(f, LOr):
        return LOr(_l_empty_sets(f.left, sets), _l_empty_sets(f.right, sets))
    if isinstance(f, LExS):
        return LExS(f.var, _l_empty_sets(f.body, sets - {f.var}))
    if isinstance(f, LExI):
        return LExI(f.var, _l_empty_sets(f.body, sets))
    return f


def l_simplify(f: Lam) -> Lam:
    """Fold constants and double negations."""
    if isinstance(f, LNot):
        b = l_simplify(f.body)
        if isinstance(b, LTrue):
            return LFalse()
        if isinstance(b, LFalse):
            return LTrue()
        if isinstance(b, LNot):
            return b.body
        return LNot(b)
    if isinstance(f, LOr):
        a, b = l_simplify(f.left), l_simplify(f.right)
        if isinstance(a, LTrue) or isinstance(b, LTrue):
            return LTrue()
        if isinstance(a, LFalse):
            return b
        if isinstance(b, LFalse) or a == b:
            return a
        return LOr(a, b)
    if isinstance(f, (LExI, LExS)):
        b = l_simplify(f.body)
        if isinstance(b, (LTrue, LFalse)):
            return b
        return type(f)(f.var, b)
    return f


# --- translations ------------------------------------------------------------------


def to_lambda(phi: Formula) -> Lam:
    """Equivalent formula over true, false, membership, strict order, not, or and the existentials."""
    used = set(all_vars(phi))

    def new(base: str) -> str:
        v = fresh(base, used)
        used.add(v)
        return v

    # order is total, so equality and <= need no set quantifier
    def eq(x: str, y: str) -> Lam:
        return l_and(LNot(LLt(x, y)), LNot(LLt(y, x)))

    def le(x: str, y: str) -> Lam:
        return LNot(LLt(y, x))

    def go(f: Formula) -> Lam:
        if isinstance(f, Verum):
            return LTrue()
        if isinstance(f, Falsum):
            return LFalse()
        if isinstance(f, In):
            return LIn(f.x, f.X)
        if isinstance(f, Eq):
            return eq(f.x, f.y)
        if isinstance(f, Leq):
            return le(f.x, f.y)
        if isinstance(f, Succ):
            z = new("w")
            return l_and(LLt(f.x, f.y), LNot(LExI(z, l_and(LLt(f.x, z), LLt(z, f.y)))))
        if isinstance(f, Zero):
            y = new("w")
            return LNot(LExI(y, LNot(le(f.x, y))))
        if isinstance(f, Not):
            return LNot(go(f.body))
        if isinstance(f, And) and isinstance(f.left, Leq) and f == Lt(f.left.x, f.left.y):
            # strict order sugar goes back to the primitive
            return LLt(f.left.x, f.left.y)
        if isinstance(f, And):
            return l_and(go(f.left), go(f.right))
        if isinstance(f, ExistsS):
            return LExS(f.var, go(f.body))
        return LExI(f.var, go(f.body))

    return go(phi)


def from_lambda(f: Lam) -> Formula:
    if isinstance(f, LTrue):
        return TRUE
    if isinstance(f, LFalse):
        return FALSE
    if isinstance(f, LIn):
        return In(f.x, f.X)
    if isinstance(f, LLt):
        return Lt(f.x, f.y)
    if isinstance(f, LNot):
        return Not(from_lambda(f.body))
    if isinstance(f, LOr):
        return Or(from_lambda(f.left), from_lambda(f.right))
    if isinstance(f, LExS):
        return ExistsS(f.var, from_lambda(f.body))
    return ExistsI(f.var, from_lambda(f.body))


# --- splitting ------------------------------------------------------------------------


@dataclass(frozen=True)
class SplitResult:
    pairs: tuple[tuple[Lam, Lam], ...]

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


def split(psi: Lam, z: str, V, prune: bool = False) -> SplitResult:
    """Pairs (L_j, R_j) with psi equivalent to the disjunction of L_j below z and R_j above z.

    V is the set of individual variables valued at or before z. With prune, pairs
    with a constant false side are dropped and constants are folded along the way,
    which keeps nested negations from blowing up.
    """
    V = frozenset(V)
    if z not in V:
        raise ValueError(f"{z!r} must belong to V")
    return SplitResult(tuple(_split(psi, V, set(l_vars(psi)) | V, prune)))


def _split(f: Lam, V: frozenset, used: set, prune: bool) -> list[tuple[Lam, Lam]]:
    pairs = _split_raw(f, V, used, prune)
    if not prune:
        return pairs
    out = []
    for l, r in pairs:
        l, r = l_simplify(l), l_simplify(r)
        if not isinstance(l, LFalse) and not isinstance(r, LFalse) and (l, r) not in out:
            out.append((l, r))
    return out


def _split_raw(f: Lam, V: frozenset, used: set, prune: bool) -> list[tuple[Lam, Lam]]:
    if isinstance(f, LTrue):
        return [(LTrue(), LTrue())]
    if isinstance(f, LFalse):
        return [(LFalse(), LTrue())]
    if isinstance(f, LLt):
        left, right = f.x in V, f.y in V
        if left and right:
            return [(f, LTrue())]
        if not left and not right:
            return [(LTrue(), f)]
        if left:
            return [(LTrue(), LTrue())]
        return [(LFalse(), LFalse())]
    if isinstance(f, LIn):
        return [(f, LTrue())] if f.x in V else [(LTrue(), f)]
    if isinstance(f, LOr):
        return _split(f.left, V, used, prune) + _split(f.right, V, used, prune)
    if isinstance(f, LExI):
        x, body = f.var, f.body
        if x in V:
            x2 = fresh(x, used)
            used.add(x2)
            body = _l_rename(body, x, x2)
            x = x2
        inside = [(LExI(x, l), r) for l, r in _split(body, V | {x}, used, prune)]
        outside = [(l, LExI(x, r)) for l, r in _split(body, V, used, prune)]
        return inside + outside
    if isinstance(f, LExS):
        return [(LExS(f.var, l), LExS(f.var, r)) for l, r in _split(f.body, V, used, prune)]
    if isinstance(f, LNot):
        parts = _split(f.body, V, used, prune)
        out = []
        for choice in product((0, 1), repeat=len(parts)):
            ls = [LNot(l) for (l, _), c in zip(parts, choice) if c == 0]
            rs = [LNot(r) for (_, r), c in zip(parts, choice) if c == 1]
            out.append((l_conj(*ls), l_conj(*rs)))
        return out
    raise TypeError(f"not a formula of the small vocabulary: {f!r}")


def below(phi: Formula, z: str) -> Formula:
    """phi with individual quantifiers restricted to positions <= z."""
    y = fresh("y", all_vars(phi) | {z})
    return relativize(phi, Leq(y, z), y)


def above(phi: Formula, z: str) -> Formula:
    """phi with individual quantifiers restricted to positions > z."""
    y = fresh("y", all_vars(phi) | {z})
    return relativize(phi, Not(Leq(y, z)), y)


def recombine(result: SplitResult, z: str) -> Formula:
    """The disjunction of L_j below z and R_j above z."""
    return disj(*(And(below(from_lambda(l), z), above(from_lambda(r), z)) for l, r in result))


# --- closed truth and debounding ----------------------------------------------------------


class NotSemanticallyBounded(ValueError):
    pass


def decide_closed(phi: Formula) -> bool:
    """Truth of a closed formula in the standard model."""
    if free_vars(phi):
        raise FormulaError(f"formula has free variables {sorted(free_vars(phi))}")
    return lasso_member(mso_to_nba(phi, Context((), ())), LassoWord((), (0,), 0))


def boundedness_sentence(psi: Formula, x: str) -> Formula:
    """Closed formula: the truth of psi at x depends only on its set variables up to x."""
    sets = sorted(free_sets(psi))
    used = set(all_vars(psi)) | {x}
    z = fresh("z", used)
    used.add(z)
    y = fresh("y", used)
    used.add(y)
    fresh_sets = []
    for S in sets:
        a = fresh(S + "a", used)
        used.add(a)
        b = fresh(S + "b", used)
        used.add(b)
        fresh_sets.append((a, b))
    agree = [ForallLe(y, z, Iff(In(y, a), In(y, b))) for a, b in fresh_sets]
    left, right = substitute(psi, x, z), substitute(psi, x, z)
    for S, (a, b) in zip(sets, fresh_sets):
        left = substitute(left, S, a)
        right = substitute(right, S, b)
    body = Implies(conj(*agree), Iff(left, right))
    for a, b in reversed(fresh_sets):
        body = ForallS(a, ForallS(b, body))
    return ForallI(z, body)


def debound(psi: Formula, x: str, verify: bool = False) -> Formula:
    """Uniformly bounded formula equivalent to the semantically bounded psi(X, x)."""
    extra = free_individuals(psi) - {x}
    if extra:
        raise FormulaError(f"only {x!r} may be free among individuals, found {sorted(extra)}")
    if verify and not decide_closed(boundedness_sentence(psi, x)):
        raise NotSemanticallyBounded(f"the truth of {psi} depends on sets beyond {x!r}")
    sets = frozenset(free_sets(psi))
    disjuncts = []
    for l, r in split(to_lambda(psi), x, {x}, prune=True):
        if decide_closed(from_lambda(_l_empty_sets(r, sets))):
            disjuncts.append(from_lambda(l))
    return bounded(disj(*disjuncts) if disjuncts else FALSE, x)
