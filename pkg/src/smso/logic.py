"""Formulas of monadic second-order logic over (N, <=, Succ, 0).

Individual variables are lowercase names, set variables are uppercase names.
The AST only has the primitive connectives; everything else is sugar that
expands on construction.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Union


class FormulaError(Exception):
    """Base class for errors raised while building or transforming formulas."""


class FormulaSyntaxError(FormulaError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class SortError(FormulaError):
    pass


class CaptureError(FormulaError):
    def __init__(self, variable: str, message: str = ""):
        super().__init__(message or f"variable {variable!r} would be captured")
        self.variable = variable


def is_set_var(name: str) -> bool:
    return bool(name) and name[0].isupper()


def is_ind_var(name: str) -> bool:
    return bool(name) and name[0].islower()


def _need_ind(*names: str) -> None:
    for n in names:
        if not is_ind_var(n):
            raise SortError(f"{n!r} is not an individual variable")


def _need_set(name: str) -> None:
    if not is_set_var(name):
        raise SortError(f"{name!r} is not a set variable")


# --- AST -------------------------------------------------------------------


@dataclass(frozen=True)
class Verum:
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True)
class Falsum:
    def __str__(self) -> str:
        return "false"


@dataclass(frozen=True)
class Eq:
    x: str
    y: str

    def __post_init__(self):
        _need_ind(self.x, self.y)

    def __str__(self) -> str:
        return f"(eq {self.x} {self.y})"


@dataclass(frozen=True)
class Leq:
    x: str
    y: str

    def __post_init__(self):
        _need_ind(self.x, self.y)

    def __str__(self) -> str:
        return f"(le {self.x} {self.y})"


@dataclass(frozen=True)
class Succ:
    x: str
    y: str

    def __post_init__(self):
        _need_ind(self.x, self.y)

    def __str__(self) -> str:
        return f"(succ {self.x} {self.y})"


@dataclass(frozen=True)
class Zero:
    x: str

    def __post_init__(self):
        _need_ind(self.x)

    def __str__(self) -> str:
        return f"(zero {self.x})"


@dataclass(frozen=True)
class In:
    x: str
    X: str

    def __post_init__(self):
        _need_ind(self.x)
        _need_set(self.X)

    def __str__(self) -> str:
        return f"(in {self.x} {self.X})"


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self) -> str:
        return f"(not {self.body})"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return f"(and {self.left} {self.right})"


@dataclass(frozen=True)
class ExistsI:
    var: str
    body: "Formula"

    def __post_init__(self):
        _need_ind(self.var)

    def __str__(self) -> str:
        return f"(ex-i {self.var} {self.body})"


@dataclass(frozen=True)
class ExistsS:
    var: str
    body: "Formula"

    def __post_init__(self):
        _need_set(self.var)

    def __str__(self) -> str:
        return f"(ex-s {self.var} {self.body})"


Atom = Union[Verum, Falsum, Eq, Leq, Succ, Zero, In]
Formula = Union[Atom, Not, And, ExistsI, ExistsS]
ATOMS = (Verum, Falsum, Eq, Leq, Succ, Zero, In)

TRUE = Verum()
FALSE = Falsum()


@dataclass(frozen=True)
class Context:
    """Ordered free variables; the order fixes the track layout."""

    individuals: tuple[str, ...] = ()
    sets: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "individuals", tuple(self.individuals))
        object.__setattr__(self, "sets", tuple(self.sets))
        _need_ind(*self.individuals)
        for s in self.sets:
            _need_set(s)
        names = self.individuals + self.sets
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable in context {names}")

    @property
    def tracks(self) -> tuple[str, ...]:
        return self.individuals + self.sets

    @property
    def width(self) -> int:
        return len(self.individuals) + len(self.sets)

    def index(self, name: str) -> int:
        return self.tracks.index(name)

    def covers(self, phi: "Formula") -> bool:
        return free_vars(phi) <= set(self.tracks)

    def extend(self, *names: str) -> "Context":
        ind = list(self.individuals)
        sets = list(self.sets)
        for n in names:
            if n in ind or n in sets:
                continue
            (sets if is_set_var(n) else ind).append(n)
        return Context(tuple(ind), tuple(sets))

    @classmethod
    def of(cls, *formulas: "Formula") -> "Context":
        """Context listing the free variables of the formulas in sorted order."""
        names: set[str] = set()
        for f in formulas:
            names |= free_vars(f)
        return cls(
            tuple(sorted(n for n in names if is_ind_var(n))),
            tuple(sorted(n for n in names if is_set_var(n))),
        )


@dataclass(frozen=True)
class MoveShape:
    width: int


# --- sugar -----------------------------------------------------------------


def conj(*fs: Formula) -> Formula:
    if not fs:
        return TRUE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = And(f, out)
    return out


def Or(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


def disj(*fs: Formula) -> Formula:
    if not fs:
        return FALSE
    out = fs[-1]
    for f in reversed(fs[:-1]):
        out = Or(f, out)
    return out


def Implies(a: Formula, b: Formula) -> Formula:
    return Not(And(a, Not(b)))


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def Lt(x: str, y: str) -> Formula:
    return And(Leq(x, y), Not(Eq(x, y)))


def ForallI(x: str, body: Formula) -> Formula:
    return Not(ExistsI(x, Not(body)))


def ForallS(X: str, body: Formula) -> Formula:
    return Not(ExistsS(X, Not(body)))


def ExistsLe(x: str, y: str, body: Formula) -> Formula:
    return ExistsI(x, And(Leq(x, y), body))


def ForallLe(x: str, y: str, body: Formula) -> Formula:
    return ForallI(x, Implies(Leq(x, y), body))


def ExistsInf(x: str, body: Formula) -> Formula:
    z = fresh("z", all_vars(body) | {x})
    return ForallI(z, ExistsI(x, And(Leq(z, x), body)))


def ForallInf(x: str, body: Formula) -> Formula:
    z = fresh("z", all_vars(body) | {x})
    return ExistsI(z, ForallI(x, Implies(Leq(z, x), body)))


def fresh(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


# --- traversal -------------------------------------------------------------


def subformulas(phi: Formula) -> Iterator[Formula]:
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, And):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (ExistsI, ExistsS)):
        yield from subformulas(phi.body)


def atom_vars(phi: Atom) -> tuple[str, ...]:
    if isinstance(phi, (Eq, Leq, Succ)):
        return (phi.x, phi.y)
    if isinstance(phi, Zero):
        return (phi.x,)
    if isinstance(phi, In):
        return (phi.x, phi.X)
    return ()


def free_vars(phi: Formula) -> frozenset[str]:
    if isinstance(phi, ATOMS):
        return frozenset(atom_vars(phi))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, And):
        return free_vars(phi.left) | free_vars(phi.right)
    return free_vars(phi.body) - {phi.var}


def free_individuals(phi: Formula) -> frozenset[str]:
    return frozenset(v for v in free_vars(phi) if is_ind_var(v))


def free_sets(phi: Formula) -> frozenset[str]:
    return frozenset(v for v in free_vars(phi) if is_set_var(v))


def bound_vars(phi: Formula) -> frozenset[str]:
    return frozenset(f.var for f in subformulas(phi) if isinstance(f, (ExistsI, ExistsS)))


def all_vars(phi: Formula) -> frozenset[str]:
    return free_vars(phi) | bound_vars(phi)


def size(phi: Formula) -> int:
    return sum(1 for _ in subformulas(phi))


def map_atoms(phi: Formula, f: Callable[[Formula, frozenset], Formula], bound=frozenset()) -> Formula:
    """Rebuild phi, replacing each atom a by f(a, variables bound above a)."""
    if isinstance(phi, ATOMS):
        return f(phi, bound)
    if isinstance(phi, Not):
        return Not(map_atoms(phi.body, f, bound))
    if isinstance(phi, And):
        return And(map_atoms(phi.left, f, bound), map_atoms(phi.right, f, bound))
    return type(phi)(phi.var, map_atoms(phi.body, f, bound | {phi.var}))


# --- classification ---------------------------------------------------------


def is_deterministic(phi: Formula) -> bool:
    if isinstance(phi, ATOMS) or isinstance(phi, Not):
        return True
    if isinstance(phi, And):
        return is_deterministic(phi.left) and is_deterministic(phi.right)
    return False


def moves_shape(phi: Formula) -> MoveShape:
    return MoveShape(_width(phi))


def _width(phi: Formula) -> int:
    if isinstance(phi, And):
        return _width(phi.left) + _width(phi.right)
    if isinstance(phi, (ExistsI, ExistsS)):
        return 1 + _width(phi.body)
    return 0


# --- substitution ----------------------------------------------------------


def substitute_ind(phi: Formula, x: str, y: str) -> Formula:
    """phi[y/x]: replace the free occurrences of x by y."""
    _need_ind(x, y)
    if x == y:
        return phi

    def go(f: Formula, bound: frozenset) -> Formula:
        if isinstance(f, ATOMS):
            if x not in atom_vars(f) or x in bound:
                return f
            if y in bound:
                raise CaptureError(y)
            return _rename_atom(f, {x: y})
        if isinstance(f, Not):
            return Not(go(f.body, bound))
        if isinstance(f, And):
            return And(go(f.left, bound), go(f.right, bound))
        if f.var == x:
            return f
        return type(f)(f.var, go(f.body, bound | {f.var}))

    return go(phi, frozenset())


def substitute_setvar(phi: Formula, X: str, Y: str) -> Formula:
    """phi[Y/X] for set variables."""
    _need_set(X)
    _need_set(Y)
    if X == Y:
        return phi

    def go(f: Formula, bound: frozenset) -> Formula:
        if isinstance(f, In):
            if f.X != X or X in bound:
                return f
            if Y in bound:
                raise CaptureError(Y)
            return In(f.x, Y)
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(go(f.body, bound))
        if isinstance(f, And):
            return And(go(f.left, bound), go(f.right, bound))
        if f.var == X:
            return f
        return type(f)(f.var, go(f.body, bound | {f.var}))

    return go(phi, frozenset())


def substitute(phi: Formula, old: str, new: str) -> Formula:
    if is_set_var(old):
        return substitute_setvar(phi, old, new)
    return substitute_ind(phi, old, new)


def _rename_atom(a: Atom, m: dict) -> Atom:
    g = lambda v: m.get(v, v)
    if isinstance(a, (Eq, Leq, Succ)):
        return type(a)(g(a.x), g(a.y))
    if isinstance(a, Zero):
        return Zero(g(a.x))
    if isinstance(a, In):
        return In(g(a.x), g(a.X))
    return a


def substitute_set(psi: Formula, X: str, phi_hat: Formula, y: str) -> Formula:
    """psi[phi_hat[y]/X]: replace every atom (x in X) by phi_hat[x/y]."""
    _need_set(X)
    _need_ind(y)
    params = free_vars(phi_hat) - {y}

    def go(f: Formula, bound: frozenset) -> Formula:
        if isinstance(f, In) and f.X == X:
            clash = params & bound
            if clash:
                raise CaptureError(min(clash))
            if f.x in bound_vars(phi_hat):
                raise CaptureError(f.x)
            return substitute_ind(phi_hat, y, f.x)
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(go(f.body, bound))
        if isinstance(f, And):
            return And(go(f.left, bound), go(f.right, bound))
        if f.var == X:
            return f
        return type(f)(f.var, go(f.body, bound | {f.var}))

    return go(psi, frozenset())


def rename(phi: Formula, old: str, new: str) -> Formula:
    """Rename the bound variable old to new everywhere it is bound (alpha-conversion)."""
    if is_set_var(old) != is_set_var(new):
        raise SortError(f"cannot rename {old!r} to {new!r}")

    def go(f: Formula) -> Formula:
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, And):
            return And(go(f.left), go(f.right))
        body = go(f.body)
        if f.var != old:
            return type(f)(f.var, body)
        if new in free_vars(body):
            raise CaptureError(new)
        return type(f)(new, substitute(body, old, new))

    return go(phi)


# --- relativization and boundedness -----------------------------------------


def relativize(phi: Formula, theta: Formula, y: str) -> Formula:
    """phi restricted to the positions satisfying theta[y]."""
    _need_ind(y)
    theta_free = free_vars(theta) - {y}

    def go(f: Formula) -> Formula:
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            return Not(go(f.body))
        if isinstance(f, And):
            return And(go(f.left), go(f.right))
        if f.var in theta_free:
            raise CaptureError(f.var, f"bound variable {f.var!r} occurs free in the guard")
        if isinstance(f, ExistsS):
            return ExistsS(f.var, go(f.body))
        return ExistsI(f.var, And(substitute_ind(theta, y, f.var), go(f.body)))

    return go(phi)


def bounded_body(phi: Formula, x: str) -> Formula | None:
    """Return psi with relativize(psi, y <= x, y) == phi, or None if phi has another shape."""

    def go(f: Formula) -> Formula | None:
        if isinstance(f, ATOMS):
            return f
        if isinstance(f, Not):
            b = go(f.body)
            return None if b is None else Not(b)
        if isinstance(f, And):
            l, r = go(f.left), go(f.right)
            return None if l is None or r is None else And(l, r)
        if isinstance(f, ExistsS):
            if f.var == x:
                return None
            b = go(f.body)
            return None if b is None else ExistsS(f.var, b)
        body = f.body
        if f.var == x or not isinstance(body, And) or body.left != Leq(f.var, x):
            return None
        b = go(body.right)
        return None if b is None else ExistsI(f.var, b)

    return go(phi)


def is_bounded_by(phi: Formula, x: str) -> bool:
    return bounded_body(phi, x) is not None


def is_uniformly_bounded(phi: Formula, x: str) -> bool:
    return free_individuals(phi) <= {x} and is_bounded_by(phi, x)


def bounded(psi: Formula, x: str) -> Formula:
    """relativize(psi, y <= x, y) with a guard variable chosen clear of psi."""
    y = fresh("y", all_vars(psi) | {x})
    return relativize(psi, Leq(y, x), y)


# --- concrete syntax --------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\()|(\))|([A-Za-z_][A-Za-z0-9_'\-]*))")

_ARITY = {
    "eq": "ii", "le": "ii", "succ": "ii", "lt": "ii", "zero": "i", "in": "iS",
    "not": "f", "and": "f+", "or": "f+", "implies": "ff", "iff": "ff",
    "ex-i": "if", "all-i": "if", "ex-s": "Sf", "all-s": "Sf",
    "exinf": "if", "allinf": "if", "ex-le": "iif", "all-le": "iif",
}


def _tokenize(text: str) -> list[tuple[str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}",
                                     len(text) - len(text[pos:].lstrip()))
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), start))
        pos = m.end()
    return out


def parse_formula(text: str) -> Formula:
    """Parse the s-expression syntax, expanding all sugar."""
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty formula", 0)
    phi, i = _parse(tokens, 0)
    if i != len(tokens):
        raise FormulaSyntaxError("trailing input", tokens[i][1])
    return phi


def _parse(tokens, i) -> tuple[Formula, int]:
    if i >= len(tokens):
        raise FormulaSyntaxError("unexpected end of input", tokens[-1][1] + 1 if tokens else 0)
    tok, pos = tokens[i]
    if tok == "true":
        return TRUE, i + 1
    if tok == "false":
        return FALSE, i + 1
    if tok != "(":
        raise FormulaSyntaxError(f"expected formula, got {tok!r}", pos)
    if i + 1 >= len(tokens):
        raise FormulaSyntaxError("unexpected end of input", pos + 1)
    head, hpos = tokens[i + 1]
    if head not in _ARITY:
        raise FormulaSyntaxError(f"unknown operator {head!r}", hpos)
    i += 2
    args: list = []
    for kind in _ARITY[head]:
        if kind == "+":
            while i < len(tokens) and tokens[i][0] != ")":
                f, i = _parse(tokens, i)
                args.append(f)
            continue
        if kind == "f":
            f, i = _parse(tokens, i)
            args.append(f)
            continue
        if i >= len(tokens) or tokens[i][0] in "()":
            raise FormulaSyntaxError("expected variable", tokens[i][1] if i < len(tokens) else hpos)
        name, npos = tokens[i]
        if kind == "i" and not is_ind_var(name):
            raise FormulaSyntaxError(f"{name!r} is not an individual variable", npos)
        if kind == "S" and not is_set_var(name):
            raise FormulaSyntaxError(f"{name!r} is not a set variable", npos)
        args.append(name)
        i += 1
    if i >= len(tokens) or tokens[i][0] != ")":
        raise FormulaSyntaxError("expected ')'", tokens[i][1] if i < len(tokens) else hpos)
    return _build(head, args), i + 1


def _build(head: str, a: list) -> Formula:
    simple = {
        "eq": Eq, "le": Leq, "succ": Succ, "zero": Zero, "in": In, "lt": Lt, "not": Not,
        "implies": Implies, "iff": Iff, "ex-i": ExistsI, "all-i": ForallI,
        "ex-s": ExistsS, "all-s": ForallS, "exinf": ExistsInf, "allinf": ForallInf,
        "ex-le": ExistsLe, "all-le": ForallLe,
    }
    if head == "and":
        return conj(*a)
    if head == "or":
        return disj(*a)
    return simple[head](*a)


def to_sexpr(phi: Formula) -> str:
    return str(phi)
