"""MSO over finite words: a brute-force evaluator, a DFA compiler, and the
translations between bounded formulas and Mealy machines.

An individual variable is coded on its track by the position of its 1.
A track with no 1 makes every atom on that variable false.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .logic import (
    ATOMS, FALSE, TRUE, And, Context, Eq, ExistsI, ExistsS, Falsum, Formula,
    FormulaError, ForallI, ForallS, Iff, Implies, In, Leq, Not, Succ, Verum, Zero,
    all_vars, bounded, bounded_body, conj, disj, free_vars, fresh, is_set_var, substitute_ind,
)
from .mealy import Letter, MealyMachine


class UnassignedVariable(FormulaError):
    pass


class NotBounded(FormulaError):
    pass


# --- brute-force oracle ------------------------------------------------------


def eval_finite(phi: Formula, ctx: Context, word: Sequence[Letter],
                indiv: Mapping[str, int] | None = None) -> bool:
    """Truth of phi on a finite word.

    Letters of word carry the set variables of ctx (bit i is ctx.sets[i]);
    indiv gives the positions of the individual variables.
    """
    n = len(word)
    sets = {X: frozenset(i for i in range(n) if (word[i] >> j) & 1) for j, X in enumerate(ctx.sets)}
    env = dict(indiv or {})
    for v, k in env.items():
        if not 0 <= k < n:
            raise ValueError(f"position {k} of {v} is outside a word of length {n}")
    return _eval(phi, n, env, sets)


def _eval(phi: Formula, n: int, ind: dict, sets: dict) -> bool:
    def pos(v):
        if v not in ind:
            raise UnassignedVariable(f"no value for {v!r}")
        return ind[v]

    if isinstance(phi, Verum):
        return True
    if isinstance(phi, Falsum):
        return False
    if isinstance(phi, Eq):
        return pos(phi.x) == pos(phi.y)
    if isinstance(phi, Leq):
        return pos(phi.x) <= pos(phi.y)
    if isinstance(phi, Succ):
        return pos(phi.x) + 1 == pos(phi.y)
    if isinstance(phi, Zero):
        return pos(phi.x) == 0
    if isinstance(phi, In):
        if phi.X not in sets:
            raise UnassignedVariable(f"no value for {phi.X!r}")
        return pos(phi.x) in sets[phi.X]
    if isinstance(phi, Not):
        return not _eval(phi.body, n, ind, sets)
    if isinstance(phi, And):
        return _eval(phi.left, n, ind, sets) and _eval(phi.right, n, ind, sets)
    if isinstance(phi, ExistsI):
        return any(_eval(phi.body, n, {**ind, phi.var: k}, sets) for k in range(n))
    return any(
        _eval(phi.body, n, ind, {**sets, phi.var: frozenset(i for i in range(n) if (m >> i) & 1)})
        for m in range(1 << n)
    )


# --- DFAs -------------------------------------------------------------------


@dataclass(frozen=True)
class DFA:
    states: int
    init: int
    width: int
    delta: tuple[tuple[int, ...], ...]
    accepting: frozenset[int]

    @classmethod
    def explore(cls, init, width: int, step, accepting) -> "DFA":
        index = {init: 0}
        keys = [init]
        rows = []
        i = 0
        while i < len(keys):
            row = []
            for a in range(1 << width):
                k = step(keys[i], a)
                if k not in index:
                    index[k] = len(keys)
                    keys.append(k)
                row.append(index[k])
            rows.append(tuple(row))
            i += 1
        return cls(len(keys), 0, width, tuple(rows),
                   frozenset(i for i, k in enumerate(keys) if accepting(k)))

    def run(self, word: Sequence[Letter]) -> int:
        q = self.init
        for a in word:
            q = self.delta[q][a]
        return q

    def accepts(self, word: Sequence[Letter]) -> bool:
        return self.run(word) in self.accepting

    def complement(self) -> "DFA":
        return DFA(self.states, self.init, self.width, self.delta,
                   frozenset(range(self.states)) - self.accepting)

    def product(self, other: "DFA", both: bool = True) -> "DFA":
        """Intersection (both=True) or union of the languages."""
        if self.width != other.width:
            raise ValueError("product of DFAs over different alphabets")
        acc = (lambda k: k[0] in self.accepting and k[1] in other.accepting) if both else \
            (lambda k: k[0] in self.accepting or k[1] in other.accepting)
        return DFA.explore((self.init, other.init), self.width,
                           lambda k, a: (self.delta[k[0]][a], other.delta[k[1]][a]), acc).minimize()

    def project(self, track: int) -> "DFA":
        """Erase one track (existential projection), determinized by subset construction."""
        lo = (1 << track) - 1

        def lift(a, b):
            return (a & lo) | (b << track) | ((a & ~lo) << 1)

        def step(S, a):
            return frozenset(self.delta[q][lift(a, b)] for q in S for b in (0, 1))

        return DFA.explore(frozenset({self.init}), self.width - 1, step,
                           lambda S: bool(S & self.accepting)).minimize()

    def minimize(self) -> "DFA":
        """Moore partition refinement on the (already reachable) states."""
        block = [1 if q in self.accepting else 0 for q in range(self.states)]
        count = len(set(block))
        while True:
            sigs = {}
            new = []
            for q in range(self.states):
                sig = (block[q], tuple(block[r] for r in self.delta[q]))
                new.append(sigs.setdefault(sig, len(sigs)))
            if len(sigs) == count:
                break
            block, count = new, len(sigs)
        block = new
        order = {}
        for q in [self.init] + list(range(self.states)):
            order.setdefault(block[q], len(order))
        rows: list = [None] * len(order)
        for q in range(self.states):
            b = order[block[q]]
            if rows[b] is None:
                rows[b] = tuple(order[block[r]] for r in self.delta[q])
        return DFA(len(order), 0, self.width, tuple(rows),
                   frozenset(order[block[q]] for q in self.accepting))

    def is_empty(self) -> bool:
        seen, todo = {self.init}, [self.init]
        while todo:
            q = todo.pop()
            if q in self.accepting:
                return False
            for r in self.delta[q]:
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return True

    def to_json(self) -> dict:
        return {
            "states": self.states,
            "init": self.init,
            "width": self.width,
            "table": [[q, a, r] for q, row in enumerate(self.delta) for a, r in enumerate(row)],
            "accepting": sorted(self.accepting),
        }


# atom automata: keys are small strings, "acc" accepting, "rej" a sink
def _atom_dfa(phi: Formula, layout: Sequence[str]) -> DFA:
    w = len(layout)
    if isinstance(phi, (Verum, Falsum)):
        return DFA(1, 0, w, (tuple([0] * (1 << w)),), frozenset({0} if isinstance(phi, Verum) else ()))
    idx = {v: i for i, v in enumerate(layout)}

    def b(a, v):
        return (a >> idx[v]) & 1

    if isinstance(phi, Zero):
        def step(k, a):
            return k if k != "start" else ("acc" if b(a, phi.x) else "rej")
    elif isinstance(phi, In):
        def step(k, a):
            if k != "start" or not b(a, phi.x):
                return k
            return "acc" if b(a, phi.X) else "rej"
    elif isinstance(phi, Eq):
        def step(k, a):
            if k != "start":
                return k
            bx, by = b(a, phi.x), b(a, phi.y)
            return "start" if not (bx or by) else ("acc" if bx and by else "rej")
    elif isinstance(phi, Leq):
        def step(k, a):
            bx, by = b(a, phi.x), b(a, phi.y)
            if k == "start":
                return "acc" if bx and by else "x" if bx else "rej" if by else "start"
            if k == "x":
                return "acc" if by else "x"
            return k
    elif isinstance(phi, Succ):
        def step(k, a):
            bx, by = b(a, phi.x), b(a, phi.y)
            if k == "start":
                return "rej" if by else "x" if bx else "start"
            if k == "x":
                return "acc" if by else "rej"
            return k
    else:
        raise TypeError(f"not an atom: {phi!r}")
    return DFA.explore("start", w, step, lambda k: k == "acc")


def sing_dfa(width: int, track: int) -> DFA:
    """Words whose given track carries exactly one 1."""
    return DFA.explore(0, width, lambda k, a: min(k + ((a >> track) & 1), 2), lambda k: k == 1)


def compile_mso_finite(phi: Formula, ctx: Context) -> DFA:
    """DFA over 2^(l+p) accepting exactly the finite words satisfying phi."""
    if not ctx.covers(phi):
        raise UnassignedVariable(f"free variables {sorted(free_vars(phi) - set(ctx.tracks))} not in context")
    return _compile(phi, list(ctx.tracks))


def _compile(phi: Formula, layout: list[str]) -> DFA:
    if isinstance(phi, ATOMS):
        return _atom_dfa(phi, layout)
    if isinstance(phi, Not):
        return _compile(phi.body, layout).complement()
    if isinstance(phi, And):
        return _compile(phi.left, layout).product(_compile(phi.right, layout))
    inner = [v if v != phi.var else "#" for v in layout] + [phi.var]
    body = _compile(phi.body, inner)
    if isinstance(phi, ExistsI):
        body = body.product(sing_dfa(len(inner), len(layout)))
    return body.project(len(layout))


def word_letters(ctx: Context, set_word: Sequence[Letter], indiv: Mapping[str, int]) -> list[Letter]:
    """Encode a set word plus individual positions as letters over ctx.tracks."""
    l = len(ctx.individuals)
    out = []
    for i, a in enumerate(set_word):
        letter = a << l
        for j, v in enumerate(ctx.individuals):
            if indiv.get(v) == i:
                letter |= 1 << j
        out.append(letter)
    return out


# --- bounded formulas to machines --------------------------------------------


def last(t: str, avoid=()) -> Formula:
    """t is the last position of a finite word."""
    u = fresh("u", set(avoid) | {t})
    return ForallI(u, Implies(Leq(t, u), Eq(t, u)))


def bounded_to_mealy(phi_hat: Formula, ctx: Context, z: str = "x") -> MealyMachine:
    """Machine whose output at n is the truth of phi_hat with z = n.

    phi_hat must be bounded by z; ctx lists its other free variables and fixes
    the input tracks.
    """
    if bounded_body(phi_hat, z) is None:
        raise NotBounded(f"formula is not bounded by {z!r}")
    missing = free_vars(phi_hat) - {z} - set(ctx.tracks)
    if missing:
        raise UnassignedVariable(f"free variables {sorted(missing)} not in context")
    if z in ctx.tracks:
        raise ValueError(f"{z!r} must not be an input track")
    avoid = all_vars(phi_hat) | set(ctx.tracks)
    t = fresh("t", avoid)
    theta = ExistsI(t, And(last(t, avoid), substitute_ind(phi_hat, z, t)))
    dfa = compile_mso_finite(theta, ctx)
    return MealyMachine(
        dfa.states, dfa.init, ctx.width, 1,
        tuple(tuple((r, int(r in dfa.accepting)) for r in row) for row in dfa.delta),
    )


# --- machines to bounded formulas ---------------------------------------------


def _literal(atom: Formula, positive: int) -> Formula:
    return atom if positive else Not(atom)


def _cube(atoms: Sequence[Formula], bits: Sequence[int]) -> Formula:
    return conj(*(_literal(a, b) for a, b in zip(atoms, bits)))


def _boolean(state_atoms, input_atoms, table: Mapping[tuple, set]) -> Formula:
    """Propositional formula true on (state code, input letter) pairs listed in table.

    table maps a state code to the set of input letters making the formula true.
    """
    q, p = len(state_atoms), len(input_atoms)
    disjuncts = []
    for code in sorted(table):
        letters = table[code]
        if not letters:
            continue
        state = _cube(state_atoms, [(code >> i) & 1 for i in range(q)])
        if len(letters) == 1 << p:
            disjuncts.append(state)
            continue
        cond = disj(*(_cube(input_atoms, [(a >> i) & 1 for i in range(p)]) for a in sorted(letters)))
        disjuncts.append(cond if q == 0 else And(state, cond))
    return disj(*disjuncts)


def mealy_to_formula(m: MealyMachine, inputs: Sequence[str] | None = None, x: str = "x") -> Formula:
    """A deterministic formula bounded by x that x-represents the one-bit machine m."""
    if m.out_width != 1:
        raise ValueError("only machines with one output track can be represented")
    p = m.in_width
    if inputs is None:
        inputs = ("X",) if p == 1 else tuple(f"X{i + 1}" for i in range(p))
    if len(inputs) != p or not all(is_set_var(v) for v in inputs):
        raise ValueError("need one set variable per input track")
    q = math.ceil(math.log2(m.states)) if m.states > 1 else 0
    taken = set(inputs) | {x}
    qs = [fresh("Q" if q == 1 else f"Q{i + 1}", taken) for i in range(q)]
    y_out = fresh("Y", taken | set(qs))
    t, t2 = fresh("t", taken), fresh("t'", taken)

    # relabel so that the initial state has code 0
    order = [m.init] + [s for s in range(m.states) if s != m.init]
    code = {s: i for i, s in enumerate(order)}

    def at(v):
        return [In(v, Q) for Q in qs]

    xs = [In(t, X) for X in inputs]
    out_table = {code[s]: {a for a in range(1 << p) if m.table[s][a][1]} for s in range(m.states)}
    init_part = conj(*(Iff(In(t, Q), FALSE) for Q in qs))
    output = Iff(In(t, y_out), _boolean(at(t), xs, out_table))
    next_parts = []
    for i, Q in enumerate(qs):
        d_table = {code[s]: {a for a in range(1 << p) if (code[m.table[s][a][0]] >> i) & 1}
                   for s in range(m.states)}
        next_parts.append(Iff(In(t2, Q), _boolean(at(t), xs, d_table)))
    run = conj(
        ForallI(t, Implies(Zero(t), init_part)),
        ForallI(t, output),
        ForallI(t, ForallI(t2, Implies(Succ(t, t2), conj(*next_parts)))),
    )
    psi = Implies(run, In(x, y_out))
    for V in reversed(qs + [y_out]):
        psi = ForallS(V, psi)
    return bounded(psi, x)
