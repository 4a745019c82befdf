"""Büchi automata over bit-vector alphabets: the semantics of MSO on omega-words.

Every automaton has Büchi acceptance on a state set. Complementation picks the
cheapest sound construction for the automaton at hand: flipping for weak
deterministic automata, a breakpoint construction for weak ones, the
two-copy construction for deterministic ones, and a rank-based construction
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Iterable, Mapping, Sequence

from .logic import (
    ATOMS, And, Context, Eq, ExistsI, ExistsS, Falsum, Formula, In, Leq, Not, Succ,
    Verum, Zero, free_vars,
)
from .mealy import LassoWord, MealyMachine, WidthError, identity, pair, simulate_lasso


@dataclass(frozen=True, eq=False)
class NBA:
    """delta[q][a] is the tuple of successors of q on letter a."""

    states: int
    init: frozenset[int]
    width: int
    delta: tuple[tuple[tuple[int, ...], ...], ...]
    accepting: frozenset[int]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def explore(cls, inits: Iterable, width: int, succ, accepting) -> "NBA":
        """Build the automaton reachable from inits; succ(key, letter) yields keys."""
        index: dict = {}
        keys: list = []
        for k in inits:
            if k not in index:
                index[k] = len(keys)
                keys.append(k)
        init = frozenset(range(len(keys)))
        rows = []
        i = 0
        while i < len(keys):
            row = []
            for a in range(1 << width):
                out = set()
                for k in succ(keys[i], a):
                    if k not in index:
                        index[k] = len(keys)
                        keys.append(k)
                    out.add(index[k])
                row.append(tuple(sorted(out)))
            rows.append(tuple(row))
            i += 1
        return cls(len(keys), init, width, tuple(rows),
                   frozenset(i for i, k in enumerate(keys) if accepting(k)))

    @property
    def is_deterministic(self) -> bool:
        """Exactly one initial state and exactly one successor everywhere."""
        return len(self.init) == 1 and all(len(s) == 1 for row in self.delta for s in row)

    def successors(self, q: int) -> set[int]:
        return {r for s in self.delta[q] for r in s}

    def sccs(self) -> list[list[int]]:
        if "sccs" not in self._cache:
            self._cache["sccs"] = _tarjan(self.states, self.successors)
        return self._cache["sccs"]

    def nontrivial(self, comp: list[int]) -> bool:
        return len(comp) > 1 or comp[0] in self.successors(comp[0])

    @property
    def is_weak(self) -> bool:
        """Every cycle lies entirely inside or entirely outside the accepting set."""
        if "weak" not in self._cache:
            self._cache["weak"] = all(
                len({q in self.accepting for q in c}) == 1 for c in self.sccs() if self.nontrivial(c))
        return self._cache["weak"]

    def to_json(self) -> dict:
        return {
            "states": self.states,
            "init": sorted(self.init),
            "width": self.width,
            "table": [[q, a, r] for q, row in enumerate(self.delta) for a, s in enumerate(row) for r in s],
            "accepting": sorted(self.accepting),
        }


def _tarjan(n: int, succ) -> list[list[int]]:
    index, low, on = {}, {}, set()
    stack, out = [], []
    counter = 0
    for root in range(n):
        if root in index:
            continue
        work = [(root, iter(sorted(succ(root))))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on.add(root)
        while work:
            v, it = work[-1]
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on.add(w)
                    work.append((w, iter(sorted(succ(w)))))
                    break
                if w in on:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    low[work[-1][0]] = min(low[work[-1][0]], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on.discard(w)
                        comp.append(w)
                        if w == v:
                            break
                    out.append(comp)
    return out


# --- simplification ---------------------------------------------------------


def universal(width: int) -> NBA:
    return NBA(1, frozenset({0}), width, (tuple((0,) for _ in range(1 << width)),), frozenset({0}))


def empty(width: int) -> NBA:
    return NBA(0, frozenset(), width, (), frozenset())


def trim(a: NBA) -> NBA:
    """Drop states that are unreachable or cannot reach an accepting cycle."""
    good_scc = [c for c in a.sccs() if a.nontrivial(c) and any(q in a.accepting for q in c)]
    pred: dict[int, set] = {q: set() for q in range(a.states)}
    for q in range(a.states):
        for r in a.successors(q):
            pred[r].add(q)
    live = {q for c in good_scc for q in c}
    todo = list(live)
    while todo:
        q = todo.pop()
        for p in pred[q]:
            if p not in live:
                live.add(p)
                todo.append(p)
    reach = set()
    todo = [q for q in a.init if q in live]
    reach.update(todo)
    while todo:
        q = todo.pop()
        for r in a.successors(q):
            if r in live and r not in reach:
                reach.add(r)
                todo.append(r)
    if len(reach) == a.states:
        return a
    keep = sorted(reach)
    ren = {q: i for i, q in enumerate(keep)}
    return NBA(len(keep), frozenset(ren[q] for q in a.init if q in ren), a.width,
               tuple(tuple(tuple(ren[r] for r in s if r in ren) for s in a.delta[q]) for q in keep),
               frozenset(ren[q] for q in a.accepting if q in ren))


def quotient(a: NBA) -> NBA:
    """Merge bisimilar states (bisimulation respecting acceptance)."""
    if a.states <= 1:
        return a
    block = [int(q in a.accepting) for q in range(a.states)]
    count = len(set(block))
    while True:
        sigs: dict = {}
        new = []
        for q in range(a.states):
            sig = (block[q], tuple(frozenset(block[r] for r in s) for s in a.delta[q]))
            new.append(sigs.setdefault(sig, len(sigs)))
        if len(sigs) == count:
            break
        block, count = new, len(sigs)
    block = new
    if count == a.states:
        return a
    rows: list = [None] * count
    for q in range(a.states):
        if rows[block[q]] is None:
            rows[block[q]] = tuple(tuple(sorted({block[r] for r in s})) for s in a.delta[q])
    return NBA(count, frozenset(block[q] for q in a.init), a.width, tuple(rows),
               frozenset(block[q] for q in a.accepting))


def simplify(a: NBA) -> NBA:
    a = trim(a)
    if a.states == 0:
        return a
    return quotient(a)


def complete(a: NBA) -> NBA:
    """Add a rejecting sink so that every state has a successor on every letter."""
    if a.states and a.init and all(row_s for row in a.delta for row_s in row):
        return a
    sink = a.states
    rows = tuple(tuple(s if s else (sink,) for s in row) for row in a.delta)
    rows += (tuple((sink,) for _ in range(1 << a.width)),)
    init = a.init or frozenset({sink})
    return NBA(a.states + 1, init, a.width, rows, a.accepting)


# --- atomic automata ---------------------------------------------------------


def _from_table(width: int, n: int, acc: set, step) -> NBA:
    return NBA(n, frozenset({0}), width,
               tuple(tuple((step(q, a),) for a in range(1 << width)) for q in range(n)), frozenset(acc))


def sing_nba(width: int, track: int) -> NBA:
    """Exactly one 1 on the given track."""
    return _from_table(width, 3, {1}, lambda q, a: min(q + ((a >> track) & 1), 2))


def atomic_nba(phi: Formula, ctx: Context | Sequence[str]) -> NBA:
    """Deterministic Büchi automaton for an atom, tracks laid out as in ctx."""
    layout = ctx.tracks if isinstance(ctx, Context) else tuple(ctx)
    w = len(layout)
    if isinstance(phi, Verum):
        return universal(w)
    if isinstance(phi, Falsum):
        return NBA(1, frozenset({0}), w, (tuple((0,) for _ in range(1 << w)),), frozenset())
    idx = {v: i for i, v in enumerate(layout)}

    def b(a, v):
        return (a >> idx[v]) & 1

    if isinstance(phi, Eq):
        return _from_table(w, 2, {0}, lambda q, a: q if q or b(a, phi.x) == b(a, phi.y) else 1)
    if isinstance(phi, In):
        return _from_table(w, 2, {1}, lambda q, a: 1 if q or (b(a, phi.x) and b(a, phi.X)) else 0)
    if isinstance(phi, Leq):
        def step(q, a):
            x, y = b(a, phi.x), b(a, phi.y)
            if q == 0:
                return 0 if not x else (2 if y else 1)
            if q == 1:
                return 2 if y else 1
            return 2
        return _from_table(w, 3, {2}, step)
    if isinstance(phi, Succ):
        def step(q, a):
            x, y = b(a, phi.x), b(a, phi.y)
            if q == 0:
                return 0 if not x else (2 if y else 1)
            if q == 1:
                return 3 if y else 2
            return q
        return _from_table(w, 4, {3}, step)
    if isinstance(phi, Zero):
        return _from_table(w, 3, {1}, lambda q, a: q if q else (1 if b(a, phi.x) else 2))
    raise TypeError(f"not an atom: {phi!r}")


# --- boolean operations -------------------------------------------------------


def nba_product(a: NBA, b: NBA) -> NBA:
    """Intersection of the languages."""
    if a.width != b.width:
        raise WidthError("product of automata over different alphabets")
    if a.is_weak or b.is_weak:
        # a run visits F_weak infinitely often iff it eventually stays inside it
        return simplify(NBA.explore(
            iproduct(sorted(a.init), sorted(b.init)), a.width,
            lambda k, c: iproduct(a.delta[k[0]][c], b.delta[k[1]][c]),
            lambda k: k[0] in a.accepting and k[1] in b.accepting))

    def succ(k, c):
        p, q, phase = k
        nxt = 1 if phase == 0 and p in a.accepting else 0 if phase == 1 and q in b.accepting else phase
        return ((p2, q2, nxt) for p2 in a.delta[p][c] for q2 in b.delta[q][c])

    return simplify(NBA.explore(((p, q, 0) for p in sorted(a.init) for q in sorted(b.init)), a.width,
                                succ, lambda k: k[2] == 0 and k[0] in a.accepting))


def nba_union(a: NBA, b: NBA) -> NBA:
    if a.width != b.width:
        raise WidthError("union of automata over different alphabets")
    n = a.states
    rows = a.delta + tuple(tuple(tuple(r + n for r in s) for s in row) for row in b.delta)
    return simplify(NBA(n + b.states, a.init | {q + n for q in b.init}, a.width, rows,
                        a.accepting | {q + n for q in b.accepting}))


def nba_project(a: NBA, track: int) -> NBA:
    """Erase one track: the image of the language under deleting that track."""
    if not 0 <= track < a.width:
        raise WidthError(f"track {track} out of range for width {a.width}")
    lo = (1 << track) - 1

    def lift(c, bit):
        return (c & lo) | (bit << track) | ((c & ~lo) << 1)

    rows = tuple(
        tuple(tuple(sorted(set(a.delta[q][lift(c, 0)]) | set(a.delta[q][lift(c, 1)])))
              for c in range(1 << (a.width - 1)))
        for q in range(a.states))
    return simplify(NBA(a.states, a.init, a.width - 1, rows, a.accepting))


def nba_complement(a: NBA) -> NBA:
    a = simplify(a)
    if a.states == 0:
        return universal(a.width)
    if a.is_deterministic or _total_deterministic(a):
        c = complete(a)
        if c.is_weak:
            return simplify(NBA(c.states, c.init, c.width, c.delta, frozenset(range(c.states)) - c.accepting))
        return deterministic_complement(c)
    if a.is_weak:
        return breakpoint_complement(a)
    return rank_complement(a)


def _total_deterministic(a: NBA) -> bool:
    return len(a.init) == 1 and all(len(s) <= 1 for row in a.delta for s in row)


def deterministic_complement(a: NBA) -> NBA:
    """Complement of a complete deterministic automaton: eventually avoid the accepting set."""
    assert a.is_deterministic

    def succ(k, c):
        copy, q = k
        (r,) = a.delta[q][c]
        if copy == 0:
            yield (0, r)
            if r not in a.accepting:
                yield (1, r)
        elif r not in a.accepting:
            yield (1, r)

    inits = [(0, q) for q in a.init] + [(1, q) for q in a.init if q not in a.accepting]
    return simplify(NBA.explore(inits, a.width, succ, lambda k: k[0] == 1))


def breakpoint_complement(a: NBA) -> NBA:
    """Complement of a weak automaton: every run leaves the accepting set infinitely often."""
    good = frozenset(range(a.states)) - a.accepting

    def post(S, c):
        return frozenset(r for q in S for r in a.delta[q][c])

    def succ(k, c):
        S, O = k
        S2 = post(S, c)
        O2 = (S2 if not O else post(O, c)) - good
        return ((S2, O2),)

    return simplify(NBA.explore([(a.init, frozenset())], a.width, succ, lambda k: not k[1]))


def rank_complement(a: NBA) -> NBA:
    """Rank-based complement with tight level rankings, entered after a subset phase."""
    n = a.states
    F = a.accepting
    max_rank = 2 * max(1, n - len(F))

    def post(S, c):
        return frozenset(r for q in S for r in a.delta[q][c])

    @lru_cache(maxsize=None)
    def rankings(targets: tuple, bounds: tuple) -> list[tuple]:
        """All tight rankings of targets with rank(q) <= bound(q), even on accepting states."""
        choices = []
        for q, bd in zip(targets, bounds):
            vals = range(0, min(bd, max_rank) + 1)
            choices.append([r for r in vals if not (q in F and r % 2)])
        out = []
        for ranks in iproduct(*choices):
            top = max(ranks, default=-1)
            if top % 2 == 0:
                continue
            if set(range(1, top + 1, 2)) <= set(ranks):
                out.append(tuple(zip(targets, ranks)))
        return out

    def succ(k, c):
        if k[0] == "S":
            S2 = post(k[1], c)
            yield ("S", S2)
            targets = tuple(sorted(S2))
            for f in rankings(targets, tuple(max_rank for _ in targets)):
                yield ("R", f, frozenset())
            return
        _, f, O = k
        bound: dict[int, int] = {}
        for q, r in f:
            for q2 in a.delta[q][c]:
                bound[q2] = min(bound.get(q2, r), r)
        targets = tuple(sorted(bound))
        src = post(O, c) if O else None
        for f2 in rankings(targets, tuple(bound[q] for q in targets)):
            evens = frozenset(q for q, r in f2 if r % 2 == 0)
            O2 = evens if src is None else evens & src
            yield ("R", f2, O2)

    def accepting(k):
        return k[0] == "R" and not k[2]

    return simplify(NBA.explore([("S", a.init)], a.width, succ, accepting))


# --- membership and emptiness -------------------------------------------------


def lasso_member(a: NBA, w: LassoWord) -> bool:
    if w.width != a.width:
        raise WidthError(f"lasso width {w.width} != automaton width {a.width}")
    u, v = w.prefix, w.period
    length = len(u) + len(v)

    def nxt(i):
        return i + 1 if i + 1 < length else len(u)

    nodes = {(q, 0) for q in a.init}
    order = list(nodes)
    i = 0
    while i < len(order):
        q, p = order[i]
        for r in a.delta[q][w[p]]:
            m = (r, nxt(p))
            if m not in nodes:
                nodes.add(m)
                order.append(m)
        i += 1
    idx = {m: j for j, m in enumerate(order)}

    def succ(j):
        q, p = order[j]
        return {idx[(r, nxt(p))] for r in a.delta[q][w[p]]}

    for comp in _tarjan(len(order), succ):
        if (len(comp) > 1 or comp[0] in succ(comp[0])) and any(order[j][0] in a.accepting for j in comp):
            return True
    return False


def nba_witness(a: NBA) -> LassoWord | None:
    """An accepted lasso word, or None when the language is empty."""
    for comp in sorted(a.sccs(), key=min):
        if not a.nontrivial(comp):
            continue
        f = next((q for q in sorted(comp) if q in a.accepting), None)
        if f is None:
            continue
        stem = _bfs(a, {q: None for q in sorted(a.init)}, f, None)
        if stem is None:
            continue
        first = {}
        for c in range(1 << a.width):
            for r in a.delta[f][c]:
                if r in comp:
                    first.setdefault(r, (None, c))
        loop = [first[f][1]] if f in first else _bfs(a, first, f, set(comp))
        return LassoWord(tuple(stem), tuple(loop), a.width)
    return None


def _bfs(a: NBA, prev: dict, target: int, within) -> list[int] | None:
    """Letters of a shortest path to target; prev maps start nodes to None or to (None, first letter)."""
    from collections import deque

    todo = deque(prev)
    while todo:
        q = todo.popleft()
        if q == target:
            letters = []
            while prev[q] is not None:
                p, c = prev[q]
                letters.append(c)
                if p is None:
                    break
                q = p
            return letters[::-1]
        for c in range(1 << a.width):
            for r in a.delta[q][c]:
                if (within is None or r in within) and r not in prev:
                    prev[r] = (q, c)
                    todo.append(r)
    return None


def nba_empty(a: NBA) -> bool:
    return nba_witness(a) is None


# --- formulas ----------------------------------------------------------------


def mso_to_nba(phi: Formula, ctx: Context) -> NBA:
    """Automaton over 2^(l+p) accepting the assignments that make phi true."""
    missing = free_vars(phi) - set(ctx.tracks)
    if missing:
        raise ValueError(f"free variables {sorted(missing)} not in context")
    return _compile(phi, tuple(ctx.tracks), True)


@lru_cache(maxsize=4096)
def _compile(phi: Formula, layout: tuple[str, ...], positive: bool) -> NBA:
    if isinstance(phi, ATOMS):
        base = atomic_nba(phi, layout)
        return base if positive else nba_complement(base)
    if isinstance(phi, Not):
        return _compile(phi.body, layout, not positive)
    if isinstance(phi, And):
        left = _compile(phi.left, layout, positive)
        right = _compile(phi.right, layout, positive)
        return nba_product(left, right) if positive else nba_union(left, right)
    if not positive:
        return nba_complement(_compile(phi, layout, True))
    inner = tuple(v if v != phi.var else "#" for v in layout) + (phi.var,)
    body = _compile(phi.body, inner, True)
    if isinstance(phi, ExistsI):
        body = nba_product(sing_nba(len(inner), len(layout)), body)
    return nba_project(body, len(layout))


def assignment_word(ctx: Context, assignment: Mapping[str, LassoWord | int]) -> LassoWord:
    words = []
    for v in ctx.tracks:
        if v not in assignment:
            raise ValueError(f"no value for {v!r}")
        val = assignment[v]
        if isinstance(val, int):
            val = LassoWord.position(val)
        if val.width != 1:
            raise WidthError(f"value of {v!r} must be a one-track word")
        words.append(val)
    extra = set(assignment) - set(ctx.tracks)
    if extra:
        raise ValueError(f"unexpected variables {sorted(extra)}")
    return LassoWord.zip(words)


def eval_on_lasso(phi: Formula, ctx: Context, assignment: Mapping[str, LassoWord | int]) -> bool:
    """Truth of phi; individuals are given as positions or singleton words, sets as words."""
    return lasso_member(mso_to_nba(phi, ctx), assignment_word(ctx, assignment))


# --- substitution along machines and realizer verification ---------------------


def subst_nba_along_mealy(a: NBA, m: MealyMachine) -> NBA:
    """Automaton accepting the words whose image under m is accepted by a."""
    if m.out_width != a.width:
        raise WidthError(f"machine output width {m.out_width} != automaton width {a.width}")

    def succ(k, c):
        qa, qm = k
        qm2, b = m.table[qm][c]
        return ((r, qm2) for r in a.delta[qa][b])

    return simplify(NBA.explore(((q, m.init) for q in sorted(a.init)), m.in_width, succ,
                                lambda k: k[0] in a.accepting))


def graph_machine(f: MealyMachine) -> MealyMachine:
    """The machine a -> (a, f(a))."""
    return pair(identity(f.in_width), f)


@dataclass(frozen=True)
class Verdict:
    valid: bool
    counterexample: LassoWord | None = None
    output: LassoWord | None = None

    def to_json(self, inputs=(), outputs=()) -> dict:
        if self.valid:
            return {"status": "valid"}
        return {
            "status": "counterexample",
            "input": {v: str(self.counterexample.track(i)) for i, v in enumerate(inputs)},
            "output": {v: str(self.output.track(i)) for i, v in enumerate(outputs)},
        }


def verify_realizer(f: MealyMachine, phi: Formula, inputs: Sequence[str], outputs: Sequence[str]) -> Verdict:
    """Check that phi(a, f(a)) holds for every input stream a."""
    if f.in_width != len(inputs) or f.out_width != len(outputs):
        raise WidthError("machine widths do not match the specification's variables")
    ctx = Context((), tuple(inputs) + tuple(outputs))
    bad = subst_nba_along_mealy(mso_to_nba(Not(phi), ctx), graph_machine(f))
    w = nba_witness(bad)
    if w is None:
        return Verdict(True)
    return Verdict(False, w, simulate_lasso(f, w))
