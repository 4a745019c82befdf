"""Deterministic Mealy machines over bit-vector alphabets, and lasso words.

A letter of width k is an int in range(2**k); bit i is track i.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from math import lcm
from typing import Callable, Sequence

Letter = int


class WidthError(ValueError):
    pass


def bit(letter: Letter, i: int) -> int:
    return (letter >> i) & 1


def bits_to_letter(bits: Sequence[int]) -> Letter:
    return sum((b & 1) << i for i, b in enumerate(bits))


def letter_to_bits(letter: Letter, width: int) -> tuple[int, ...]:
    return tuple((letter >> i) & 1 for i in range(width))


# --- lasso words -----------------------------------------------------------


def _primitive_root(v: tuple) -> tuple:
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


@dataclass(frozen=True)
class LassoWord:
    """The ultimately periodic word prefix . period^omega, kept canonical."""

    prefix: tuple[Letter, ...]
    period: tuple[Letter, ...]
    width: int

    def __post_init__(self):
        u, v = tuple(self.prefix), tuple(self.period)
        if not v:
            raise ValueError("lasso period must be nonempty")
        if any(not 0 <= a < 1 << self.width for a in u + v):
            raise WidthError(f"letter out of range for width {self.width}")
        v = _primitive_root(v)
        while u and u[-1] == v[-1]:
            u = u[:-1]
            v = v[-1:] + v[:-1]
        object.__setattr__(self, "prefix", u)
        object.__setattr__(self, "period", v)

    def __getitem__(self, n: int) -> Letter:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.period[(n - len(self.prefix)) % len(self.period)]

    def take(self, n: int) -> list[Letter]:
        return [self[i] for i in range(n)]

    def track(self, i: int) -> "LassoWord":
        return LassoWord(tuple(bit(a, i) for a in self.prefix),
                         tuple(bit(a, i) for a in self.period), 1)

    def tracks(self, start: int, stop: int) -> "LassoWord":
        m = (1 << (stop - start)) - 1
        return LassoWord(tuple((a >> start) & m for a in self.prefix),
                         tuple((a >> start) & m for a in self.period), stop - start)

    def ones(self) -> list[int]:
        """Positions holding 1 on a one-track word (only meaningful if finitely many)."""
        return [i for i, a in enumerate(self.prefix) if a]

    def __str__(self) -> str:
        if self.width == 0:
            return "()"
        return " ".join(_track_str(self, i) for i in range(self.width))

    @classmethod
    def parse(cls, text: str) -> "LassoWord":
        """Parse a one-track word written u(v), for instance 10(01)."""
        text = text.strip()
        if not text.endswith(")") or "(" not in text:
            raise ValueError(f"lasso syntax is u(v): {text!r}")
        u, v = text[:-1].split("(", 1)
        if any(c not in "01" for c in u + v) or not v:
            raise ValueError(f"lasso syntax is u(v) over 0/1: {text!r}")
        return cls(tuple(map(int, u)), tuple(map(int, v)), 1)

    @classmethod
    def position(cls, k: int) -> "LassoWord":
        """The singleton word coding the individual k."""
        return cls((0,) * k + (1,), (0,), 1)

    @classmethod
    def zip(cls, words: Sequence["LassoWord"]) -> "LassoWord":
        """Stack words as tracks, the first word on the lowest bits."""
        if not words:
            return cls((), (0,), 0)
        n = max(len(w.prefix) for w in words)
        p = lcm(*(len(w.period) for w in words))
        letters = []
        for i in range(n + p):
            a, shift = 0, 0
            for w in words:
                a |= w[i] << shift
                shift += w.width
            letters.append(a)
        return cls(tuple(letters[:n]), tuple(letters[n:]), sum(w.width for w in words))


def _track_str(w: LassoWord, i: int) -> str:
    t = w.track(i)
    return "".join(map(str, t.prefix)) + "(" + "".join(map(str, t.period)) + ")"


def all_lassos(width: int, max_prefix: int, max_period: int):
    """Enumerate every canonical lasso up to the given sizes (with duplicates removed)."""
    from itertools import product

    seen = set()
    letters = range(1 << width)
    for lu in range(max_prefix + 1):
        for lv in range(1, max_period + 1):
            for u in product(letters, repeat=lu):
                for v in product(letters, repeat=lv):
                    w = LassoWord(u, v, width)
                    if w not in seen:
                        seen.add(w)
                        yield w


def random_lasso(rng: random.Random, width: int, max_prefix: int = 4, max_period: int = 4) -> LassoWord:
    n = 1 << width
    u = tuple(rng.randrange(n) for _ in range(rng.randint(0, max_prefix)))
    v = tuple(rng.randrange(n) for _ in range(rng.randint(1, max_period)))
    return LassoWord(u, v, width)


# --- machines --------------------------------------------------------------


@dataclass(frozen=True)
class MealyMachine:
    """table[q][a] = (next state, output letter)."""

    states: int
    init: int
    in_width: int
    out_width: int
    table: tuple[tuple[tuple[int, Letter], ...], ...]

    def __post_init__(self):
        table = tuple(tuple(tuple(cell) for cell in row) for row in self.table)
        object.__setattr__(self, "table", table)
        if not 0 <= self.init < self.states or len(table) != self.states:
            raise ValueError("bad state count or initial state")
        for row in table:
            if len(row) != 1 << self.in_width:
                raise ValueError("transition table is not total")
            for q, b in row:
                if not 0 <= q < self.states or not 0 <= b < 1 << self.out_width:
                    raise ValueError("transition target or output out of range")

    def step(self, q: int, a: Letter) -> tuple[int, Letter]:
        return self.table[q][a]

    @classmethod
    def from_function(cls, states: int, init: int, in_width: int, out_width: int,
                      delta: Callable[[int, Letter], tuple[int, Letter]]) -> "MealyMachine":
        return cls(states, init, in_width, out_width,
                   tuple(tuple(delta(q, a) for a in range(1 << in_width)) for q in range(states)))

    @classmethod
    def explore(cls, init, in_width: int, out_width: int, delta) -> "MealyMachine":
        """Build a machine over the states reachable from init; delta maps (key, letter) to (key, out)."""
        index = {init: 0}
        keys = [init]
        rows = []
        i = 0
        while i < len(keys):
            row = []
            for a in range(1 << in_width):
                k, b = delta(keys[i], a)
                if k not in index:
                    index[k] = len(keys)
                    keys.append(k)
                row.append((index[k], b))
            rows.append(tuple(row))
            i += 1
        return cls(len(keys), 0, in_width, out_width, tuple(rows))

    # serialization

    def to_json(self) -> dict:
        return {
            "states": self.states,
            "init": self.init,
            "in_width": self.in_width,
            "out_width": self.out_width,
            "table": [[q, a, n, b] for q, row in enumerate(self.table) for a, (n, b) in enumerate(row)],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "MealyMachine":
        if isinstance(data, str):
            data = json.loads(data)
        states, w = data["states"], data["in_width"]
        cells: list[list] = [[None] * (1 << w) for _ in range(states)]
        for q, a, n, b in data["table"]:
            cells[q][a] = (n, b)
        if any(c is None for row in cells for c in row):
            raise ValueError("transition table is not total")
        return cls(states, data["init"], w, data["out_width"], tuple(map(tuple, cells)))

    def to_dot(self, name: str = "M") -> str:
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  start [shape=point];',
                 f"  start -> q{self.init};"]
        for q in range(self.states):
            lines.append(f'  q{q} [shape=circle,label="{q}"];')
        for q, row in enumerate(self.table):
            for a, (n, b) in enumerate(row):
                lines.append(f'  q{q} -> q{n} [label="{_bits(a, self.in_width)}|{_bits(b, self.out_width)}"];')
        lines.append("}")
        return "\n".join(lines)


def _bits(a: Letter, w: int) -> str:
    return "".join(str(bit(a, i)) for i in range(w)) or "()"


def run_prefix(m: MealyMachine, word: Sequence[Letter]) -> list[Letter]:
    q, out = m.init, []
    for a in word:
        if not 0 <= a < 1 << m.in_width:
            raise WidthError(f"letter {a} out of range for width {m.in_width}")
        q, b = m.table[q][a]
        out.append(b)
    return out


def simulate_lasso(m: MealyMachine, word: LassoWord) -> LassoWord:
    if word.width != m.in_width:
        raise WidthError(f"lasso width {word.width} != machine input width {m.in_width}")
    out = []
    q = m.init
    for a in word.prefix:
        q, b = m.table[q][a]
        out.append(b)
    v = word.period
    seen: dict[tuple[int, int], int] = {}
    i = 0
    while (q, i % len(v)) not in seen:
        seen[(q, i % len(v))] = len(out)
        q, b = m.table[q][v[i % len(v)]]
        out.append(b)
        i += 1
    start = seen[(q, i % len(v))]
    return LassoWord(tuple(out[:start]), tuple(out[start:]), m.out_width)


def compose(n: MealyMachine, m: MealyMachine) -> MealyMachine:
    """The machine computing n after m: m reads the input, n reads m's output."""
    if m.out_width != n.in_width:
        raise WidthError(f"cannot feed width {m.out_width} into width {n.in_width}")

    def delta(q: int, a: Letter):
        qm, qn = divmod(q, n.states)
        qm2, b = m.table[qm][a]
        qn2, d = n.table[qn][b]
        return qm2 * n.states + qn2, d

    return MealyMachine.from_function(m.states * n.states, m.init * n.states + n.init,
                                      m.in_width, n.out_width, delta)


def pair(*machines: MealyMachine) -> MealyMachine:
    """Run the machines side by side on the same input; outputs are concatenated tracks."""
    if not machines:
        raise ValueError("pair needs at least one machine")
    w = machines[0].in_width
    if any(mm.in_width != w for mm in machines):
        raise WidthError("paired machines must share their input width")
    if len(machines) == 1:
        return machines[0]
    first, rest = machines[0], pair(*machines[1:])

    def delta(q: int, a: Letter):
        q1, q2 = divmod(q, rest.states)
        n1, b1 = first.table[q1][a]
        n2, b2 = rest.table[q2][a]
        return n1 * rest.states + n2, b1 | (b2 << first.out_width)

    return MealyMachine.from_function(first.states * rest.states, first.init * rest.states + rest.init,
                                      w, first.out_width + rest.out_width, delta)


def reachable(m: MealyMachine) -> MealyMachine:
    """The same machine restricted to the states reachable from init."""
    return MealyMachine.explore(m.init, m.in_width, m.out_width, lambda q, a: m.table[q][a])


def track_map(in_width: int, tracks: Sequence[int]) -> Callable[[Letter], Letter]:
    """Letter function selecting the given input tracks, in order."""
    for t in tracks:
        if not 0 <= t < in_width:
            raise WidthError(f"track {t} out of range for width {in_width}")
    tracks = tuple(tracks)
    return lambda a: sum(((a >> t) & 1) << i for i, t in enumerate(tracks))


def project(m: MealyMachine, start: int, stop: int) -> MealyMachine:
    """Keep output tracks start..stop-1."""
    if not 0 <= start <= stop <= m.out_width:
        raise WidthError(f"range {start}:{stop} out of bounds for width {m.out_width}")
    f = track_map(m.out_width, range(start, stop))
    return MealyMachine(m.states, m.init, m.in_width, stop - start,
                        tuple(tuple((q, f(b)) for q, b in row) for row in m.table))


def lift_letter_function(f: Callable[[Letter], Letter], in_width: int, out_width: int) -> MealyMachine:
    return MealyMachine(1, 0, in_width, out_width, (tuple((0, f(a)) for a in range(1 << in_width)),))


def select(in_width: int, tracks: Sequence[int]) -> MealyMachine:
    """One-state machine copying the listed input tracks to its output."""
    return lift_letter_function(track_map(in_width, tracks), in_width, len(tracks))


def identity(width: int = 1) -> MealyMachine:
    return lift_letter_function(lambda a: a, width, width)


def constant(in_width: int, out_width: int, letter: Letter = 0) -> MealyMachine:
    return lift_letter_function(lambda a: letter, in_width, out_width)


def fig1_left() -> MealyMachine:
    """One-step delay: state 0 on 0|0 stays, on 1|0 goes to 1; state 1 on 0|1 to 0, on 1|1 stays."""
    return MealyMachine(2, 0, 1, 1, (((0, 0), (1, 0)), ((0, 1), (1, 1))))


def fig1_right() -> MealyMachine:
    """Realizer of the Thomas specification: Y(n) = X(n) or not X(n-1), with Y(0) = 1."""
    return MealyMachine(2, 0, 1, 1, (((1, 1), (1, 1)), ((0, 0), (1, 1))))


def random_machine(rng: random.Random, states: int, in_width: int = 1, out_width: int = 1) -> MealyMachine:
    return MealyMachine.from_function(
        states, 0, in_width, out_width,
        lambda q, a: (rng.randrange(states), rng.randrange(1 << out_width)))


def behaviorally_equal(m1: MealyMachine, m2: MealyMachine, max_len: int = 8) -> bool:
    """Compare outputs on every input word of length <= max_len (via the product machine)."""
    if (m1.in_width, m1.out_width) != (m2.in_width, m2.out_width):
        return False
    frontier = {(m1.init, m2.init)}
    seen = set(frontier)
    for _ in range(max_len):
        nxt = set()
        for q1, q2 in frontier:
            for a in range(1 << m1.in_width):
                n1, b1 = m1.table[q1][a]
                n2, b2 = m2.table[q2][a]
                if b1 != b2:
                    return False
                if (n1, n2) not in seen:
                    seen.add((n1, n2))
                    nxt.add((n1, n2))
        frontier = nxt
    return True
