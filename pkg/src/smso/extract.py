"""Realizer extraction: checked SMSO proofs to synchronous Mealy machines.

The machine extracted from a node reads, letter by letter, the individual and set
tracks of its context followed by one move block per hypothesis, and writes a move
of the conclusion.
"""

from __future__ import annotations

from dataclasses import dataclass

from .finite import bounded_to_mealy
from .kernel import Mode, Proof, Sequent, _comprehension_formula, check_proof
from .logic import (
    ATOMS, And, Context, ExistsI, ExistsS, Formula, In, MoveShape, Not, free_vars, moves_shape,
)
from .mealy import (
    MealyMachine, compose, constant, fig1_left, identity, pair, project, reachable, select,
)


class ExtractionError(ValueError):
    pass


@dataclass(frozen=True)
class RealizerSignature:
    ctx: Context
    hyp_shapes: tuple[MoveShape, ...]
    goal_shape: MoveShape

    @classmethod
    def of(cls, s: Sequent) -> "RealizerSignature":
        return cls(s.ctx, tuple(moves_shape(h) for h in s.hyps), moves_shape(s.concl))

    @property
    def in_width(self) -> int:
        # individual tracks carry the position bit; sets their membership bit
        return self.ctx.width + sum(h.width for h in self.hyp_shapes)

    @property
    def out_width(self) -> int:
        return self.goal_shape.width

    def block(self, i: int) -> list[int]:
        start = self.ctx.width + sum(h.width for h in self.hyp_shapes[:i])
        return list(range(start, start + self.hyp_shapes[i].width))

    def ctx_tracks(self) -> list[int]:
        return list(range(self.ctx.width))


def extract(p: Proof, ctx: Context | None = None) -> MealyMachine:
    """Realizer of p's end-sequent; ctx may enlarge the end-sequent's context."""
    check_proof(p, Mode.SMSO)
    m = _extract(p)
    own = p.sequent.ctx
    if ctx is None or ctx == own:
        return m
    if not set(own.tracks) <= set(ctx.tracks):
        raise ExtractionError("context does not cover the end-sequent")
    sig = RealizerSignature.of(Sequent(p.sequent.hyps, p.sequent.concl, ctx))
    order = [ctx.index(v) for v in own.tracks] + list(range(ctx.width, sig.in_width))
    return reachable(compose(m, select(sig.in_width, order)))


def _extract(p: Proof) -> MealyMachine:
    sig = RealizerSignature.of(p.sequent)
    m = _build(p, sig)
    assert (m.in_width, m.out_width) == (sig.in_width, sig.out_width), (p.rule, m.in_width, m.out_width, sig)
    return m


def _feed(m: MealyMachine, in_width: int, tracks: list[int]) -> MealyMachine:
    return reachable(compose(m, select(in_width, tracks)))


def _build(p: Proof, sig: RealizerSignature) -> MealyMachine:
    s, r, w = p.sequent, p.rule, sig.in_width
    if sig.out_width == 0:
        return constant(w, 0)
    n = len(s.hyps)
    blocks = [sig.block(i) for i in range(n)]
    base = sig.ctx_tracks()

    if r == "axiom":
        return select(w, blocks[p.params.get("index", n - 1)])
    if r == "weaken":
        i = p.params["index"]
        return _feed(_extract(p.premises[0]), w, base + sum(blocks[:i] + blocks[i + 1:], []))
    if r == "exchange":
        return _feed(_extract(p.premises[0]), w, base + sum((blocks[k] for k in p.params["perm"]), []))
    if r == "duplicate":
        return _feed(_extract(p.premises[0]), w, base + sum(blocks, []) + blocks[p.params["index"]])
    if r == "var-weaken":
        inner = p.premises[0].sequent.ctx
        return _feed(_extract(p.premises[0]), w, [s.ctx.index(v) for v in inner.tracks] + sum(blocks, []))
    if r == "cut":
        f1, f2 = _extract(p.premises[0]), _extract(p.premises[1])
        return reachable(compose(f2, pair(identity(w), f1)))
    if r == "and-intro":
        return reachable(pair(_extract(p.premises[0]), _extract(p.premises[1])))
    if r in ("and-elim-l", "and-elim-r"):
        c = p.premises[0].sequent.concl
        wl = moves_shape(c.left).width
        f = _extract(p.premises[0])
        return reachable(project(f, 0, wl) if r == "and-elim-l" else project(f, wl, f.out_width))
    if r in ("ex-i-intro", "ex-s-intro"):
        return reachable(pair(select(w, [s.ctx.index(p.params["witness"])]), _extract(p.premises[0])))
    if r in ("ex-i-elim", "ex-s-elim"):
        f1, f2 = _extract(p.premises[0]), _extract(p.premises[1])
        ex = p.premises[0].sequent.concl
        v = p.params.get("eigen", ex.var)
        inner = p.premises[1].sequent.ctx
        order = [w if name == v else s.ctx.index(name) for name in inner.tracks]
        order += list(range(s.ctx.width, w)) + list(range(w + 1, w + f1.out_width))
        fed = compose(select(w + f1.out_width, order), pair(identity(w), f1))
        return reachable(compose(f2, fed))
    if r == "eq-elim":
        return _extract(p.premises[0])
    if r == "zero-exists":
        return MealyMachine(2, 0, w, 1, (((1, 1),) * (1 << w), ((1, 0),) * (1 << w)))
    if r == "succ-exists":
        return _feed(fig1_left(), w, [s.ctx.index(s.concl.body.x)])
    if r == "sync-comp":
        phi_hat, y = _comprehension_formula(p.params), p.params["var"]
        sets = [S for S in s.ctx.sets if S in free_vars(phi_hat)]
        b = _feed(bounded_to_mealy(phi_hat, Context((), tuple(sets)), y), w, [s.ctx.index(S) for S in sets])
        f = _extract(p.premises[0])
        h = lift_moves(s.concl.body, s.concl.var, phi_hat, y)
        return reachable(pair(b, compose(h, f)))
    raise AssertionError(f"rule {r!r} with a non-deterministic conclusion {s.concl}")


def lift_tracks(psi: Formula, X: str, phi_hat: Formula, y: str) -> tuple[list[int], int]:
    """Tracks of a move of psi[phi_hat/X] that form a move of psi, and the source width."""
    w_hat = moves_shape(phi_hat).width

    def go(f: Formula) -> tuple[list[int], int]:
        if isinstance(f, In) and f.X == X:
            return [], w_hat
        if isinstance(f, ATOMS) or isinstance(f, Not):
            return [], 0
        if isinstance(f, And):
            sl, wl = go(f.left)
            sr, wr = go(f.right)
            return sl + [wl + t for t in sr], wl + wr
        if isinstance(f, ExistsS) and f.var == X:
            width = 1 + moves_shape(f.body).width
            return list(range(width)), width
        sb, wb = go(f.body)
        return [0] + [1 + t for t in sb], 1 + wb

    return go(psi)


def lift_moves(psi: Formula, X: str, phi_hat: Formula, y: str) -> MealyMachine:
    """Memoryless map from moves of psi[phi_hat/X] to moves of psi."""
    tracks, width = lift_tracks(psi, X, phi_hat, y)
    return select(width, tracks)


def church_spec(p: Proof) -> tuple[list[str], list[str], Formula]:
    """Inputs, outputs and body of an end-sequent |- exists Y1 .. Yq phi(X; Y)."""
    s = p.sequent
    if s.hyps or s.ctx.individuals:
        raise ExtractionError("a Church realizer needs a closed end-sequent over set inputs")
    outputs, body = [], s.concl
    while isinstance(body, ExistsS):
        outputs.append(body.var)
        body = body.body
    return list(s.ctx.sets), outputs, body


def church_realizer(p: Proof) -> MealyMachine:
    """Machine from the input sets to the witness tracks of the outer set existentials."""
    _, outputs, _ = church_spec(p)
    return reachable(project(extract(p), 0, len(outputs)))
