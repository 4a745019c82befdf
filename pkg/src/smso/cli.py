"""Command-line front end.

Exit codes: 0 success, 1 semantic failure (rejected proof, invalid realizer,
unbounded formula), 2 usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources
from pathlib import Path

from . import extract as ex
from . import finite, kernel, omega, splitting
from .logic import Context, FormulaError, free_individuals, free_sets, parse_formula
from .mealy import LassoWord, MealyMachine, simulate_lasso

FIXTURES_ENV = "SMSO_FIXTURES"


class UsageError(Exception):
    pass


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURES_ENV)
    if override:
        return Path(override)
    return Path(str(resources.files("smso") / "fixtures"))


def resolve(name: str) -> Path | None:
    """A path as given, else the same name inside the fixture directory."""
    p = Path(name)
    if p.exists():
        return p
    q = fixture_dir() / name
    return q if q.exists() else None


def read_formula(arg: str):
    path = resolve(arg) if not arg.lstrip().startswith("(") else None
    text = path.read_text() if path else arg
    return parse_formula(text.strip())


def read_json(arg: str) -> dict:
    path = resolve(arg)
    if path is None:
        raise UsageError(f"no such file: {arg}")
    return json.loads(path.read_text())


def read_machine(arg: str) -> MealyMachine:
    return MealyMachine.from_json(read_json(arg))


def read_proof(arg: str) -> kernel.Proof:
    return kernel.proof_from_json(read_json(arg))


def _names(text: str | None) -> list[str]:
    return [v for v in (text or "").split(",") if v]


def _emit(args, payload, text: str | None = None) -> None:
    out = json.dumps(payload, indent=2) if args.json or text is None else text
    if getattr(args, "out", None):
        Path(args.out).write_text(out + "\n")
    else:
        print(out)


def _default_ctx(phi, individuals=None, sets=None) -> Context:
    return Context(tuple(individuals or sorted(free_individuals(phi))), tuple(sets or sorted(free_sets(phi))))


# --- verbs -------------------------------------------------------------------------


def cmd_check(args) -> int:
    p = read_proof(args.proof)
    try:
        s = kernel.check_proof(p, args.mode)
    except kernel.ProofError as e:
        _emit(args, {"accepted": False, "error": type(e).__name__, "message": e.message, "path": list(e.path)},
              f"rejected: {e}")
        return 1
    _emit(args, {"accepted": True, "sequent": s.to_json()}, f"accepted: {s}")
    return 0


def cmd_extract(args) -> int:
    p = read_proof(args.proof)
    try:
        m = ex.church_realizer(p) if args.church else ex.extract(p)
    except kernel.ProofError as e:
        print(f"rejected: {e}", file=sys.stderr)
        return 1
    _emit(args, m.to_json(), json.dumps(m.to_json(), indent=2))
    return 0


def cmd_simulate(args) -> int:
    m = read_machine(args.machine)
    words = [LassoWord.parse(t) for t in args.lasso]
    word = words[0] if len(words) == 1 and words[0].width == m.in_width else LassoWord.zip(words)
    out = simulate_lasso(m, word)
    _emit(args, {"input": str(word), "output": str(out)}, str(out))
    return 0


def cmd_verify(args) -> int:
    m = read_machine(args.machine)
    phi = read_formula(args.formula)
    inputs, outputs = _names(args.inputs), _names(args.outputs)
    v = omega.verify_realizer(m, phi, inputs, outputs)
    if v.valid:
        _emit(args, v.to_json(inputs, outputs), "valid")
        return 0
    text = "invalid; counterexample " + ", ".join(
        f"{n}={v.counterexample.track(i)}" for i, n in enumerate(inputs)) + "; output " + ", ".join(
        f"{n}={v.output.track(i)}" for i, n in enumerate(outputs))
    _emit(args, v.to_json(inputs, outputs), text)
    return 1


def cmd_compile(args) -> int:
    phi = read_formula(args.formula)
    ctx = _default_ctx(phi, _names(args.individuals), _names(args.sets))
    a = finite.compile_mso_finite(phi, ctx) if args.finite else omega.simplify(omega.mso_to_nba(phi, ctx))
    data = {"kind": "dfa" if args.finite else "nba", "tracks": list(ctx.tracks), **a.to_json()}
    _emit(args, data, json.dumps(data, indent=2))
    return 0


def _assignment(items: list[str]) -> dict:
    out: dict = {}
    for item in items:
        name, _, value = item.partition("=")
        if not value:
            raise UsageError(f"bad assignment {item!r}; expected name=value")
        out[name] = int(value) if value.isdigit() and name[:1].islower() else LassoWord.parse(value)
    return out


def cmd_eval(args) -> int:
    phi = read_formula(args.formula)
    asg = _assignment(args.assign)
    ctx = _default_ctx(phi)
    missing = set(ctx.tracks) - set(asg)
    if missing:
        raise UsageError(f"unassigned variables: {', '.join(sorted(missing))}")
    value = omega.eval_on_lasso(phi, ctx, asg)
    _emit(args, {"value": value}, "true" if value else "false")
    return 0


def cmd_glivenko(args) -> int:
    p = read_proof(args.proof)
    try:
        q = kernel.glivenko_translate(p)
    except kernel.ProofError as e:
        print(f"rejected: {e}", file=sys.stderr)
        return 1
    data = kernel.proof_to_json(q)
    _emit(args, data, json.dumps(data))
    return 0


def cmd_split(args) -> int:
    phi = read_formula(args.formula)
    left = set(_names(args.left)) | {args.at}
    res = splitting.split(splitting.to_lambda(phi), args.at, left, prune=args.prune)
    pairs = [{"left": str(l), "right": str(r)} for l, r in res]
    _emit(args, {"pairs": pairs}, "\n".join(f"{d['left']}  |  {d['right']}" for d in pairs))
    return 0


def cmd_debound(args) -> int:
    phi = read_formula(args.formula)
    try:
        out = splitting.debound(phi, args.var, verify=args.verify_bounded)
    except splitting.NotSemanticallyBounded as e:
        _emit(args, {"bounded": False, "message": str(e)}, f"not bounded: {e}")
        return 1
    _emit(args, {"bounded": True, "formula": str(out)}, str(out))
    return 0


def cmd_dot(args) -> int:
    m = read_machine(args.machine)
    text = m.to_dot(args.name)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="smso", description="Check proofs, extract and verify synchronous realizers.")
    sub = parser.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(fn=fn)
        return sp

    sp = verb("check", cmd_check, "check a proof file")
    sp.add_argument("proof")
    sp.add_argument("--mode", choices=["smso", "mso"], default="smso")

    sp = verb("extract", cmd_extract, "extract a realizer from an SMSO proof")
    sp.add_argument("proof")
    sp.add_argument("--out")
    sp.add_argument("--church", action="store_true", help="keep only the outer set witnesses")

    sp = verb("simulate", cmd_simulate, "run a machine on a lasso (one u(v) per track)")
    sp.add_argument("machine")
    sp.add_argument("lasso", nargs="+")

    sp = verb("verify", cmd_verify, "check that a machine realizes a specification")
    sp.add_argument("machine")
    sp.add_argument("formula")
    sp.add_argument("--inputs", default="X")
    sp.add_argument("--outputs", default="Y")

    sp = verb("compile", cmd_compile, "compile a formula to an automaton")
    sp.add_argument("formula")
    kind = sp.add_mutually_exclusive_group(required=True)
    kind.add_argument("--finite", action="store_true")
    kind.add_argument("--omega", action="store_true")
    sp.add_argument("--individuals")
    sp.add_argument("--sets")
    sp.add_argument("--out")

    sp = verb("eval", cmd_eval, "evaluate a formula on lasso sets and positions")
    sp.add_argument("formula")
    sp.add_argument("--assign", action="append", default=[], metavar="NAME=VALUE")

    sp = verb("glivenko", cmd_glivenko, "translate an MSO proof into an SMSO proof of the double negation")
    sp.add_argument("proof")
    sp.add_argument("--out")

    sp = verb("split", cmd_split, "split a formula at a position variable")
    sp.add_argument("formula")
    sp.add_argument("--at", required=True)
    sp.add_argument("--left", default="")
    sp.add_argument("--prune", action="store_true", help="drop pairs with a constant false side")

    sp = verb("debound", cmd_debound, "compute an equivalent uniformly bounded formula")
    sp.add_argument("formula")
    sp.add_argument("--var", required=True)
    sp.add_argument("--verify-bounded", action="store_true")

    sp = verb("dot", cmd_dot, "render a machine in Graphviz DOT")
    sp.add_argument("machine")
    sp.add_argument("--name", default="M")
    sp.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, FormulaError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
