"""Command-line interface.

Exit status: 0 on success, 1 when a check or verification fails, 2 on usage
and parse/type errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Optional

from cttqe.construction import Improper, as_expr, classify, encode, literal_value
from cttqe.errors import CttqeError, FuelExhausted, ParseError
from cttqe.kernel import Var
from cttqe.rewrite import normalize
from cttqe.semantics import Assignment, Fails, Model, check_valid, eps_pool_for, valuate
from cttqe.stdlib import Theory, check_definitions, default_theory
from cttqe.surface import (
    load_model,
    load_theory,
    parse_expr,
    parse_type,
    parse_value,
    print_expr,
)
from cttqe.trace import (
    FailedAtStep,
    check_trace,
    discharge,
    format_justification,
    instantiate,
    parse_trace,
    polydiff_trace,
)

OK, FAILED, USAGE = 0, 1, 2


class Failure(Exception):
    """A check that ran and came out negative."""


class Output:
    def __init__(self, as_json: bool, out=None):
        self.as_json = as_json
        self.out = out or sys.stdout
        self.lines: list[str] = []
        self.steps: list[dict] = []
        self.result = None
        self.t0 = time.perf_counter()

    def say(self, line: str = "") -> None:
        self.lines.append(line)
        if not self.as_json:
            print(line, file=self.out)

    def finish(self, status: int, error: Optional[str] = None) -> int:
        if self.as_json:
            doc = {
                "status": status,
                "result": self.result,
                "steps": self.steps,
                "output": self.lines,
                "timings": {"total_ms": round((time.perf_counter() - self.t0) * 1000, 3)},
            }
            if error is not None:
                doc["error"] = error
            print(json.dumps(doc, indent=2), file=self.out)
        return status


# ---------------------------------------------------------------------------
# Commands


def _expr(args, text: str, theory: Theory):
    return parse_expr(text, theory, "<arg>")


def cmd_check(args, theory: Theory, out: Output) -> int:
    path = Path(args.file)
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".cttqe":
        th = load_theory(text, theory, str(path))
        problems = check_definitions(th)
        for p in problems:
            out.say(f"problem: {p}")
        new = [n for n in th.defs if n not in theory.defs]
        for name in new:
            d = th.defs[name]
            out.say(f"{d.kind} {name} : {d.const.ty}")
        out.result = {"constants": new}
        if problems:
            raise Failure(f"{len(problems)} problem(s)")
        return OK
    if path.suffix == ".trace":
        return _report_trace(parse_trace(text, theory, str(path)), theory, out)
    if path.suffix == ".model":
        m = load_model(text, theory, str(path))
        out.say(f"model with {m.iota_size} individuals, {len(m.interpretation)} constants fixed")
        out.result = {"iota": m.iota_size, "constants": sorted(c.name for c in m.interpretation)}
        return OK
    types = []
    for n, line in enumerate(text.splitlines(), 1):
        if line.strip() and not line.lstrip().startswith("#"):
            e = parse_expr(line, theory, str(path), n)
            out.say(f"{n}: {e.ty}")
            types.append(str(e.ty))
    out.result = types
    return OK


def cmd_typeof(args, theory: Theory, out: Output) -> int:
    e = _expr(args, args.expr, theory)
    out.result = str(e.ty)
    out.say(str(e.ty))
    return OK


def cmd_encode(args, theory: Theory, out: Output) -> int:
    e = _expr(args, args.expr, theory)
    lit = print_expr(as_expr(encode(e)), theory)
    out.result = lit
    out.say(lit)
    return OK


def cmd_decode(args, theory: Theory, out: Output) -> int:
    e = _expr(args, args.expr, theory)
    c = literal_value(e)
    if c is None:
        try:
            c = literal_value(normalize(e, theory=theory).result)
        except FuelExhausted:
            c = None
    if c is None:
        raise Failure(f"{print_expr(e, theory)} does not compute to a construction literal")
    p = classify(c)
    if isinstance(p, Improper):
        where = ".".join(map(str, p.path)) or "root"
        raise Failure(f"improper construction at {where}: {p.reason}")
    text = print_expr(p.decoded, theory)
    out.result = {"expr": text, "type": str(p.ty)}
    out.say(f"{text}  : {p.ty}")
    return OK


def _unfold_policy(text: str):
    if text in ("none", "transparent", "all"):
        return text
    return {s.strip() for s in text.split(",") if s.strip()}


def cmd_normalize(args, theory: Theory, out: Output) -> int:
    e = _expr(args, args.expr, theory)
    report = normalize(e, fuel=args.fuel, theory=theory, unfold=_unfold_policy(args.unfold))
    for k, (rule, path) in enumerate(report.steps, 1):
        where = ".".join(map(str, path)) or "root"
        out.steps.append({"rule": rule.value, "path": list(path)})
        if args.steps:
            out.say(f"{k:4d}  {rule.value:<13} at {where}")
    text = print_expr(report.result, theory)
    out.result = text
    out.say(text)
    return OK


def _model(args, theory: Theory) -> Model:
    if getattr(args, "model", None):
        path = Path(args.model)
        return load_model(path.read_text(encoding="utf-8"), theory, str(path))
    return Model(2, theory)


def _assignment(args, m: Model, theory: Theory) -> Assignment:
    phi = Assignment()
    for item in args.assign or []:
        lhs, sep, rhs = item.partition("=")
        name, colon, ty_text = lhs.partition(":")
        if not (sep and colon):
            raise ParseError(f"expected name:type=value, got {item!r}")
        ty = parse_type(ty_text)
        try:
            value = parse_value(rhs, ty, m, "<assign>")
        except ValueError as exc:
            raise ParseError(str(exc)) from None
        phi = phi.update(Var(name.strip(), ty), value)
    return phi


def cmd_eval(args, theory: Theory, out: Output) -> int:
    e = _expr(args, args.expr, theory)
    m = _model(args, theory)
    phi = _assignment(args, m, theory)
    m = m.with_pool(eps_pool_for(e, args.depth)) if m.eps_pool is None else m
    v = valuate(e, m, phi)
    out.result = str(v)
    out.say(f"{v}  : {e.ty}")
    return OK


def cmd_valid(args, theory: Theory, out: Output) -> int:
    f = _expr(args, args.expr, theory)
    verdict = check_valid(f, _model(args, theory), depth=args.depth)
    if isinstance(verdict, Fails):
        shown = ", ".join(f"{v.name}:{v.ty} = {d}" for v, d in verdict.assignment.items())
        out.result = {"valid": False, "counterexample": shown}
        raise Failure(f"fails under assignment {{{shown}}}")
    how = "approximately (bounded constructions)" if verdict.approximate else "exhaustively"
    out.result = {"valid": True, "samples": verdict.n, "approximate": verdict.approximate}
    out.say(f"holds on {verdict.n} assignment(s), checked {how}")
    return OK


def _report_trace(t, theory: Theory, out: Output) -> int:
    report = check_trace(t, theory)
    exprs = t.exprs()
    out.say(f"(1) {print_expr(exprs[0], theory)}")
    for k, (just, e) in enumerate(t.steps, 1):
        ok = not isinstance(report, FailedAtStep) or k < report.index
        mark = "ok" if ok else "FAILED"
        out.say(f"({k + 1}) = {print_expr(e, theory)}    [{format_justification(just, theory)}: {mark}]")
        out.steps.append({"index": k, "justification": format_justification(just, theory),
                          "expr": print_expr(e, theory), "ok": ok})
        if not ok:
            break
    if isinstance(report, FailedAtStep):
        out.result = {"verified": False, "step": report.index, "kind": report.kind}
        raise Failure(f"step {report.index} ({report.kind}): {report.reason}")
    out.result = {"verified": True, "steps": report.steps, "final": print_expr(exprs[-1], theory)}
    out.say(f"verified: {report.steps} step(s)")
    return OK


def cmd_trace(args, theory: Theory, out: Output) -> int:
    path = Path(args.file)
    return _report_trace(parse_trace(path.read_text(encoding="utf-8"), theory, str(path)), theory, out)


# ---------------------------------------------------------------------------
# Demos


def _demo_polydiff(theory: Theory, out: Output) -> int:
    t = polydiff_trace(theory)
    _report_trace(t, theory, out)
    out.say(print_expr(t.exprs()[-1], theory))
    return OK


def _demo_lem(theory: Theory, out: Output) -> int:
    x = Var("x", parse_type("eps"))
    c = parse_expr("p:o /\\ ~q:o", theory)
    for name in ("lem", "lem-quasi"):
        f = theory.formulas[name]
        out.say(f"{name}: {print_expr(f, theory)}")
        inst = instantiate(f, {x: parse_expr(f"'[ {print_expr(c, theory)} ]", theory)}, theory)
        for h in inst.hypotheses:
            if not discharge(h, theory):
                raise Failure(f"hypothesis {print_expr(h, theory)} fails")
            out.say(f"  hypothesis {print_expr(h, theory)} holds")
        report = normalize(inst.conclusion, theory=theory)
        out.say(f"  instance {print_expr(inst.conclusion, theory)}")
        out.say(f"  normalizes to {print_expr(report.result, theory)}")
    out.result = print_expr(report.result, theory)
    return OK


def _demo_make_implication(theory: Theory, out: Output) -> int:
    e = parse_expr("make-implication '[ A:o ] '[ B:o ]", theory)
    lit = normalize(e, theory=theory).result
    expected = as_expr(encode(parse_expr("A:o => B:o", theory)))
    out.say(f"{print_expr(e, theory)}")
    out.say(f"  ~> {print_expr(lit, theory)}")
    if lit != expected:
        raise Failure("make-implication did not build the quotation of A => B")
    out.say("  = the construction of A:o => B:o")
    ev = normalize(parse_expr("[[ make-implication '[ A:o ] '[ B:o ] ]]_o", theory), theory=theory)
    out.say(f"evaluated: {print_expr(ev.result, theory)}")
    m = Model(2, theory)
    for s, want in (("'[ f:(i->i) x:i ]", True), ("'[ x:i ]", False), ("'[ c:o ]", False)):
        q = parse_expr(f"is-app {s}", theory)
        v = valuate(q, m.with_pool(eps_pool_for(q)))
        out.say(f"is-app {s} = {v}")
        if v.value is not want:
            raise Failure(f"is-app {s} should be {want}")
    out.result = print_expr(ev.result, theory)
    return OK


def _demo_induction(theory: Theory, out: Output) -> int:
    f = theory.formulas["induction"]
    out.say(f"induction: {print_expr(f, theory)}")
    out.say(f"  type {f.ty}")
    fv = Var("f", parse_type("eps"))
    samples = [
        ("'[ \\x:i . x:i + 0 = x:i ]", True),
        ("'[ \\x:i . forall y:i . x:i * y:i = y:i * x:i ]", True),
        ("'[ \\x:i . p:(i->o) x:i ]", False),
    ]
    for s, want in samples:
        inst = instantiate(f, {fv: parse_expr(s, theory)}, theory)
        ok = all(discharge(h, theory) for h in inst.hypotheses)
        out.say(f"  f := {s}: hypotheses {'hold' if ok else 'fail'}")
        if ok is not want:
            raise Failure(f"is-peano misjudged {s}")
        if ok:
            out.say(f"    {print_expr(normalize(inst.conclusion, theory=theory).result, theory)}")
    out.result = str(f.ty)
    return OK


DEMOS = {
    "lem": _demo_lem,
    "make-implication": _demo_make_implication,
    "induction": _demo_induction,
    "polydiff": _demo_polydiff,
}


def cmd_demo(args, theory: Theory, out: Output) -> int:
    return DEMOS[args.name](theory, out)


# ---------------------------------------------------------------------------
# REPL

REPL_HELP = """\
  expr               normalize and print
  let name = expr    bind a macro usable as a bare name
  :type expr         type of an expression
  :encode expr       construction literal of an eval-free expression
  :eval expr         value in a two-individual model
  :quit"""


def repl(theory: Theory, inp=None, out=None) -> int:
    inp = inp or sys.stdin
    out = out or sys.stdout
    macros: dict = {}
    interactive = inp.isatty()
    while True:
        if interactive:
            print("cttqe> ", end="", file=out, flush=True)
        line = inp.readline()
        if not line:
            return OK
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if line in (":quit", ":q"):
            return OK
        try:
            if line == ":help":
                print(REPL_HELP, file=out)
            elif line.startswith("let "):
                name, sep, rhs = line[4:].partition("=")
                name = name.strip()
                if not sep or not name.isidentifier():
                    raise ParseError("expected 'let name = expr'")
                macros[name] = parse_expr(rhs, theory, "<repl>", macros=macros)
                print(f"{name} : {macros[name].ty}", file=out)
            elif line.startswith(":"):
                cmd, _, rest = line.partition(" ")
                e = parse_expr(rest, theory, "<repl>", macros=macros)
                if cmd == ":type":
                    print(e.ty, file=out)
                elif cmd == ":encode":
                    print(print_expr(as_expr(encode(e)), theory), file=out)
                elif cmd == ":eval":
                    m = Model(2, theory)
                    print(valuate(e, m.with_pool(eps_pool_for(e))), file=out)
                else:
                    print(f"unknown command {cmd}; try :help", file=out)
            else:
                e = parse_expr(line, theory, "<repl>", macros=macros)
                print(print_expr(normalize(e, theory=theory).result, theory), file=out)
        except CttqeError as exc:
            print(f"error: {exc}", file=out)


def cmd_repl(args, theory: Theory, out: Output) -> int:
    return repl(theory)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cttqe", description="Type theory with quotation and evaluation.")
    p.add_argument("--theory", help="theory file extending the arithmetic theory")
    p.add_argument("--json", action="store_true", help="print a machine-readable report")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="parse and check a .cttqe, .trace, .model or expression file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_check)
    for name, fn, help_ in (
        ("typeof", cmd_typeof, "print the type of an expression"),
        ("encode", cmd_encode, "print the construction literal of an eval-free expression"),
        ("decode", cmd_decode, "decode a construction literal"),
    ):
        s = sub.add_parser(name, help=help_)
        s.add_argument("expr")
        s.set_defaults(fn=fn)

    s = sub.add_parser("normalize", help="rewrite to normal form")
    s.add_argument("expr")
    s.add_argument("--fuel", type=int, default=None, help="step limit (default $CTTQE_FUEL or 10000)")
    s.add_argument("--steps", action="store_true", help="print each rewrite step")
    s.add_argument("--unfold", default="all",
                   help="definitions to unfold: all, transparent, none, or a comma list")
    s.set_defaults(fn=cmd_normalize)

    for name, fn, help_ in (("eval", cmd_eval, "valuate in a model"),
                            ("valid", cmd_valid, "check validity in a model")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("expr")
        s.add_argument("--model", help="model file (default: two individuals)")
        s.add_argument("--depth", type=int, default=3, help="construction depth bound for eps")
        if name == "eval":
            s.add_argument("--assign", action="append", metavar="x:type=value")
        s.set_defaults(fn=fn)

    s = sub.add_parser("trace", help="check an equational trace file")
    s.add_argument("file")
    s.set_defaults(fn=cmd_trace)

    s = sub.add_parser("demo", help="run a worked example")
    s.add_argument("name", choices=sorted(DEMOS))
    s.set_defaults(fn=cmd_demo)

    s = sub.add_parser("repl", help="interactive loop")
    s.set_defaults(fn=cmd_repl)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    out = Output(args.json)
    try:
        theory = default_theory()
        if args.theory:
            path = Path(args.theory)
            theory = load_theory(path.read_text(encoding="utf-8"), theory, str(path))
        return out.finish(args.fn(args, theory, out))
    except Failure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return out.finish(FAILED, str(exc))
    except FuelExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return out.finish(FAILED, str(exc))
    except (CttqeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return out.finish(USAGE, f"{type(exc).__name__}: {exc}")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return out.finish(USAGE, str(exc))


if __name__ == "__main__":
    sys.exit(main())
