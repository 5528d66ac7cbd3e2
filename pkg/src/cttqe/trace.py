"""Checking equational derivations step by step.

A trace is a start expression followed by steps, each a justification and
the next expression.  Every step is checked on its own:

* ``Rewrite(rule)`` and ``Symmetric(rule)``: both sides normalize to the same
  expression using only that rule and quotation normalization;
* ``DefUnfold(name)``: the same, unfolding only ``name``;
* ``MeaningFormula(name, instantiations)``: the theory formula ``name`` is
  instantiated, its hypotheses are computed to be true, and the resulting
  equation rewrites one subterm of the previous expression into the next
  (in either direction).

Trace files hold one numbered expression per line::

    (1) deriv (\\x:i . x:i ^ 2)
    (2) by sym disquote :: deriv [[ '[ \\x:i . x:i ^ 2 ] ]]_(i->i)
    (4) by meaning poly-diff u:eps := '[ x:i ] ; v:eps := '[ x:i ^ 2 ] :: ...
    (9) by unfold make-implication :: ...
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional, Union

from cttqe.errors import CttqeError, FuelExhausted, ParseError, SubstitutionBlocked
from cttqe.kernel import (
    Abs,
    Expr,
    Var,
    dest_binary,
    dest_eq,
    positions,
    replace_at,
    subterm,
)
from cttqe.rewrite import Rule, normalize, parse_rule, substitute_all
from cttqe.semantics import Model, Truth, valuate
from cttqe.stdlib import IMP, AND, TRUE, Theory, default_theory
from cttqe.surface import SourceSpan, parse_expr, print_expr


@dataclass(frozen=True)
class Rewrite:
    rule: Rule


@dataclass(frozen=True)
class Symmetric:
    rule: Rule


@dataclass(frozen=True)
class MeaningFormula:
    name: str
    instantiations: tuple[tuple[Var, Expr], ...]


@dataclass(frozen=True)
class DefUnfold:
    name: str


Justification = Union[Rewrite, Symmetric, MeaningFormula, DefUnfold]


@dataclass
class EqTrace:
    start: Expr
    steps: list[tuple[Justification, Expr]] = field(default_factory=list)

    def exprs(self) -> list[Expr]:
        return [self.start] + [e for _, e in self.steps]


@dataclass(frozen=True)
class Verified:
    steps: int


@dataclass(frozen=True)
class FailedAtStep:
    """``index`` counts steps from 1: step k relates expressions k and k+1."""

    index: int
    kind: str  # "ill-typed" | "hypothesis-failed" | "mismatch"
    reason: str


TraceReport = Union[Verified, FailedAtStep]


# ---------------------------------------------------------------------------
# Instantiating formulas


def dest_forall(e: Expr) -> Optional[tuple[Var, Expr]]:
    """Recognise ``eq (\\x . T) (\\x . B)``, the expansion of ``forall x . B``."""
    parts = dest_binary(e)
    if parts is None or parts[0].name != "eq":
        return None
    _, lhs, rhs = parts
    if (isinstance(lhs, Abs) and isinstance(rhs, Abs) and lhs.binder == rhs.binder
            and lhs.body == TRUE and lhs.binder.ty == parts[0].ty.dom.dom):
        return rhs.binder, rhs.body
    return None


def dest_conj(e: Expr) -> list[Expr]:
    parts = dest_binary(e)
    if parts is not None and parts[0] == AND:
        return dest_conj(parts[1]) + dest_conj(parts[2])
    return [e]


@dataclass(frozen=True)
class Instance:
    hypotheses: list[Expr]
    conclusion: Optional[Expr]
    blocked: str = ""  # why the conclusion could not be instantiated


def instantiate(formula: Expr, terms: dict[Var, Expr], theory: Optional[Theory] = None) -> Instance:
    """Strip the leading universal quantifiers of ``formula``, substitute
    ``terms`` for the bound variables, and split off the hypotheses of a
    leading implication."""
    theory = theory or default_theory()
    bound: list[Var] = []
    body = formula
    while (q := dest_forall(body)) is not None:
        bound.append(q[0])
        body = q[1]
    extra = set(terms) - set(bound)
    if extra:
        raise ValueError("not quantified in the formula: " + ", ".join(map(str, extra)))
    missing = [v for v in bound if v not in terms]
    if missing:
        raise ValueError("no instantiation given for " + ", ".join(map(str, missing)))
    parts = dest_binary(body)
    hyps: list[Expr] = []
    if parts is not None and parts[0] == IMP:
        hyps = [substitute_all(h, terms, theory) for h in dest_conj(parts[1])]
        body = parts[2]
    try:
        return Instance(hyps, substitute_all(body, terms, theory))
    except SubstitutionBlocked as exc:
        return Instance(hyps, None, str(exc))


def discharge(h: Expr, theory: Theory) -> bool:
    """Compute a closed hypothesis built from builtins on literals."""
    try:
        return valuate(h, Model(1, theory)) == Truth(True)
    except CttqeError:
        return False


# ---------------------------------------------------------------------------
# Checking


def _normal(e: Expr, rules, theory: Theory, unfold="none") -> Expr:
    return normalize(e, theory=theory, rules=rules, unfold=unfold).result


def check_step(prev: Expr, just: Justification, nxt: Expr, theory: Theory) -> Optional[tuple[str, str]]:
    """``None`` when the step is valid, else ``(kind, reason)``."""
    if prev.ty != nxt.ty:
        return "ill-typed", f"types differ: {prev.ty} and {nxt.ty}"
    if isinstance(just, (Rewrite, Symmetric, DefUnfold)):
        if isinstance(just, DefUnfold):
            d = theory.defs.get(just.name)
            if d is None or d.kind != "defined":
                return "mismatch", f"{just.name} is not a defined constant"
            rules, unfold = {Rule.DEF_UNFOLD}, {just.name}
        else:
            rules, unfold = {just.rule, Rule.QUOTE_NORM}, "none"
        try:
            a = _normal(prev, rules, theory, unfold)
            b = _normal(nxt, rules, theory, unfold)
        except FuelExhausted:
            return "mismatch", "normalization ran out of fuel"
        if a != b:
            return "mismatch", (f"sides differ after rewriting: {print_expr(a, theory)} "
                                f"vs {print_expr(b, theory)}")
        return None
    f = theory.formulas.get(just.name)
    if f is None:
        return "mismatch", f"no formula named {just.name}"
    try:
        inst = instantiate(f, dict(just.instantiations), theory)
    except (CttqeError, ValueError) as exc:
        return "ill-typed", str(exc)
    for h in inst.hypotheses:
        if not discharge(h, theory):
            return "hypothesis-failed", f"hypothesis {print_expr(h, theory)} does not hold"
    if inst.conclusion is None:
        return "ill-typed", inst.blocked
    eq = dest_eq(inst.conclusion)
    if eq is None:
        return "mismatch", "the instantiated formula is not an equation"
    lhs, rhs = eq
    for p in positions(prev):
        s = subterm(prev, p)
        for a, b in ((lhs, rhs), (rhs, lhs)):
            if s == a and replace_at(prev, p, b) == nxt:
                return None
    return "mismatch", "the instantiated equation does not rewrite the previous line into this one"


def check_trace(t: EqTrace, theory: Optional[Theory] = None) -> TraceReport:
    theory = theory or default_theory()
    prev = t.start
    for k, (just, nxt) in enumerate(t.steps, 1):
        bad = check_step(prev, just, nxt, theory)
        if bad is not None:
            return FailedAtStep(k, *bad)
        prev = nxt
    return Verified(len(t.steps))


# ---------------------------------------------------------------------------
# Trace files

_LINE_RE = re.compile(r"\((\d+)\)\s*(.*)\Z")


def format_justification(j: Justification, theory: Optional[Theory] = None) -> str:
    if isinstance(j, Rewrite):
        return j.rule.value
    if isinstance(j, Symmetric):
        return f"sym {j.rule.value}"
    if isinstance(j, DefUnfold):
        return f"unfold {j.name}"
    inst = " ; ".join(f"{v.name}:{v.ty} := {print_expr(a, theory)}" for v, a in j.instantiations)
    return f"meaning {j.name} {inst}".rstrip()


def format_trace(t: EqTrace, theory: Optional[Theory] = None) -> str:
    lines = [f"(1) {print_expr(t.start, theory)}"]
    for k, (j, e) in enumerate(t.steps, 2):
        lines.append(f"({k}) by {format_justification(j, theory)} :: {print_expr(e, theory)}")
    return "\n".join(lines) + "\n"


def _parse_justification(text: str, theory: Theory, file: str, n: int) -> Justification:
    words = text.split(None, 1)
    if not words:
        raise ParseError("missing justification", SourceSpan(file, n, 1, 0))
    head, rest = words[0], (words[1] if len(words) > 1 else "").strip()
    try:
        if head == "sym":
            return Symmetric(parse_rule(rest))
        if head == "unfold":
            return DefUnfold(rest)
        if head == "meaning":
            name, _, binds = rest.partition(" ")
            inst = []
            for b in filter(None, (s.strip() for s in binds.split(";"))):
                lhs, sep, rhs = b.partition(":=")
                if not sep:
                    raise ValueError(f"expected 'var:type := expr', got {b!r}")
                v = parse_expr(lhs, theory, file, n)
                if not isinstance(v, Var):
                    raise ValueError(f"{lhs.strip()} is not a variable")
                inst.append((v, parse_expr(rhs, theory, file, n)))
            return MeaningFormula(name, tuple(inst))
        if rest:
            raise ValueError(f"unexpected {rest!r} after rule name")
        return Rewrite(parse_rule(head))
    except ValueError as exc:
        raise ParseError(str(exc), SourceSpan(file, n, 1, len(text))) from None


def parse_trace(text: str, theory: Optional[Theory] = None, file: str = "<trace>") -> EqTrace:
    theory = theory or default_theory()
    start = None
    steps: list[tuple[Justification, Expr]] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise ParseError("expected a numbered line '(k) ...'", SourceSpan(file, n, 1, len(line)))
        body = m.group(2)
        if start is None:
            start = parse_expr(body, theory, file, n)
            continue
        if not body.startswith("by ") or "::" not in body:
            raise ParseError("expected 'by <justification> :: <expr>'",
                             SourceSpan(file, n, 1, len(line)))
        just, _, expr = body[3:].partition("::")
        steps.append((_parse_justification(just.strip(), theory, file, n),
                      parse_expr(expr, theory, file, n)))
    if start is None:
        raise ParseError("empty trace", SourceSpan(file, 1, 1, 0))
    return EqTrace(start, steps)


# ---------------------------------------------------------------------------
# The derivative example

POLYDIFF_TRACE = """\
(1) deriv (\\x:i . x:i ^ 2)
(2) by sym disquote :: deriv [[ '[ \\x:i . x:i ^ 2 ] ]]_(i->i)
(3) by quote-norm :: deriv [[ abs '[ x:i ] '[ x:i ^ 2 ] ]]_(i->i)
(4) by meaning poly-diff u:eps := '[ x:i ] ; v:eps := '[ x:i ^ 2 ] :: [[ abs '[ x:i ] (poly-diff '[ x:i ^ 2 ] '[ x:i ]) ]]_(i->i)
(5) by builtin-fold :: [[ abs '[ x:i ] '[ 2 * x:i ] ]]_(i->i)
(6) by sym quote-norm :: [[ '[ \\x:i . 2 * x:i ] ]]_(i->i)
(7) by disquote :: \\x:i . 2 * x:i
"""


def polydiff_trace(theory: Optional[Theory] = None) -> EqTrace:
    return parse_trace(POLYDIFF_TRACE, theory, "<polydiff>")
