"""Substitution, rewrite rules and normalization.

Substitution never enters a quotation.  Substituting into an evaluation is
only done when the evaluated argument, after substitution, computes to a
proper construction of the evaluation's type in which none of the substituted
variables is free; that is exactly when the value of the evaluation cannot
depend on them through the evaluated syntax.  Otherwise ``SubstitutionBlocked``
is raised and the beta rule does not fire.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union

from cttqe.construction import (
    Construction,
    Proper,
    QuotedVar,
    as_expr,
    classify,
    encode,
    from_expr,
    is_literal,
    literal_value,
    subconstructions,
)
from cttqe.errors import FuelExhausted, NotAVariable, SubstitutionBlocked, TypeMismatch
from cttqe.kernel import (
    Abs,
    App,
    Const,
    Eval,
    Expr,
    FreeStatus,
    Path,
    Quote,
    Var,
    all_vars,
    free_status,
    free_vars,
    is_atom,
    replace_at,
    subterm,
)
from cttqe.stdlib import Theory, builtin_step, default_theory

DEFAULT_FUEL = 10000


class Rule(enum.Enum):
    BETA = "beta"
    DISQUOTE = "disquote"
    QUOTE_NORM = "quote-norm"
    EVAL_BETA = "eval-beta"
    BUILTIN_FOLD = "builtin-fold"
    DEF_UNFOLD = "def-unfold"

    @property
    def description(self) -> str:
        return _DESCRIPTIONS[self]


_DESCRIPTIONS = {
    Rule.BETA: "(\\x . B) A  ~>  B[x := A]",
    Rule.DISQUOTE: "[[ '[ A ] ]]_a  ~>  A   (A of type a)",
    Rule.QUOTE_NORM: "'[ A ]  ~>  the construction literal of A",
    Rule.EVAL_BETA: "(\\x . [[ B ]]_b) A  ~>  [[ (\\x . B) A ]]_b   (side conditions computed)",
    Rule.BUILTIN_FOLD: "builtin constant applied to literals  ~>  its value",
    Rule.DEF_UNFOLD: "defined constant  ~>  its definiens",
}

ALL_RULES = frozenset(Rule)

Unfold = Union[str, Iterable[str]]


def parse_rule(name: str) -> Rule:
    try:
        return Rule(name)
    except ValueError:
        raise ValueError(f"unknown rule {name!r}; expected one of "
                         + ", ".join(r.value for r in Rule)) from None


def default_fuel() -> int:
    return int(os.environ.get("CTTQE_FUEL", DEFAULT_FUEL))


# ---------------------------------------------------------------------------
# Freeness of a quoted variable in a construction


def is_free_in(xq: Union[Construction, Expr], c: Union[Construction, Expr]) -> FreeStatus:
    if isinstance(xq, Expr):
        xq = literal_value(xq)
    if not isinstance(xq, QuotedVar):
        raise NotAVariable(f"{xq} is not a quoted variable")
    if isinstance(c, Expr):
        c = literal_value(c)
        if c is None:
            return FreeStatus.UNKNOWN
    p = classify(c)
    if isinstance(p, Proper):
        return free_status(xq.v, p.decoded)
    if all(s != xq for s in subconstructions(c)):
        return FreeStatus.NOT_FREE
    return FreeStatus.UNKNOWN


# ---------------------------------------------------------------------------
# Substitution


def fresh_var(v: Var, avoid: set[str]) -> Var:
    k = 1
    while f"{v.name}{k}" in avoid:
        k += 1
    return Var(f"{v.name}{k}", v.ty)


def fold_construction(e: Expr, theory: Optional[Theory] = None) -> Optional[Construction]:
    """The construction a closed type-eps expression computes to, if it does."""
    c = literal_value(e)
    if c is not None or free_vars(e):
        return c
    try:
        report = normalize(e, fuel=500, theory=theory, unfold="transparent")
    except FuelExhausted:
        return None
    return literal_value(report.result)


def substitute(b: Expr, x: Var, a: Expr, theory: Optional[Theory] = None) -> Expr:
    return substitute_all(b, {x: a}, theory)


def substitute_all(b: Expr, sigma: Mapping[Var, Expr], theory: Optional[Theory] = None) -> Expr:
    """Simultaneous capture-avoiding substitution."""
    for x, a in sigma.items():
        if x.ty != a.ty:
            raise TypeMismatch(f"cannot substitute {a} of type {a.ty} for {x}")
    theory = theory or default_theory()
    return _subst(b, dict(sigma), theory)


def _subst(e: Expr, sigma: dict[Var, Expr], theory: Theory) -> Expr:
    if isinstance(e, Var):
        return sigma.get(e, e)
    if isinstance(e, (Const, Quote)):
        return e
    if isinstance(e, App):
        f = _subst(e.fun, sigma, theory)
        a = _subst(e.arg, sigma, theory)
        if f is e.fun and a is e.arg:
            return e
        return App(f, a)
    if isinstance(e, Abs):
        live = {
            x: a for x, a in sigma.items()
            if x != e.binder and free_status(x, e.body) is not FreeStatus.NOT_FREE
        }
        if not live:
            return e
        y, body = e.binder, e.body
        if any(y in free_vars(a) for a in live.values()):
            avoid = {v.name for v in all_vars(body)} | {x.name for x in live}
            for a in live.values():
                avoid |= {v.name for v in all_vars(a)}
            y2 = fresh_var(y, avoid)
            body = _subst(body, {y: y2}, theory)
            y = y2
        return Abs(y, _subst(body, live, theory))
    assert isinstance(e, Eval)
    live = {x: a for x, a in sigma.items() if free_status(x, e) is not FreeStatus.NOT_FREE}
    if not live:
        return e
    arg = _subst(e.arg, live, theory)
    c = fold_construction(arg, theory)
    if c is None:
        raise SubstitutionBlocked(
            f"cannot decide which variables {e} depends on: its argument does not "
            f"compute to a construction"
        )
    p = classify(c)
    if not (isinstance(p, Proper) and p.ty == e.target):
        raise SubstitutionBlocked(f"argument of {e} does not denote an expression of type {e.target}")
    for x in live:
        if free_status(x, p.decoded) is not FreeStatus.NOT_FREE:
            raise SubstitutionBlocked(f"{x} is free in the expression evaluated by {e}")
    return Eval(arg, e.target)


# ---------------------------------------------------------------------------
# Rewriting


@dataclass
class RewriteReport:
    result: Expr
    steps: list[tuple[Rule, Path]] = field(default_factory=list)
    fuel_used: int = 0


class _Ctx:
    def __init__(self, theory: Theory, rules, unfold: Unfold):
        self.theory = theory
        self.rules = frozenset(rules)
        if isinstance(unfold, str):
            if unfold not in ("none", "transparent", "all"):
                raise ValueError(f"unknown unfold policy {unfold!r}")
            self.unfold = unfold
        else:
            self.unfold = frozenset(unfold)

    def unfolds(self, c: Const) -> Optional[Expr]:
        d = self.theory.lookup(c)
        if d is None or d.kind != "defined":
            return None
        if self.unfold == "all" or (self.unfold == "transparent" and d.transparent):
            return d.body
        if isinstance(self.unfold, frozenset) and c.name in self.unfold:
            return d.body
        return None


def _at_root(e: Expr, ctx: _Ctx) -> Optional[tuple[Expr, Rule]]:
    rules = ctx.rules
    if isinstance(e, Eval) and Rule.DISQUOTE in rules:
        a = e.arg
        if isinstance(a, Quote) and a.body.ty == e.target:
            return a.body, Rule.DISQUOTE
        if is_literal(a):
            p = classify(from_expr(a))
            if isinstance(p, Proper) and p.ty == e.target:
                return p.decoded, Rule.DISQUOTE
    if isinstance(e, App) and isinstance(e.fun, Abs):
        x, body = e.fun.binder, e.fun.body
        if isinstance(body, Eval) and Rule.EVAL_BETA in rules:
            out = _eval_beta(x, body, e.arg, ctx.theory)
            if out is not None:
                return out, Rule.EVAL_BETA
        if Rule.BETA in rules:
            try:
                return _subst(body, {x: e.arg}, ctx.theory), Rule.BETA
            except SubstitutionBlocked:
                pass
    if isinstance(e, App) and Rule.BUILTIN_FOLD in rules:
        out = builtin_step(e, ctx.theory)
        if out is not None:
            return out, Rule.BUILTIN_FOLD
    if isinstance(e, Quote) and Rule.QUOTE_NORM in rules and not is_atom(e.body):
        return as_expr(encode(e.body)), Rule.QUOTE_NORM
    if isinstance(e, Const) and Rule.DEF_UNFOLD in rules:
        body = ctx.unfolds(e)
        if body is not None:
            return body, Rule.DEF_UNFOLD
    return None


def _eval_beta(x: Var, body: Eval, a: Expr, theory: Theory) -> Optional[Expr]:
    try:
        arg = _subst(body.arg, {x: a}, theory)
    except SubstitutionBlocked:
        return None
    c = fold_construction(arg, theory)
    if c is None:
        return None
    p = classify(c)
    if not (isinstance(p, Proper) and p.ty == body.target):
        return None
    if free_status(x, p.decoded) is not FreeStatus.NOT_FREE:
        return None
    return Eval(App(Abs(x, body.arg), a), body.target)


def _find(e: Expr, ctx: _Ctx, path: Path) -> Optional[tuple[Expr, Rule, Path]]:
    hit = _at_root(e, ctx)
    if hit is not None:
        return hit[0], hit[1], path
    if isinstance(e, App):
        sub = _find(e.fun, ctx, path + (0,))
        if sub is not None:
            return App(sub[0], e.arg), sub[1], sub[2]
        sub = _find(e.arg, ctx, path + (1,))
        if sub is not None:
            return App(e.fun, sub[0]), sub[1], sub[2]
    elif isinstance(e, Abs):
        sub = _find(e.body, ctx, path + (1,))
        if sub is not None:
            return Abs(e.binder, sub[0]), sub[1], sub[2]
    elif isinstance(e, Eval):
        sub = _find(e.arg, ctx, path + (0,))
        if sub is not None:
            return Eval(sub[0], e.target), sub[1], sub[2]
    return None


def step(e: Expr, theory: Optional[Theory] = None, rules=ALL_RULES,
         unfold: Unfold = "transparent") -> Optional[tuple[Expr, Rule, Path]]:
    """Contract the leftmost-outermost redex; ``None`` at normal form."""
    ctx = _Ctx(theory or default_theory(), rules, unfold)
    return _find(e, ctx, ())


def normalize(e: Expr, fuel: Optional[int] = None, theory: Optional[Theory] = None,
              rules=ALL_RULES, unfold: Unfold = "transparent") -> RewriteReport:
    fuel = default_fuel() if fuel is None else fuel
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    ctx = _Ctx(theory or default_theory(), rules, unfold)
    report = RewriteReport(e)
    while True:
        hit = _find(report.result, ctx, ())
        if hit is None:
            return report
        if report.fuel_used >= fuel:
            exc = FuelExhausted(f"no normal form within {fuel} steps")
            exc.report = report
            raise exc
        report.result = hit[0]
        report.steps.append((hit[1], hit[2]))
        report.fuel_used += 1


def replay(e: Expr, steps: list[tuple[Rule, Path]], theory: Optional[Theory] = None,
           unfold: Unfold = "transparent") -> Expr:
    """Re-run a recorded trace, checking each step happens where it says."""
    theory = theory or default_theory()
    for rule, path in steps:
        hit = _at_root(subterm(e, path), _Ctx(theory, {rule}, unfold))
        if hit is None:
            raise ValueError(f"{rule.value} does not apply at {path}")
        e = replace_at(e, path, hit[0])
    return e
