"""Quasi-expressions and their expansion into type-eps expressions.

A quasiquotation ``'[ M ]`` whose body contains antiquotation holes ``,(A)``
is notation for ``expand(M)``: the syntax-tree builder for ``M`` with each
hole's construction spliced in place.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from cttqe.errors import HoleNotEpsilon, NotEvalFree
from cttqe.kernel import (
    ABS,
    APP,
    EPSILON,
    QUO,
    Abs,
    App,
    Const,
    Eval,
    Expr,
    Quote,
    Var,
    apply,
)


@dataclass(frozen=True)
class AntiQuote:
    hole: Expr


@dataclass(frozen=True)
class QVar:
    v: Var


@dataclass(frozen=True)
class QConst:
    c: Const


@dataclass(frozen=True)
class QApp:
    m: "QuasiExpr"
    n: "QuasiExpr"


@dataclass(frozen=True)
class QAbsVar:
    binder: Var
    body: "QuasiExpr"


@dataclass(frozen=True)
class QAbsHole:
    binder: AntiQuote
    body: "QuasiExpr"


@dataclass(frozen=True)
class QQuote:
    m: "QuasiExpr"


QuasiExpr = Union[AntiQuote, QVar, QConst, QApp, QAbsVar, QAbsHole, QQuote]


def embed(e: Expr) -> QuasiExpr:
    """A plain eval-free expression viewed as a quasi-expression with no holes."""
    if isinstance(e, Var):
        return QVar(e)
    if isinstance(e, Const):
        return QConst(e)
    if isinstance(e, App):
        return QApp(embed(e.fun), embed(e.arg))
    if isinstance(e, Abs):
        return QAbsVar(e.binder, embed(e.body))
    if isinstance(e, Quote):
        return QQuote(embed(e.body))
    assert isinstance(e, Eval)
    raise NotEvalFree("evaluations cannot appear inside a quasiquotation")


def has_holes(m: QuasiExpr) -> bool:
    if isinstance(m, (AntiQuote, QAbsHole)):
        return True
    if isinstance(m, QApp):
        return has_holes(m.m) or has_holes(m.n)
    if isinstance(m, QAbsVar):
        return has_holes(m.body)
    if isinstance(m, QQuote):
        return has_holes(m.m)
    return False


def expand(m: QuasiExpr) -> Expr:
    if isinstance(m, AntiQuote):
        return _hole(m)
    if isinstance(m, QVar):
        return Quote(m.v)
    if isinstance(m, QConst):
        return Quote(m.c)
    if isinstance(m, QApp):
        return apply(APP, expand(m.m), expand(m.n))
    if isinstance(m, QAbsVar):
        return apply(ABS, Quote(m.binder), expand(m.body))
    if isinstance(m, QAbsHole):
        return apply(ABS, _hole(m.binder), expand(m.body))
    assert isinstance(m, QQuote)
    return App(QUO, expand(m.m))


def _hole(a: AntiQuote) -> Expr:
    if a.hole.ty != EPSILON:
        raise HoleNotEpsilon(f"antiquoted expression {a.hole} has type {a.hole.ty}, expected eps")
    return a.hole
