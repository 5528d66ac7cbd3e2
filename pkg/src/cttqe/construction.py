"""Constructions: the inductive type of syntax trees.

A construction is either a quoted atom or one of the three syntax
constructors ``app``, ``abs``, ``quo`` applied to constructions.  ``encode``
maps an eval-free expression to the construction of its syntax tree;
``classify`` decides whether a construction is in the range of ``encode`` and
recovers the expression when it is.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Union

from cttqe.errors import ImproperConstruction, NotAConstructionLiteral, NotEvalFree
from cttqe.kernel import (
    ABS,
    APP,
    QUO,
    Abs,
    App,
    Const,
    Expr,
    Fun,
    Quote,
    Type,
    Var,
    apply,
    is_eval_free,
)


class Construction:
    __slots__ = ()

    def __str__(self) -> str:
        return str(as_expr(self))


@dataclass(frozen=True, slots=True)
class QuotedVar(Construction):
    v: Var


@dataclass(frozen=True, slots=True)
class QuotedConst(Construction):
    c: Const


@dataclass(frozen=True, slots=True)
class CApp(Construction):
    a: Construction
    b: Construction


@dataclass(frozen=True, slots=True)
class CAbs(Construction):
    a: Construction
    b: Construction


@dataclass(frozen=True, slots=True)
class CQuo(Construction):
    a: Construction


@dataclass(frozen=True)
class Proper:
    ty: Type
    decoded: Expr


@dataclass(frozen=True)
class Improper:
    reason: str
    path: tuple = ()


Properness = Union[Proper, Improper]


def encode(e: Expr) -> Construction:
    if not is_eval_free(e):
        raise NotEvalFree(f"cannot encode {e}: it contains an evaluation")
    return _encode(e)


def _encode(e: Expr) -> Construction:
    if isinstance(e, Var):
        return QuotedVar(e)
    if isinstance(e, Const):
        return QuotedConst(e)
    if isinstance(e, App):
        return CApp(_encode(e.fun), _encode(e.arg))
    if isinstance(e, Abs):
        return CAbs(QuotedVar(e.binder), _encode(e.body))
    assert isinstance(e, Quote)
    return CQuo(_encode(e.body))


def classify(c: Construction, path: tuple = ()) -> Properness:
    """Type-reconstruct ``c``.  Paths name children as in the construction:
    ``0``/``1`` for the two arguments of ``app``/``abs``, ``0`` under ``quo``."""
    if isinstance(c, QuotedVar):
        return Proper(c.v.ty, c.v)
    if isinstance(c, QuotedConst):
        return Proper(c.c.ty, c.c)
    if isinstance(c, CApp):
        f = classify(c.a, path + (0,))
        if isinstance(f, Improper):
            return f
        a = classify(c.b, path + (1,))
        if isinstance(a, Improper):
            return a
        if not isinstance(f.ty, Fun):
            return Improper(f"operator has non-function type {f.ty}", path)
        if f.ty.dom != a.ty:
            return Improper(
                f"operator expects {f.ty.dom} but operand has type {a.ty}", path
            )
        return Proper(f.ty.cod, App(f.decoded, a.decoded))
    if isinstance(c, CAbs):
        if not isinstance(c.a, QuotedVar):
            return Improper("abstraction binder is not a quoted variable", path + (0,))
        body = classify(c.b, path + (1,))
        if isinstance(body, Improper):
            return body
        return Proper(Fun(c.a.v.ty, body.ty), Abs(c.a.v, body.decoded))
    assert isinstance(c, CQuo)
    inner = classify(c.a, path + (0,))
    if isinstance(inner, Improper):
        return inner
    return Proper(Quote(inner.decoded).ty, Quote(inner.decoded))


def decode(c: Construction) -> Expr:
    p = classify(c)
    if isinstance(p, Improper):
        where = ".".join(map(str, p.path)) or "root"
        raise ImproperConstruction(f"improper construction at {where}: {p.reason}", p.path)
    return p.decoded


def is_proper(c: Construction, ty: Optional[Type] = None) -> bool:
    p = classify(c)
    return isinstance(p, Proper) and (ty is None or p.ty == ty)


def as_expr(c: Construction) -> Expr:
    if isinstance(c, QuotedVar):
        return Quote(c.v)
    if isinstance(c, QuotedConst):
        return Quote(c.c)
    if isinstance(c, CApp):
        return apply(APP, as_expr(c.a), as_expr(c.b))
    if isinstance(c, CAbs):
        return apply(ABS, as_expr(c.a), as_expr(c.b))
    return App(QUO, as_expr(c.a))


def from_expr(e: Expr) -> Construction:
    """Inverse of ``as_expr``: a literal match of the construction grammar."""
    if isinstance(e, Quote) and isinstance(e.body, Var):
        return QuotedVar(e.body)
    if isinstance(e, Quote) and isinstance(e.body, Const):
        return QuotedConst(e.body)
    if isinstance(e, App):
        if e.fun == QUO:
            return CQuo(from_expr(e.arg))
        if isinstance(e.fun, App) and e.fun.fun in (APP, ABS):
            a, b = from_expr(e.fun.arg), from_expr(e.arg)
            return CApp(a, b) if e.fun.fun == APP else CAbs(a, b)
    raise NotAConstructionLiteral(f"{e} is not a construction literal")


def is_literal(e: Expr) -> bool:
    try:
        from_expr(e)
    except NotAConstructionLiteral:
        return False
    return True


def subconstructions(c: Construction) -> Iterator[Construction]:
    yield c
    if isinstance(c, (CApp, CAbs)):
        yield from subconstructions(c.a)
        yield from subconstructions(c.b)
    elif isinstance(c, CQuo):
        yield from subconstructions(c.a)


def construction_depth(c: Construction) -> int:
    """Atoms have depth 1."""
    if isinstance(c, (QuotedVar, QuotedConst)):
        return 1
    if isinstance(c, CQuo):
        return 1 + construction_depth(c.a)
    return 1 + max(construction_depth(c.a), construction_depth(c.b))


def enumerate_constructions(atoms: list[Construction], max_depth: int) -> list[Construction]:
    """Every construction of depth at most ``max_depth`` over the given quoted
    atoms, in a fixed order (by depth, then generation order)."""
    if max_depth < 1:
        return []
    levels: list[list[Construction]] = [list(dict.fromkeys(atoms))]
    seen: list[Construction] = list(levels[0])
    for _ in range(max_depth - 1):
        prev = levels[-1]
        fresh = set(prev)
        new: list[Construction] = []
        for a in seen:
            for b in seen:
                if a in fresh or b in fresh:
                    new.append(CApp(a, b))
                    new.append(CAbs(a, b))
        new.extend(CQuo(a) for a in prev)
        levels.append(new)
        seen = seen + new
    return seen


def quoted_atoms(c: Construction) -> list[Construction]:
    return [s for s in subconstructions(c) if isinstance(s, (QuotedVar, QuotedConst))]



def literal_value(e: Expr) -> Optional[Construction]:
    """The construction a closed literal-like expression denotes, or ``None``.

    Accepts strict literals plus quotations of arbitrary eval-free bodies and
    syntax constructors applied to such pieces; quotations are read through
    ``encode``, which is exact by the law of quotation.
    """
    if isinstance(e, Quote):
        return _encode(e.body)
    if isinstance(e, App):
        if e.fun == QUO:
            a = literal_value(e.arg)
            return None if a is None else CQuo(a)
        if isinstance(e.fun, App) and e.fun.fun in (APP, ABS):
            a = literal_value(e.fun.arg)
            if a is None:
                return None
            b = literal_value(e.arg)
            if b is None:
                return None
            return CApp(a, b) if e.fun.fun == APP else CAbs(a, b)
    return None
