"""Types and typed expressions of the logic.

Every expression node is an immutable value whose type is computed (and the
whole tree validated) when the node is built, so an ``Expr`` that exists is
always well formed.  Atoms are typed symbols: ``Var("x", IOTA)`` and
``Var("x", OMICRON)`` are different variables.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from cttqe.errors import EvalArgNotEpsilon, QuoteNotEvalFree, TypeMismatch


# ---------------------------------------------------------------------------
# Types


class Type:
    __slots__ = ()

    def __str__(self) -> str:
        return type_str(self)


@dataclass(frozen=True, slots=True)
class BaseType(Type):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Fun(Type):
    dom: Type
    cod: Type

    def __str__(self) -> str:
        return type_str(self)


IOTA = BaseType("i")
OMICRON = BaseType("o")
EPSILON = BaseType("eps")


def fun(*tys: Type) -> Type:
    """Right-nested function type: ``fun(a, b, c)`` is ``a -> (b -> c)``."""
    if not tys:
        raise ValueError("fun() needs at least one type")
    out = tys[-1]
    for t in reversed(tys[:-1]):
        out = Fun(t, out)
    return out


def type_str(t: Type) -> str:
    if isinstance(t, BaseType):
        return t.name
    dom = type_str(t.dom)
    if isinstance(t.dom, Fun):
        dom = f"({dom})"
    return f"{dom}->{type_str(t.cod)}"


def atom_type_str(t: Type) -> str:
    """Type as written after a colon: base types bare, arrows parenthesised."""
    return t.name if isinstance(t, BaseType) else f"({type_str(t)})"


def involves_epsilon(t: Type) -> bool:
    if isinstance(t, BaseType):
        return t == EPSILON
    return involves_epsilon(t.dom) or involves_epsilon(t.cod)


# ---------------------------------------------------------------------------
# Expressions

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*\Z")
_NUMERAL = re.compile(r"[0-9]+\Z")


def is_identifier(name: str) -> bool:
    return _IDENT.match(name) is not None


def is_numeral(name: str) -> bool:
    return _NUMERAL.match(name) is not None


class Expr:
    __slots__ = ()

    @property
    def ty(self) -> Type:
        return self._ty

    def __str__(self) -> str:
        from cttqe.surface import print_expr

        return print_expr(self)


def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True, slots=True)
class Var(Expr):
    name: str
    type_: Type
    span: object = _span()

    def __post_init__(self):
        if not is_identifier(self.name):
            raise ValueError(f"bad variable name {self.name!r}")

    @property
    def ty(self) -> Type:
        return self.type_


@dataclass(frozen=True, slots=True)
class Const(Expr):
    """A typed constant.  ``index`` carries the superscript type of the
    ``is-expr`` family; it is ``None`` for every other constant."""

    name: str
    type_: Type
    index: Optional[Type] = None
    span: object = _span()

    def __post_init__(self):
        if not (is_identifier(self.name) or is_numeral(self.name)):
            raise ValueError(f"bad constant name {self.name!r}")

    @property
    def ty(self) -> Type:
        return self.type_


@dataclass(frozen=True, slots=True)
class App(Expr):
    fun: Expr
    arg: Expr
    span: object = _span()
    _ty: Type = field(init=False, compare=False, repr=False)
    _evalfree: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        ft = self.fun.ty
        if not isinstance(ft, Fun):
            raise TypeMismatch(
                f"operator {self.fun} has non-function type {ft}"
            )
        if ft.dom != self.arg.ty:
            raise TypeMismatch(
                f"operator {self.fun} expects {ft.dom}, "
                f"operand {self.arg} has type {self.arg.ty}"
            )
        object.__setattr__(self, "_ty", ft.cod)
        object.__setattr__(
            self, "_evalfree", is_eval_free(self.fun) and is_eval_free(self.arg)
        )


@dataclass(frozen=True, slots=True)
class Abs(Expr):
    binder: Var
    body: Expr
    span: object = _span()
    _ty: Type = field(init=False, compare=False, repr=False)
    _evalfree: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.binder, Var):
            raise TypeMismatch(f"lambda binder must be a variable, got {self.binder!r}")
        object.__setattr__(self, "_ty", Fun(self.binder.ty, self.body.ty))
        object.__setattr__(self, "_evalfree", is_eval_free(self.body))


@dataclass(frozen=True, slots=True)
class Quote(Expr):
    body: Expr
    span: object = _span()

    def __post_init__(self):
        if not is_eval_free(self.body):
            raise QuoteNotEvalFree("quoted expression contains an evaluation")

    @property
    def ty(self) -> Type:
        return EPSILON


@dataclass(frozen=True, slots=True)
class Eval(Expr):
    arg: Expr
    target: Type
    span: object = _span()

    def __post_init__(self):
        if self.arg.ty != EPSILON:
            raise EvalArgNotEpsilon(
                f"evaluated expression has type {self.arg.ty}, expected eps"
            )

    @property
    def ty(self) -> Type:
        return self.target


Atom = Union[Var, Const]


def type_of(e: Expr) -> Type:
    """Type of ``e``.  Construction already validated the tree."""
    return e.ty


def is_eval_free(e: Expr) -> bool:
    if isinstance(e, (Var, Const, Quote)):
        return True
    if isinstance(e, Eval):
        return False
    return e._evalfree


def is_atom(e: Expr) -> bool:
    return isinstance(e, (Var, Const))


# ---------------------------------------------------------------------------
# Logical constants and the helpers that build common shapes

APP = Const("app", fun(EPSILON, EPSILON, EPSILON))
ABS = Const("abs", fun(EPSILON, EPSILON, EPSILON))
QUO = Const("quo", fun(EPSILON, EPSILON))
IS_VAR = Const("is-var", fun(EPSILON, OMICRON))
IS_CON = Const("is-con", fun(EPSILON, OMICRON))

LOGICAL_NAMES = frozenset({"eq", "is-var", "is-con", "app", "abs", "quo", "is-expr"})


def eq_const(t: Type) -> Const:
    return Const("eq", fun(t, t, OMICRON))


def is_expr_const(t: Type) -> Const:
    return Const("is-expr", fun(EPSILON, OMICRON), index=t)


def is_logical_const(c: Const) -> bool:
    if c.name == "eq":
        t = c.ty
        return (
            isinstance(t, Fun)
            and isinstance(t.cod, Fun)
            and t.cod.dom == t.dom
            and t.cod.cod == OMICRON
        )
    if c.name == "is-expr":
        return c.index is not None and c.ty == fun(EPSILON, OMICRON)
    if c.name in LOGICAL_NAMES:
        return c in (APP, ABS, QUO, IS_VAR, IS_CON)
    return False


def apply(f: Expr, *args: Expr) -> Expr:
    """Left-associated application ``f a1 ... an``."""
    for a in args:
        f = App(f, a)
    return f


def mk_eq(a: Expr, b: Expr) -> Expr:
    return apply(eq_const(a.ty), a, b)


def dest_binary(e: Expr) -> Optional[tuple[Const, Expr, Expr]]:
    """``c a b`` with ``c`` a constant, or ``None``."""
    if isinstance(e, App) and isinstance(e.fun, App) and isinstance(e.fun.fun, Const):
        return e.fun.fun, e.fun.arg, e.arg
    return None


def dest_eq(e: Expr) -> Optional[tuple[Expr, Expr]]:
    parts = dest_binary(e)
    if parts and parts[0].name == "eq" and is_logical_const(parts[0]):
        return parts[1], parts[2]
    return None


# ---------------------------------------------------------------------------
# Variables and freeness


class FreeStatus(enum.Enum):
    FREE = "free"
    NOT_FREE = "not-free"
    UNKNOWN = "unknown"


def occurs(x: Var, e: Expr) -> bool:
    """Any occurrence of ``x`` at all, including binders and quoted bodies."""
    if isinstance(e, Var):
        return e == x
    if isinstance(e, Const):
        return False
    return any(occurs(x, c) for c in children(e))


def all_vars(e: Expr) -> set[Var]:
    out: set[Var] = set()

    def walk(t: Expr) -> None:
        if isinstance(t, Var):
            out.add(t)
        elif not isinstance(t, Const):
            for c in children(t):
                walk(c)

    walk(e)
    return out


def free_vars(e: Expr) -> set[Var]:
    """Syntactically free variables.  Quotations contribute none; evaluation
    arguments contribute theirs (the evaluated meaning is not inspected)."""
    if isinstance(e, Var):
        return {e}
    if isinstance(e, (Const, Quote)):
        return set()
    if isinstance(e, App):
        return free_vars(e.fun) | free_vars(e.arg)
    if isinstance(e, Abs):
        return free_vars(e.body) - {e.binder}
    return free_vars(e.arg)


def constants(e: Expr) -> set[Const]:
    out: set[Const] = set()

    def walk(t: Expr) -> None:
        if isinstance(t, Const):
            out.add(t)
        elif not isinstance(t, Var):
            for c in children(t):
                walk(c)

    walk(e)
    return out


def _eval_discharged(x: Var, arg: Expr) -> bool:
    # The value of a closed argument built only from logical constants is fixed
    # syntax; if x is nowhere in it, x cannot be in what it denotes either.
    return (
        not occurs(x, arg)
        and not free_vars(arg)
        and all(is_logical_const(c) for c in constants(arg))
    )


def free_status(x: Var, e: Expr) -> FreeStatus:
    if isinstance(e, Var):
        return FreeStatus.FREE if e == x else FreeStatus.NOT_FREE
    if isinstance(e, (Const, Quote)):
        return FreeStatus.NOT_FREE
    if isinstance(e, App):
        return _join(free_status(x, e.fun), free_status(x, e.arg))
    if isinstance(e, Abs):
        if e.binder == x:
            return FreeStatus.NOT_FREE
        return free_status(x, e.body)
    if _eval_discharged(x, e.arg):
        return FreeStatus.NOT_FREE
    return FreeStatus.UNKNOWN


def _join(a: FreeStatus, b: FreeStatus) -> FreeStatus:
    if FreeStatus.FREE in (a, b):
        return FreeStatus.FREE
    if FreeStatus.UNKNOWN in (a, b):
        return FreeStatus.UNKNOWN
    return FreeStatus.NOT_FREE


# ---------------------------------------------------------------------------
# Tree navigation.  Paths are tuples of child indices: App 0/1, Abs 1 (body),
# Quote 0, Eval 0.

Path = tuple[int, ...]


def children(e: Expr) -> tuple[Expr, ...]:
    if isinstance(e, App):
        return (e.fun, e.arg)
    if isinstance(e, Abs):
        return (e.binder, e.body)
    if isinstance(e, Quote):
        return (e.body,)
    if isinstance(e, Eval):
        return (e.arg,)
    return ()


def subterm(e: Expr, path: Path) -> Expr:
    for i in path:
        e = children(e)[i]
    return e


def replace_at(e: Expr, path: Path, new: Expr) -> Expr:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(e, App):
        if i == 0:
            return App(replace_at(e.fun, rest, new), e.arg)
        return App(e.fun, replace_at(e.arg, rest, new))
    if isinstance(e, Abs):
        if i != 1:
            raise IndexError("cannot replace a lambda binder")
        return Abs(e.binder, replace_at(e.body, rest, new))
    if isinstance(e, Quote):
        return Quote(replace_at(e.body, rest, new))
    if isinstance(e, Eval):
        return Eval(replace_at(e.arg, rest, new), e.target)
    raise IndexError(f"path {path} runs past an atom")


def positions(e: Expr, path: Path = ()) -> Iterator[Path]:
    """All non-binder positions, pre-order, left to right."""
    yield path
    if isinstance(e, App):
        yield from positions(e.fun, path + (0,))
        yield from positions(e.arg, path + (1,))
    elif isinstance(e, Abs):
        yield from positions(e.body, path + (1,))
    elif isinstance(e, (Quote, Eval)):
        yield from positions(children(e)[0], path + (0,))


def depth(e: Expr) -> int:
    """Height of the tree; atoms have depth 1."""
    if isinstance(e, Abs):
        return 1 + depth(e.body)
    return 1 + max((depth(k) for k in children(e)), default=0)


def size(e: Expr) -> int:
    return 1 + sum(size(k) for k in children(e))
