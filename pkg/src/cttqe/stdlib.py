"""Theories: the logical constants, defined constants and example libraries.

``core_theory()`` holds the logical constants (equality and the syntax
predicates/constructors), truth values and connectives as definitions, plus
the syntax-manipulating examples ``make-implication`` and ``is-app``.
``arithmetic_theory()`` extends it with natural-number syntax, the polynomial
builtins and the schema/meaning formulas.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

from cttqe import polynomial
from cttqe.construction import (
    Construction,
    Proper,
    QuotedConst,
    QuotedVar,
    as_expr,
    classify,
    literal_value,
)
from cttqe.errors import CttqeError, MissingConstant, NotDefined, ParseError, TypeMismatch
from cttqe.kernel import (
    ABS,
    APP,
    EPSILON,
    IOTA,
    IS_CON,
    IS_VAR,
    OMICRON,
    QUO,
    Abs,
    App,
    Const,
    Expr,
    FreeStatus,
    Type,
    Var,
    constants,
    dest_binary,
    free_vars,
    fun,
    is_expr_const,
    is_logical_const,
    is_numeral,
)

TRUE = Const("T", OMICRON)
FALSE = Const("F", OMICRON)
AND = Const("and", fun(OMICRON, OMICRON, OMICRON))
OR = Const("or", fun(OMICRON, OMICRON, OMICRON))
IMP = Const("imp", fun(OMICRON, OMICRON, OMICRON))
NOT = Const("not", fun(OMICRON, OMICRON))

BuiltinResult = Union[bool, Construction, None]


@dataclass(frozen=True)
class Builtin:
    """A constant computed on construction arguments.  ``fn`` returns a bool
    (a truth value), a construction, or ``None`` when it has nothing to say."""

    const: Const
    arity: int
    fn: Callable[..., BuiltinResult]


@dataclass
class ConstantDef:
    const: Const
    kind: str  # "logical" | "primitive" | "defined" | "builtin"
    body: Optional[Expr] = None
    doc: str = ""
    transparent: bool = False


@dataclass
class Theory:
    name: str
    defs: dict[str, ConstantDef] = field(default_factory=dict)
    builtins: dict[str, Builtin] = field(default_factory=dict)
    # python functions on individuals (ints mod the domain size) used as the
    # default interpretation of arithmetic primitives
    int_ops: dict[str, Callable[..., int]] = field(default_factory=dict)
    formulas: dict[str, Expr] = field(default_factory=dict)

    def copy(self, name: Optional[str] = None) -> "Theory":
        return Theory(name or self.name, dict(self.defs), dict(self.builtins),
                      dict(self.int_ops), dict(self.formulas))

    # -- signature used by the parser and printer
    def is_constant(self, name: str) -> bool:
        return name in self.defs or name in ("eq", "is-expr")

    def resolve(self, name: str, ty: Optional[Type], index: Optional[Type]) -> Optional[Const]:
        if name == "eq":
            if index is not None:
                raise ParseError("eq takes no index")
            if ty is None:
                return None
            c = Const("eq", ty)
            if not is_logical_const(c):
                raise TypeMismatch(f"eq cannot have type {ty}")
            return c
        if name == "is-expr":
            if index is None:
                raise ParseError("is-expr needs an index, as in is-expr{o}")
            c = is_expr_const(index)
            if ty is not None and ty != c.ty:
                raise TypeMismatch(f"is-expr has type eps->o, not {ty}")
            return c
        d = self.defs.get(name)
        if d is None:
            return None
        if index is not None:
            raise ParseError(f"{name} takes no index")
        if ty is not None and ty != d.const.ty:
            raise TypeMismatch(f"constant {name} has type {d.const.ty}, not {ty}")
        return d.const

    def lookup(self, c: Const) -> Optional[ConstantDef]:
        d = self.defs.get(c.name)
        if d is not None and d.const == c:
            return d
        return None

    # -- building
    def declare(self, name: str, ty: Type, doc: str = "", kind: str = "primitive") -> Const:
        if self.is_constant(name):
            raise ValueError(f"constant {name} already declared")
        c = Const(name, ty)
        self.defs[name] = ConstantDef(c, kind, doc=doc)
        return c

    def define(self, name: str, ty: Type, body: Union[str, Expr], doc: str = "",
               transparent: bool = False) -> Const:
        if isinstance(body, str):
            from cttqe.surface import parse_expr

            body = parse_expr(body, self)
        if body.ty != ty:
            raise TypeMismatch(f"definition of {name} has type {body.ty}, declared {ty}")
        if free_vars(body):
            raise ValueError(f"definition of {name} is not closed")
        c = self.declare(name, ty, doc, kind="defined")
        self.defs[name].body = body
        self.defs[name].transparent = transparent
        return c

    def add_builtin(self, name: str, ty: Type, arity: int, fn, doc: str = "") -> Const:
        c = self.declare(name, ty, doc, kind="builtin")
        self.builtins[name] = Builtin(c, arity, fn)
        return c

    def builtin_for(self, c: Const) -> Optional[Builtin]:
        if is_logical_const(c):
            return _logical_builtin(c)
        b = self.builtins.get(c.name)
        if b is not None and b.const == c:
            return b
        return None


# ---------------------------------------------------------------------------
# Builtin computations on constructions


def _is_var(c: Construction) -> bool:
    return isinstance(c, QuotedVar)


def _is_con(c: Construction) -> bool:
    return isinstance(c, QuotedConst)


def _is_expr(alpha: Type) -> Callable[[Construction], bool]:
    def fn(c: Construction) -> bool:
        p = classify(c)
        return isinstance(p, Proper) and p.ty == alpha

    return fn


def _eq(a: Construction, b: Construction) -> bool:
    return a == b


@functools.lru_cache(maxsize=None)
def _logical_builtin(c: Const) -> Optional[Builtin]:
    if c == IS_VAR:
        return Builtin(c, 1, _is_var)
    if c == IS_CON:
        return Builtin(c, 1, _is_con)
    if c.name == "is-expr":
        return Builtin(c, 1, _is_expr(c.index))
    if c.name == "eq" and c.ty.dom == EPSILON:
        return Builtin(c, 2, _eq)
    return None


def strip_comb(e: Expr) -> tuple[Expr, list[Expr]]:
    args: list[Expr] = []
    while isinstance(e, App):
        args.append(e.arg)
        e = e.fun
    args.reverse()
    return e, args


def builtin_result_expr(out: BuiltinResult) -> Optional[Expr]:
    if out is None:
        return None
    if isinstance(out, bool):
        return TRUE if out else FALSE
    return as_expr(out)


def builtin_step(e: Expr, theory: "Theory") -> Optional[Expr]:
    """One computation of a builtin applied to literal arguments, if any."""
    head, args = strip_comb(e)
    if not isinstance(head, Const) or head in (APP, ABS, QUO):
        return None
    b = theory.builtin_for(head)
    if b is None or len(args) != b.arity:
        return None
    vals = [literal_value(a) for a in args]
    if any(v is None for v in vals):
        return None
    try:
        out = b.fn(*vals)
    except CttqeError:
        return None
    return builtin_result_expr(out)


# ---------------------------------------------------------------------------
# First-order Peano formulas


def _is_peano_term(e: Expr) -> bool:
    if e.ty != IOTA:
        return False
    if isinstance(e, Var):
        return True
    if isinstance(e, Const):
        return e.name == "0"
    if isinstance(e, App) and e.fun == polynomial.SUCC:
        return _is_peano_term(e.arg)
    parts = dest_binary(e)
    return (
        parts is not None
        and parts[0] in (polynomial.PLUS, polynomial.TIMES)
        and _is_peano_term(parts[1])
        and _is_peano_term(parts[2])
    )


def _is_peano_formula(e: Expr) -> bool:
    if e.ty != OMICRON:
        return False
    if isinstance(e, App) and e.fun == NOT:
        return _is_peano_formula(e.arg)
    parts = dest_binary(e)
    if parts is None:
        return False
    op, a, b = parts
    if op in (AND, OR, IMP):
        return _is_peano_formula(a) and _is_peano_formula(b)
    if op.name == "eq" and is_logical_const(op):
        if a.ty == IOTA:
            return _is_peano_term(a) and _is_peano_term(b)
        # forall over an individual variable: (\x . T) = (\x . body)
        return (
            isinstance(a, Abs)
            and isinstance(b, Abs)
            and a.binder == b.binder
            and a.binder.ty == IOTA
            and a.body == TRUE
            and _is_peano_formula(b.body)
        )
    return False


def is_peano_expr(e: Expr) -> bool:
    """A first-order arithmetic formula, or a predicate ``\\x:i . formula``."""
    while isinstance(e, Abs) and e.binder.ty == IOTA:
        e = e.body
    return _is_peano_formula(e)


def is_peano(c: Construction) -> bool:
    p = classify(c)
    return isinstance(p, Proper) and is_peano_expr(p.decoded)


def _poly_diff(v: Construction, x: Construction) -> Optional[Construction]:
    return polynomial.poly_diff(v, x)


def _is_free_in(x: Construction, c: Construction) -> Optional[bool]:
    from cttqe.rewrite import is_free_in

    status = is_free_in(x, c)
    if status is FreeStatus.UNKNOWN:
        return None
    return status is FreeStatus.FREE


# ---------------------------------------------------------------------------
# Standard theories


@functools.lru_cache(maxsize=None)
def core_theory() -> Theory:
    th = Theory("core")
    for c, doc in (
        (IS_VAR, "quoted variable test"),
        (IS_CON, "quoted constant test"),
        (APP, "application constructor"),
        (ABS, "abstraction constructor"),
        (QUO, "quotation constructor"),
    ):
        th.defs[c.name] = ConstantDef(c, "logical", doc=doc)
    th.define("T", OMICRON, "eq:(o->o->o) = eq:(o->o->o)", "truth")
    th.define("F", OMICRON, "(\\x:o . T) = (\\x:o . x:o)", "falsehood")
    th.define(
        "and",
        fun(OMICRON, OMICRON, OMICRON),
        "\\x:o . \\y:o . (\\g:(o->o->o) . g:(o->o->o) T T) = "
        "(\\g:(o->o->o) . g:(o->o->o) x:o y:o)",
        "conjunction",
    )
    th.define("imp", fun(OMICRON, OMICRON, OMICRON),
              "\\x:o . \\y:o . x:o = (x:o /\\ y:o)", "implication")
    th.define("not", fun(OMICRON, OMICRON), "eq:(o->o->o) F", "negation")
    th.define("or", fun(OMICRON, OMICRON, OMICRON),
              "\\x:o . \\y:o . ~(~x:o /\\ ~y:o)", "disjunction")
    th.add_builtin("is-free-in", fun(EPSILON, EPSILON, OMICRON), 2, _is_free_in,
                   "syntactic freeness of a quoted variable in a proper construction")
    th.define(
        "make-implication",
        fun(EPSILON, EPSILON, EPSILON),
        "\\x:eps . \\y:eps . app (app '[ imp ] x:eps) y:eps",
        "builds the construction of an implication",
        transparent=True,
    )
    th.define(
        "is-app",
        fun(EPSILON, OMICRON),
        "\\x:eps . exists y:eps . exists z:eps . x:eps = app y:eps z:eps",
        "tests whether a construction is an application",
    )
    return th


_LEM = "forall x:eps . is-expr{o} x:eps => [[ x:eps ]]_o \\/ ~[[ x:eps ]]_o"
_LEM_QUASI = "forall x:eps . is-expr{o} x:eps => [[ '[ ,(x:eps) \\/ ~,(x:eps) ] ]]_o"
_INDUCTION = (
    "forall f:eps . (is-expr{i->o} f:eps /\\ is-peano f:eps) => "
    "(([[ f:eps ]]_(i->o) 0 /\\ (forall x:i . [[ f:eps ]]_(i->o) x:i => "
    "[[ f:eps ]]_(i->o) (S x:i))) => forall x:i . [[ f:eps ]]_(i->o) x:i)"
)
_MEANING = (
    "forall u:eps . forall v:eps . "
    "(is-var u:eps /\\ is-expr{i} u:eps /\\ is-poly v:eps) => "
    "deriv [[ abs u:eps v:eps ]]_(i->i) = "
    "[[ abs u:eps (poly-diff v:eps u:eps) ]]_(i->i)"
)


@functools.lru_cache(maxsize=None)
def arithmetic_theory() -> Theory:
    th = core_theory().copy("arithmetic")
    th.declare("S", fun(IOTA, IOTA), "successor")
    th.declare("plus", fun(IOTA, IOTA, IOTA), "addition")
    th.declare("times", fun(IOTA, IOTA, IOTA), "multiplication")
    th.declare("pow", fun(IOTA, IOTA, IOTA), "power by a numeral exponent")
    th.declare("deriv", fun(fun(IOTA, IOTA), fun(IOTA, IOTA)), "derivative (uninterpreted)")
    th.int_ops.update(
        S=lambda a: a + 1,
        plus=lambda a, b: a + b,
        times=lambda a, b: a * b,
        pow=lambda a, b: a**b,
    )
    th.add_builtin("is-poly", fun(EPSILON, OMICRON), 1, polynomial.is_poly,
                   "recognises polynomial syntax of type i")
    th.add_builtin("is-peano", fun(EPSILON, OMICRON), 1, is_peano,
                   "recognises first-order Peano formulas and predicates")
    th.add_builtin("poly-diff", fun(EPSILON, EPSILON, EPSILON), 2, _poly_diff,
                   "symbolic derivative of a polynomial construction")
    th.formulas.update(schema_constants(th))
    return th


def default_theory() -> Theory:
    return arithmetic_theory()


def schema_constants(theory: Theory) -> dict[str, Expr]:
    """The closed schema formulas: excluded middle (plain and quasiquoted),
    Peano induction, and the meaning formula of ``poly-diff``."""
    from cttqe.surface import parse_expr

    for name in ("S", "plus", "times", "deriv", "poly-diff", "is-poly", "is-peano"):
        if not theory.is_constant(name):
            raise MissingConstant(f"theory {theory.name} lacks {name}")
    out = {
        "lem": parse_expr(_LEM, theory),
        "lem-quasi": parse_expr(_LEM_QUASI, theory),
        "induction": parse_expr(_INDUCTION, theory),
        "poly-diff": parse_expr(_MEANING, theory),
    }
    for name, f in out.items():
        if f.ty != OMICRON:
            raise TypeMismatch(f"schema {name} is not a formula")
    return out


def unfold(name: str, theory: Theory) -> Expr:
    d = theory.defs.get(name)
    if d is None or d.kind != "defined":
        raise NotDefined(f"{name} is not a defined constant")
    return d.body


def is_numeral_const(c: Const) -> bool:
    return c.ty == IOTA and is_numeral(c.name)


def check_definitions(theory: Theory) -> list[str]:
    """Problems with the theory's definitions (empty when all is well)."""
    problems = []
    order = list(theory.defs)
    for i, (name, d) in enumerate(theory.defs.items()):
        if d.kind != "defined":
            continue
        if d.body.ty != d.const.ty:
            problems.append(f"{name}: body has type {d.body.ty}")
        for c in constants(d.body):
            if c.name in theory.defs and order.index(c.name) >= i:
                problems.append(f"{name}: refers to later constant {c.name}")
    return problems
