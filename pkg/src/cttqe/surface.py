"""Concrete ASCII syntax: tokenizer, parser and printer.

Grammar summary (loosest binding first)::

    \\x:t . e   forall x:t . e   exists x:t . e      binders, extend right
    a => b                                         right assoc
    a \\/ b                                         right assoc
    a /\\ b                                         right assoc
    ~a                                             prefix
    a = b                                          non-assoc
    a + b                                          left assoc
    a * b                                          left assoc
    a ^ n                                          numeral exponent
    f a b                                          application, left assoc
    x:t  name  @name:t  12  (e)  '[ e ]  [[ e ]]_t  ,( e )

Types are ``i``, ``o``, ``eps`` and ``a -> b`` (right assoc); after a colon or
an evaluation subscript a non-base type must be parenthesised.  A typed atom
whose name is a constant of the active theory is that constant; otherwise it
is a variable.  ``@name:t`` always denotes a constant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from cttqe.construction import literal_value
from cttqe.errors import (
    CttqeError,
    HoleNotEpsilon,
    HoleOutsideQuote,
    ParseError,
    TypeMismatch,
)
from cttqe.kernel import (
    EPSILON,
    IOTA,
    OMICRON,
    Abs,
    App,
    BaseType,
    Const,
    Eval,
    Expr,
    Fun,
    Quote,
    Type,
    Var,
    atom_type_str,
    dest_binary,
    eq_const,
    fun,
    is_logical_const,
    is_numeral,
)
from cttqe.quasiquote import (
    AntiQuote,
    QAbsHole,
    QAbsVar,
    QApp,
    QConst,
    QQuote,
    QVar,
    expand,
    has_holes,
)


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    length: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


# ---------------------------------------------------------------------------
# Tokens

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<sym>'\[|\[\[|,\(|\\/|/\\|=>|->|[\]\\(){}=~+*^.:@])
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*(?:-[A-Za-z0-9_']+)*)
    """,
    re.VERBOSE,
)

KEYWORDS = {"forall", "exists"}
BASE_TYPES = {"i": IOTA, "o": OMICRON, "eps": EPSILON}


@dataclass(frozen=True)
class Token:
    kind: str  # "sym", "num", "ident", "eof"
    text: str
    span: SourceSpan


def tokenize(text: str, file: str = "<input>", line: int = 1) -> list[Token]:
    tokens: list[Token] = []
    pos, ln, col = 0, line, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", SourceSpan(file, ln, col, 1))
        chunk = m.group()
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, chunk, SourceSpan(file, ln, col, len(chunk))))
        nl = chunk.count("\n")
        if nl:
            ln += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    tokens.append(Token("eof", "", SourceSpan(file, ln, col, 0)))
    return tokens


# ---------------------------------------------------------------------------
# Builders: the same grammar produces plain expressions outside quotations and
# quasi-expressions inside them.


def qtype(m) -> Optional[Type]:
    """Type of a quasi-expression when it does not depend on a hole."""
    if isinstance(m, QVar):
        return m.v.ty
    if isinstance(m, QConst):
        return m.c.ty
    if isinstance(m, QQuote):
        return EPSILON
    if isinstance(m, QApp):
        f = qtype(m.m)
        return f.cod if isinstance(f, Fun) else None
    if isinstance(m, QAbsVar):
        b = qtype(m.body)
        return None if b is None else Fun(m.binder.ty, b)
    return None


def to_expr(m) -> Expr:
    """Hole-free quasi-expression back to an expression."""
    if isinstance(m, QVar):
        return m.v
    if isinstance(m, QConst):
        return m.c
    if isinstance(m, QApp):
        return App(to_expr(m.m), to_expr(m.n))
    if isinstance(m, QAbsVar):
        return Abs(m.binder, to_expr(m.body))
    if isinstance(m, QQuote):
        return Quote(to_expr(m.m))
    raise ValueError("quasi-expression still has holes")


class _ExprBuilder:
    quasi = False

    def atom(self, a, span):
        return a

    def app(self, f, a, span):
        try:
            return App(f, a, span=span)
        except TypeMismatch as exc:
            raise _spanned(exc, span) from None

    def abs(self, v, body, span):
        return Abs(v, body, span=span)

    def type_of(self, e):
        return e.ty


class _QuasiBuilder:
    quasi = True

    def atom(self, a, span):
        return QVar(a) if isinstance(a, Var) else QConst(a)

    def app(self, f, a, span):
        ft, at = qtype(f), qtype(a)
        if ft is not None and not isinstance(ft, Fun):
            raise _spanned(TypeMismatch(f"operator has non-function type {ft}"), span)
        if isinstance(ft, Fun) and at is not None and ft.dom != at:
            raise _spanned(
                TypeMismatch(f"operator expects {ft.dom}, operand has type {at}"), span
            )
        return QApp(f, a)

    def abs(self, v, body, span):
        if isinstance(v, AntiQuote):
            return QAbsHole(v, body)
        return QAbsVar(v, body)

    def type_of(self, m):
        return qtype(m)


def _spanned(exc: CttqeError, span) -> CttqeError:
    new = type(exc)(f"{span}: {exc}" if span else str(exc))
    new.span = span
    return new


EXPR = _ExprBuilder()
QUASI = _QuasiBuilder()

# ---------------------------------------------------------------------------
# Parser

_AND = Const("and", fun(OMICRON, OMICRON, OMICRON))
_OR = Const("or", fun(OMICRON, OMICRON, OMICRON))
_IMP = Const("imp", fun(OMICRON, OMICRON, OMICRON))
_NOT = Const("not", fun(OMICRON, OMICRON))
_TRUE = Const("T", OMICRON)
_PLUS = Const("plus", fun(IOTA, IOTA, IOTA))
_TIMES = Const("times", fun(IOTA, IOTA, IOTA))
_POW = Const("pow", fun(IOTA, IOTA, IOTA))

_INFIX = {"=>": _IMP, "\\/": _OR, "/\\": _AND}


class Parser:
    def __init__(self, text: str, theory=None, file: str = "<input>", line: int = 1,
                 macros: Optional[dict[str, Expr]] = None):
        if theory is None:
            from cttqe.stdlib import default_theory

            theory = default_theory()
        self.theory = theory
        self.tokens = tokenize(text, file, line)
        self.i = 0
        self.macros = macros or {}

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        return self.tok.kind == "sym" and self.tok.text == text

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}",
                             self.tok.span)
        return self.advance()

    def error(self, msg: str) -> ParseError:
        return ParseError(msg, self.tok.span)

    def at_end(self) -> bool:
        return self.tok.kind == "eof"

    # -- types
    def parse_type(self) -> Type:
        left = self.parse_type_atom()
        if self.at("->"):
            self.advance()
            return Fun(left, self.parse_type())
        return left

    def parse_type_atom(self) -> Type:
        t = self.tok
        if t.kind == "ident" and t.text in BASE_TYPES:
            self.advance()
            return BASE_TYPES[t.text]
        if self.at("("):
            self.advance()
            ty = self.parse_type()
            self.expect(")")
            return ty
        raise self.error(f"expected a type, found {t.text or 'end of input'!r}")

    # -- expressions
    def parse_top(self, b=EXPR):
        e = self.parse_expr(b)
        if not self.at_end():
            raise self.error(f"unexpected {self.tok.text!r}")
        return e

    def parse_expr(self, b):
        if self.tok.kind == "ident" and self.tok.text in KEYWORDS or self.at("\\"):
            return self.parse_binder(b)
        return self.parse_imp(b)

    def parse_binder(self, b):
        start = self.advance()
        kind = "lambda" if start.text == "\\" else start.text
        if b.quasi and self.at(",(") and kind == "lambda":
            binder = self.parse_hole()
        else:
            binder = self.parse_binder_var()
        self.expect(".")
        body = self.parse_expr(b)
        span = start.span
        if kind == "lambda":
            return b.abs(binder, body, span)
        if isinstance(binder, AntiQuote):
            raise ParseError("quantifier binders cannot be antiquotations", span)
        return self.quantifier(b, kind, binder, body, span)

    def quantifier(self, b, kind, x: Var, body, span):
        self.check_type(b, body, OMICRON, span)
        if kind == "exists":
            body = self.unop(b, _NOT, body, span)
        eq = b.atom(eq_const(Fun(x.ty, OMICRON)), span)
        lhs = b.abs(x, b.atom(self.const_named("T"), span), span)
        out = b.app(b.app(eq, lhs, span), b.abs(x, body, span), span)
        if kind == "exists":
            out = self.unop(b, _NOT, out, span)
        return out

    def const_named(self, name: str) -> Const:
        c = self.theory.resolve(name, None, None)
        if c is None:
            raise self.error(f"constant {name!r} is not in the theory")
        return c

    def parse_binder_var(self) -> Var:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            raise self.error("expected a bound variable")
        self.advance()
        self.expect(":")
        ty = self.parse_type_atom()
        if self.theory.is_constant(t.text):
            raise ParseError(f"{t.text!r} is a constant and cannot be bound", t.span)
        return Var(t.text, ty, span=t.span)

    def check_type(self, b, e, ty: Type, span):
        et = b.type_of(e)
        if et is not None and et != ty:
            raise _spanned(TypeMismatch(f"expected {ty}, found {et}"), span)

    def binop(self, b, c: Const, l, r, span):
        return b.app(b.app(b.atom(c, span), l, span), r, span)

    def unop(self, b, c: Const, x, span):
        return b.app(b.atom(c, span), x, span)

    def parse_imp(self, b):
        return self._right_chain(b, "=>", self.parse_or)

    def parse_or(self, b):
        return self._right_chain(b, "\\/", self.parse_and)

    def parse_and(self, b):
        return self._right_chain(b, "/\\", self.parse_not)

    def _right_chain(self, b, op, sub):
        left = sub(b)
        if self.at(op):
            t = self.advance()
            right = self._operand(b, lambda bb: self._right_chain(bb, op, sub))
            return self.binop(b, _INFIX[op], left, right, t.span)
        return left

    def _operand(self, b, sub):
        if self.tok.kind == "ident" and self.tok.text in KEYWORDS or self.at("\\"):
            return self.parse_binder(b)
        return sub(b)

    def parse_not(self, b):
        if self.at("~"):
            t = self.advance()
            return self.unop(b, _NOT, self._operand(b, self.parse_not), t.span)
        return self.parse_eq(b)

    def parse_eq(self, b):
        left = self.parse_sum(b)
        if self.at("="):
            t = self.advance()
            right = self._operand(b, self.parse_sum)
            ty = b.type_of(left) or b.type_of(right)
            if ty is None:
                raise ParseError("cannot determine the type of an equation between "
                                 "antiquotations", t.span)
            return self.binop(b, eq_const(ty), left, right, t.span)
        return left

    def parse_sum(self, b):
        left = self.parse_prod(b)
        while self.at("+"):
            t = self.advance()
            left = self.binop(b, _PLUS, left, self._operand(b, self.parse_prod), t.span)
        return left

    def parse_prod(self, b):
        left = self.parse_pow(b)
        while self.at("*"):
            t = self.advance()
            left = self.binop(b, _TIMES, left, self._operand(b, self.parse_pow), t.span)
        return left

    def parse_pow(self, b):
        left = self.parse_app(b)
        if self.at("^"):
            t = self.advance()
            if self.tok.kind != "num":
                raise self.error("exponent must be a numeral")
            n = self.advance()
            exp = b.atom(Const(n.text, IOTA, span=n.span), n.span)
            return self.binop(b, _POW, left, exp, t.span)
        return left

    def _starts_primary(self) -> bool:
        t = self.tok
        if t.kind in ("num",):
            return True
        if t.kind == "ident":
            return t.text not in KEYWORDS
        return t.kind == "sym" and t.text in ("(", "'[", "[[", ",(", "@")

    def parse_app(self, b):
        start = self.tok.span
        head = self.parse_primary(b)
        while True:
            if self._starts_primary():
                arg = self.parse_primary(b)
            elif self.tok.kind == "ident" and self.tok.text in KEYWORDS or self.at("\\"):
                arg = self.parse_binder(b)
            else:
                return head
            head = b.app(head, arg, start)

    def parse_primary(self, b):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return b.atom(Const(t.text, IOTA, span=t.span), t.span)
        if t.kind == "ident":
            return b.atom(self.parse_atom(), t.span)
        if self.at("@"):
            self.advance()
            name = self.tok
            if name.kind not in ("ident", "num"):
                raise self.error("expected a constant name after '@'")
            self.advance()
            index = self.parse_index()
            self.expect(":")
            return b.atom(Const(name.text, self.parse_type_atom(), index=index,
                                span=name.span), t.span)
        if self.at("("):
            self.advance()
            e = self.parse_expr(b)
            self.expect(")")
            return e
        if self.at("'["):
            return self.parse_quote(b)
        if self.at("[["):
            if b.quasi:
                raise ParseError("evaluations cannot occur inside a quotation", t.span)
            self.advance()
            arg = self.parse_expr(EXPR)
            self.expect("]")
            self.expect("]")
            target = self.parse_subscript()
            try:
                return Eval(arg, target, span=t.span)
            except CttqeError as exc:
                raise _spanned(exc, t.span) from None
        if self.at(",("):
            if not b.quasi:
                raise HoleOutsideQuote("antiquotation outside a quotation", t.span)
            return self.parse_hole()
        raise self.error(f"unexpected {t.text or 'end of input'!r}")

    def parse_hole(self) -> AntiQuote:
        t = self.expect(",(")
        e = self.parse_expr(EXPR)
        self.expect(")")
        if e.ty != EPSILON:
            raise _spanned(HoleNotEpsilon(f"antiquoted expression has type {e.ty}"), t.span)
        return AntiQuote(e)

    def parse_quote(self, b):
        t = self.expect("'[")
        m = self.parse_expr(QUASI)
        self.expect("]")
        if b.quasi:
            return QQuote(m)
        try:
            if has_holes(m):
                return expand(m)
            return Quote(to_expr(m), span=t.span)
        except CttqeError as exc:
            raise _spanned(exc, t.span) from None

    def parse_subscript(self) -> Type:
        t = self.tok
        if t.kind == "ident" and t.text.startswith("_"):
            rest = t.text[1:]
            if rest in BASE_TYPES:
                self.advance()
                return BASE_TYPES[rest]
            if rest == "":
                self.advance()
                return self.parse_type_atom()
        raise self.error("expected a type subscript such as _o or _(i->o)")

    def parse_index(self) -> Optional[Type]:
        if self.at("{"):
            self.advance()
            ty = self.parse_type()
            self.expect("}")
            return ty
        return None

    def parse_atom(self) -> Expr:
        t = self.advance()
        name = t.text
        index = self.parse_index()
        ty = None
        if self.at(":"):
            self.advance()
            ty = self.parse_type_atom()
        if ty is None and index is None and name in self.macros:
            return self.macros[name]
        if self.theory.is_constant(name):
            try:
                c = self.theory.resolve(name, ty, index)
            except CttqeError as exc:
                raise _spanned(exc, t.span) from None
            if c is None:
                raise ParseError(f"constant {name!r} needs a type annotation", t.span)
            return Const(c.name, c.ty, index=c.index, span=t.span)
        if index is not None:
            raise ParseError(f"{name!r} is not an indexed constant", t.span)
        if ty is None:
            raise ParseError(f"atom {name!r} needs a type annotation", t.span)
        return Var(name, ty, span=t.span)


def parse_expr(text: str, theory=None, file: str = "<input>", line: int = 1,
               macros: Optional[dict[str, Expr]] = None) -> Expr:
    return Parser(text, theory, file, line, macros).parse_top()


def parse_type(text: str) -> Type:
    p = Parser(text, theory=_NO_THEORY)
    ty = p.parse_type()
    if not p.at_end():
        raise p.error(f"unexpected {p.tok.text!r}")
    return ty


class _EmptySignature:
    def is_constant(self, name):
        return False

    def resolve(self, name, ty, index):
        return None


_NO_THEORY = _EmptySignature()


# ---------------------------------------------------------------------------
# Printer

LV_BINDER, LV_IMP, LV_OR, LV_AND, LV_NOT, LV_EQ, LV_SUM, LV_PROD, LV_POW, LV_APP, LV_ATOM = range(11)

_BIN_SUGAR = {
    _IMP: ("=>", LV_IMP, "right"),
    _OR: ("\\/", LV_OR, "right"),
    _AND: ("/\\", LV_AND, "right"),
    _PLUS: ("+", LV_SUM, "left"),
    _TIMES: ("*", LV_PROD, "left"),
}


def print_type(t: Type) -> str:
    return str(t)


def print_expr(e: Expr, theory=None) -> str:
    if theory is None:
        from cttqe.stdlib import default_theory

        theory = default_theory()
    return _Printer(theory).show(e, LV_BINDER)


class _Printer:
    def __init__(self, theory):
        self.theory = theory

    def show(self, e: Expr, need: int) -> str:
        text, level = self.render(e)
        return f"({text})" if level < need else text

    def atom(self, e: Expr) -> str:
        if isinstance(e, Var):
            return f"{e.name}:{atom_type_str(e.ty)}"
        if is_numeral(e.name) and e.ty == IOTA and e.index is None:
            return e.name
        idx = "" if e.index is None else "{" + str(e.index) + "}"
        try:
            known = self.theory.resolve(e.name, e.ty, e.index) == e
        except CttqeError:
            known = False
        if not known:
            return f"@{e.name}{idx}:{atom_type_str(e.ty)}"
        if self.theory.resolve(e.name, None, e.index) == e:
            return f"{e.name}{idx}"
        return f"{e.name}{idx}:{atom_type_str(e.ty)}"

    def render(self, e: Expr) -> tuple[str, int]:
        if isinstance(e, (Var, Const)):
            return self.atom(e), LV_ATOM
        if isinstance(e, Quote):
            return f"'[ {self.show(e.body, LV_BINDER)} ]", LV_ATOM
        if isinstance(e, Eval):
            sub = e.target.name if isinstance(e.target, BaseType) else f"({e.target})"
            return f"[[ {self.show(e.arg, LV_BINDER)} ]]_{sub}", LV_ATOM
        if isinstance(e, Abs):
            return f"\\{self.atom(e.binder)} . {self.show(e.body, LV_BINDER)}", LV_BINDER
        sugar = self.sugar(e)
        if sugar is not None:
            return sugar
        return f"{self.show(e.fun, LV_APP)} {self.show(e.arg, LV_ATOM)}", LV_APP

    def quantifier(self, e: Expr):
        """``(x, body)`` when ``e`` is ``(\\x . T) = (\\x . body)``."""
        parts = dest_binary(e)
        if parts is None or parts[0].name != "eq" or not is_logical_const(parts[0]):
            return None
        l, r = parts[1], parts[2]
        if (isinstance(l, Abs) and isinstance(r, Abs) and l.binder == r.binder
                and l.body == _TRUE and r.body.ty == OMICRON
                and self.theory.resolve("T", None, None) == _TRUE):
            return l.binder, r.body
        return None

    def sugar(self, e: App):
        if e.fun == _NOT and self._known(_NOT):
            inner = self.quantifier(e.arg)
            if inner and isinstance(inner[1], App) and inner[1].fun == _NOT:
                x, body = inner
                return f"exists {self.atom(x)} . {self.show(body.arg, LV_BINDER)}", LV_BINDER
            return f"~{self.show(e.arg, LV_NOT)}", LV_NOT
        q = self.quantifier(e)
        if q is not None:
            x, body = q
            return f"forall {self.atom(x)} . {self.show(body, LV_BINDER)}", LV_BINDER
        parts = dest_binary(e)
        if parts is None:
            return None
        op, a, b = parts
        if op.name == "eq" and is_logical_const(op):
            return f"{self.show(a, LV_SUM)} = {self.show(b, LV_SUM)}", LV_EQ
        if op == _POW and b.ty == IOTA and isinstance(b, Const) and is_numeral(b.name) \
                and self._known(_POW):
            return f"{self.show(a, LV_APP)} ^ {b.name}", LV_POW
        if op in _BIN_SUGAR and self._known(op):
            sym, lv, assoc = _BIN_SUGAR[op]
            left_need = lv + 1 if assoc == "right" else lv
            right_need = lv if assoc == "right" else lv + 1
            return f"{self.show(a, left_need)} {sym} {self.show(b, right_need)}", lv
        return None

    def _known(self, c: Const) -> bool:
        try:
            return self.theory.resolve(c.name, c.ty, None) == c
        except CttqeError:
            return False


# ---------------------------------------------------------------------------
# Theory and model files

_DECL_RE = re.compile(r"(const|def)\s+([^\s:]+)\s*:\s*(.*)\Z")


def _content_lines(text: str):
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield n, line


def load_theory(text: str, base=None, file: str = "<theory>"):
    """Extend ``base`` (default: the arithmetic theory) with the declarations
    of a theory file: ``const name : type`` and ``def name : type := expr``."""
    from cttqe.stdlib import default_theory

    th = (base or default_theory()).copy(file)
    for n, line in _content_lines(text):
        span = SourceSpan(file, n, 1, len(line))
        m = _DECL_RE.match(line.strip())
        if m is None:
            raise ParseError("expected 'const name : type' or 'def name : type := expr'", span)
        kind, name, rest = m.groups()
        if kind == "def":
            if ":=" not in rest:
                raise ParseError("definition needs ':='", span)
            ty_text, body = rest.split(":=", 1)
        else:
            ty_text, body = rest, None
        try:
            ty = parse_type(ty_text)
            if body is None:
                th.declare(name, ty)
            else:
                th.define(name, ty, parse_expr(body, th, file, n))
        except ParseError:
            raise
        except (CttqeError, ValueError) as exc:
            raise ParseError(str(exc), span) from None
    return th


def load_model(text: str, theory=None, file: str = "<model>"):
    """Read a model file.  ``iota N`` sets the number of individuals,
    ``seed K`` interprets unlisted primitive constants pseudo-randomly, and
    ``name : type = value`` fixes a constant.  Values are individuals
    (``0``..``N-1``), ``T``/``F``, quotations, or parenthesised tables listing
    a function's results over its domain in enumeration order."""
    from cttqe.semantics import Model

    iota, seed = 2, None
    entries = []
    for n, line in _content_lines(text):
        span = SourceSpan(file, n, 1, len(line))
        words = line.split()
        if words[0] in ("iota", "seed") and len(words) == 2 and words[1].isdigit():
            if words[0] == "iota":
                iota = int(words[1])
            else:
                seed = int(words[1])
            continue
        if "=" not in line or ":" not in line.split("=", 1)[0]:
            raise ParseError("expected 'iota N', 'seed K' or 'name : type = value'", span)
        lhs, rhs = line.split("=", 1)
        name, ty_text = (s.strip() for s in lhs.split(":", 1))
        entries.append((name, ty_text, rhs.strip(), span))
    if iota < 1:
        raise ParseError("iota must be positive", SourceSpan(file, 1, 1, 0))
    model = Model(iota, theory, seed=seed)
    for name, ty_text, rhs, span in entries:
        try:
            ty = parse_type(ty_text)
            c = Const(name, ty)
            if model.theory.resolve(name, None, None) not in (None, c):
                raise TypeMismatch(f"constant {name} is declared with another type")
            model.interpretation[c] = parse_value(rhs, ty, model, file, span.line)
        except ParseError:
            raise
        except (CttqeError, ValueError) as exc:
            raise ParseError(str(exc), span) from None
    return model


def _split_items(text: str) -> list[str]:
    items, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if cur:
                items.append(cur)
            cur = ""
        else:
            cur += ch
    if depth != 0:
        raise ValueError(f"unbalanced brackets in {text!r}")
    if cur:
        items.append(cur)
    return items


def parse_value(text: str, ty: Type, model, file: str = "<model>", line: int = 1):
    """A semantic value of type ``ty`` written in model-file notation."""
    from cttqe.semantics import Constr, Individual, Truth, _table, enumerate_domain, value_key

    text = text.strip()
    if ty == IOTA:
        if not text.isdigit() or int(text) >= model.iota_size:
            raise ValueError(f"{text!r} is not an individual below {model.iota_size}")
        return Individual(int(text))
    if ty == OMICRON:
        if text not in ("T", "F"):
            raise ValueError(f"{text!r} is not a truth value")
        return Truth(text == "T")
    if ty == EPSILON:
        c = literal_value(parse_expr(text, model.theory, file, line))
        if c is None:
            raise ValueError(f"{text!r} is not a construction literal")
        return Constr(c)
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError(f"a value of type {ty} is written as a parenthesised table")
    items = _split_items(text[1:-1])
    dom = enumerate_domain(ty.dom, model)
    if len(items) != len(dom):
        raise ValueError(f"a table for type {ty} needs {len(dom)} entries, got {len(items)}")
    table = {value_key(d, ty.dom, model): parse_value(s, ty.cod, model, file, line)
             for d, s in zip(dom, items)}
    return _table(ty, table, model)
