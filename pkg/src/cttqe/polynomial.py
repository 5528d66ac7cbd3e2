"""Polynomial syntax over type i: recognition, differentiation, simplification.

Polynomials are built from i-variables, numerals, ``plus``, ``times`` and
``pow`` with a numeral exponent.  Differentiation works on decoded
expressions and re-encodes the result.
"""

from __future__ import annotations

from typing import Optional

from cttqe.construction import Construction, Proper, QuotedVar, classify, encode
from cttqe.errors import NotAPolynomial, NotAVariable
from cttqe.kernel import IOTA, Const, Expr, Var, apply, dest_binary, fun, is_numeral

PLUS = Const("plus", fun(IOTA, IOTA, IOTA))
TIMES = Const("times", fun(IOTA, IOTA, IOTA))
POW = Const("pow", fun(IOTA, IOTA, IOTA))
SUCC = Const("S", fun(IOTA, IOTA))


def numeral(n: int) -> Const:
    if n < 0:
        raise ValueError("numerals are natural numbers")
    return Const(str(n), IOTA)


def numeral_value(e: Expr) -> Optional[int]:
    if isinstance(e, Const) and e.ty == IOTA and is_numeral(e.name):
        return int(e.name)
    return None


def is_poly_expr(e: Expr) -> bool:
    if e.ty != IOTA:
        return False
    if isinstance(e, Var) or numeral_value(e) is not None:
        return True
    parts = dest_binary(e)
    if parts is None:
        return False
    op, a, b = parts
    if op in (PLUS, TIMES):
        return is_poly_expr(a) and is_poly_expr(b)
    if op == POW:
        return is_poly_expr(a) and numeral_value(b) is not None
    return False


def is_poly(c: Construction) -> bool:
    p = classify(c)
    return isinstance(p, Proper) and is_poly_expr(p.decoded)


def differentiate(e: Expr, x: Var) -> Expr:
    """Rule-by-rule derivative of polynomial ``e`` in ``x`` (unsimplified)."""
    if numeral_value(e) is not None:
        return numeral(0)
    if isinstance(e, Var):
        return numeral(1 if e == x else 0)
    parts = dest_binary(e)
    if parts is None:
        raise NotAPolynomial(f"{e} is not a polynomial")
    op, u, w = parts
    if op == PLUS:
        return apply(PLUS, differentiate(u, x), differentiate(w, x))
    if op == TIMES:
        return apply(
            PLUS,
            apply(TIMES, differentiate(u, x), w),
            apply(TIMES, u, differentiate(w, x)),
        )
    if op == POW:
        n = numeral_value(w)
        if n is None:
            raise NotAPolynomial(f"exponent {w} is not a numeral")
        if n == 0:
            return numeral(0)
        return apply(
            TIMES,
            apply(TIMES, numeral(n), apply(POW, u, numeral(n - 1))),
            differentiate(u, x),
        )
    raise NotAPolynomial(f"{e} is not a polynomial")


def simplify(e: Expr) -> Expr:
    """Bottom-up 0/1 absorption and numeral folding."""
    parts = dest_binary(e)
    if parts is None or parts[0] not in (PLUS, TIMES, POW):
        return e
    op = parts[0]
    a, b = simplify(parts[1]), simplify(parts[2])
    na, nb = numeral_value(a), numeral_value(b)
    if op == PLUS:
        if na is not None and nb is not None:
            return numeral(na + nb)
        if na == 0:
            return b
        if nb == 0:
            return a
    elif op == TIMES:
        if na is not None and nb is not None:
            return numeral(na * nb)
        if na == 0 or nb == 0:
            return numeral(0)
        if na == 1:
            return b
        if nb == 1:
            return a
    else:
        if na is not None and nb is not None:
            return numeral(na**nb)
        if nb == 0:
            return numeral(1)
        if nb == 1:
            return a
    return apply(op, a, b)


def poly_diff(v: Construction, x: Construction) -> Construction:
    if not (isinstance(x, QuotedVar) and x.v.ty == IOTA):
        raise NotAVariable(f"{x} is not a quoted variable of type i")
    p = classify(v)
    if not (isinstance(p, Proper) and is_poly_expr(p.decoded)):
        raise NotAPolynomial(f"{v} does not represent a polynomial")
    return encode(simplify(differentiate(p.decoded, x.v)))


def eval_poly(e: Expr, env: dict[Var, float]) -> float:
    """Numeric value of a polynomial expression over the reals."""
    n = numeral_value(e)
    if n is not None:
        return float(n)
    if isinstance(e, Var):
        return env[e]
    op, a, b = dest_binary(e)
    if op == PLUS:
        return eval_poly(a, env) + eval_poly(b, env)
    if op == TIMES:
        return eval_poly(a, env) * eval_poly(b, env)
    return eval_poly(a, env) ** numeral_value(b)
