import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cttqe.construction import CApp, QuotedVar, as_expr, classify, encode, literal_value
from cttqe.errors import MissingConstant, NotAPolynomial, NotAVariable, NotDefined
from cttqe.kernel import IOTA, OMICRON, Const, Var, apply, is_expr_const
from cttqe.polynomial import (
    PLUS,
    POW,
    TIMES,
    eval_poly,
    is_poly,
    is_poly_expr,
    numeral,
    poly_diff,
    simplify,
)
from cttqe.semantics import Model, valuate
from cttqe.stdlib import (
    FALSE,
    TRUE,
    Theory,
    builtin_step,
    check_definitions,
    core_theory,
    default_theory,
    is_peano,
    schema_constants,
    unfold,
)
from cttqe.surface import parse_expr

from generators import PEANO_NEG, PEANO_POS
from oracles import finite_difference, peano_predicate

TH = default_theory()
x = Var("x", IOTA)
xo = Var("x", OMICRON)


def P(s):
    return parse_expr(s, TH)


# -- definitions


def test_unfold_truth_values():
    assert unfold("T", TH) == P("eq:(o->o->o) = eq:(o->o->o)")
    assert unfold("F", TH) == P("(\\x:o . T) = (\\x:o . x:o)")


def test_unfold_make_implication():
    assert unfold("make-implication", TH) == P("\\x:eps . \\y:eps . app (app '[ imp ] x:eps) y:eps")


def test_unfold_rejects_primitives():
    with pytest.raises(NotDefined):
        unfold("app", TH)
    with pytest.raises(NotDefined):
        unfold("nonsense", TH)


def test_definitions_are_well_formed():
    assert check_definitions(TH) == []
    for name in ("eq", "is-var", "is-con", "app", "abs", "quo", "is-expr"):
        assert TH.is_constant(name)


def test_connectives_are_the_usual_truth_functions():
    m = Model(1, TH)
    for a in (True, False):
        for b in (True, False):
            env = {"a": "T" if a else "F", "b": "T" if b else "F"}
            for op, fn in (("/\\", a and b), ("\\/", a or b), ("=>", (not a) or b)):
                assert valuate(P(f"{env['a']} {op} {env['b']}"), m).value is fn
        assert valuate(P(f"~{'T' if a else 'F'}"), m).value is (not a)


# -- builtins


def test_builtin_examples():
    assert builtin_step(P("is-var '[ x:o ]"), TH) == TRUE
    assert builtin_step(P("is-con '[ x:o ]"), TH) == FALSE
    improper = as_expr(CApp(QuotedVar(xo), QuotedVar(xo)))
    assert builtin_step(apply(is_expr_const(OMICRON), improper), TH) == FALSE
    assert builtin_step(P("'[ x:i ] = '[ x:i ]"), TH) == TRUE
    assert builtin_step(P("'[ x:i ] = '[ y:i ]"), TH) == FALSE


def test_builtins_need_literal_arguments():
    assert builtin_step(P("is-var u:eps"), TH) is None
    assert builtin_step(P("is-var"), TH) is None


def test_constructors_are_not_folded():
    # app/abs/quo applied to literals already are literals
    e = P("quo '[ x:i ]")
    assert builtin_step(e, TH) is None
    assert literal_value(e) == encode(P("'[ x:i ]"))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([1, 2, 3]))
def test_builtin_step_is_sound(seed, size):
    from generators import construction

    rng = random.Random(seed)
    c1, c2 = construction(rng, 4), construction(rng, 4)
    a, b = as_expr(c1), as_expr(c2)
    m = Model(size, TH)
    for name in ("is-var", "is-con", "is-poly", "is-peano"):
        e = apply(TH.resolve(name, None, None), a)
        out = builtin_step(e, TH)
        assert valuate(e, m) == valuate(out, m)
    for t in (IOTA, OMICRON):
        e = apply(is_expr_const(t), a)
        assert valuate(e, m) == valuate(builtin_step(e, TH), m)
    e = P("eq:(eps->eps->o)")
    e = apply(e, a, b)
    assert valuate(e, m) == valuate(builtin_step(e, TH), m)


# -- polynomials


def test_poly_diff_examples():
    assert poly_diff(encode(P("x:i ^ 2")), encode(x)) == encode(P("2 * x:i"))
    assert poly_diff(encode(P("7")), encode(x)) == encode(numeral(0))
    assert poly_diff(encode(P("y:i")), encode(x)) == encode(numeral(0))


def test_poly_diff_errors():
    with pytest.raises(NotAPolynomial):
        poly_diff(encode(P("\\x:i . x:i")), encode(x))
    with pytest.raises(NotAVariable):
        poly_diff(encode(P("x:i")), encode(P("c:o")))
    with pytest.raises(NotAVariable):
        poly_diff(encode(P("x:i")), encode(numeral(1)))


def test_is_poly():
    assert is_poly(encode(P("x:i ^ 2")))
    assert is_poly(encode(P("x:i * x:i + 3 * y:i")))
    assert not is_poly(encode(P("\\x:i . x:i")))
    assert not is_poly(encode(P("S x:i")))
    assert not is_poly(encode(apply(POW, x, Var("y", IOTA))))


def test_simplify_absorbs_and_folds():
    assert simplify(P("0 + x:i")) == x
    assert simplify(P("x:i * 1")) == x
    assert simplify(P("0 * x:i + 2 * 3")) == numeral(6)
    assert simplify(P("x:i ^ 1")) == x
    assert simplify(P("x:i ^ 0")) == numeral(1)


def random_poly(rng: random.Random, depth: int):
    vars_ = [Var("x", IOTA), Var("y", IOTA)]
    if depth <= 1 or rng.random() < 0.3:
        return rng.choice(vars_ + [numeral(rng.randint(0, 4))])
    r = rng.random()
    if r < 0.4:
        return apply(PLUS, random_poly(rng, depth - 1), random_poly(rng, depth - 1))
    if r < 0.8:
        return apply(TIMES, random_poly(rng, depth - 1), random_poly(rng, depth - 1))
    return apply(POW, random_poly(rng, depth - 1), numeral(rng.randint(0, 3)))


def test_derivative_of_x_times_x_plus_x():
    out = classify(poly_diff(encode(P("x:i * x:i + x:i")), encode(x))).decoded
    for pt in (-2.0, -0.5, 0.0, 1.0, 3.0):
        assert eval_poly(out, {x: pt}) == pytest.approx(2 * pt + 1, abs=1e-9)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_poly_diff_matches_finite_differences(seed):
    rng = random.Random(seed)
    p = random_poly(rng, 4)
    y = Var("y", IOTA)
    d = classify(poly_diff(encode(p), encode(x))).decoded
    assert is_poly_expr(d)
    yv = rng.uniform(-1.5, 1.5)
    for pt in (-1.3, -0.4, 0.0, 0.7, 1.2):
        want = finite_difference(lambda t: eval_poly(p, {x: t, y: yv}), pt, h=1e-3)
        got = eval_poly(d, {x: pt, y: yv})
        assert got == pytest.approx(want, rel=1e-5, abs=1e-5)


# -- Peano formulas

@pytest.mark.parametrize("src", PEANO_POS)
def test_peano_positive(src):
    c = encode(P(src))
    assert peano_predicate(c)
    assert is_peano(c)


@pytest.mark.parametrize("src", PEANO_NEG)
def test_peano_negative(src):
    c = encode(P(src))
    assert not peano_predicate(c)
    assert not is_peano(c)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_peano_agrees_with_oracle_on_random_syntax(seed):
    from generators import ExprGen, construction

    rng = random.Random(seed)
    atoms = (Var("x", IOTA), Var("y", IOTA), Const("0", IOTA), TH.resolve("S", None, None),
             PLUS, TIMES, TRUE, TH.resolve("not", None, None), TH.resolve("and", None, None),
             TH.resolve("imp", None, None), Const("eq", parse_expr("eq:(i->i->o)").ty),
             Var("p", OMICRON))
    e = ExprGen(rng, atoms, quotes=False).eval_free(OMICRON, 6)
    c = encode(e)
    assert is_peano(c) == peano_predicate(c)
    c = construction(rng, 5)
    assert is_peano(c) == peano_predicate(c)


# -- schemas


def test_schema_formulas_typecheck():
    f = schema_constants(TH)
    assert set(f) == {"lem", "lem-quasi", "induction", "poly-diff"}
    assert all(v.ty == OMICRON for v in f.values())


def test_schema_constants_need_arithmetic():
    with pytest.raises(MissingConstant):
        schema_constants(core_theory())


def test_theory_copy_is_independent():
    th = TH.copy("scratch")
    th.declare("zz", IOTA)
    assert th.is_constant("zz") and not TH.is_constant("zz")
    assert isinstance(th, Theory)
