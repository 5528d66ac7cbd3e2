import random

import pytest
from hypothesis import given, settings

from cttqe.construction import as_expr, encode
from cttqe.errors import HoleOutsideQuote, ParseError, TypeMismatch
from cttqe.kernel import EPSILON, IOTA, OMICRON, Abs, App, Const, Eval, Quote, Var, apply, fun
from cttqe.quasiquote import AntiQuote, QApp, QConst, QVar, expand
from cttqe.semantics import Individual, Model, valuate
from cttqe.stdlib import AND, IMP, NOT, TRUE, default_theory
from cttqe.surface import (
    load_model,
    load_theory,
    parse_expr,
    parse_type,
    print_expr,
    print_type,
    tokenize,
)

from generators import ExprGen, exprs

TH = default_theory()
x = Var("x", IOTA)
A, B = Var("A", OMICRON), Var("B", OMICRON)
OR = Const("or", fun(OMICRON, OMICRON, OMICRON))
EQ_O = Const("eq", fun(OMICRON, OMICRON, OMICRON))


def P(s):
    return parse_expr(s, TH)


def test_types():
    assert parse_type("i -> o -> eps") == fun(IOTA, OMICRON, EPSILON)
    assert parse_type("(i -> i) -> i") == fun(fun(IOTA, IOTA), IOTA)
    assert print_type(fun(fun(IOTA, IOTA), IOTA)) == "(i->i)->i"


def test_grammar_examples():
    assert P("'[ \\x:i . x:i ]") == Quote(Abs(x, x))
    assert P("[[ '[ A:o ] ]]_o") == Eval(Quote(A), OMICRON)
    assert P("f:(i->i->i) x:i x:i") == App(App(Var("f", fun(IOTA, IOTA, IOTA)), x), x)
    assert P("imp:(o->o->o)") == IMP


def test_table_sugar():
    assert P("A:o /\\ B:o") == apply(AND, A, B)
    assert P("A:o \\/ B:o") == apply(OR, A, B)
    assert P("A:o => B:o") == apply(IMP, A, B)
    assert P("~A:o") == App(NOT, A)
    assert P("A:o = B:o") == apply(EQ_O, A, B)
    all_x = apply(Const("eq", fun(fun(IOTA, OMICRON), fun(IOTA, OMICRON), OMICRON)),
                  Abs(x, TRUE), Abs(x, P("x:i = x:i")))
    assert P("forall x:i . x:i = x:i") == all_x
    some_x = App(NOT, apply(all_x.fun.fun, Abs(x, TRUE), Abs(x, App(NOT, P("x:i = x:i")))))
    assert P("exists x:i . x:i = x:i") == some_x


def test_connectives_associate_to_the_right():
    C = Var("C", OMICRON)
    assert P("A:o => B:o => C:o") == apply(IMP, A, apply(IMP, B, C))
    assert P("A:o /\\ B:o => C:o") == apply(IMP, apply(AND, A, B), C)


def test_quasiquotation_is_expanded():
    q = QApp(QConst(NOT), QApp(QApp(QConst(AND), QVar(A)), AntiQuote(Var("B", EPSILON))))
    assert P("'[ ~(A:o /\\ ,(B:eps)) ]") == expand(q)


def test_printer_examples():
    assert print_expr(Abs(x, x)) == "\\x:i . x:i"
    assert print_expr(as_expr(encode(Abs(x, x))), TH) == "abs '[ x:i ] '[ x:i ]"
    assert print_expr(P("f:(i->i->i) (g:(i->i) x:i) x:i")) == "f:(i->i->i) (g:(i->i) x:i) x:i"


def test_golden_literals():
    cases = {
        "~A:o": "app '[ not ] '[ A:o ]",
        "A:o /\\ B:o": "app (app '[ and ] '[ A:o ]) '[ B:o ]",
        "'[ x:i ]": "quo '[ x:i ]",
    }
    for src, want in cases.items():
        assert print_expr(as_expr(encode(P(src))), TH) == want


def test_errors_have_spans():
    with pytest.raises(ParseError) as info:
        P("(x:i")
    assert (info.value.span.line, info.value.span.column) == (1, 5)
    with pytest.raises(TypeMismatch) as info:
        P("'[ (x:i x:i) ]")
    assert info.value.span.column == 5
    with pytest.raises(HoleOutsideQuote):
        P(",(B:eps)")
    with pytest.raises(ParseError):
        P("x")
    with pytest.raises(ParseError):
        P("[[ x:eps ]]")


def test_tokens_carry_positions():
    toks = tokenize("\\x:i .\n  x:i", "f.cttqe")
    last = [t for t in toks if t.kind == "ident" and t.span.line == 2][0]
    assert (last.span.file, last.span.line, last.span.column) == ("f.cttqe", 2, 3)


@settings(max_examples=400, deadline=None)
@given(exprs(evals=True))
def test_print_parse_round_trip(e):
    assert parse_expr(print_expr(e, TH), TH) == e


def test_round_trip_on_a_corpus():
    rng = random.Random(5)
    gen = ExprGen(rng, evals=True)
    for _ in range(500):
        e = gen.expr(rng.choice([IOTA, OMICRON, EPSILON]), 7, ())
        assert parse_expr(print_expr(e, TH), TH) == e


def test_theory_files():
    th = load_theory(
        "# a small theory\n"
        "const c : i\n"
        "def double : i -> i := \\x:i . x:i + x:i\n",
        TH,
    )
    assert th.is_constant("c") and th.is_constant("double")
    assert not TH.is_constant("double")
    m = load_model("iota 3\nc : i = 2\n", th)
    assert valuate(parse_expr("double c", th), m) == Individual(1)
    with pytest.raises(ParseError) as info:
        load_theory("const c : i\ndef bad : i := T\n", TH)
    assert info.value.span.line == 2


def test_model_file_errors():
    with pytest.raises(ParseError):
        load_model("iota 2\nc : i = 5\n", TH)
    with pytest.raises(ParseError):
        load_model("iota 2\nf : i -> i = (1)\n", TH)
    assert load_model("iota 4\n", TH).iota_size == 4
    assert isinstance(load_model("", TH), Model)
