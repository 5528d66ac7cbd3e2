"""Acceptance criteria 1-10.

Each ``check_cN`` raises ``AssertionError`` on failure and otherwise returns a
one-line summary.  Under pytest the results are collected and printed as one
PASS/FAIL line per criterion at the end of the run (see conftest.py); run this
file directly to print the same lines without pytest.
"""

from __future__ import annotations

import io
import random
import sys
import time
from contextlib import redirect_stdout

import pytest

from cttqe.cli import main
from cttqe.construction import (
    CApp,
    Improper,
    Proper,
    QuotedConst,
    QuotedVar,
    as_expr,
    classify,
    decode,
    encode,
    enumerate_constructions,
)
from cttqe.kernel import (
    EPSILON,
    IOTA,
    OMICRON,
    Abs,
    App,
    Eval,
    Quote,
    Var,
    apply,
    free_vars,
    fun,
    is_expr_const,
)
from cttqe.polynomial import PLUS, TIMES, numeral
from cttqe.quasiquote import AntiQuote, QApp, QConst, QVar, embed, expand
from cttqe.rewrite import Rule, normalize, step
from cttqe.semantics import Assignment, Constr, Model, Truth, eps_pool_for, random_value, valuate
from cttqe.stdlib import AND, IMP, NOT, OR, default_theory
from cttqe.surface import parse_expr
from cttqe.trace import FailedAtStep, Verified, check_trace, instantiate, polydiff_trace

from generators import (
    CATOMS,
    PEANO_NEG,
    PEANO_POS,
    VARS,
    ExprGen,
    _NoExpr,
    construction,
    corpus,
    formula,
    random_type,
)
from oracles import peano_predicate, proper_census, same_observations

TH = default_theory()
POOL = list(CATOMS)
RESULTS: dict[int, tuple[bool, str]] = {}

_CORPUS: list = []


def full_corpus() -> list:
    if not _CORPUS:
        _CORPUS.extend(corpus(10_000, seed=2024, max_depth=7))
    return _CORPUS


def random_phi(e, m, rng) -> Assignment:
    return Assignment({v: random_value(v.ty, m, rng, POOL) for v in free_vars(e)})


# ---------------------------------------------------------------------------


def check_c1() -> str:
    exprs = full_corpus()
    types = {e.ty for e in exprs}
    atoms = set()
    for e in exprs:
        atoms |= free_vars(e)
    assert len(exprs) >= 10_000
    assert {IOTA, OMICRON, EPSILON} <= types
    assert len(atoms) >= 6
    t0 = time.perf_counter()
    images = {}
    for e in exprs:
        c = encode(e)
        assert decode(c) == e, e
        images[c] = e
    elapsed = time.perf_counter() - t0
    assert len(images) == len(exprs), "encode is not injective on the sample"
    assert elapsed < 10.0, f"{elapsed:.2f}s"
    return f"{len(exprs)} expressions, {len(types)} types, round trip and injectivity in {elapsed:.2f}s"


def check_c2() -> str:
    exprs = full_corpus()
    for e in exprs:
        d = Eval(Quote(e), e.ty)
        assert normalize(d, theory=TH, rules={Rule.DISQUOTE}).result == e, e
        assert normalize(d, theory=TH, fuel=2000).result == normalize(e, theory=TH, fuel=2000).result
    rng = random.Random(7)
    m = Model(2, TH, seed=7)
    cases = exprs[::10]
    assert len(cases) >= 1000
    for k, e in enumerate(cases):
        d = Eval(Quote(e), e.ty)
        for j in range(100):
            phi = random_phi(e, m, rng)
            assert same_observations(valuate(d, m, phi), valuate(e, m, phi), e.ty, m,
                                     k * 100 + j, pool=POOL), e
    return (f"{len(exprs)} expressions normalize back exactly; "
            f"{len(cases)} x 100 assignments agree in a 2-element model")


def check_c3() -> str:
    exprs = full_corpus()
    for e in exprs:
        assert normalize(Quote(e), theory=TH).result == as_expr(encode(e)), e
    return f"{len(exprs)} quotations normalize to their construction literals"


def check_c4() -> str:
    exprs = full_corpus()
    for e in exprs:
        assert expand(embed(e)) == as_expr(encode(e)), e
    A, C = Var("A", OMICRON), Var("C", OMICRON)
    q = QApp(QConst(NOT), QApp(QApp(QConst(AND), QVar(A)), AntiQuote(Quote(C))))
    out = normalize(expand(q), theory=TH).result
    assert out == as_expr(encode(App(NOT, apply(AND, A, C))))
    return f"{len(exprs)} hole-free embeddings expand to literals; worked example exact"


def check_c5() -> str:
    rng = random.Random(5)
    seen = set()
    while len(seen) < 2000:
        seen.add(construction(rng, rng.randint(1, 5)))
    for c in seen:
        e = as_expr(c)
        for _ in range(50):
            m = Model(rng.randint(1, 3), TH, seed=rng.randrange(1 << 30))
            phi = Assignment({v: random_value(v.ty, m, rng, POOL) for v in rng.sample(VARS, 3)})
            assert valuate(e, m, phi) == Constr(c), c
    return f"{len(seen)} literals x 50 assignments denote themselves"


def check_c6() -> str:
    t0 = time.perf_counter()
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["demo", "polydiff"])
    elapsed = time.perf_counter() - t0
    lines = buf.getvalue().splitlines()
    assert code == 0, buf.getvalue()
    assert lines[-1] == "\\x:i . 2 * x:i", lines[-1]
    assert elapsed < 1.0, f"{elapsed:.2f}s"
    t = polydiff_trace(TH)
    assert check_trace(t, TH) == Verified(6)
    wrong = ["deriv [[ '[ \\x:i . x:i ^ 3 ] ]]_(i->i)",
             "deriv [[ abs '[ x:i ] '[ x:i ^ 3 ] ]]_(i->i)",
             "[[ abs '[ x:i ] (poly-diff '[ x:i ^ 2 ] '[ y:i ]) ]]_(i->i)",
             "[[ abs '[ x:i ] '[ 3 * x:i ] ]]_(i->i)",
             "[[ '[ \\x:i . 3 * x:i ] ]]_(i->i)",
             "\\x:i . 3 * x:i"]
    for k, src in enumerate(wrong):
        bad = polydiff_trace(TH)
        bad.steps[k] = (bad.steps[k][0], parse_expr(src, TH))
        r = check_trace(bad, TH)
        assert isinstance(r, FailedAtStep) and r.index == k + 1, (k, r)
    return f"6 steps verified in {elapsed * 1000:.0f}ms; each of 6 corruptions rejected at its step"


def check_c7() -> str:
    rng = random.Random(17)
    mk = TH.resolve("make-implication", None, None)
    for _ in range(200):
        a, b = formula(rng), formula(rng)
        out = normalize(apply(mk, Quote(a), Quote(b)), theory=TH, unfold="all").result
        assert out == as_expr(encode(apply(IMP, a, b))), (a, b)
    is_app = TH.resolve("is-app", None, None)
    m = Model(2, TH)
    apps = [c for c in (construction(rng, 3) for _ in range(200)) if isinstance(c, CApp)][:20]
    atoms = [QuotedVar(Var("x", IOTA)), QuotedVar(Var("p", OMICRON)), QuotedConst(NOT),
             QuotedConst(PLUS)]
    for c, want in [(c, True) for c in apps] + [(c, False) for c in atoms]:
        e = App(is_app, as_expr(c))
        assert valuate(e, m.with_pool(eps_pool_for(e, 3))) == Truth(want), c
    return (f"200 make-implication instances exact; is-app right on {len(apps)} applications "
            f"and {len(atoms)} atoms")


def check_c8() -> str:
    rng = random.Random(8)
    lem = TH.formulas["lem"]
    x = Var("x", EPSILON)
    done = 0
    while done < 20:
        c = formula(rng, rng.randint(1, 5))
        inst = instantiate(lem, {x: Quote(c)}, TH)
        assert all(valuate(h, Model(1, TH)) == Truth(True) for h in inst.hypotheses)
        want = apply(OR, c, App(NOT, c))
        assert normalize(inst.conclusion, theory=TH, rules={Rule.DISQUOTE}).result == want
        assert normalize(inst.conclusion, theory=TH).result == normalize(want, theory=TH).result
        done += 1
    assert TH.formulas["induction"].ty == OMICRON
    is_peano = TH.resolve("is-peano", None, None)
    for src, want in [(s, True) for s in PEANO_POS] + [(s, False) for s in PEANO_NEG]:
        c = encode(parse_expr(src, TH))
        assert peano_predicate(c) is want, src
        out = normalize(App(is_peano, as_expr(c)), theory=TH).result
        assert out == (TH.resolve("T", None, None) if want else TH.resolve("F", None, None)), src
    return (f"{done} LEM instances normalize to C \\/ ~C; induction typechecks; "
            f"is-peano agrees with the grammar oracle on {len(PEANO_POS)}+{len(PEANO_NEG)} samples")


# -- criterion 9: one generator of redexes per rule


def _beta(rng, gen):
    xv = gen.var_of(rng.choice([IOTA, OMICRON, EPSILON, fun(IOTA, IOTA)]))
    body = gen.expr(random_type(rng), rng.randint(1, 5), (xv,))
    return App(Abs(xv, body), gen.expr(xv.ty, rng.randint(1, 4)))


def _disquote(rng, gen):
    a = gen.eval_free(random_type(rng), rng.randint(1, 6))
    return Eval(Quote(a) if rng.random() < 0.5 else as_expr(encode(a)), a.ty)


def _quote_norm(rng, gen):
    return Quote(gen.eval_free(random_type(rng), rng.randint(2, 6)))


R = Var("r", EPSILON)
_APP = TH.resolve("app", None, None)


def _eval_beta(rng, gen):
    a = gen.eval_free(rng.choice([IOTA, OMICRON]), rng.randint(1, 4))
    kind = rng.randrange(3)
    if kind == 0:
        body, target = R, a.ty
    else:
        t = rng.choice([IOTA, OMICRON])
        f = gen.eval_free(fun(a.ty, t), rng.randint(1, 4))
        body, target = apply(_APP, Quote(f), R), t
        if kind == 2 and t == OMICRON:
            body, target = apply(_APP, Quote(NOT), body), OMICRON
    return App(Abs(R, Eval(body, target)), Quote(a))


def _builtin_fold(rng, gen):
    def lit():
        if rng.random() < 0.5:
            return as_expr(construction(rng, rng.randint(1, 4)))
        return as_expr(encode(gen.eval_free(random_type(rng), rng.randint(1, 4))))

    name = rng.choice(["is-var", "is-con", "is-expr-o", "is-expr-i", "eq", "is-poly",
                       "is-peano", "poly-diff", "is-free-in"])
    if name.startswith("is-expr"):
        return App(is_expr_const(OMICRON if name.endswith("o") else IOTA), lit())
    if name == "eq":
        a = lit()
        return apply(TH.resolve("eq", fun(EPSILON, EPSILON, OMICRON), None), a,
                     a if rng.random() < 0.3 else lit())
    if name == "poly-diff":
        p = ExprGen(rng, (Var("x", IOTA), Var("y", IOTA), numeral(2), PLUS, TIMES)).eval_free(
            IOTA, rng.randint(1, 5))
        return apply(TH.resolve(name, None, None), as_expr(encode(p)), Quote(Var("x", IOTA)))
    if name == "is-free-in":
        return apply(TH.resolve(name, None, None), Quote(Var("x", IOTA)), lit())
    return App(TH.resolve(name, None, None), lit())


_DEFINED = [TH.resolve(n, None, None) for n in ("make-implication", "is-app")]


def _def_unfold(rng, gen):
    if rng.random() < 0.2:
        c = rng.choice(_DEFINED)
        if c.name == "is-app":
            return App(c, as_expr(construction(rng, 3)))
        return apply(c, as_expr(construction(rng, 3)), as_expr(construction(rng, 3)))
    return gen.expr(rng.choice([OMICRON, fun(OMICRON, OMICRON)]), rng.randint(1, 5))


REDEXES = {
    Rule.BETA: _beta,
    Rule.DISQUOTE: _disquote,
    Rule.QUOTE_NORM: _quote_norm,
    Rule.EVAL_BETA: _eval_beta,
    Rule.BUILTIN_FOLD: _builtin_fold,
    Rule.DEF_UNFOLD: _def_unfold,
}


def check_c9(per_rule: int = 1000) -> str:
    counts = {}
    for k, (rule, make) in enumerate(REDEXES.items()):
        rng = random.Random(900 + k)
        gen = ExprGen(rng, evals=True)
        fired = tries = 0
        while fired < per_rule:
            tries += 1
            assert tries < 50 * per_rule, f"{rule.value}: only {fired} redexes fired"
            try:
                e = make(rng, gen)
            except _NoExpr:
                continue
            hit = step(e, TH, {rule}, unfold="all")
            if hit is None:
                continue
            out = hit[0]
            size = 1 + fired % 3
            m = Model(size, TH, seed=fired).with_pool(POOL)
            phi = random_phi(e, m, rng)
            assert out.ty == e.ty
            assert same_observations(valuate(e, m, phi), valuate(out, m, phi), e.ty, m, fired,
                                     pool=POOL), (rule, e, out)
            fired += 1
        counts[rule.value] = fired
    return "fired and checked: " + ", ".join(f"{k} {v}" for k, v in counts.items())


def check_c10() -> str:
    for t in (IOTA, OMICRON, EPSILON, fun(IOTA, IOTA)):
        q = QuotedVar(Var("x", t))
        assert isinstance(classify(CApp(q, q)), Improper), t
    atoms = [Var("f", fun(IOTA, IOTA)), Var("x", IOTA)]
    census = enumerate_constructions([QuotedVar(a) for a in atoms], 3)
    proper = {c for c in census if isinstance(classify(c), Proper)}
    oracle = proper_census(atoms, 3)
    assert proper == oracle
    return f"{len(census)} constructions at depth <= 3, {len(proper)} proper, equal to the oracle"


CHECKS = {1: check_c1, 2: check_c2, 3: check_c3, 4: check_c4, 5: check_c5,
          6: check_c6, 7: check_c7, 8: check_c8, 9: check_c9, 10: check_c10}


def run_check(n: int) -> tuple[bool, str]:
    try:
        detail = CHECKS[n]()
    except AssertionError as exc:
        RESULTS[n] = (False, f"{type(exc).__name__}: {exc}"[:300])
        raise
    RESULTS[n] = (True, detail)
    return RESULTS[n]


def format_result(n: int) -> str:
    ok, detail = RESULTS[n]
    return f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_criterion(n):
    run_check(n)


if __name__ == "__main__":
    failed = 0
    for n in sorted(CHECKS):
        try:
            run_check(n)
        except AssertionError:
            failed += 1
        print(format_result(n), flush=True)
    sys.exit(1 if failed else 0)
