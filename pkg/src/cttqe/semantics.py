"""Standard models with a finite domain of individuals, and the valuation.

Functions are represented intensionally as Python closures, so functions on
constructions are fine to build and apply.  Only equality needs to look at a
whole domain: it enumerates individuals, truth values and finite function
spaces over them, and uses an explicit bounded pool of constructions for
domains involving ``eps`` (the approximation is reported by ``check_valid``).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Optional, Union

from cttqe.construction import (
    CAbs,
    CApp,
    Construction,
    CQuo,
    Proper,
    QuotedConst,
    QuotedVar,
    classify,
    encode,
    enumerate_constructions,
    literal_value,
    quoted_atoms,
    subconstructions,
)
from cttqe.errors import CttqeError, FuelExhausted, UnsupportedEquality
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
    BaseType,
    Const,
    Eval,
    Expr,
    Fun,
    Quote,
    Type,
    Var,
    free_vars,
    involves_epsilon,
    is_logical_const,
    is_numeral,
    positions,
    subterm,
)
from cttqe.stdlib import Theory, default_theory

UNDEF = Const("undef", EPSILON)

# the largest function space equality will enumerate
MAX_DOMAIN = 4096


@dataclass(frozen=True)
class Individual:
    index: int

    def __str__(self) -> str:
        return f"#{self.index}"


@dataclass(frozen=True)
class Truth:
    value: bool

    def __str__(self) -> str:
        return "T" if self.value else "F"


@dataclass(frozen=True)
class Constr:
    c: Construction

    def __str__(self) -> str:
        return str(self.c)


@dataclass(frozen=True, eq=False)
class Func:
    dom: Type
    cod: Type
    fn: Callable[["Value"], "Value"]

    def __call__(self, d: "Value") -> "Value":
        return self.fn(d)

    def __str__(self) -> str:
        return f"<function {self.dom} -> {self.cod}>"


Value = Union[Individual, Truth, Constr, Func]


# ---------------------------------------------------------------------------
# Assignments


class Assignment:
    """A total assignment: finitely many overrides on top of the model's
    default value for each type."""

    __slots__ = ("_map",)

    def __init__(self, overrides: Optional[Mapping[Var, Value]] = None):
        self._map: dict[Var, Value] = dict(overrides or {})

    def get(self, v: Var, m: "Model") -> Value:
        d = self._map.get(v)
        return m.default_value(v.ty) if d is None else d

    def update(self, v: Var, d: Value) -> "Assignment":
        new = Assignment.__new__(Assignment)
        new._map = dict(self._map)
        new._map[v] = d
        return new

    def items(self):
        return self._map.items()

    def __eq__(self, other) -> bool:
        return isinstance(other, Assignment) and self._map.keys() == other._map.keys() and all(
            _same(a, other._map[k]) for k, a in self._map.items()
        )

    def __repr__(self) -> str:
        inner = ", ".join(f"{v.name}:{v.ty} = {d}" for v, d in self._map.items())
        return f"Assignment({inner})"


def _same(a: Value, b: Value) -> bool:
    return a is b if isinstance(a, Func) else a == b


# ---------------------------------------------------------------------------
# Models


class Model:
    """A standard model over ``iota_size`` individuals.

    Logical constants get their fixed meaning.  Defined constants are valued
    through their definitions.  Builtins compute on constructions and fall back
    to the default value when they have nothing to say.  Arithmetic primitives
    act modulo ``iota_size``; other primitive constants come from
    ``interpretation`` or, when ``seed`` is set, from a deterministic random
    choice, and otherwise take the default value of their type.
    """

    def __init__(self, iota_size: int = 2, theory: Optional[Theory] = None,
                 interpretation: Optional[Mapping[Const, Value]] = None,
                 seed: Optional[int] = None,
                 eps_pool: Optional[Iterable[Construction]] = None):
        if iota_size < 1:
            raise ValueError("the domain of individuals must be nonempty")
        self.iota_size = iota_size
        self.theory = theory or default_theory()
        self.interpretation = dict(interpretation or {})
        self.seed = seed
        self.eps_pool = None if eps_pool is None else tuple(dict.fromkeys(eps_pool))
        self.pool_used = False
        self._cache: dict[Const, Value] = {}

    def with_pool(self, pool: Iterable[Construction]) -> "Model":
        return Model(self.iota_size, self.theory, self.interpretation, self.seed, pool)

    @classmethod
    def random(cls, iota_size: int, seed: int, theory: Optional[Theory] = None) -> "Model":
        return cls(iota_size, theory, seed=seed)

    # -- defaults
    def default_value(self, ty: Type) -> Value:
        if ty == OMICRON:
            return Truth(False)
        if ty == IOTA:
            return Individual(0)
        if ty == EPSILON:
            return Constr(QuotedConst(UNDEF))
        assert isinstance(ty, Fun)
        d = self.default_value(ty.cod)
        return Func(ty.dom, ty.cod, lambda _: d)

    # -- constants
    def const_value(self, c: Const) -> Value:
        v = self._cache.get(c)
        if v is None:
            v = self._compute_const(c)
            self._cache[c] = v
        return v

    def _compute_const(self, c: Const) -> Value:
        if c in self.interpretation:
            return self.interpretation[c]
        if is_logical_const(c):
            return self._logical(c)
        th = self.theory
        d = th.lookup(c)
        if d is not None and d.kind == "defined":
            v = valuate(d.body, self, Assignment())
            return _tabulate(v, c.ty, self)
        b = th.builtin_for(c)
        if b is not None:
            return self._builtin(c.ty, b.arity, b.fn)
        if c.ty == IOTA and is_numeral(c.name):
            return Individual(int(c.name) % self.iota_size)
        if d is not None and c.name in th.int_ops:
            return self._int_op(c.ty, th.int_ops[c.name])
        if self.seed is not None and d is None and not involves_epsilon(c.ty):
            rng = random.Random(f"{self.seed}:{c.name}:{c.ty}")
            return random_value(c.ty, self, rng)
        return self.default_value(c.ty)

    def _logical(self, c: Const) -> Value:
        E, O = EPSILON, OMICRON
        if c == IS_VAR:
            return Func(E, O, lambda a: Truth(isinstance(a.c, QuotedVar)))
        if c == IS_CON:
            return Func(E, O, lambda a: Truth(isinstance(a.c, QuotedConst)))
        if c == APP:
            return Func(E, Fun(E, E), lambda a: Func(E, E, lambda b: Constr(CApp(a.c, b.c))))
        if c == ABS:
            return Func(E, Fun(E, E), lambda a: Func(E, E, lambda b: Constr(CAbs(a.c, b.c))))
        if c == QUO:
            return Func(E, E, lambda a: Constr(CQuo(a.c)))
        if c.name == "is-expr":
            alpha = c.index

            def is_expr(a: Value) -> Value:
                p = classify(a.c)
                return Truth(isinstance(p, Proper) and p.ty == alpha)

            return Func(E, O, is_expr)
        alpha = c.ty.dom
        return Func(alpha, Fun(alpha, O),
                    lambda a: Func(alpha, O, lambda b: Truth(values_equal(a, b, alpha, self))))

    def _builtin(self, ty: Type, arity: int, fn) -> Value:
        def done(args: tuple, cod: Type) -> Value:
            try:
                out = fn(*(a.c for a in args))
            except CttqeError:
                out = None
            if out is None:
                return self.default_value(cod)
            if isinstance(out, bool):
                return Truth(out)
            return Constr(out)

        def curry(args: tuple, t: Type, k: int) -> Value:
            if k == 0:
                return done(args, t)
            return Func(t.dom, t.cod, lambda a: curry(args + (a,), t.cod, k - 1))

        return curry((), ty, arity)

    def _int_op(self, ty: Type, op) -> Value:
        n = self.iota_size
        arity = 0
        t = ty
        while isinstance(t, Fun):
            arity, t = arity + 1, t.cod

        def curry(args: tuple, t: Type, k: int) -> Value:
            if k == 0:
                return Individual(op(*(a.index for a in args)) % n)
            return Func(t.dom, t.cod, lambda a: curry(args + (a,), t.cod, k - 1))

        return curry((), ty, arity)

    def pool(self) -> tuple[Construction, ...]:
        if self.eps_pool is None:
            raise UnsupportedEquality(
                "equality over a domain involving eps needs a bounded pool of constructions"
            )
        self.pool_used = True
        return self.eps_pool


# ---------------------------------------------------------------------------
# Domains and equality


def enumerate_domain(ty: Type, m: Model) -> list[Value]:
    if ty == IOTA:
        return [Individual(k) for k in range(m.iota_size)]
    if ty == OMICRON:
        return [Truth(False), Truth(True)]
    if ty == EPSILON:
        return [Constr(c) for c in m.pool()]
    assert isinstance(ty, Fun)
    dom = enumerate_domain(ty.dom, m)
    cod = enumerate_domain(ty.cod, m)
    if len(cod) ** len(dom) > MAX_DOMAIN:
        raise UnsupportedEquality(f"the domain of type {ty} is too large to enumerate")
    keys = [value_key(d, ty.dom, m) for d in dom]
    out: list[Value] = []
    for outs in itertools.product(cod, repeat=len(dom)):
        out.append(_table(ty, dict(zip(keys, outs)), m))
    return out


def _table(ty: Fun, table: dict, m: Model, fallback: Optional[Value] = None) -> Func:
    """A function given by ``table``; keys outside it map to ``fallback`` if set."""
    dom = ty.dom
    if fallback is None:
        return Func(dom, ty.cod, lambda d: table[value_key(d, dom, m)])
    return Func(dom, ty.cod, lambda d: table.get(value_key(d, dom, m), fallback))


def value_key(v: Value, ty: Type, m: Model):
    """A hashable key identifying ``v`` within the enumerable domain of ``ty``."""
    if isinstance(v, Func):
        return tuple(value_key(v(d), ty.cod, m) for d in enumerate_domain(ty.dom, m))
    return v


def values_equal(a: Value, b: Value, ty: Type, m: Model) -> bool:
    if isinstance(ty, BaseType):
        return a == b
    if a is b:
        return True
    for d in enumerate_domain(ty.dom, m):
        if not values_equal(a(d), b(d), ty.cod, m):
            return False
    return True


def _tabulate(v: Value, ty: Type, m: Model) -> Value:
    """Replace a closure by a lookup table when its domain is small and fixed."""
    if not isinstance(ty, Fun) or involves_epsilon(ty):
        return v
    try:
        dom = enumerate_domain(ty.dom, m)
    except UnsupportedEquality:
        return v
    table = {value_key(d, ty.dom, m): _tabulate(v(d), ty.cod, m) for d in dom}
    return _table(ty, table, m)


def random_value(ty: Type, m: Model, rng: random.Random,
                 pool: Optional[list[Construction]] = None) -> Value:
    if ty == IOTA:
        return Individual(rng.randrange(m.iota_size))
    if ty == OMICRON:
        return Truth(rng.random() < 0.5)
    if ty == EPSILON:
        return Constr(rng.choice(pool)) if pool else m.default_value(EPSILON)
    assert isinstance(ty, Fun)
    try:
        dom = enumerate_domain(ty.dom, m)
    except UnsupportedEquality:
        d = random_value(ty.cod, m, rng, pool)
        return Func(ty.dom, ty.cod, lambda _: d)
    table = {value_key(d, ty.dom, m): random_value(ty.cod, m, rng, pool) for d in dom}
    # a pool only samples eps, so keep the function total off the pool
    fallback = m.default_value(ty.cod) if involves_epsilon(ty.dom) else None
    return _table(ty, table, m, fallback)


# ---------------------------------------------------------------------------
# Valuation


def valuate(e: Expr, m: Model, phi: Optional[Assignment] = None) -> Value:
    phi = phi or Assignment()
    try:
        return _val(e, m, phi)
    except RecursionError:
        raise FuelExhausted(f"valuation of {e} recursed too deeply") from None


def _val(e: Expr, m: Model, phi: Assignment) -> Value:
    if isinstance(e, Var):
        return phi.get(e, m)
    if isinstance(e, Const):
        return m.const_value(e)
    if isinstance(e, App):
        return _val(e.fun, m, phi)(_val(e.arg, m, phi))
    if isinstance(e, Abs):
        x, body = e.binder, e.body
        return Func(x.ty, body.ty, lambda d: _val(body, m, phi.update(x, d)))
    if isinstance(e, Quote):
        return Constr(encode(e.body))
    assert isinstance(e, Eval)
    c = _val(e.arg, m, phi).c
    p = classify(c)
    if isinstance(p, Proper) and p.ty == e.target:
        return _val(p.decoded, m, phi)
    return m.default_value(e.target)


# ---------------------------------------------------------------------------
# Validity checking


@dataclass(frozen=True)
class HoldsOnSamples:
    n: int
    approximate: bool = False


@dataclass(frozen=True)
class Fails:
    assignment: Assignment


Verdict = Union[HoldsOnSamples, Fails]

DEFAULT_ATOMS = (QuotedVar(Var("x", IOTA)), QuotedConst(Const("c", OMICRON)))


def eps_pool_for(e: Expr, depth: int = 3, max_atoms: int = 2) -> list[Construction]:
    """Constructions up to ``depth`` over (at most ``max_atoms`` of) the atoms
    quoted in ``e``, followed by every subconstruction of a literal in ``e``."""
    atoms: list[Construction] = []
    targeted: list[Construction] = []
    for p in positions(e):
        c = literal_value(subterm(e, p))
        if c is not None:
            targeted.extend(subconstructions(c))
            atoms.extend(quoted_atoms(c))
    atoms = list(dict.fromkeys(atoms))[:max_atoms] or list(DEFAULT_ATOMS)
    pool = enumerate_constructions(atoms, depth)
    return list(dict.fromkeys(pool + targeted))


def assignments(vs: list[Var], m: Model, pool: list[Construction], rng: random.Random,
                samples: int) -> tuple[list[Assignment], bool]:
    """All assignments to ``vs`` when that is finite and small, otherwise a
    random sample.  The flag says whether the list is exhaustive."""
    try:
        doms = [enumerate_domain(v.ty, m) if not involves_epsilon(v.ty) else None for v in vs]
    except UnsupportedEquality:
        doms = [None]
    if all(d is not None for d in doms):
        total = 1
        for d in doms:
            total *= len(d)
        if total <= max(samples, 1):
            return [Assignment(dict(zip(vs, combo))) for combo in itertools.product(*doms)], True
    out = []
    for _ in range(samples):
        out.append(Assignment({v: random_value(v.ty, m, rng, pool) for v in vs}))
    return out, False


def check_valid(f: Expr, m: Model, depth: int = 3, samples: int = 200, seed: int = 0) -> Verdict:
    if f.ty != OMICRON:
        raise TypeError(f"{f} is not a formula")
    pool = eps_pool_for(f, depth)
    mp = m.with_pool(pool)
    vs = sorted(free_vars(f), key=lambda v: (v.name, str(v.ty)))
    phis, exhaustive = assignments(vs, mp, pool, random.Random(seed), samples)
    for phi in phis:
        if valuate(f, mp, phi) != Truth(True):
            return Fails(phi)
    approximate = mp.pool_used or not exhaustive
    return HoldsOnSamples(len(phis), approximate)
