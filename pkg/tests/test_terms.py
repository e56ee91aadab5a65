import pytest
from hypothesis import given
from hypothesis import strategies as st

from arrowkit.arrow import heyting_arrow, validate_arrow
from arrowkit.corpus import b2, c3, closed_terms, corpus
from arrowkit.errors import UnboundVariable
from arrowkit.separator import combinator_ugly
from arrowkit.suite import small_terms
from arrowkit.terms import (
    App,
    Atom,
    Const,
    Lam,
    Var,
    abstract,
    app,
    application_table,
    apply,
    bracket,
    free_vars,
    interpret_comb,
    interpret_lambda,
    is_combinatory,
    lam,
    partial,
    translate,
)
from oracles import Oracle
from strategies import arrow_structures

BOT, HALF, TOP = 0, 1, 2
I_, K_, S_, ETA = (Atom(n) for n in ("i'", "k'", "s'", "eta"))
x, y = Var("x"), Var("y")


def oracle_lambda(o, t, env):
    if isinstance(t, Var):
        return env[t.name]
    if isinstance(t, Const):
        return t.value
    if isinstance(t, App):
        return o.app(oracle_lambda(o, t.fn, env), oracle_lambda(o, t.arg, env))
    return o.abstract(lambda a: oracle_lambda(o, t.body, {**env, t.var: a}))


def test_application_spot_values():
    s = heyting_arrow(c3())
    assert apply(s, TOP, HALF) == HALF
    b = heyting_arrow(b2())
    assert apply(b, 1, 1) == 1


def test_partial_spot_values():
    assert partial(heyting_arrow(c3()), HALF) == HALF
    z = validate_arrow(b2(), [[0, 0], [0, 0]])
    assert [partial(z, a) for a in z.elements] == [0, 0]


def test_abstraction_spot_values():
    s = heyting_arrow(c3())
    assert abstract(s, lambda a: a) == TOP
    o = Oracle.of(s)
    assert abstract(s, lambda a: TOP) == o.glb(s.imp(a, partial(s, TOP)) for a in s.elements)


def test_lambda_interpretation_examples():
    s = heyting_arrow(c3())
    assert interpret_lambda(s, x, {"x": HALF}) == HALF
    assert interpret_lambda(s, lam("x", x)) == TOP
    b = heyting_arrow(b2())
    k = interpret_lambda(b, lam("x y", x))
    o = Oracle.of(b)
    assert k == o.abstract(lambda a: o.abstract(lambda c: a))
    assert k == 1


def test_combinatory_interpretation_examples():
    s = heyting_arrow(c3())
    assert interpret_comb(s, I_) == TOP
    kp = combinator_ugly(s).k_prime
    for a in s.elements:
        assert interpret_comb(s, App(K_, x), {"x": a}) == apply(s, kp, a)


def test_unbound_variable():
    with pytest.raises(UnboundVariable):
        interpret_lambda(heyting_arrow(c3()), App(x, y), {"x": 0})
    with pytest.raises(TypeError):
        interpret_comb(heyting_arrow(c3()), lam("x", x))


def test_bracket_clauses():
    assert bracket("x", x) == I_
    assert bracket("x", y) == App(K_, y)
    assert bracket("x", App(x, x)) == app(S_, I_, I_)


def test_translation_clauses():
    assert translate(x) == x
    assert translate(lam("x", x)) == App(ETA, I_)
    expect = App(ETA, app(S_, App(K_, ETA), app(S_, App(K_, K_), I_)))
    assert translate(lam("x y", x)) == expect


def test_translation_is_combinatory_and_keeps_free_variables():
    for t in small_terms(5):
        c = translate(t)
        assert is_combinatory(c)
        assert free_vars(c) == free_vars(t)


def _count(size, scope):
    if size == 1:
        return scope
    apps = sum(_count(k, scope) * _count(size - 1 - k, scope) for k in range(1, size - 1))
    return _count(size - 1, scope + 1) + apps


def test_small_terms_count():
    terms = small_terms(5)
    assert len(terms) == len(set(map(repr, terms))) == sum(_count(k, 2) for k in range(1, 6)) == 126


def test_application_table_matches_oracle_on_corpus():
    for e in corpus():
        o = Oracle.of(e.algebra)
        tab = application_table(e.algebra.structure)
        assert all(tab[a][b] == o.app(a, b) for a in o.els for b in o.els), e.name


@given(arrow_structures())
def test_application_table_matches_oracle(s):
    o = Oracle.of(s)
    tab = application_table(s)
    for a in s.elements:
        for b in s.elements:
            assert tab[a][b] == o.app(a, b)


@given(arrow_structures())
def test_application_is_monotone_and_betas(s):
    tab = application_table(s)
    le = s.lattice.leq
    for a in s.elements:
        for a2 in s.elements:
            for b in s.elements:
                for b2 in s.elements:
                    if le[a][a2] and le[b][b2]:
                        assert le[tab[a][b]][tab[a2][b2]]
    for a in s.elements:
        for b in s.elements:
            for c in s.elements:
                # (a -> b -> c) a <= b -> c
                assert le[tab[s.imp(a, s.imp(b, c))][a]][s.imp(b, c)]


@given(arrow_structures(), st.data())
def test_abstraction_laws(s, data):
    els = list(s.elements)
    f = data.draw(st.lists(st.sampled_from(els), min_size=len(els), max_size=len(els)))
    g = [s.lattice.join2[v][w] for v, w in zip(f, data.draw(st.lists(st.sampled_from(els), min_size=len(els), max_size=len(els))))]
    le = s.lattice.leq
    lf, lg = abstract(s, tuple(f)), abstract(s, tuple(g))
    assert le[lf][lg]  # f <= g pointwise
    tab = application_table(s)
    for a in els:
        assert le[tab[lf][a]][partial(s, f[a])]


def test_lambda_interpretation_matches_oracle_on_small_corpus_members():
    terms = list(closed_terms().values()) + [t for t in small_terms(4)]
    for e in corpus()[:5] + corpus()[-4:-2]:
        s = e.algebra.structure
        o = Oracle.of(s)
        for t in terms:
            fv = sorted(free_vars(t))
            envs = [dict(zip(fv, (a, b))) for a in o.els for b in o.els] if fv else [{}]
            for env in envs[:9]:
                env = {k: v for k, v in env.items() if k in fv}
                assert interpret_lambda(s, t, env) == oracle_lambda(o, t, env)


def test_constants_evaluate_to_their_element():
    s = heyting_arrow(c3())
    assert interpret_lambda(s, App(lam("x", x), Const(HALF))) == apply(s, TOP, HALF)


def test_translation_below_and_in_separator_on_corpus():
    for e in corpus():
        alg = e.algebra
        s = alg.structure
        for name, t in closed_terms().items():
            v = interpret_lambda(s, t)
            c = interpret_comb(s, translate(t))
            assert alg.lattice.leq[c][v], (e.name, name)
            assert v in alg.sep and c in alg.sep, (e.name, name)


def test_lam_and_app_helpers():
    assert lam("x y", x) == Lam("x", Lam("y", x))
    assert app(x, y, x) == App(App(x, y), x)
