import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arrowkit.arrow import heyting_arrow, validate_arrow
from arrowkit.corpus import PEIRCE, TAUTOLOGIES, b2, c3, corpus, diamond, locale
from arrowkit.errors import MissingCombinator, NotMPClosed, NotUpwardClosed, PreconditionFailed
from arrowkit.separator import (
    combinator_a,
    combinator_a_prime,
    combinator_k,
    combinator_report,
    combinator_s,
    combinator_ugly,
    generate_separator,
    is_separator,
    limited_mp,
    parse_formula,
    tautology_meet,
    validate_separator,
)
from oracles import Oracle
from strategies import arrow_structures

BOT, HALF, TOP = 0, 1, 2


@pytest.fixture(scope="module")
def c3h():
    return heyting_arrow(c3())


def test_locale_combinators_are_top(c3h):
    r = combinator_report(c3h)
    assert r.k == r.s == r.a == r.i == r.b == TOP
    assert r.i_prime == TOP
    assert combinator_ugly(heyting_arrow(b2())).eta == 1


def test_constant_zero_arrow_combinators_are_bottom():
    s = validate_arrow(b2(), [[0, 0], [0, 0]])
    assert combinator_k(s) == 0
    assert combinator_a(s) == 0
    assert combinator_ugly(s).i_prime == 0


def test_constant_top_arrow_gives_top_a_prime():
    s = validate_arrow(c3(), [[TOP] * 3] * 3)
    assert combinator_a_prime(s) == TOP


def test_combinators_match_oracle_on_whole_corpus():
    for e in corpus():
        o = Oracle.of(e.algebra)
        expect = dict(
            k=o.k(), s=o.s(), a=o.a(), i=o.i(), b=o.b(), a_prime=o.a_prime(),
            i_prime=o.i_prime(), k_prime=o.k_prime(), s_prime=o.s_prime(), eta=o.eta(),
        )
        assert combinator_report(e.algebra).values() == expect, e.name


@given(arrow_structures())
def test_combinators_match_oracle_on_random_arrows(s):
    o = Oracle.of(s)
    r = combinator_report(s)
    assert (r.k, r.s, r.a, r.i, r.b, r.a_prime) == (o.k(), o.s(), o.a(), o.i(), o.b(), o.a_prime())
    assert (r.i_prime, r.k_prime, r.s_prime, r.eta) == (o.i_prime(), o.k_prime(), o.s_prime(), o.eta())


def test_canonical_and_filter_separators_on_c3(c3h):
    assert validate_separator(c3h, {TOP}).sep == {TOP}
    assert validate_separator(c3h, {HALF, TOP}).sep == {HALF, TOP}
    with pytest.raises(NotUpwardClosed) as info:
        validate_separator(c3h, {HALF})
    assert info.value.witness["pair"] == (HALF, TOP)


def test_mp_failure_and_missing_combinator():
    # the empty set misses the combinators
    s = heyting_arrow(b2())
    with pytest.raises(MissingCombinator):
        validate_separator(s, set())
    # top -> half = top puts the arrow in S while half stays out
    t = validate_arrow(c3(), [[TOP, TOP, TOP], [TOP, TOP, TOP], [HALF, TOP, TOP]])
    with pytest.raises(NotMPClosed):
        validate_separator(t, {TOP})


def test_generate_separator_examples(c3h):
    assert generate_separator(c3h).sep == {TOP}
    g = generate_separator(c3h, {HALF})
    assert g.sep == {HALF, TOP} and g.proper
    g = generate_separator(c3h, {BOT})
    assert g.sep == {BOT, HALF, TOP} and not g.proper


@given(arrow_structures(), st.data())
def test_generated_separator_is_the_least_one(s, data):
    seed = data.draw(st.frozensets(st.sampled_from(list(s.elements)), max_size=2))
    o = Oracle.of(s)
    gen = generate_separator(s, seed).sep
    assert gen == o.least_separator(seed)
    assert is_separator(s, gen)


def test_separators_of_locales_are_filters():
    lat = diamond()
    s = heyting_arrow(lat)
    o = Oracle.of(s)
    for xs in o.subsets(s.elements):
        xs = set(xs)
        filt = (
            lat.top in xs
            and all(b in xs for a in xs for b in s.elements if lat.le(a, b))
            and all(lat.meet2[a][b] in xs for a in xs for b in xs)
        )
        assert is_separator(s, xs) == filt == o.is_separator(xs)


def test_tautology_k_shape_and_peirce_on_c3(c3h):
    alg = validate_separator(c3h, {TOP})
    r = tautology_meet(alg, "p -> (q -> p)")
    assert r.meet == TOP and r.member
    p = tautology_meet(alg, PEIRCE)
    assert p.meet == HALF and not p.member
    # the valuation p = half, q = bot realises the meet
    assert c3h.imp(c3h.imp(c3h.imp(HALF, BOT), HALF), HALF) == HALF


def test_bare_variable_meet_is_bottom():
    for e in corpus()[:5]:
        r = tautology_meet(e.algebra, "p")
        assert r.meet == e.algebra.bot
        assert r.member == (e.algebra.bot in e.algebra.sep)


def test_tautology_meets_match_brute_force():
    for e in corpus()[::7]:
        o = Oracle.of(e.algebra)
        for _, f in TAUTOLOGIES[:6]:
            vars_ = sorted(set(c for c in f if c.isalpha()))
            got = tautology_meet(e.algebra, f).meet
            vals = [_eval(o, parse_formula(f), dict(zip(vars_, v))) for v in itertools.product(o.els, repeat=len(vars_))]
            assert got == o.glb(vals)


def _eval(o, f, val):
    if hasattr(f, "name"):
        return val[f.name]
    return o.imp(_eval(o, f.left, val), _eval(o, f.right, val))


def test_formula_parser_is_right_associative():
    f = parse_formula("p -> q -> r")
    g = parse_formula("p -> (q -> r)")
    assert f == g
    assert parse_formula("p → q") == parse_formula("p -> q")


def test_limited_mp(c3h):
    alg = validate_separator(c3h, {TOP})
    assert limited_mp(alg, [TOP], [TOP], [TOP])
    with pytest.raises(PreconditionFailed):
        limited_mp(alg, [TOP], [TOP, TOP], [TOP])
    with pytest.raises(PreconditionFailed):
        limited_mp(alg, [HALF], [TOP], [TOP])


def test_limited_mp_exhaustive_on_locales():
    for alg in (locale(c3(), ["top"]), locale(diamond(), ["a", "top"])):
        lat, arr = alg.lattice, alg.arr
        for k in (1, 2):
            for xs in itertools.product(alg.elements, repeat=k):
                if lat.meet_set(xs) not in alg.sep:
                    continue
                for ys in itertools.product(alg.elements, repeat=k):
                    for zs in itertools.product(alg.elements, repeat=k):
                        if lat.meet_set(arr[x][arr[y][z]] for x, y, z in zip(xs, ys, zs)) in alg.sep:
                            assert limited_mp(alg, xs, ys, zs)


def test_combinator_s_on_c3(c3h):
    assert combinator_s(c3h) == TOP
