import pytest
from hypothesis import given
from hypothesis import strategies as st

from arrowkit.arrow import heyting_arrow, is_compatible_with_joins
from arrowkit.constructions import per_algebra, sierpinski
from arrowkit.corpus import c3, corpus, locale, locales
from arrowkit.errors import ClauseFailed, ValidationFailed
from arrowkit.heyting import equivalent, times
from arrowkit.nucleus import (
    check_nucleus_lemmas,
    dom_map,
    nucleus_closed,
    nucleus_disjunction,
    nucleus_dneg,
    nucleus_dom,
    nucleus_identity,
    nucleus_open,
    nucleus_partial,
    nucleus_product,
    subalgebra,
    validate_nucleus,
)
from arrowkit.pca import validate_applicative_poset
from arrowkit.separator import generate_separator
from arrowkit.suite import stock_nuclei
from arrowkit.terms import partial_table
from oracles import Oracle
from strategies import arrow_structures

BOT, HALF, TOP = 0, 1, 2


@pytest.fixture(scope="module")
def c3top():
    return locale(c3(), ["top"])


def test_identity_and_constant_top_validate_everywhere():
    for e in corpus():
        alg = e.algebra
        assert nucleus_identity(alg).map == tuple(alg.elements)
        validate_nucleus(alg, lambda a: alg.top)


def test_non_monotone_map_fails_first_clause(c3top):
    with pytest.raises(ClauseFailed) as info:
        validate_nucleus(c3top, [TOP, BOT, TOP])
    assert info.value.clause == 1


def test_dneg_bottom_on_c3(c3top):
    assert nucleus_dneg(c3top, BOT).map == (BOT, TOP, TOP)


def test_open_top_is_partial_on_locales():
    for e in locales():
        alg = e.algebra
        assert nucleus_open(alg, alg.top).map == partial_table(alg.structure) == nucleus_partial(alg).map


def test_stock_families_validate_on_corpus():
    for e in corpus():
        alg = e.algebra
        for c in alg.elements:
            nucleus_closed(alg, c)
            nucleus_open(alg, c)
            nucleus_dneg(alg, c)
            nucleus_disjunction(alg, c)


def test_disjunction_units(c3top):
    for e in corpus():
        alg = e.algebra
        bot = nucleus_disjunction(alg, alg.bot)
        top = nucleus_disjunction(alg, alg.top)
        for x in alg.elements:
            assert equivalent(alg, bot.map[x], x)
            assert equivalent(alg, top.map[x], alg.top)
    o = Oracle.of(c3top)
    j = nucleus_disjunction(c3top, HALF)
    assert j.map[BOT] == o.plus(BOT, HALF) == HALF
    assert j.map == (HALF, HALF, TOP)


def test_products(c3top):
    for e in corpus()[:20]:
        alg = e.algebra
        ident = nucleus_identity(alg)
        top = validate_nucleus(alg, lambda a: alg.top)
        ii = nucleus_product(ident, ident)
        it = nucleus_product(ident, top)
        for x in alg.elements:
            assert equivalent(alg, ii.map[x], x)
            assert equivalent(alg, it.map[x], x)
    d, op = nucleus_dneg(c3top, BOT), nucleus_open(c3top, TOP)
    p = nucleus_product(d, op)
    assert p.map == tuple(times(c3top, d.map[x], op.map[x]) for x in c3top.elements) == (BOT, HALF, TOP)


def _per_sierpinski():
    P = validate_applicative_poset(["p", "q"], [[1, 0], [0, 1]], [[0, 0], [0, 0]], [0, 1])
    return sierpinski(per_algebra(P).algebra, require_joins=False)


def test_dom_nucleus_on_per_sierpinski_algebra():
    sa = _per_sierpinski()
    lat = sa.lattice
    J = dom_map(sa)
    for i, (r, s) in enumerate(lat.payload):
        if r == s or not r:
            assert J[i] == i
    j = nucleus_dom(sa)
    assert all(j.certificate)
    assert j.idempotent


def test_dom_rejects_non_per_carrier(c3top):
    with pytest.raises(ValidationFailed):
        dom_map(c3top)


def test_subalgebra_of_identity_is_the_algebra(c3top):
    sub = subalgebra(nucleus_identity(c3top))
    assert sub.arr == c3top.arr and sub.sep == c3top.sep


def test_subalgebra_of_dneg_on_c3(c3top):
    sub = subalgebra(nucleus_dneg(c3top, BOT))
    assert sub.arr[HALF][BOT] == BOT
    assert sub.sep == {HALF, TOP}


def test_subalgebras_preserve_joins_compatibility():
    for e in corpus():
        alg = e.algebra
        if not is_compatible_with_joins(alg.structure):
            continue
        for name, j in stock_nuclei(alg):
            assert is_compatible_with_joins(subalgebra(j).structure), (e.name, name)


def test_nucleus_lemmas_on_corpus():
    for e in corpus():
        for name, j in stock_nuclei(e.algebra):
            rep = check_nucleus_lemmas(j)
            assert rep.ok, (e.name, name, rep.failures)


def test_partial_is_a_nucleus_on_corpus():
    for e in corpus():
        assert all(nucleus_partial(e.algebra).certificate)


@given(arrow_structures(), st.data())
def test_validated_maps_satisfy_clauses_by_brute_force(s, data):
    alg = generate_separator(s)
    o = Oracle.of(alg)
    els = list(alg.elements)
    j = data.draw(st.lists(st.sampled_from(els), min_size=len(els), max_size=len(els)))
    mono = all(o.le(j[a], j[b]) for a in els for b in els if o.le(a, b))
    infl = o.glb(o.imp(a, j[a]) for a in els) in alg.sep
    strong = o.glb(o.imp(o.imp(a, j[b]), o.imp(j[a], j[b])) for a in els for b in els) in alg.sep
    try:
        validate_nucleus(alg, j)
        accepted = True
    except ClauseFailed:
        accepted = False
    assert accepted == (mono and infl and strong)


def test_heyting_dneg_closed_values(c3top):
    assert nucleus_closed(c3top, BOT).map == (BOT, TOP, TOP)
    assert nucleus_open(c3top, HALF).map == (BOT, TOP, TOP)
    assert heyting_arrow(c3()).arr[HALF][BOT] == BOT
