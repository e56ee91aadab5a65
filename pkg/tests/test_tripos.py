import itertools

import pytest

from arrowkit.arrow import is_compatible_with_joins
from arrowkit.corpus import c3, corpus, locale, locales
from arrowkit.errors import IndexMismatch
from arrowkit.nucleus import nucleus_dneg, nucleus_identity
from arrowkit.separator import ArrowAlgebra
from arrowkit.heyting import entails
from arrowkit.tripos import (
    IndexMap,
    Pred,
    all_maps,
    all_preds,
    check_adjunctions,
    check_beck_chevalley,
    check_evidenced_frame,
    check_fast_exists,
    check_functoriality,
    check_separator_inclusion,
    compose,
    evidenced_frame,
    exists_along,
    fiber_entails,
    fiber_equivalent,
    forall_along,
    generic_element_check,
    identity_map,
    labels,
    pullback,
    reindex,
    subtripos_Pj,
    subtripos_Pj_restricted,
)
from oracles import Oracle

BOT, HALF, TOP = 0, 1, 2
TWO = ("1", "2")
STAR = ("*",)


@pytest.fixture(scope="module")
def c3top():
    return locale(c3(), ["top"])


def collapse():
    return IndexMap(TWO, STAR, (0, 0))


def test_fiber_entailment_examples(c3top):
    assert fiber_entails(c3top, Pred((), ()), Pred((), ()))
    for a in c3top.elements:
        for b in c3top.elements:
            assert fiber_entails(c3top, Pred(STAR, (a,)), Pred(STAR, (b,))) == entails(c3top, a, b)
    alpha, beta = Pred(TWO, (HALF, TOP)), Pred(TWO, (TOP, TOP))
    assert fiber_entails(c3top, alpha, beta)
    assert not fiber_entails(c3top, beta, alpha)
    with pytest.raises(IndexMismatch):
        fiber_entails(c3top, alpha, Pred(STAR, (TOP,)))


def test_reindexing_examples(c3top):
    beta = Pred(TWO, (HALF, TOP))
    assert reindex(identity_map(TWO), beta) == beta
    const = IndexMap(TWO, TWO, (1, 1))
    assert reindex(const, beta).values == (TOP, TOP)
    swap = IndexMap(TWO, TWO, (1, 0))
    assert reindex(swap, beta).values == (TOP, HALF)


def test_functoriality(c3top):
    for f in all_maps(2, 2):
        for table in itertools.product(range(2), repeat=2):
            g = IndexMap(f.target, ("k0", "k1"), table)
            assert check_functoriality(c3top, f, g)
    assert compose(identity_map(TWO), collapse()) == collapse()


def test_index_map_from_dict():
    f = IndexMap.from_dict(["a", "b"], ["x"], {"a": "x", "b": "x"})
    assert f.table == (0, 0)
    with pytest.raises(IndexMismatch):
        IndexMap.from_dict(["a"], ["x"], {})
    with pytest.raises(IndexMismatch):
        IndexMap(("a",), ("x",), (3,))


def test_forall_examples(c3top):
    assert forall_along(c3top, collapse(), Pred(TWO, (HALF, TOP))).values == (HALF,)
    f = IndexMap(("1",), ("x", "y"), (0,))
    assert forall_along(c3top, f, Pred(("1",), (BOT,))).values == (BOT, TOP)
    for e in corpus():
        alg = e.algebra
        for vals in itertools.product(alg.elements, repeat=2):
            a = Pred(TWO, vals)
            fa = forall_along(alg, identity_map(TWO), a)
            assert fiber_equivalent(alg, fa, a)


def test_exists_examples(c3top):
    assert exists_along(c3top, collapse(), Pred(TWO, (BOT, HALF)), fast=True).values == (HALF,)
    empty = IndexMap((), STAR, ())
    for e in locales():
        alg = e.algebra
        got = exists_along(alg, empty, Pred((), ()))
        assert fiber_equivalent(alg, got, Pred(STAR, (alg.bot,)))
    for e in corpus():
        alg = e.algebra
        for vals in itertools.product(alg.elements, repeat=2):
            a = Pred(TWO, vals)
            assert fiber_equivalent(alg, exists_along(alg, identity_map(TWO), a), a)


def test_quantifiers_match_oracle(c3top):
    for e in corpus()[::9]:
        alg = e.algebra
        o = Oracle.of(alg)
        for f in all_maps(3, 2):
            for vals in itertools.product(alg.elements, repeat=3):
                a = Pred(f.source, vals)
                fa = forall_along(alg, f, a).values
                ea = exists_along(alg, f, a).values
                for j in range(2):
                    vs = [vals[i] for i in range(3) if f.table[i] == j]
                    assert fa[j] == o.glb(o.partial(v) for v in vs)
                    lhs = [o.imp(o.glb(o.imp(v, o.partial(c)) for v in vs), o.partial(o.partial(c))) for c in o.els]
                    assert ea[j] == o.glb(lhs)


def test_adjunctions_small_examples(c3top):
    assert check_adjunctions(c3top, identity_map(TWO)).ok
    assert check_adjunctions(c3top, collapse()).ok
    for e in corpus():
        r = check_adjunctions(e.algebra, IndexMap(TWO, TWO, (0, 0)))
        assert r.ok and r.exhaustive


def test_adjunctions_by_definition_on_c3(c3top):
    f = collapse()
    for vals in itertools.product(c3top.elements, repeat=2):
        a = Pred(TWO, vals)
        fa, ea = forall_along(c3top, f, a), exists_along(c3top, f, a)
        for b in all_preds(c3top, STAR):
            assert fiber_entails(c3top, reindex(f, b), a) == fiber_entails(c3top, b, fa)
            assert fiber_entails(c3top, a, reindex(f, b)) == fiber_entails(c3top, ea, b)


def test_beck_chevalley_examples(c3top):
    ident = identity_map(TWO)
    assert check_beck_chevalley(c3top, ident, ident).ok
    const = IndexMap(TWO, TWO, (0, 0))
    assert check_beck_chevalley(c3top, ident, const).ok
    g = collapse()
    assert check_beck_chevalley(c3top, g, g).ok


def test_pullback_shape():
    g1 = IndexMap(("a", "b", "c"), ("x", "y"), (0, 0, 1))
    g2 = IndexMap(("u", "v"), ("x", "y"), (1, 0))
    p1, p2 = pullback(g1, g2)
    assert len(p1.source) == 3
    for k in range(3):
        assert g1.table[p1.table[k]] == g2.table[p2.table[k]]


def test_beck_chevalley_sampling_above_threshold(monkeypatch, c3top):
    monkeypatch.setenv("ARROWKIT_CAPS", "pair_threshold=5,sample_pairs=50")
    g = IndexMap(TWO, STAR, (0, 0))
    r = check_beck_chevalley(c3top, g, g)
    assert r.ok and not r.exhaustive and r.pairs == 50


def test_fast_exists_on_joins_compatible_corpus():
    for e in corpus():
        if not is_compatible_with_joins(e.algebra.structure):
            continue
        for f in all_maps(3, 1):
            assert check_fast_exists(e.algebra, f).ok, e.name


def test_generic_element(c3top):
    assert generic_element_check(c3top, 2).ok
    # the identity predicate over the carrier is classified by the identity map
    carrier = tuple(c3top.lattice.names)
    gen = Pred(carrier, tuple(c3top.elements))
    assert reindex(IndexMap(carrier, carrier, tuple(c3top.elements)), gen) == gen


def test_separator_inclusion_on_corpus():
    for e in corpus():
        assert check_separator_inclusion(e.algebra, 2).ok


def test_separator_inclusion_detects_non_filter():
    alg = ArrowAlgebra(locale(c3(), ["top"]).structure, frozenset({BOT}))
    assert not check_separator_inclusion(alg, 2).ok


def test_pj_examples(c3top):
    ident = subtripos_Pj(nucleus_identity(c3top))
    for a in all_preds(c3top, STAR):
        for b in all_preds(c3top, STAR):
            assert ident.entails(a, b) == fiber_entails(c3top, a, b)
    pj = subtripos_Pj(nucleus_dneg(c3top, BOT))
    assert not pj.entails(Pred(STAR, (HALF,)), Pred(STAR, (BOT,)))
    assert pj.check(2).ok


def test_restricted_fibers_of_dneg(c3top):
    r = subtripos_Pj_restricted(nucleus_dneg(c3top, BOT))
    assert [p.values for p in r.members(STAR)] == [(BOT,), (TOP,)]
    assert subtripos_Pj_restricted(nucleus_identity(c3top)).members(STAR) == list(all_preds(c3top, STAR))
    assert r.check(2).ok


def test_evidenced_frame_on_c3(c3top):
    frame = evidenced_frame(c3top)
    ev = frame.evidence()
    assert set(ev) == {"e_id", "m", "e_top", "e_fst", "e_snd", "e_eval"}
    assert all(c3top.lattice.index(v) in c3top.sep for v in ev.values())
    o = Oracle.of(c3top)
    assert frame.e_id == o.i_prime()
    for a in c3top.elements:
        assert frame.relates(a, frame.e_id, a)
        assert frame.relates(a, frame.e_top, TOP)
    assert check_evidenced_frame(frame, 2).ok


def test_evidenced_frame_on_corpus():
    for e in corpus():
        rep = check_evidenced_frame(evidenced_frame(e.algebra), 2)
        assert rep.ok, (e.name, rep.failures)


def test_labels():
    assert labels(3) == ("i0", "i1", "i2")
