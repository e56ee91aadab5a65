import pytest
from hypothesis import given

from arrowkit.arrow import (
    arrow_from_function,
    heyting_arrow,
    is_binary_implicative,
    is_compatible_with_joins,
    is_implicative_meet_law,
    meet_inequality_holds,
    validate_arrow,
)
from arrowkit.constructions import downset_algebra
from arrowkit.corpus import b2, c3, diamond, m3
from arrowkit.errors import NotHeyting, VarianceViolation
from arrowkit.pca import enumerate_applicative_posets
from arrowkit.lattice import chain
from oracles import Oracle, chain_leq, heyting_table
from strategies import arrow_structures


def test_heyting_on_c3_is_one_if_below_else_target():
    s = heyting_arrow(c3())
    for a in s.elements:
        for b in s.elements:
            assert s.imp(a, b) == (2 if a <= b else b)
    # spot values: half -> bot = bot, bot -> x = top, half -> half = top
    assert s.imp(1, 0) == 0 and s.imp(0, 1) == 2 and s.imp(1, 1) == 2


def test_heyting_on_b2_is_classical():
    s = heyting_arrow(b2())
    assert s.arr == ((1, 1), (0, 1))


def test_heyting_matches_brute_force_on_small_distributive_lattices():
    for lat in (b2(), c3(), diamond(), chain(5)):
        assert [list(r) for r in heyting_arrow(lat).arr] == heyting_table(lat.leq)


def test_m3_is_not_heyting():
    with pytest.raises(NotHeyting):
        heyting_arrow(m3())


def test_constant_zero_arrow_is_valid():
    s = validate_arrow(b2(), [[0, 0], [0, 0]])
    assert s.values == (0,)


def test_projection_arrow_violates_variance():
    with pytest.raises(VarianceViolation):
        arrow_from_function(b2(), lambda a, b: a)


def test_out_of_range_table_rejected():
    with pytest.raises(VarianceViolation):
        validate_arrow(b2(), [[0, 2], [0, 0]])


def test_locales_satisfy_all_three_laws():
    for lat in (b2(), c3(), diamond()):
        s = heyting_arrow(lat)
        assert is_compatible_with_joins(s)
        assert is_binary_implicative(s)
        assert is_implicative_meet_law(s)


def test_downset_structures_are_joins_compatible_and_binary_implicative():
    for P in enumerate_applicative_posets(2):
        s = downset_algebra(P).structure
        assert is_compatible_with_joins(s)
        assert is_binary_implicative(s)


def test_empty_join_case_is_reported():
    # bot -> a must be top for joins-compatibility; here bot -> bot = bot
    s = validate_arrow(c3(), [[0, 2, 2], [0, 2, 2], [0, 1, 2]])
    chk = is_compatible_with_joins(s)
    assert not chk and chk.witness == (0, ())


def test_join_arrow_on_b2_is_not_an_arrow():
    # the join is monotone on the left, so it is rejected before any law check
    with pytest.raises(VarianceViolation):
        arrow_from_function(b2(), lambda a, b: max(a, b))


def test_arrow_failing_binary_meets_on_the_diamond():
    lat = diamond()
    s = arrow_from_function(lat, lambda a, b: lat.bot if b == lat.bot else lat.top)
    chk = is_binary_implicative(s)
    assert not chk
    a, b, b2_ = chk.witness
    assert lat.meet2[b][b2_] == lat.bot and lat.bot not in (b, b2_)


def test_arrows_on_chains_are_always_binary_implicative():
    # right monotonicity already forces x -> min(b, b') = min(x -> b, x -> b')
    assert is_binary_implicative(validate_arrow(c3(), [[2, 2, 2], [0, 1, 2], [0, 0, 1]]))


def test_meet_law_fails_on_empty_meet_when_top_not_fixed():
    s = validate_arrow(b2(), [[0, 0], [0, 0]])
    chk = is_implicative_meet_law(s)
    assert not chk and chk.witness[1] == ()


@given(arrow_structures())
def test_meet_inequality_always_holds(s):
    assert meet_inequality_holds(s)


@given(arrow_structures())
def test_meet_law_implies_binary_implicative(s):
    if is_implicative_meet_law(s):
        assert is_binary_implicative(s)


@given(arrow_structures())
def test_variance_holds_by_brute_force(s):
    o = Oracle.of(s)
    for a in s.elements:
        for a2 in s.elements:
            for b in s.elements:
                for b2 in s.elements:
                    if o.le(a2, a) and o.le(b, b2):
                        assert o.le(o.imp(a, b), o.imp(a2, b2))


def test_chain_oracle_agrees_with_heyting():
    assert heyting_table(chain_leq(3)) == [[2, 2, 2], [0, 2, 2], [0, 1, 2]]
