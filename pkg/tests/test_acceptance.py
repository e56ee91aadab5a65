"""One test per acceptance criterion.

Each test runs its whole check, prints a single PASS/FAIL line with the
elapsed time, and then asserts both the outcome and the runtime budget.
"""

import time
from contextlib import contextmanager

import pytest

from arrowkit.arrow import is_binary_implicative, is_compatible_with_joins, validate_arrow
from arrowkit.cli import cmd_check
from arrowkit.constructions import downset_algebra, modification, per_algebra, sierpinski
from arrowkit.corpus import PEIRCE, TAUTOLOGIES, closed_terms, corpus, locales
from arrowkit.heyting import check_preheyting, entails, equivalent, times
from arrowkit.heyting import plus as hplus
from arrowkit.laws import LawReport
from arrowkit.nucleus import (
    nucleus_closed,
    nucleus_disjunction,
    nucleus_dneg,
    nucleus_open,
    validate_nucleus,
)
from arrowkit.pca import Reduction, beta_reduces, completeness_sample, enumerate_applicative_posets
from arrowkit.separator import combinator_report, tautology_meet, validate_separator
from arrowkit.suite import full_suite, nucleus_laws, stock_nuclei, term_laws, tripos_laws
from arrowkit.terms import App, Lam, Var, interpret_comb, interpret_lambda, translate
from arrowkit.tripos import all_maps, check_evidenced_frame, check_fast_exists, evidenced_frame
from oracles import Oracle


@pytest.fixture(scope="module")
def algebras():
    return [(e.name, e.algebra) for e in corpus()]


@contextmanager
def criterion(capsys, number, title, budget):
    """Print one PASS/FAIL line for the block and enforce its runtime budget."""
    t0 = time.perf_counter()
    failure = None
    try:
        yield
    except AssertionError as exc:
        failure = exc
    elapsed = time.perf_counter() - t0
    in_time = elapsed < budget
    status = "PASS" if failure is None and in_time else "FAIL"
    note = "" if in_time else f" (budget {budget:g}s exceeded)"
    with capsys.disabled():
        print(f"\n[acceptance {number:2d}] {status} {title}: {elapsed:.2f}s{note}")
    if failure is not None:
        raise failure
    assert in_time, f"criterion {number} took {elapsed:.1f}s, budget {budget}s"


def first_failure(report: LawReport):
    return report.failures[:1]


def test_01_separator_axioms_and_combinators(capsys, algebras):
    with criterion(capsys, 1, "separator axioms and combinators on the corpus", 30):
        required = ("k", "s", "a", "i", "b", "i_prime", "k_prime", "s_prime", "eta")
        for name, alg in algebras:
            validate_separator(alg.structure, alg.sep)
            cr = combinator_report(alg)
            o = Oracle.of(alg)
            expect = {n: getattr(o, n)() for n in cr.NAMES}
            assert cr.values() == expect, name
            missing = [n for n in required if not cr.in_separator[n]]
            assert not missing, (name, missing)


def test_02_tautologies_and_peirce(capsys, algebras):
    with criterion(capsys, 2, "tautology meets in S, Peirce excluded on C3/top", 10):
        assert len(TAUTOLOGIES) == 20
        for name, alg in algebras:
            for label, formula in TAUTOLOGIES:
                assert tautology_meet(alg, formula).member, (name, label)
        c3 = next(e.algebra for e in locales() if e.name == "C3/top")
        r = tautology_meet(c3, PEIRCE)
        assert c3.lattice.names[r.meet] == "half"
        assert not r.member


def test_03_closed_lambda_terms_in_separator(capsys, algebras):
    terms = closed_terms()
    with criterion(capsys, 3, f"{len(terms)} closed lambda terms interpret into S", 60):
        assert len(terms) >= 10
        assert {"I", "K", "S", "B", "C", "pair", "church0", "church1", "church2"} <= set(terms)
        for name, alg in algebras:
            for label, t in terms.items():
                assert interpret_lambda(alg.structure, t) in alg.sep, (name, label)
                assert interpret_comb(alg.structure, translate(t)) in alg.sep, (name, label)


def test_04_inequality_suite(capsys, algebras):
    with criterion(capsys, 4, "application, abstraction and partial inequalities", 120):
        for name, alg in algebras:
            report = term_laws(alg)
            assert report.ok, (name, first_failure(report))


def test_05_preheyting_laws(capsys, algebras):
    with criterion(capsys, 5, "preHeyting laws; locale entailment is the order", 30):
        for name, alg in algebras:
            report = check_preheyting(alg)
            assert report.ok, (name, first_failure(report))
        checked = 0
        for e in locales():
            alg = e.algebra
            if alg.sep != {alg.top}:
                continue
            checked += 1
            lat = alg.lattice
            for a in alg.elements:
                for b in alg.elements:
                    assert entails(alg, a, b) == lat.leq[a][b]
                    assert equivalent(alg, times(alg, a, b), lat.meet2[a][b])
                    assert equivalent(alg, hplus(alg, a, b), lat.join2[a][b])
        assert checked == 3


def test_06_tripos_laws(capsys, algebras):
    with criterion(capsys, 6, "adjunctions, Beck-Chevalley and generic element, index sets up to 3", 300):
        for name, alg in algebras:
            report = tripos_laws(alg, max_index=3)
            for law in ("adjunctions", "beck_chevalley", "generic_element"):
                assert report[law].ok, (name, law, report[law].witness)
            assert report.ok, (name, first_failure(report))


def test_07_join_form_of_exists(capsys, algebras):
    with criterion(capsys, 7, "join form of exists on joins-compatible algebras", 60):
        maps = [f for n in range(4) for m in range(4) for f in all_maps(n, m)]
        checked = 0
        for name, alg in algebras:
            if not is_compatible_with_joins(alg.structure).ok:
                continue
            checked += 1
            for f in maps:
                r = check_fast_exists(alg, f)
                assert r.report.ok, (name, f.table, first_failure(r.report))
        assert checked > 0


def test_08_nucleus_suite(capsys, algebras):
    with criterion(capsys, 8, "stock nuclei, subalgebras and subtriposes", 120):
        for name, alg in algebras:
            for c in alg.elements:
                for build in (nucleus_open, nucleus_dneg, nucleus_closed, nucleus_disjunction):
                    validate_nucleus(alg, build(alg, c).map)
            for label, j in stock_nuclei(alg):
                validate_nucleus(alg, j.map)
            report = nucleus_laws(alg, fibers=2)
            assert report.ok, (name, first_failure(report))


def test_09_constructions(capsys):
    with criterion(capsys, 9, "Sierpinski, modification, downset and PER algebras", 60):
        b2 = next(e.algebra for e in locales() if e.name == "B2/top")
        assert is_binary_implicative(b2.structure).ok
        sa = sierpinski(b2)
        lat = sa.lattice
        assert sa.size == 3
        top_pair = lat.payload_index((b2.top, b2.top))
        assert sa.sep == {top_pair}
        validate_arrow(lat, sa.arr)
        validate_separator(sa.structure, sa.sep)
        report = full_suite(sa)
        assert report.ok, first_failure(report)
        ma = modification(b2)
        validate_separator(ma.structure, ma.sep)
        posets = enumerate_applicative_posets(2)
        for P in posets:
            for build in (downset_algebra, per_algebra):
                c = build(P)
                assert is_compatible_with_joins(c.algebra.structure).ok


def test_10_evidenced_frame(capsys, algebras):
    with criterion(capsys, 10, "evidenced frame axioms with evidence elements", 60):
        for name, alg in algebras:
            frame = evidenced_frame(alg)
            ev = frame.evidence()
            assert {"e_id", "e_top", "e_fst", "e_snd", "e_eval"} <= set(ev), name
            report = check_evidenced_frame(frame, max_psis=2)
            assert report.ok, (name, first_failure(report))


def test_11_pca_reduction(capsys):
    with criterion(capsys, 11, "combinatory completeness sample at fuel 10^4; omega inconclusive", 30):
        cases = completeness_sample(fuel=10_000)
        assert len(cases) == 30
        for c in cases:
            assert c.partial_ok is Reduction.YES and c.full_ok is Reduction.YES, c
        w = Lam("x", App(Var("x"), Var("x")))
        omega = App(w, w)
        r = beta_reduces(omega, Var("z"), fuel=10_000)
        assert r.verdict is Reduction.NO_WITHIN_FUEL


def test_12_check_is_deterministic(capsys):
    with criterion(capsys, 12, "corpus check report is byte-identical across runs", 600):
        first = cmd_check(use_corpus=True, timings=False).dumps()
        second = cmd_check(use_corpus=True, timings=False).dumps()
        assert first == second
        assert '"timings"' not in first
