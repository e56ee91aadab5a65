"""The logical preorder of an arrow algebra and its preHeyting connectives."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import LawViolated
from .laws import LawReport, Scan
from .separator import ArrowAlgebra
from .terms import application_table, partial_table


@dataclass(frozen=True)
class LogicalPreorder:
    algebra: ArrowAlgebra
    entails: tuple[tuple[bool, ...], ...]

    def __call__(self, a: int, b: int) -> bool:
        return self.entails[a][b]

    def equivalent(self, a: int, b: int) -> bool:
        return self.entails[a][b] and self.entails[b][a]


def logical_preorder(alg: ArrowAlgebra) -> LogicalPreorder:
    def build():
        sep = alg.sep
        return LogicalPreorder(alg, tuple(tuple(v in sep for v in row) for row in alg.arr))

    if "entails" not in alg._cache:
        alg._cache["entails"] = build()
    return alg._cache["entails"]


def entails(alg: ArrowAlgebra, a: int, b: int) -> bool:
    return logical_preorder(alg).entails[a][b]


def equivalent(alg: ArrowAlgebra, a: int, b: int) -> bool:
    return logical_preorder(alg).equivalent(a, b)


def times_table(alg: ArrowAlgebra) -> tuple[tuple[int, ...], ...]:
    """``a x b`` = meet over z of ``z -> partial(z (partial a) (partial b))``."""

    def build():
        s = alg.structure
        lat, arr = s.lattice, s.arr
        app = application_table(s)
        pt = partial_table(s)
        return tuple(
            tuple(
                lat.meet_set(arr[z][pt[app[app[z][pt[a]]][pt[b]]]] for z in s.elements)
                for b in s.elements
            )
            for a in s.elements
        )

    return alg.structure.cached("times", build)


def plus_table(alg: ArrowAlgebra) -> tuple[tuple[int, ...], ...]:
    """``a + b`` = meet over c of ``(a -> partial c) -> (b -> partial c) -> partial c``."""

    def build():
        s = alg.structure
        lat, arr = s.lattice, s.arr
        pt = partial_table(s)
        return tuple(
            tuple(
                lat.meet_set(arr[arr[a][pt[c]]][arr[arr[b][pt[c]]][pt[c]]] for c in s.elements)
                for b in s.elements
            )
            for a in s.elements
        )

    return alg.structure.cached("plus", build)


def times(alg: ArrowAlgebra, a: int, b: int) -> int:
    return times_table(alg)[a][b]


def plus(alg: ArrowAlgebra, a: int, b: int) -> int:
    return plus_table(alg)[a][b]


def check_preheyting(alg: ArrowAlgebra, raise_on_failure: bool = False) -> LawReport:
    """Exhaustive check of the preorder, bounds, product, coproduct and currying laws."""
    lat = alg.lattice
    n = lat.names
    E = logical_preorder(alg).entails
    tt, pl, arr = times_table(alg), plus_table(alg), alg.arr
    els = list(alg.elements)
    report = LawReport()

    scan = Scan(report, "reflexive")
    for a in els:
        scan.check(E[a][a], a=n[a])
    scan.done()

    scan = Scan(report, "transitive")
    for a in els:
        for b in els:
            if E[a][b]:
                for c in els:
                    scan.check(not E[b][c] or E[a][c], a=n[a], b=n[b], c=n[c])
    scan.done()

    scan = Scan(report, "contains_order")
    for a in els:
        for b in els:
            scan.check(not lat.leq[a][b] or E[a][b], a=n[a], b=n[b])
    scan.done()

    scan = Scan(report, "top")
    for a in els:
        scan.check(E[a][lat.top], a=n[a])
    scan.done()

    scan = Scan(report, "bottom")
    for a in els:
        scan.check(E[lat.bot][a], a=n[a])
    scan.done()

    scan = Scan(report, "product")
    for a in els:
        for b in els:
            for c in els:
                scan.check((E[c][a] and E[c][b]) == E[c][tt[a][b]], a=n[a], b=n[b], c=n[c])
    scan.done()

    scan = Scan(report, "coproduct")
    for a in els:
        for b in els:
            for c in els:
                scan.check((E[a][c] and E[b][c]) == E[pl[a][b]][c], a=n[a], b=n[b], c=n[c])
    scan.done()

    scan = Scan(report, "currying")
    for a in els:
        for b in els:
            for c in els:
                scan.check(E[tt[c][a]][b] == E[c][arr[a][b]], a=n[a], b=n[b], c=n[c])
    scan.done()

    if raise_on_failure:
        report.raise_if_failed(LawViolated)
    return report
