"""Nuclei on arrow algebras, the stock examples, and the subalgebra they induce."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .arrow import validate_arrow
from .errors import ClauseFailed, ValidationFailed
from .heyting import plus_table, times_table
from .laws import LawReport, Scan
from .lattice import subsets
from .separator import ArrowAlgebra, validate_separator
from .terms import partial_table


@dataclass(frozen=True)
class Nucleus:
    base: ArrowAlgebra
    map: tuple[int, ...]
    certificate: tuple[bool, bool, bool]

    def __call__(self, a: int) -> int:
        return self.map[a]

    @property
    def idempotent(self) -> bool:
        return all(self.map[self.map[a]] == self.map[a] for a in self.base.elements)


def nucleus_clauses(alg: ArrowAlgebra, j: Sequence[int]) -> tuple[tuple[bool, bool, bool], dict]:
    """Evaluate the three clauses; the dict holds a witness for the first failing one."""
    lat, arr = alg.lattice, alg.arr
    els = alg.elements
    witness: dict = {}
    mono = True
    for a in els:
        for b in els:
            if lat.leq[a][b] and not lat.leq[j[a]][j[b]]:
                mono = False
                witness = {"clause": 1, "pair": (lat.names[a], lat.names[b])}
                break
        if not mono:
            break
    infl_meet = lat.meet_set(arr[a][j[a]] for a in els)
    infl = infl_meet in alg.sep
    if not infl and not witness:
        witness = {"clause": 2, "meet": lat.names[infl_meet]}
    strong_meet = lat.meet_set(arr[arr[a][j[b]]][arr[j[a]][j[b]]] for a in els for b in els)
    strong = strong_meet in alg.sep
    if not strong and not witness:
        witness = {"clause": 3, "meet": lat.names[strong_meet]}
    return (mono, infl, strong), witness


def validate_nucleus(alg: ArrowAlgebra, j: Sequence[int] | Callable[[int], int]) -> Nucleus:
    table = tuple(j(a) for a in alg.elements) if callable(j) else tuple(j)
    if len(table) != alg.size or any(not 0 <= v < alg.size for v in table):
        raise ValueError("nucleus map must be a total endomap of the carrier")
    cert, witness = nucleus_clauses(alg, table)
    if not all(cert):
        clause = witness.pop("clause")
        raise ClauseFailed(clause, **witness)
    return Nucleus(alg, table, cert)


def nucleus_identity(alg: ArrowAlgebra) -> Nucleus:
    return validate_nucleus(alg, lambda a: a)


def nucleus_partial(alg: ArrowAlgebra) -> Nucleus:
    return validate_nucleus(alg, partial_table(alg.structure))


def nucleus_open(alg: ArrowAlgebra, c: int) -> Nucleus:
    """``x -> (c -> x)``."""
    return validate_nucleus(alg, lambda x: alg.arr[c][x])


def nucleus_dneg(alg: ArrowAlgebra, c: int) -> Nucleus:
    """``x -> ((x -> c) -> c)``."""
    return validate_nucleus(alg, lambda x: alg.arr[alg.arr[x][c]][c])


def nucleus_closed(alg: ArrowAlgebra, c: int) -> Nucleus:
    """``x -> ((x -> c) -> x)``."""
    return validate_nucleus(alg, lambda x: alg.arr[alg.arr[x][c]][x])


def nucleus_disjunction(alg: ArrowAlgebra, a: int) -> Nucleus:
    """``x -> x + a``."""
    pl = plus_table(alg)
    return validate_nucleus(alg, lambda x: pl[x][a])


def nucleus_product(j: Nucleus, k: Nucleus) -> Nucleus:
    """``x -> j(x) x k(x)``."""
    if j.base is not k.base and j.base != k.base:
        raise ValueError("nuclei live on different algebras")
    tt = times_table(j.base)
    return validate_nucleus(j.base, lambda x: tt[j.map[x]][k.map[x]])


def dom_map(alg: ArrowAlgebra) -> tuple[int, ...]:
    """``(R, S) -> (S restricted to dom R, S)`` on a Sierpinski algebra over PERs."""
    lat = alg.lattice
    payload = lat.payload
    if payload is None or not all(
        isinstance(p, tuple) and len(p) == 2 and all(isinstance(r, frozenset) for r in p) for p in payload
    ):
        raise ValidationFailed("carrier is not a Sierpinski carrier over PERs")
    out = []
    for r, s in payload:
        dom = {x for (x, y) in r if x == y}
        restricted = frozenset((x, y) for (x, y) in s if x in dom and y in dom)
        try:
            out.append(lat.payload_index((restricted, s)))
        except KeyError:
            raise ValidationFailed("restriction leaves the carrier", element=lat.names[len(out)]) from None
    return tuple(out)


def nucleus_dom(alg: ArrowAlgebra) -> Nucleus:
    return validate_nucleus(alg, dom_map(alg))


def subalgebra(j: Nucleus) -> ArrowAlgebra:
    """Same lattice, ``a ->_j b = a -> j b`` and ``S_j = {a : j a in S}``; fully re-validated."""
    alg = j.base
    table = [[alg.arr[a][j.map[b]] for b in alg.elements] for a in alg.elements]
    s = validate_arrow(alg.lattice, table)
    return validate_separator(s, (a for a in alg.elements if j.map[a] in alg.sep))


def check_nucleus_lemmas(j: Nucleus) -> LawReport:
    """The derived properties every nucleus enjoys, as exact meets and order checks."""
    alg = j.base
    lat, arr, sep = alg.lattice, alg.arr, alg.sep
    tt = times_table(alg)
    els = list(alg.elements)
    J = j.map
    report = LawReport()

    def meet_law(name: str, terms) -> None:
        m = lat.meet_set(terms)
        report.add(name, m in sep, {"meet": lat.names[m]}, 1)

    meet_law("jj_to_j", (arr[J[J[a]]][J[a]] for a in els))
    meet_law("functorial", (arr[arr[a][b]][arr[J[a]][J[b]]] for a in els for b in els))
    meet_law("j_of_arrow", (arr[J[arr[a][b]]][arr[J[a]][J[b]]] for a in els for b in els))
    meet_law("j_of_times", (arr[J[tt[a][b]]][tt[J[a]][J[b]]] for a in els for b in els))
    meet_law("times_of_j", (arr[tt[J[a]][J[b]]][J[tt[a][b]]] for a in els for b in els))

    scan = Scan(report, "meet_subadditive")
    for xs in subsets(els):
        m = J[lat.meet_set(xs)]
        scan.check(lat.leq[m][lat.meet_set(J[x] for x in xs)], subset=[lat.names[x] for x in xs])
    scan.done()
    return report
