"""Combinators, separators and arrow algebras."""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence, Union

from .arrow import ArrowStructure, validate_arrow
from .config import caps
from .errors import (
    MissingCombinator,
    NotMPClosed,
    NotUpwardClosed,
    PreconditionFailed,
    SubsetCapExceeded,
)
from .terms import application_table, partial_table

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ArrowAlgebra:
    structure: ArrowStructure
    sep: frozenset[int]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def lattice(self):
        return self.structure.lattice

    @property
    def arr(self):
        return self.structure.arr

    @property
    def size(self) -> int:
        return self.structure.size

    @property
    def elements(self) -> range:
        return self.structure.elements

    @property
    def top(self) -> int:
        return self.structure.top

    @property
    def bot(self) -> int:
        return self.structure.bot

    @property
    def proper(self) -> bool:
        return self.bot not in self.sep

    @property
    def sep_vector(self) -> tuple[bool, ...]:
        return tuple(a in self.sep for a in self.elements)

    def __contains__(self, a: int) -> bool:
        return a in self.sep

    def names_of(self, xs: Iterable[int]) -> list[str]:
        return [self.lattice.names[x] for x in xs]


# ---------------------------------------------------------------- combinators


def combinator_k(s: ArrowStructure) -> int:
    lat, arr = s.lattice, s.arr
    return s.cached("k", lambda: lat.meet_set(arr[a][arr[b][a]] for a in s.elements for b in s.elements))


def combinator_s(s: ArrowStructure) -> int:
    lat, arr = s.lattice, s.arr

    def build():
        return lat.meet_set(
            arr[arr[a][arr[b][c]]][arr[arr[a][b]][arr[a][c]]]
            for a, b, c in product(s.elements, repeat=3)
        )

    return s.cached("s", build)


def combinator_i(s: ArrowStructure) -> int:
    return s.lattice.meet_set(s.arr[a][a] for a in s.elements)


def combinator_b(s: ArrowStructure) -> int:
    lat, arr = s.lattice, s.arr
    return lat.meet_set(
        arr[arr[b][c]][arr[arr[a][b]][arr[a][c]]] for a, b, c in product(s.elements, repeat=3)
    )


def _distribution_meet(s: ArrowStructure, vals: Sequence[int]) -> int:
    """meet over x and B subset of vals of (meet_b x->b) -> x -> meet(B)."""
    lat, arr = s.lattice, s.arr
    m = len(vals)
    meet_b = [lat.top] * (1 << m)
    for mask in range(1, 1 << m):
        low = (mask & -mask).bit_length() - 1
        meet_b[mask] = lat.meet2[meet_b[mask & (mask - 1)]][vals[low]]
    acc = lat.top
    for x in s.elements:
        row = arr[x]
        mx = [lat.top] * (1 << m)
        acc = lat.meet2[acc][arr[lat.top][row[lat.top]]]
        for mask in range(1, 1 << m):
            low = (mask & -mask).bit_length() - 1
            mx[mask] = lat.meet2[mx[mask & (mask - 1)]][row[vals[low]]]
            acc = lat.meet2[acc][arr[mx[mask]][row[meet_b[mask]]]]
    return acc


def combinator_a(s: ArrowStructure) -> int:
    vals = s.values
    cap = caps().value_set
    if len(vals) > cap:
        raise SubsetCapExceeded(f"|Im(->)| = {len(vals)} exceeds cap {cap}", size=len(vals), cap=cap)
    return s.cached("a", lambda: _distribution_meet(s, vals))


def combinator_a_prime(s: ArrowStructure) -> int:
    cap = caps().subset
    if s.size > cap:
        raise SubsetCapExceeded(f"|A| = {s.size} exceeds cap {cap}", size=s.size, cap=cap)
    return s.cached("a_prime", lambda: _distribution_meet(s, list(s.elements)))


@dataclass(frozen=True)
class UglyCombinators:
    i_prime: int
    k_prime: int
    s_prime: int
    eta: int


def _s_prime_inner(s: ArrowStructure, a: int, b: int, lower: list[list[list[int]]]) -> int:
    # meet of c -> partial(e f) over e, f with ac <= partial e and bc <= partial f;
    # restricting to d = ef is exact because c -> partial(d) is monotone in d
    lat, arr = s.lattice, s.arr
    app = application_table(s)
    pt = partial_table(s)
    acc = lat.top
    for c in s.elements:
        es, fs = lower[a][c], lower[b][c]
        row = arr[c]
        for e in es:
            ae = app[e]
            for f in fs:
                acc = lat.meet2[acc][row[pt[ae[f]]]]
    return acc


def combinator_ugly(s: ArrowStructure) -> UglyCombinators:
    def build() -> UglyCombinators:
        lat, arr = s.lattice, s.arr
        app = application_table(s)
        pt = partial_table(s)
        els = list(s.elements)
        if s.size > 8:
            log.info("computing s' on %d elements", s.size)
        i_prime = lat.meet_set(arr[a][pt[a]] for a in els)
        k_prime = lat.meet_set(arr[a][lat.meet_set(arr[b][pt[a]] for b in els)] for a in els)
        eta = lat.meet_set(arr[a][lat.meet_set(arr[b][app[a][b]] for b in els)] for a in els)
        lower = [[[e for e in els if lat.leq[app[a][c]][pt[e]]] for c in els] for a in els]
        s_prime = lat.top
        for a in els:
            if s.size > 8:
                log.debug("s': a = %d/%d", a + 1, s.size)
            inner_b = lat.meet_set(arr[b][_s_prime_inner(s, a, b, lower)] for b in els)
            s_prime = lat.meet2[s_prime][arr[a][inner_b]]
        return UglyCombinators(i_prime, k_prime, s_prime, eta)

    return s.cached("ugly", build)


@dataclass(frozen=True)
class CombinatorReport:
    k: int
    s: int
    a: int
    i: int
    b: int
    a_prime: int
    i_prime: int
    k_prime: int
    s_prime: int
    eta: int
    in_separator: dict[str, bool]

    NAMES = ("k", "s", "a", "i", "b", "a_prime", "i_prime", "k_prime", "s_prime", "eta")

    def values(self) -> dict[str, int]:
        return {n: getattr(self, n) for n in self.NAMES}


def combinator_report(alg: Union[ArrowAlgebra, ArrowStructure]) -> CombinatorReport:
    s = alg.structure if isinstance(alg, ArrowAlgebra) else alg
    sep = alg.sep if isinstance(alg, ArrowAlgebra) else frozenset()
    ugly = combinator_ugly(s)
    vals = dict(
        k=combinator_k(s),
        s=combinator_s(s),
        a=combinator_a(s),
        i=combinator_i(s),
        b=combinator_b(s),
        a_prime=combinator_a_prime(s),
        i_prime=ugly.i_prime,
        k_prime=ugly.k_prime,
        s_prime=ugly.s_prime,
        eta=ugly.eta,
    )
    return CombinatorReport(**vals, in_separator={n: v in sep for n, v in vals.items()})


# ---------------------------------------------------------------- separators


def validate_separator(s: ArrowStructure, sep: Iterable[int]) -> ArrowAlgebra:
    sep = frozenset(sep)
    lat, arr = s.lattice, s.arr
    for a in sorted(sep):
        for b in s.elements:
            if lat.leq[a][b] and b not in sep:
                raise NotUpwardClosed(
                    f"{lat.names[a]} is in S but {lat.names[b]} above it is not", pair=(a, b)
                )
    for a in sorted(sep):
        for b in s.elements:
            if arr[a][b] in sep and b not in sep:
                raise NotMPClosed(
                    f"{lat.names[a]} and {lat.names[a]}->{lat.names[b]} are in S but {lat.names[b]} is not",
                    pair=(a, b),
                )
    for which, value in (("k", combinator_k(s)), ("s", combinator_s(s)), ("a", combinator_a(s))):
        if value not in sep:
            raise MissingCombinator(
                f"combinator {which} = {lat.names[value]} is not in S", which=which, value=value
            )
    return ArrowAlgebra(s, sep)


def is_separator(s: ArrowStructure, sep: Iterable[int]) -> bool:
    try:
        validate_separator(s, sep)
    except (NotUpwardClosed, NotMPClosed, MissingCombinator):
        return False
    return True


def generate_separator(s: ArrowStructure, seed: Iterable[int] = ()) -> ArrowAlgebra:
    """Least separator containing ``seed``."""
    lat, arr = s.lattice, s.arr
    sep = set(lat.up_closure(set(seed) | {combinator_k(s), combinator_s(s), combinator_a(s)}))
    work = list(sep)
    while work:
        work.clear()
        for a in list(sep):
            for b in s.elements:
                if b not in sep and arr[a][b] in sep:
                    new = lat.up(b) - sep
                    sep |= new
                    work.extend(new)
    return ArrowAlgebra(s, frozenset(sep))


def make_algebra(lat, table, sep) -> ArrowAlgebra:
    """Validate an arrow table and a separator in one go."""
    return validate_separator(validate_arrow(lat, table), sep)


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class PVar:
    name: str


@dataclass(frozen=True)
class Imp:
    left: "Formula"
    right: "Formula"


Formula = Union[PVar, Imp]

_TOKEN = re.compile(r"\s*(->|→|\(|\)|[A-Za-z_][A-Za-z0-9_']*)")


def parse_formula(text: str) -> Formula:
    """Implicational formula; ``->`` associates to the right."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad formula near {text[pos:]!r}")
        tokens.append("->" if m.group(1) == "→" else m.group(1))
        pos = m.end()
    tokens.append("")
    i = 0

    def imp() -> Formula:
        nonlocal i
        left = atom()
        if tokens[i] == "->":
            i += 1
            return Imp(left, imp())
        return left

    def atom() -> Formula:
        nonlocal i
        tok = tokens[i]
        if tok == "(":
            i += 1
            f = imp()
            if tokens[i] != ")":
                raise ValueError("unbalanced parentheses")
            i += 1
            return f
        if tok in ("", "->", ")"):
            raise ValueError(f"unexpected {tok or 'end of input'!r}")
        i += 1
        return PVar(tok)

    f = imp()
    if tokens[i] != "":
        raise ValueError(f"trailing input {tokens[i]!r}")
    return f


def formula_vars(f: Formula) -> list[str]:
    out: list[str] = []

    def walk(f: Formula) -> None:
        if isinstance(f, PVar):
            if f.name not in out:
                out.append(f.name)
        else:
            walk(f.left)
            walk(f.right)

    walk(f)
    return out


def eval_formula(s: ArrowStructure, f: Formula, val: dict[str, int]) -> int:
    if isinstance(f, PVar):
        return val[f.name]
    return s.arr[eval_formula(s, f.left, val)][eval_formula(s, f.right, val)]


@dataclass(frozen=True)
class TautologyResult:
    meet: int
    member: bool


def tautology_meet(alg: ArrowAlgebra, formula: Formula | str, n: int | None = None) -> TautologyResult:
    f = parse_formula(formula) if isinstance(formula, str) else formula
    names = formula_vars(f)
    if n is not None and n < len(names):
        raise ValueError(f"formula uses {len(names)} variables, n = {n}")
    s = alg.structure
    m = s.lattice.meet_set(
        eval_formula(s, f, dict(zip(names, vals))) for vals in product(s.elements, repeat=len(names))
    )
    return TautologyResult(m, m in alg.sep)


def limited_mp(alg: ArrowAlgebra, xs: Sequence[int], ys: Sequence[int], zs: Sequence[int]) -> bool:
    """Conclusion of limited modus ponens for index families, after checking its hypotheses."""
    if not len(xs) == len(ys) == len(zs):
        raise PreconditionFailed("families must have equal length", which="length")
    lat, arr = alg.lattice, alg.arr
    if lat.meet_set(arr[x][arr[y][z]] for x, y, z in zip(xs, ys, zs)) not in alg.sep:
        raise PreconditionFailed("meet of x_i -> y_i -> z_i is not in S", which="implications")
    if lat.meet_set(xs) not in alg.sep:
        raise PreconditionFailed("meet of x_i is not in S", which="premises")
    return lat.meet_set(arr[y][z] for y, z in zip(ys, zs)) in alg.sep
