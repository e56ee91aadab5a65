"""Arrow structures: a lattice plus a binary arrow table, antitone left, monotone right."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Sequence

from .errors import NotHeyting, VarianceViolation
from .lattice import Lattice, subsets


@dataclass(frozen=True)
class ArrowStructure:
    lattice: Lattice
    arr: tuple[tuple[int, ...], ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def size(self) -> int:
        return self.lattice.size

    @property
    def elements(self) -> range:
        return self.lattice.elements

    @property
    def top(self) -> int:
        return self.lattice.top

    @property
    def bot(self) -> int:
        return self.lattice.bot

    def imp(self, a: int, b: int) -> int:
        return self.arr[a][b]

    @property
    def values(self) -> tuple[int, ...]:
        """Distinct values of the arrow table, Im(->), in increasing index order."""
        v = self._cache.get("values")
        if v is None:
            v = self._cache["values"] = tuple(sorted({x for row in self.arr for x in row}))
        return v

    def cached(self, key: str, compute: Callable[[], Any]) -> Any:
        if key not in self._cache:
            self._cache[key] = compute()
        return self._cache[key]


@dataclass(frozen=True)
class Check:
    """Outcome of an exhaustive scan; ``witness`` is the first violation found."""

    ok: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_arrow(lat: Lattice, table: Sequence[Sequence[int]]) -> ArrowStructure:
    n = lat.size
    if len(table) != n or any(len(row) != n for row in table):
        raise VarianceViolation("arrow table must be size x size")
    for row in table:
        for v in row:
            if not 0 <= v < n:
                raise VarianceViolation(f"arrow value {v} outside the carrier")
    leq = lat.leq
    for a2 in range(n):
        for a in range(n):
            if not leq[a2][a]:
                continue
            for b in range(n):
                for b2 in range(n):
                    if leq[b][b2] and not leq[table[a][b]][table[a2][b2]]:
                        raise VarianceViolation(
                            f"{lat.names[a2]} <= {lat.names[a]} and {lat.names[b]} <= {lat.names[b2]} "
                            f"but {lat.names[a]}->{lat.names[b]} is not below "
                            f"{lat.names[a2]}->{lat.names[b2]}",
                            quadruple=(a2, a, b, b2),
                        )
    return ArrowStructure(lat, tuple(tuple(row) for row in table))


def arrow_from_function(lat: Lattice, fn: Callable[[int, int], int]) -> ArrowStructure:
    return validate_arrow(lat, [[fn(a, b) for b in lat.elements] for a in lat.elements])


def heyting_arrow(lat: Lattice) -> ArrowStructure:
    """Relative pseudocomplement, rejected when the meet-adjunction fails."""
    n = lat.size
    table = [[lat.join_set(c for c in range(n) if lat.leq[lat.meet2[c][a]][b]) for b in range(n)] for a in range(n)]
    for a in range(n):
        for b in range(n):
            for c in range(n):
                if lat.leq[lat.meet2[c][a]][b] != lat.leq[c][table[a][b]]:
                    raise NotHeyting(
                        f"no relative pseudocomplement for {lat.names[a]} -> {lat.names[b]}",
                        pair=(a, b),
                    )
    return validate_arrow(lat, table)


def is_compatible_with_joins(s: ArrowStructure) -> Check:
    """(join B) -> a == meet{b -> a : b in B} for all a and all subsets B."""
    lat = s.lattice
    for bs in subsets(list(s.elements)):
        j = lat.join_set(bs)
        for a in s.elements:
            if s.arr[j][a] != lat.meet_set(s.arr[b][a] for b in bs):
                return Check(False, (a, bs))
    return Check(True)


def is_binary_implicative(s: ArrowStructure) -> Check:
    lat = s.lattice
    for a in s.elements:
        for b in s.elements:
            for b2 in s.elements:
                if s.arr[a][lat.meet2[b][b2]] != lat.meet2[s.arr[a][b]][s.arr[a][b2]]:
                    return Check(False, (a, b, b2))
    return Check(True)


def is_implicative_meet_law(s: ArrowStructure) -> Check:
    """a -> meet(B) == meet{a -> b : b in B} for all a and all subsets B (incl. empty)."""
    lat = s.lattice
    for bs in subsets(list(s.elements)):
        m = lat.meet_set(bs)
        for a in s.elements:
            if s.arr[a][m] != lat.meet_set(s.arr[a][b] for b in bs):
                return Check(False, (a, bs))
    return Check(True)


def meet_inequality_holds(s: ArrowStructure) -> Check:
    """a -> meet(B) <= meet{a -> b}; true for every monotone-right arrow."""
    lat = s.lattice
    for bs in subsets(list(s.elements)):
        m = lat.meet_set(bs)
        for a in s.elements:
            if not lat.leq[s.arr[a][m]][lat.meet_set(s.arr[a][b] for b in bs)]:
                return Check(False, (a, bs))
    return Check(True)
