"""Finite complete lattices with dense order/meet/join tables.

Elements are the integers ``0..size-1``; ``names`` gives each a stable label
and ``payload`` optionally attaches structured data (a downset, a PER, a pair
of base elements) to every element of a constructed carrier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Any, Iterable, Iterator, Sequence

from .config import caps
from .errors import NotALattice, NotAPoset, SubsetCapExceeded

Table = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class Lattice:
    names: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    meet2: Table
    join2: Table
    top: int
    bot: int
    payload: tuple[Any, ...] | None = None
    _cache: dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(len(self.names))

    def index(self, name: str) -> int:
        try:
            return self._name_index[name]
        except KeyError:
            raise KeyError(f"no element named {name!r}") from None

    @property
    def _name_index(self) -> dict[str, int]:
        idx = self._cache.get("names")
        if idx is None:
            idx = self._cache["names"] = {n: i for i, n in enumerate(self.names)}
        return idx

    def name(self, a: int) -> str:
        return self.names[a]

    def le(self, a: int, b: int) -> bool:
        return self.leq[a][b]

    def meet_set(self, xs: Iterable[int]) -> int:
        return reduce(lambda acc, x: self.meet2[acc][x], xs, self.top)

    def join_set(self, xs: Iterable[int]) -> int:
        return reduce(lambda acc, x: self.join2[acc][x], xs, self.bot)

    def up(self, a: int) -> frozenset[int]:
        return frozenset(b for b in self.elements if self.leq[a][b])

    def down(self, a: int) -> frozenset[int]:
        return frozenset(b for b in self.elements if self.leq[b][a])

    def up_closure(self, xs: Iterable[int]) -> frozenset[int]:
        out: set[int] = set()
        for x in xs:
            out.update(b for b in self.elements if self.leq[x][b])
        return frozenset(out)

    def payload_index(self, value: Any) -> int:
        """Index of the element whose payload equals ``value``."""
        if self.payload is None:
            raise KeyError("lattice has no payload")
        idx = self._cache.get("payload")
        if idx is None:
            idx = self._cache["payload"] = {p: i for i, p in enumerate(self.payload)}
        return idx[value]


def subsets(items: Sequence[int], limit: int | None = None) -> Iterator[tuple[int, ...]]:
    """All subsets of ``items`` by increasing size, lexicographic within a size.

    This is the canonical enumeration order used for every reported witness.
    """
    bound = caps().subset if limit is None else limit
    if len(items) > bound:
        raise SubsetCapExceeded(
            f"{len(items)} items exceed the subset cap {bound}", size=len(items), cap=bound
        )
    for k in range(len(items) + 1):
        yield from combinations(items, k)


def _closure(n: int, rows: list[int]) -> list[int]:
    # reflexive-transitive closure on bit rows (Warshall)
    rows = [r | (1 << i) for i, r in enumerate(rows)]
    for k in range(n):
        bit = 1 << k
        rk = rows[k]
        for i in range(n):
            if rows[i] & bit:
                rows[i] |= rk
    return rows


def validate_lattice(
    names: Sequence[str], table: Sequence[Sequence[bool]], payload: Sequence[Any] | None = None
) -> Lattice:
    """Check a declared order and return the lattice with meet/join tables.

    ``table[a][b]`` states ``a <= b``; only generating pairs are needed since
    the reflexive-transitive closure is taken first.
    """
    n = len(names)
    if n == 0:
        raise NotAPoset("a lattice needs at least one element")
    if len(set(names)) != n:
        raise NotAPoset("element names must be distinct")
    if len(table) != n or any(len(row) != n for row in table):
        raise NotAPoset("order table must be square and match the name list")

    ups = _closure(n, [sum(1 << b for b in range(n) if table[a][b]) for a in range(n)])
    downs = [sum(1 << a for a in range(n) if ups[a] >> b & 1) for b in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if ups[a] >> b & 1 and ups[b] >> a & 1:
                raise NotAPoset(
                    f"{names[a]} and {names[b]} are distinct but mutually ordered",
                    pair=(names[a], names[b]),
                )

    by_down = {d: i for i, d in enumerate(downs)}
    by_up = {u: i for i, u in enumerate(ups)}
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(a, n):
            g = by_down.get(downs[a] & downs[b])
            if g is None:
                raise NotALattice(
                    f"{names[a]} and {names[b]} have no greatest lower bound",
                    pair=(names[a], names[b]),
                    missing="meet",
                )
            h = by_up.get(ups[a] & ups[b])
            if h is None:
                raise NotALattice(
                    f"{names[a]} and {names[b]} have no least upper bound",
                    pair=(names[a], names[b]),
                    missing="join",
                )
            meet[a][b] = meet[b][a] = g
            join[a][b] = join[b][a] = h

    if n <= 64:
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if meet[meet[a][b]][c] != meet[a][meet[b][c]] or join[join[a][b]][c] != join[a][join[b][c]]:
                        raise NotALattice("meet/join not associative", triple=(names[a], names[b], names[c]))

    full = (1 << n) - 1
    top = by_down.get(full)
    bot = by_up.get(full)
    if top is None or bot is None:  # pragma: no cover - implied by pairwise bounds
        raise NotALattice("missing top or bottom")
    leq = tuple(tuple(bool(ups[a] >> b & 1) for b in range(n)) for a in range(n))
    return Lattice(
        names=tuple(names),
        leq=leq,
        meet2=tuple(map(tuple, meet)),
        join2=tuple(map(tuple, join)),
        top=top,
        bot=bot,
        payload=None if payload is None else tuple(payload),
    )


def lattice_from_pairs(
    names: Sequence[str], pairs: Iterable[tuple[Any, Any]], payload: Sequence[Any] | None = None
) -> Lattice:
    """Build from generating pairs ``(a, b)`` meaning ``a <= b`` (names or indices)."""
    pos = {nm: i for i, nm in enumerate(names)}
    table = [[False] * len(names) for _ in names]
    for a, b in pairs:
        ia = pos[a] if isinstance(a, str) else a
        ib = pos[b] if isinstance(b, str) else b
        table[ia][ib] = True
    return validate_lattice(names, table, payload)


def lattice_from_leq(names: Sequence[str], le, payload: Sequence[Any] | None = None) -> Lattice:
    """Build from an order predicate ``le(i, j)`` on indices."""
    n = len(names)
    return validate_lattice(names, [[bool(le(i, j)) for j in range(n)] for i in range(n)], payload)


def chain(n: int, names: Sequence[str] | None = None) -> Lattice:
    names = list(names) if names is not None else [str(i) for i in range(n)]
    return lattice_from_leq(names, lambda i, j: i <= j)


def boolean(k: int) -> Lattice:
    """The powerset of a ``k``-element set; elements are bitmasks in numeric order."""
    n = 1 << k
    names = ["{" + ",".join(str(i) for i in range(k) if m >> i & 1) + "}" for m in range(n)]
    return lattice_from_leq(names, lambda i, j: i & j == i)


def product(left: Lattice, right: Lattice) -> Lattice:
    names = [f"({x},{y})" for x in left.names for y in right.names]
    pairs = [(a, b) for a in left.elements for b in right.elements]
    return lattice_from_leq(
        names,
        lambda i, j: left.leq[pairs[i][0]][pairs[j][0]] and right.leq[pairs[i][1]][pairs[j][1]],
        payload=pairs,
    )


def power_lattice(base: Lattice, k: int) -> Lattice:
    """``base^k`` with tables built pointwise (no generic validation)."""
    import itertools

    tuples = list(itertools.product(base.elements, repeat=k))
    index = {t: i for i, t in enumerate(tuples)}
    names = ["(" + ",".join(base.names[x] for x in t) + ")" for t in tuples]
    leq = tuple(
        tuple(all(base.leq[x][y] for x, y in zip(s, t)) for t in tuples) for s in tuples
    )
    meet = tuple(
        tuple(index[tuple(base.meet2[x][y] for x, y in zip(s, t))] for t in tuples) for s in tuples
    )
    join = tuple(
        tuple(index[tuple(base.join2[x][y] for x, y in zip(s, t))] for t in tuples) for s in tuples
    )
    return Lattice(
        names=tuple(names),
        leq=leq,
        meet2=meet,
        join2=join,
        top=index[(base.top,) * k],
        bot=index[(base.bot,) * k],
        payload=tuple(tuples),
    )


def meet_set(lat: Lattice, xs: Iterable[int]) -> int:
    return lat.meet_set(xs)


def join_set(lat: Lattice, xs: Iterable[int]) -> int:
    return lat.join_set(xs)
