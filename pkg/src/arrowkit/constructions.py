"""Algebra-producing constructions.

Power algebras, the Sierpinski construction and its modification, and the
downset and PER algebras of a finite partial applicative poset.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct
from typing import Optional, Sequence

from .arrow import ArrowStructure, is_binary_implicative, is_compatible_with_joins, validate_arrow
from .config import caps
from .errors import (
    ArrowkitError,
    CarrierCapExceeded,
    NotBinaryImplicative,
    NotJoinsCompatible,
    ValidationFailed,
)
from .lattice import lattice_from_leq, power_lattice
from .nucleus import nucleus_disjunction, subalgebra
from .separator import ArrowAlgebra, generate_separator, validate_separator


@dataclass(frozen=True)
class ApplicativePoset:
    """A finite poset with a partial application; ``app[a][b] is None`` means undefined."""

    names: tuple[str, ...]
    leq: tuple[tuple[bool, ...], ...]
    app: tuple[tuple[Optional[int], ...], ...]
    filter: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def elements(self) -> range:
        return range(len(self.names))

    def defined(self, a: int, b: int) -> bool:
        return self.app[a][b] is not None


# ---------------------------------------------------------------- power


def power(alg: ArrowAlgebra, k: int, pointwise: bool = False) -> ArrowAlgebra:
    """``A^I`` for ``|I| = k`` with the pointwise arrow.

    The separator is ``S^I`` (meet of the tuple in S) by default and ``S_I``
    (every component in S) when ``pointwise`` is set.
    """
    n = alg.size**k
    if n > caps().carrier:
        raise CarrierCapExceeded(f"power carrier {n} exceeds cap {caps().carrier}", size=n)
    lat = power_lattice(alg.lattice, k)
    tuples = lat.payload
    base = alg.lattice
    table = [
        [lat.payload_index(tuple(alg.arr[x][y] for x, y in zip(s, t))) for t in tuples] for s in tuples
    ]
    s = validate_arrow(lat, table)
    if pointwise:
        sep = [i for i, t in enumerate(tuples) if all(x in alg.sep for x in t)]
    else:
        sep = [i for i, t in enumerate(tuples) if base.meet_set(t) in alg.sep]
    return validate_separator(s, sep)


# ---------------------------------------------------------------- Sierpinski


def _label(lat, x: int) -> object:
    return lat.payload[x] if lat.payload is not None else x


def sierpinski(alg: ArrowAlgebra, require_joins: bool = True) -> ArrowAlgebra:
    """Pairs ``x0 <= x1`` with ``x -> y = (x0->y0 meet x1->y1, x1->y1)`` and ``S = {x : x0 in S}``.

    The payload of each new element is the pair of base payloads (or base
    indices when the base lattice has none).
    """
    chk = is_binary_implicative(alg.structure)
    if not chk:
        a, b, b2 = chk.witness
        raise NotBinaryImplicative("base is not binary implicative", triple=tuple(alg.lattice.names[x] for x in (a, b, b2)))
    if require_joins:
        chk = is_compatible_with_joins(alg.structure)
        if not chk:
            a, bs = chk.witness
            raise NotJoinsCompatible(
                "base is not compatible with joins",
                element=alg.lattice.names[a],
                subset=[alg.lattice.names[b] for b in bs],
            )
    base = alg.lattice
    pairs = [(x0, x1) for x0 in base.elements for x1 in base.elements if base.leq[x0][x1]]
    names = [f"({base.names[x0]},{base.names[x1]})" for x0, x1 in pairs]
    payload = [(_label(base, x0), _label(base, x1)) for x0, x1 in pairs]
    lat = lattice_from_leq(
        names,
        lambda i, j: base.leq[pairs[i][0]][pairs[j][0]] and base.leq[pairs[i][1]][pairs[j][1]],
        payload=payload,
    )
    index = {p: i for i, p in enumerate(pairs)}
    arr = alg.arr
    table = []
    for x0, x1 in pairs:
        row = []
        for y0, y1 in pairs:
            hi = arr[x1][y1]
            lo = base.meet2[arr[x0][y0]][hi]
            row.append(index[(lo, hi)])
        table.append(row)
    try:
        s = validate_arrow(lat, table)
        return validate_separator(s, (i for i, (x0, _) in enumerate(pairs) if x0 in alg.sep))
    except ArrowkitError as exc:
        raise ValidationFailed(f"Sierpinski algebra fails validation: {exc}", cause=type(exc).__name__, **exc.witness) from exc


def modification(alg: ArrowAlgebra, require_joins: bool = True) -> ArrowAlgebra:
    """Sierpinski algebra followed by the subalgebra of ``x -> x + (bot, top)``."""
    sa = sierpinski(alg, require_joins)
    base = alg.lattice
    marker = sa.lattice.payload_index((_label(base, base.bot), _label(base, base.top)))
    return subalgebra(nucleus_disjunction(sa, marker))


# ---------------------------------------------------------------- applicative posets


@dataclass(frozen=True)
class ConstructedAlgebra:
    """A constructed arrow structure plus the separator outcome.

    ``candidate`` is the filter-inhabited subset, ``candidate_error`` the
    reason it is not a separator (``None`` if it is), and ``algebra`` carries
    the least separator containing the candidate.
    """

    structure: ArrowStructure
    candidate: frozenset[int]
    candidate_error: Optional[str]
    algebra: ArrowAlgebra

    @property
    def candidate_valid(self) -> bool:
        return self.candidate_error is None

    @property
    def proper(self) -> bool:
        return self.algebra.proper


def _finish(s: ArrowStructure, candidate: frozenset[int]) -> ConstructedAlgebra:
    try:
        alg = validate_separator(s, candidate)
        err = None
    except ArrowkitError as exc:
        err = f"{type(exc).__name__}: {exc}"
        alg = generate_separator(s, candidate)
    return ConstructedAlgebra(s, candidate, err, alg)


def _set_name(P: ApplicativePoset, xs: Sequence[int]) -> str:
    return "{" + ",".join(P.names[x] for x in xs) + "}"


def downsets(P: ApplicativePoset) -> list[frozenset[int]]:
    n = P.size
    out = []
    for mask in range(1 << n):
        xs = frozenset(i for i in range(n) if mask >> i & 1)
        if all(y in xs for x in xs for y in range(n) if P.leq[y][x]):
            out.append(xs)
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def downset_algebra(P: ApplicativePoset) -> ConstructedAlgebra:
    """Downsets of P under inclusion with ``X -> Y = {z : z x defined and in Y for all x in X}``."""
    if 1 << P.size > caps().carrier:
        raise CarrierCapExceeded(f"2^{P.size} downsets exceed cap {caps().carrier}", size=P.size)
    ds = downsets(P)
    lat = lattice_from_leq([_set_name(P, sorted(d)) for d in ds], lambda i, j: ds[i] <= ds[j], payload=ds)
    table = []
    for X in ds:
        row = []
        for Y in ds:
            Z = frozenset(z for z in P.elements if all(P.app[z][x] is not None and P.app[z][x] in Y for x in X))
            try:
                row.append(lat.payload_index(Z))
            except KeyError:
                raise ValidationFailed("arrow value is not a downset", value=_set_name(P, sorted(Z))) from None
        table.append(row)
    s = validate_arrow(lat, table)
    candidate = frozenset(i for i, d in enumerate(ds) if d & P.filter)
    return _finish(s, candidate)


def _pers(P: ApplicativePoset) -> list[frozenset[tuple[int, int]]]:
    pts = list(iproduct(P.elements, repeat=2))
    out = []
    for mask in range(1 << len(pts)):
        R = frozenset(p for k, p in enumerate(pts) if mask >> k & 1)
        if any((y, x) not in R for x, y in R):
            continue
        if any((x, z) not in R for x, y in R for y2, z in R if y == y2):
            continue
        if any((u, v) not in R for x, y in R for u in P.elements for v in P.elements if P.leq[u][x] and P.leq[v][y]):
            continue
        out.append(R)
    return sorted(out, key=lambda r: (len(r), sorted(r)))


def per_closure(R: frozenset[tuple[int, int]]) -> frozenset[tuple[int, int]]:
    """Transitive closure of a relation."""
    out = set(R)
    changed = True
    while changed:
        changed = False
        for x, y in list(out):
            for y2, z in list(out):
                if y == y2 and (x, z) not in out:
                    out.add((x, z))
                    changed = True
    return frozenset(out)


def per_algebra(P: ApplicativePoset) -> ConstructedAlgebra:
    """Downward-closed PERs on P under inclusion with the realizability arrow."""
    if P.size > caps().per_points:
        raise CarrierCapExceeded(f"|P| = {P.size} exceeds PER cap {caps().per_points}", size=P.size)
    rs = _pers(P)

    def name(R):
        return "{" + ",".join(f"({P.names[x]},{P.names[y]})" for x, y in sorted(R)) + "}"

    lat = lattice_from_leq([name(R) for R in rs], lambda i, j: rs[i] <= rs[j], payload=rs)
    app = P.app
    table = []
    for R in rs:
        row = []
        for S in rs:
            Z = frozenset(
                (x, x2)
                for x in P.elements
                for x2 in P.elements
                if all(
                    app[x][y] is not None and app[x2][y2] is not None and (app[x][y], app[x2][y2]) in S
                    for y, y2 in R
                )
            )
            try:
                row.append(lat.payload_index(Z))
            except KeyError:
                raise ValidationFailed("arrow value is not a downward-closed PER", value=name(Z)) from None
        table.append(row)
    s = validate_arrow(lat, table)
    fil = P.filter
    candidate = frozenset(i for i, R in enumerate(rs) if any(x in fil and y in fil for x, y in R))
    return _finish(s, candidate)
