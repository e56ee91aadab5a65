"""Standard small lattices, algebras, formulas and terms used by checks and tests."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import permutations

from .arrow import heyting_arrow
from .constructions import downset_algebra, modification, per_algebra, sierpinski
from .lattice import Lattice, chain, lattice_from_pairs
from .pca import enumerate_applicative_posets
from .separator import ArrowAlgebra, validate_separator
from .terms import App, Term, Var, app, lam


def c3() -> Lattice:
    return chain(3, ["bot", "half", "top"])


def b2() -> Lattice:
    return chain(2, ["bot", "top"])


def diamond() -> Lattice:
    """``B2 x B2``: bottom, two atoms, top."""
    return lattice_from_pairs(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


def m3() -> Lattice:
    """The non-distributive diamond with three atoms."""
    return lattice_from_pairs(
        ["bot", "a", "b", "c", "top"],
        [("bot", x) for x in "abc"] + [(x, "top") for x in "abc"],
    )


def locale(lat: Lattice, filter_names: list[str]) -> ArrowAlgebra:
    return validate_separator(heyting_arrow(lat), (lat.index(n) for n in filter_names))


@dataclass(frozen=True)
class Entry:
    name: str
    algebra: ArrowAlgebra
    kind: str  # locale, downset, per, sierpinski, modification

    @property
    def is_locale(self) -> bool:
        return self.kind == "locale"


def locales() -> list[Entry]:
    return [
        Entry("B2/top", locale(b2(), ["top"]), "locale"),
        Entry("C3/top", locale(c3(), ["top"]), "locale"),
        Entry("C3/half", locale(c3(), ["half", "top"]), "locale"),
        Entry("D4/top", locale(diamond(), ["top"]), "locale"),
        Entry("D4/a", locale(diamond(), ["a", "top"]), "locale"),
    ]


def _algebra_key(alg: ArrowAlgebra) -> tuple:
    """Canonical form up to relabelling of the carrier."""
    n = alg.size
    lat = alg.lattice
    best = None
    for perm in permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        key = (
            tuple(lat.leq[perm[a]][perm[b]] for a in range(n) for b in range(n)),
            tuple(inv[alg.arr[perm[a]][perm[b]]] for a in range(n) for b in range(n)),
            tuple(perm[a] in alg.sep for a in range(n)),
        )
        if best is None or key < best:
            best = key
    return (n, best)


def applicative_entries(max_size: int = 2) -> list[Entry]:
    """Downset and PER algebras of every small applicative structure, deduplicated up to isomorphism."""
    seen: set = set()
    out = []
    for k, P in enumerate(enumerate_applicative_posets(max_size)):
        for kind, build in (("downset", downset_algebra), ("per", per_algebra)):
            alg = build(P).algebra
            key = _algebra_key(alg)
            if key in seen:
                continue
            seen.add(key)
            out.append(Entry(f"{kind}#{k}", alg, kind))
    return out


def constructed_entries() -> list[Entry]:
    out = []
    for name, lat in (("B2", b2()), ("C3", c3())):
        base = locale(lat, ["top"])
        out.append(Entry(f"sierpinski({name})", sierpinski(base), "sierpinski"))
        out.append(Entry(f"modification({name})", modification(base), "modification"))
    return out


@lru_cache(maxsize=None)
def _corpus() -> tuple[Entry, ...]:
    return tuple(locales() + applicative_entries(2) + constructed_entries())


def corpus() -> list[Entry]:
    """The full acceptance corpus, built once per process."""
    return list(_corpus())


# ---------------------------------------------------------------- formulas

TAUTOLOGIES: tuple[tuple[str, str], ...] = (
    ("K", "p -> q -> p"),
    ("S", "(p -> q -> r) -> (p -> q) -> p -> r"),
    ("I", "p -> p"),
    ("B", "(q -> r) -> (p -> q) -> p -> r"),
    ("C", "(p -> q -> r) -> q -> p -> r"),
    ("W", "(p -> p -> q) -> p -> q"),
    ("transitivity", "(p -> q) -> (q -> r) -> p -> r"),
    ("B'", "(p -> q) -> (q -> r) -> (p -> r)"),
    ("KI", "p -> q -> q"),
    ("mp", "p -> (p -> q) -> q"),
    ("twice", "(p -> p) -> p -> p"),
    ("lift", "(p -> q) -> (r -> p) -> r -> q"),
    ("distribute", "(p -> q -> r) -> (p -> q) -> (p -> r)"),
    ("weaken", "(p -> r) -> p -> q -> r"),
    ("permute3", "(p -> q -> r -> s) -> r -> q -> p -> s"),
    ("dneg_intro", "p -> (p -> q) -> q"),
    ("triple", "((((p -> q) -> q) -> q) -> (p -> q))"),
    ("contract2", "(p -> q -> p -> r) -> p -> q -> r"),
    ("frege", "(p -> q) -> (p -> q -> r) -> p -> r"),
    ("curry_id", "((p -> q) -> r) -> (p -> q) -> r"),
)

PEIRCE = "((p -> q) -> p) -> p"


# ---------------------------------------------------------------- closed lambda terms


def _v(n: str) -> Var:
    return Var(n)


def closed_terms() -> dict[str, Term]:
    x, y, z, f = _v("x"), _v("y"), _v("z"), _v("f")
    return {
        "I": lam("x", x),
        "K": lam("x y", x),
        "S": lam("x y z", app(x, z, App(y, z))),
        "B": lam("x y z", App(x, App(y, z))),
        "C": lam("x y z", app(x, z, y)),
        "pair": lam("x y z", app(z, x, y)),
        "church0": lam("f x", x),
        "church1": lam("f x", App(f, x)),
        "church2": lam("f x", App(f, App(f, x))),
        "self_apply": lam("x", App(x, x)),
        "KI": lam("x y", y),
        "W": lam("x y", app(x, y, y)),
    }
