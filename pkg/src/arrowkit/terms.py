"""Application, abstraction and term interpretation inside an arrow structure.

Terms are immutable trees.  A lambda term uses ``Var``, ``Const``, ``App`` and
``Lam``; a combinatory term replaces ``Lam`` by the atoms ``i'``, ``k'``,
``s'`` and ``eta``.  The pca layer reuses the same nodes with the atoms
``K`` and ``S``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Union

from .arrow import ArrowStructure
from .errors import UnboundVariable

COMB_ATOMS = ("i'", "k'", "s'", "eta")
PCA_ATOMS = ("K", "S")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    """An algebra element, by carrier index."""

    value: int


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"


@dataclass(frozen=True)
class Lam:
    var: str
    body: "Term"


Term = Union[Var, Const, Atom, App, Lam]
Env = Mapping[str, int]

I_PRIME, K_PRIME, S_PRIME, ETA = (Atom(n) for n in COMB_ATOMS)


def app(*terms: Term) -> Term:
    """Left-associated application ``t0 t1 ... tn``."""
    out = terms[0]
    for t in terms[1:]:
        out = App(out, t)
    return out


def lam(names: str | Iterable[str], body: Term) -> Term:
    vs = names.split() if isinstance(names, str) else list(names)
    for v in reversed(vs):
        body = Lam(v, body)
    return body


def free_vars(t: Term) -> frozenset[str]:
    if isinstance(t, Var):
        return frozenset([t.name])
    if isinstance(t, App):
        return free_vars(t.fn) | free_vars(t.arg)
    if isinstance(t, Lam):
        return free_vars(t.body) - {t.var}
    return frozenset()


def is_combinatory(t: Term) -> bool:
    if isinstance(t, Lam):
        return False
    if isinstance(t, App):
        return is_combinatory(t.fn) and is_combinatory(t.arg)
    if isinstance(t, Atom):
        return t.name in COMB_ATOMS
    return True


def size(t: Term) -> int:
    if isinstance(t, App):
        return 1 + size(t.fn) + size(t.arg)
    if isinstance(t, Lam):
        return 1 + size(t.body)
    return 1


# ---------------------------------------------------------------- operations


def application_table(s: ArrowStructure) -> tuple[tuple[int, ...], ...]:
    """``ab`` = meet of the implication values ``v`` with ``a <= b -> v``."""

    def build():
        lat = s.lattice
        vals = s.values
        return tuple(
            tuple(lat.meet_set(v for v in vals if lat.leq[a][s.arr[b][v]]) for b in s.elements)
            for a in s.elements
        )

    return s.cached("app", build)


def apply(s: ArrowStructure, a: int, b: int) -> int:
    return application_table(s)[a][b]


def partial(s: ArrowStructure, a: int) -> int:
    return s.arr[s.top][a]


def partial_table(s: ArrowStructure) -> tuple[int, ...]:
    return s.cached("partial", lambda: tuple(s.arr[s.top][a] for a in s.elements))


def abstract(s: ArrowStructure, f: Callable[[int], int] | Mapping[int, int] | tuple) -> int:
    """``lambda f`` = meet over x of ``x -> partial(f(x))``."""
    fn = f if callable(f) else f.__getitem__
    pt = partial_table(s)
    return s.lattice.meet_set(s.arr[x][pt[fn(x)]] for x in s.elements)


def is_regular(s: ArrowStructure, a: int) -> bool:
    """``a`` equals the meet of the implications above it."""
    lat = s.lattice
    return a == lat.meet_set(v for v in s.values if lat.leq[a][v])


def _check_env(t: Term, env: Env) -> None:
    missing = sorted(free_vars(t) - set(env))
    if missing:
        raise UnboundVariable(f"unbound variable {missing[0]}", name=missing[0])


def interpret_lambda(s: ArrowStructure, t: Term, env: Env | None = None) -> int:
    env = dict(env or {})
    _check_env(t, env)
    table = application_table(s)
    pt = partial_table(s)
    lat = s.lattice
    elements = list(s.elements)

    def ev(t: Term, env: dict[str, int]) -> int:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return t.value
        if isinstance(t, App):
            return table[ev(t.fn, env)][ev(t.arg, env)]
        if isinstance(t, Lam):
            acc = lat.top
            for x in elements:
                inner = dict(env)
                inner[t.var] = x
                acc = lat.meet2[acc][s.arr[x][pt[ev(t.body, inner)]]]
            return acc
        raise TypeError(f"not a lambda term: {t!r}")

    return ev(t, env)


def interpret_comb(s: ArrowStructure, t: Term, env: Env | None = None) -> int:
    from .separator import combinator_ugly

    env = dict(env or {})
    _check_env(t, env)
    if not is_combinatory(t):
        raise TypeError("combinatory terms contain no abstraction")
    ugly = combinator_ugly(s)
    atoms = {"i'": ugly.i_prime, "k'": ugly.k_prime, "s'": ugly.s_prime, "eta": ugly.eta}
    table = application_table(s)

    def ev(t: Term) -> int:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Const):
            return t.value
        if isinstance(t, Atom):
            return atoms[t.name]
        return table[ev(t.fn)][ev(t.arg)]

    return ev(t)


def bracket(x: str, t: Term) -> Term:
    """Combinatory abstraction of ``x`` from a combinatory term."""
    if t == Var(x):
        return I_PRIME
    if isinstance(t, App):
        return App(App(S_PRIME, bracket(x, t.fn)), bracket(x, t.arg))
    if isinstance(t, Lam):
        raise TypeError("bracket abstraction needs a combinatory term")
    return App(K_PRIME, t)


def translate(t: Term) -> Term:
    """Lambda term to combinatory term: abstraction becomes ``eta`` of a bracket."""
    if isinstance(t, App):
        return App(translate(t.fn), translate(t.arg))
    if isinstance(t, Lam):
        return App(ETA, bracket(t.var, translate(t.body)))
    return t
