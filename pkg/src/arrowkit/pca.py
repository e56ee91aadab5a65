"""Partial applicative posets and the lambda-term applicative structure.

The term model uses lambda terms over variables and the constants ``K`` and
``S``, which abbreviate ``\\x y. x`` and ``\\x y z. x z (y z)``.  Terms are
compared up to renaming of bound variables through a nameless (de Bruijn)
form.  Reduction is semi-decidable, so :func:`beta_reduces` answers either
``yes`` or ``no-within-fuel``; it never answers a definite no.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import permutations, product
from typing import Iterable, Optional, Sequence

from .config import caps
from .constructions import ApplicativePoset
from .errors import AppNotMonotone, DomainNotDownClosed, FilterNotClosed, NotAPoset
from .lattice import _closure
from .terms import App, Atom, Lam, Term, Var, free_vars

# ---------------------------------------------------------------- applicative posets


def validate_applicative_poset(
    names: Sequence[str],
    leq: Sequence[Sequence[bool]],
    app: Sequence[Sequence[Optional[int]]],
    filter: Iterable[int] = (),
) -> ApplicativePoset:
    """Check the order, downward closed domain, monotone application and the filter."""
    n = len(names)
    if len(leq) != n or any(len(r) != n for r in leq) or len(app) != n or any(len(r) != n for r in app):
        raise NotAPoset("tables must be square and match the name list")
    ups = _closure(n, [sum(1 << b for b in range(n) if leq[a][b]) for a in range(n)])
    le = tuple(tuple(bool(ups[a] >> b & 1) for b in range(n)) for a in range(n))
    for a in range(n):
        for b in range(a + 1, n):
            if le[a][b] and le[b][a]:
                raise NotAPoset(f"{names[a]} and {names[b]} are mutually ordered", pair=(names[a], names[b]))
    table = tuple(tuple(None if v is None else int(v) for v in row) for row in app)
    for row in table:
        for v in row:
            if v is not None and not 0 <= v < n:
                raise NotAPoset(f"application value {v} outside the carrier")
    for a2 in range(n):
        for b2 in range(n):
            if table[a2][b2] is None:
                continue
            for a in range(n):
                for b in range(n):
                    if not (le[a][a2] and le[b][b2]):
                        continue
                    if table[a][b] is None:
                        raise DomainNotDownClosed(
                            f"{names[a2]}{names[b2]} is defined but {names[a]}{names[b]} is not",
                            defined=(names[a2], names[b2]),
                            undefined=(names[a], names[b]),
                        )
                    if not le[table[a][b]][table[a2][b2]]:
                        raise AppNotMonotone(
                            f"{names[a]}{names[b]} is not below {names[a2]}{names[b2]}",
                            lower=(names[a], names[b]),
                            upper=(names[a2], names[b2]),
                        )
    fil = frozenset(filter)
    for a in sorted(fil):
        for b in range(n):
            if le[a][b] and b not in fil:
                raise FilterNotClosed(f"filter not upward closed at {names[a]} <= {names[b]}", pair=(names[a], names[b]))
        for b in sorted(fil):
            v = table[a][b]
            if v is not None and v not in fil:
                raise FilterNotClosed(
                    f"{names[a]}{names[b]} = {names[v]} leaves the filter", pair=(names[a], names[b])
                )
    return ApplicativePoset(tuple(names), le, table, fil)


def _canonical(n: int, le, app, fil) -> tuple:
    best = None
    for perm in permutations(range(n)):
        inv = [0] * n
        for i, p in enumerate(perm):
            inv[p] = i
        key = (
            tuple(le[perm[a]][perm[b]] for a in range(n) for b in range(n)),
            tuple(
                -1 if app[perm[a]][perm[b]] is None else inv[app[perm[a]][perm[b]]]
                for a in range(n)
                for b in range(n)
            ),
            tuple(perm[a] in fil for a in range(n)),
        )
        if best is None or key < best:
            best = key
    return best


def _posets(n: int) -> list[tuple[tuple[bool, ...], ...]]:
    pairs = [(a, b) for a in range(n) for b in range(n) if a != b]
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        le = [[a == b for b in range(n)] for a in range(n)]
        for k, (a, b) in enumerate(pairs):
            if mask >> k & 1:
                le[a][b] = True
        if any(le[a][b] and le[b][a] for a, b in pairs):
            continue
        if any(le[a][b] and le[b][c] and not le[a][c] for a in range(n) for b in range(n) for c in range(n)):
            continue
        t = tuple(map(tuple, le))
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def enumerate_applicative_posets(max_size: int, with_filters: bool = True) -> list[ApplicativePoset]:
    """All partial applicative structures with at most ``max_size`` elements, up to isomorphism.

    Order of the result is deterministic: by size, then by canonical form.
    When ``with_filters`` is false only the absolute filter (everything) is used.
    """
    bound = caps().search_poset
    if max_size > bound:
        raise ValueError(f"poset size {max_size} exceeds search cap {bound}")
    found: dict[tuple, ApplicativePoset] = {}
    for n in range(1, max_size + 1):
        names = [f"p{i}" for i in range(n)]
        for le in _posets(n):
            for values in product([None, *range(n)], repeat=n * n):
                app = [list(values[a * n:(a + 1) * n]) for a in range(n)]
                try:
                    base = validate_applicative_poset(names, le, app, range(n))
                except (DomainNotDownClosed, AppNotMonotone, FilterNotClosed):
                    continue
                fils = range(1 << n) if with_filters else [(1 << n) - 1]
                for fm in fils:
                    fil = frozenset(i for i in range(n) if fm >> i & 1)
                    try:
                        P = validate_applicative_poset(names, le, base.app, fil)
                    except FilterNotClosed:
                        continue
                    key = (n, _canonical(n, le, P.app, fil))
                    if key not in found:
                        found[key] = P
    return [found[k] for k in sorted(found, key=lambda k: (k[0], repr(k[1])))]


# ---------------------------------------------------------------- nameless terms
#
# ("v", i)      bound variable, de Bruijn index
# ("f", name)   free variable
# ("c", name)   constant K or S
# ("a", f, x)   application
# ("l", body)   abstraction

PCA_CONSTS = ("K", "S")


def to_nameless(t: Term, bound: tuple[str, ...] = ()) -> tuple:
    if isinstance(t, Var):
        if t.name in bound:
            return ("v", bound.index(t.name))
        return ("f", t.name)
    if isinstance(t, Atom):
        if t.name not in PCA_CONSTS:
            raise ValueError(f"constant {t.name!r} is not part of the term model")
        return ("c", t.name)
    if isinstance(t, App):
        return ("a", to_nameless(t.fn, bound), to_nameless(t.arg, bound))
    if isinstance(t, Lam):
        return ("l", to_nameless(t.body, (t.var, *bound)))
    raise ValueError(f"not a term-model term: {t!r}")


def from_nameless(t: tuple, depth: int = 0, used: frozenset[str] | None = None) -> Term:
    if used is None:
        used = frozenset(_free_names(t))
    tag = t[0]
    if tag == "v":
        return Var(_binder(depth - 1 - t[1], used))
    if tag == "f":
        return Var(t[1])
    if tag == "c":
        return Atom(t[1])
    if tag == "a":
        return App(from_nameless(t[1], depth, used), from_nameless(t[2], depth, used))
    return Lam(_binder(depth, used), from_nameless(t[1], depth + 1, used))


def _binder(level: int, used: frozenset[str]) -> str:
    base = "xyzuvw"
    name = base[level % 6] + (str(level // 6) if level >= 6 else "")
    while name in used:
        name += "'"
    return name


def _free_names(t: tuple) -> set[str]:
    tag = t[0]
    if tag == "f":
        return {t[1]}
    if tag == "a":
        return _free_names(t[1]) | _free_names(t[2])
    if tag == "l":
        return _free_names(t[1])
    return set()


def alpha_equal(m: Term, n: Term) -> bool:
    return to_nameless(m) == to_nameless(n)


_K = ("l", ("l", ("v", 1)))
_S = ("l", ("l", ("l", ("a", ("a", ("v", 2), ("v", 0)), ("a", ("v", 1), ("v", 0))))))


def expand(t: tuple) -> tuple:
    """Replace the constants by their lambda terms."""
    tag = t[0]
    if tag == "c":
        return _K if t[1] == "K" else _S
    if tag == "a":
        return ("a", expand(t[1]), expand(t[2]))
    if tag == "l":
        return ("l", expand(t[1]))
    return t


def _shift(t: tuple, d: int, cutoff: int = 0) -> tuple:
    tag = t[0]
    if tag == "v":
        return ("v", t[1] + d) if t[1] >= cutoff else t
    if tag == "a":
        return ("a", _shift(t[1], d, cutoff), _shift(t[2], d, cutoff))
    if tag == "l":
        return ("l", _shift(t[1], d, cutoff + 1))
    return t


def _subst(t: tuple, j: int, s: tuple) -> tuple:
    tag = t[0]
    if tag == "v":
        return s if t[1] == j else t
    if tag == "a":
        return ("a", _subst(t[1], j, s), _subst(t[2], j, s))
    if tag == "l":
        return ("l", _subst(t[1], j + 1, _shift(s, 1)))
    return t


def _beta(body: tuple, arg: tuple) -> tuple:
    return _shift(_subst(body, 0, _shift(arg, 1)), -1)


def _nodes(t: tuple) -> int:
    tag = t[0]
    if tag == "a":
        return 1 + _nodes(t[1]) + _nodes(t[2])
    if tag == "l":
        return 1 + _nodes(t[1])
    return 1


def _spine(t: tuple) -> tuple[tuple, list[tuple]]:
    args = []
    while t[0] == "a":
        args.append(t[2])
        t = t[1]
    args.reverse()
    return t, args


def _rebuild(head: tuple, args: Sequence[tuple]) -> tuple:
    for a in args:
        head = ("a", head, a)
    return head


def _head_step(t: tuple) -> tuple[tuple, int] | None:
    """One head step: a K/S rule (costing 2/3 beta steps) or a head beta redex."""
    head, args = _spine(t)
    if head[0] == "c":
        if head[1] == "K" and len(args) >= 2:
            return _rebuild(args[0], args[2:]), 2
        if head[1] == "S" and len(args) >= 3:
            x, y, z = args[:3]
            return _rebuild(("a", ("a", x, z), ("a", y, z)), args[3:]), 3
        return None
    if head[0] == "l" and args:
        return _rebuild(_beta(head[1], args[0]), args[1:]), 1
    return None


def _unfold(t: tuple) -> tuple[tuple, int] | None:
    """Turn an unsaturated ``K``/``S`` application into the abstraction it reduces to."""
    head, args = _spine(t)
    if head[0] != "c":
        return None
    if head[1] == "K" and len(args) == 1:
        return ("l", _shift(args[0], 1)), 1
    if head[1] == "S" and len(args) == 2:
        x, y = (_shift(a, 1) for a in args)
        return ("l", ("a", ("a", x, ("v", 0)), ("a", y, ("v", 0)))), 2
    if head[1] == "S" and len(args) == 1:
        x = _shift(args[0], 2)
        return ("l", ("l", ("a", ("a", x, ("v", 0)), ("a", ("v", 1), ("v", 0))))), 1
    if not args:
        return expand(head), 0
    return None


def _normal_step(t: tuple) -> tuple | None:
    """Leftmost-outermost beta step on a constant-free term."""
    if t[0] == "a":
        if t[1][0] == "l":
            return _beta(t[1][1], t[2])
        r = _normal_step(t[1])
        if r is not None:
            return ("a", r, t[2])
        r = _normal_step(t[2])
        if r is not None:
            return ("a", t[1], r)
        return None
    if t[0] == "l":
        r = _normal_step(t[1])
        return None if r is None else ("l", r)
    return None


def _all_steps(t: tuple) -> Iterable[tuple]:
    if t[0] == "a":
        if t[1][0] == "l":
            yield _beta(t[1][1], t[2])
        for r in _all_steps(t[1]):
            yield ("a", r, t[2])
        for r in _all_steps(t[2]):
            yield ("a", t[1], r)
    elif t[0] == "l":
        for r in _all_steps(t[1]):
            yield ("l", r)


class Reduction(enum.Enum):
    YES = "yes"
    NO_WITHIN_FUEL = "no-within-fuel"


@dataclass(frozen=True)
class ReductionResult:
    verdict: Reduction
    steps: int  # beta steps on the successful path (0 when inconclusive)
    strategy: str

    def __bool__(self) -> bool:
        return self.verdict is Reduction.YES


MAX_NODES = 200_000


class _OutOfFuel(Exception):
    pass


def _guided(cur: tuple, target: tuple, target_x: tuple, fuel: list[int]) -> tuple:
    """Reduce ``cur`` toward ``target`` by head steps, descending into matching spines.

    Returns the reduced term; success is judged by the caller.
    """
    while True:
        if expand(cur) == target_x:
            return cur
        h1, a1 = _spine(cur)
        h2, a2 = _spine(target)
        if len(a1) == len(a2) and (h1 == h2 or (h1[0] == "l" and h2[0] == "l" and not a1)):
            if h1[0] == "l" and not a1:
                return ("l", _guided(h1[1], h2[1], expand(h2[1]), fuel))
            if a1:
                new = [_guided(x, y, expand(y), fuel) for x, y in zip(a1, a2)]
                cur2 = _rebuild(h1, new)
                if expand(cur2) == target_x or _head_step(cur) is None:
                    return cur2
                # the spines lined up by accident; keep reducing the head instead
        step = _head_step(cur)
        if step is None and h2[0] == "l" and not a2:
            step = _unfold(cur)
        if step is None:
            return cur
        cur, cost = step
        fuel[0] -= cost
        if fuel[0] < 0 or _nodes(cur) > MAX_NODES:
            raise _OutOfFuel


def beta_reduces(m: Term, n: Term, fuel: int = 10_000) -> ReductionResult:
    """Does ``m`` reduce to ``n`` in finitely many beta steps?

    Three strategies run in turn, each with the full fuel: a target-guided
    head reduction that treats ``K``/``S`` rules as the 2/3 beta steps they
    abbreviate, leftmost-outermost reduction of the expanded term, and a
    breadth-first search of all reducts (at most ``fuel`` terms visited).
    """
    if fuel <= 0:
        raise ValueError("fuel must be positive")
    mt, nt = to_nameless(m), to_nameless(n)
    mx, nx = expand(mt), expand(nt)
    if mx == nx:
        return ReductionResult(Reduction.YES, 0, "identity")

    budget = [fuel]
    try:
        got = _guided(mt, nt, nx, budget)
        if expand(got) == nx:
            return ReductionResult(Reduction.YES, fuel - budget[0], "guided")
    except _OutOfFuel:
        pass

    cur = mx
    for k in range(1, fuel + 1):
        cur = _normal_step(cur)
        if cur is None or _nodes(cur) > MAX_NODES:
            break
        if cur == nx:
            return ReductionResult(Reduction.YES, k, "normal-order")

    seen = {mx}
    queue = deque([(mx, 0)])
    visited = 0
    while queue and visited < fuel:
        t, d = queue.popleft()
        visited += 1
        if d >= fuel:
            continue
        for r in _all_steps(t):
            if r == nx:
                return ReductionResult(Reduction.YES, d + 1, "breadth-first")
            if r not in seen and _nodes(r) <= MAX_NODES:
                seen.add(r)
                queue.append((r, d + 1))
    return ReductionResult(Reduction.NO_WITHIN_FUEL, 0, "exhausted")


# ---------------------------------------------------------------- combinatory completeness

K = Atom("K")
S = Atom("S")


def _star1(x: str, t: Term) -> Term:
    if isinstance(t, Var) and t.name == x:
        return App(App(S, K), K)
    if isinstance(t, App):
        return App(App(S, _star1(x, t.fn)), _star1(x, t.arg))
    if isinstance(t, Lam):
        return _star1(x, lambda_star([t.var], t.body))
    return App(K, t)


def lambda_star(vars: Sequence[str], t: Term) -> Term:
    """Bracket abstraction with ``K`` and ``S``; inner abstractions are compiled first.

    ``lambda_star([x1, ..., xn], t)`` abstracts ``xn`` first, so the result
    applied to ``a1 ... an`` reduces to ``t[a1/x1, ..., an/xn]``.
    """
    if isinstance(t, Lam):
        t = lambda_star([t.var], t.body)
    elif isinstance(t, App):
        t = App(_compile(t.fn), _compile(t.arg))
    for v in reversed(list(vars)):
        t = _star1(v, t)
    return t


def _compile(t: Term) -> Term:
    if isinstance(t, Lam):
        return lambda_star([t.var], t.body)
    if isinstance(t, App):
        return App(_compile(t.fn), _compile(t.arg))
    return t


def substitute(t: Term, env: dict[str, Term]) -> Term:
    """Capture-avoiding substitution of closed terms for free variables."""
    for v, s in env.items():
        if free_vars(s):
            raise ValueError(f"substituted term for {v} must be closed")
    return _sub(t, env)


def _sub(t: Term, env: dict[str, Term]) -> Term:
    if isinstance(t, Var):
        return env.get(t.name, t)
    if isinstance(t, App):
        return App(_sub(t.fn, env), _sub(t.arg, env))
    if isinstance(t, Lam):
        inner = {k: v for k, v in env.items() if k != t.var}
        return Lam(t.var, _sub(t.body, inner))
    return t


@dataclass(frozen=True)
class CompletenessCase:
    """One instance of the combinatory completeness statement."""

    vars: tuple[str, ...]
    last: str
    body: Term
    args: tuple[Term, ...]
    final: Term
    partial_ok: Reduction
    full_ok: Reduction


def check_completeness(
    vars: Sequence[str], last: str, body: Term, args: Sequence[Term], final: Term, fuel: int = 10_000
) -> CompletenessCase:
    """Check ``(L a1..an) -> lambda*y.t[a/x]`` and ``(L a1..an) b -> t[a/x, b/y]``.

    Here ``L = lambda_star(vars + [last], body)``.  The first statement is
    the definedness clause (every application is a term in the total model);
    the second is the computation clause.
    """
    lam_all = lambda_star([*vars, last], body)
    env = dict(zip(vars, args))
    partial_app = _apply_all(lam_all, args)
    partial_target = substitute(lambda_star([last], _compile(body)), env)
    full_app = App(partial_app, final)
    full_target = substitute(body, {**env, last: final})
    r1 = beta_reduces(partial_app, partial_target, fuel)
    r2 = beta_reduces(full_app, full_target, fuel)
    return CompletenessCase(tuple(vars), last, body, tuple(args), final, r1.verdict, r2.verdict)


def _apply_all(t: Term, args: Iterable[Term]) -> Term:
    for a in args:
        t = App(t, a)
    return t


# ---------------------------------------------------------------- the fixed sample

_TEMPLATES: tuple[tuple[tuple[str, ...], str, Term], ...] = (
    (("x",), "y", Var("x")),
    (("x",), "y", Var("y")),
    (("x",), "y", App(Var("y"), Var("x"))),
    (("x",), "y", App(Var("x"), Var("y"))),
    (("x", "z"), "y", App(App(Var("x"), Var("y")), App(Var("z"), Var("y")))),
    (("x", "z"), "y", App(Var("x"), App(Var("z"), Var("y")))),
    (("u", "v"), "w", App(App(Var("u"), Var("v")), Var("w"))),
    ((), "y", App(App(K, Var("y")), Var("y"))),
    (("x",), "y", Lam("z", App(App(Var("z"), Var("x")), Var("y")))),
    (("x", "z"), "y", App(App(S, Var("x")), App(Var("z"), Var("y")))),
)


def sample_terms() -> list[Term]:
    """Thirty closed terms of the term model, fixed once and for all."""
    x, y, z, f = Var("x"), Var("y"), Var("z"), Var("f")
    ident = Lam("x", x)
    skk = App(App(S, K), K)
    church = [Lam("f", Lam("x", _iterate(f, x, k))) for k in range(4)]
    omega = Lam("x", App(x, x))
    out: list[Term] = [
        K,
        S,
        ident,
        skk,
        App(K, K),
        App(K, S),
        App(S, K),
        App(App(S, K), S),
        App(K, ident),
        App(S, App(K, ident)),
        Lam("x", Lam("y", x)),
        App(K, App(K, K)),
        Lam("x", Lam("y", Lam("z", App(App(x, z), App(y, z))))),
        Lam("x", Lam("y", Lam("z", App(x, App(y, z))))),
        Lam("x", Lam("y", Lam("z", App(App(x, z), y)))),
        Lam("x", Lam("y", Lam("z", App(App(z, x), y)))),
        *church,
        omega,
        App(omega, K),
        Lam("x", App(App(x, K), S)),
        App(ident, ident),
        App(App(K, ident), S),
        App(Lam("x", Lam("y", App(y, x))), K),
        Lam("f", Lam("x", App(f, App(f, App(f, App(f, x)))))),
        App(App(S, S), K),
        Lam("x", App(App(S, x), x)),
        Lam("x", Lam("y", Lam("z", App(App(App(x, y), z), z)))),
    ]
    assert len(out) == 30 and not any(free_vars(t) for t in out)
    return out


def _iterate(f: Term, x: Term, k: int) -> Term:
    for _ in range(k):
        x = App(f, x)
    return x


def completeness_sample(fuel: int = 10_000) -> list[CompletenessCase]:
    """Both completeness clauses, once per sample term, cycling through fixed templates."""
    terms = sample_terms()
    n = len(terms)
    out = []
    for i in range(n):
        vars_, last, body = _TEMPLATES[i % len(_TEMPLATES)]
        args = [terms[(i + 1 + 3 * k) % n] for k in range(len(vars_))] if vars_ else []
        if vars_:
            args[0] = terms[i]
            final = terms[(i + 7) % n]
        else:
            final = terms[i]
        out.append(check_completeness(vars_, last, body, args, final, fuel))
    return out
