"""Finite-index triposes of an arrow algebra.

A predicate on a finite index set ``I`` is a tuple of carrier elements.  The
fiber over ``I`` is preordered by ``alpha |- beta`` iff the meet of
``alpha_i -> beta_i`` lies in the separator.  Reindexing, the quantifiers,
Beck-Chevalley, the subtriposes induced by a nucleus, and the evidenced
frame of the algebra are all exposed at fiber level.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterator, Sequence

import numpy as np

from .config import caps
from .errors import AdjunctionViolated, AxiomFailed, BCViolated, IndexMismatch
from .heyting import plus_table, times_table
from .laws import LawReport, Scan
from .lattice import subsets
from .nucleus import Nucleus
from .separator import ArrowAlgebra
from .terms import Const, Var, app, application_table, interpret_lambda, lam, partial_table


@dataclass(frozen=True)
class Pred:
    index: tuple[str, ...]
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.index) != len(self.values):
            raise IndexMismatch("a predicate needs one value per index label")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class IndexMap:
    source: tuple[str, ...]
    target: tuple[str, ...]
    table: tuple[int, ...]  # source position -> target position

    def __post_init__(self) -> None:
        if len(self.table) != len(self.source) or any(not 0 <= t < len(self.target) for t in self.table):
            raise IndexMismatch("index map must be a total function between the index sets")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def fiber(self, j: int) -> list[int]:
        return [i for i, t in enumerate(self.table) if t == j]

    @classmethod
    def from_dict(cls, source: Sequence[str], target: Sequence[str], mapping: dict[str, str]) -> "IndexMap":
        tpos = {t: k for k, t in enumerate(target)}
        missing = [s for s in source if s not in mapping]
        if missing:
            raise IndexMismatch(f"index map undefined at {missing[0]}", label=missing[0])
        try:
            return cls(tuple(source), tuple(target), tuple(tpos[mapping[s]] for s in source))
        except KeyError as exc:
            raise IndexMismatch(f"index map value {exc.args[0]} not in target") from None


def labels(n: int, prefix: str = "i") -> tuple[str, ...]:
    return tuple(f"{prefix}{k}" for k in range(n))


def identity_map(index: Sequence[str]) -> IndexMap:
    return IndexMap(tuple(index), tuple(index), tuple(range(len(index))))


def compose(f: IndexMap, g: IndexMap) -> IndexMap:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise IndexMismatch("maps do not compose")
    return IndexMap(f.source, g.target, tuple(g.table[t] for t in f.table))


def all_maps(n: int, m: int) -> Iterator[IndexMap]:
    src, tgt = labels(n, "i"), labels(m, "j")
    for table in product(range(m), repeat=n):
        yield IndexMap(src, tgt, table)


def all_preds(alg: ArrowAlgebra, index: Sequence[str]) -> Iterator[Pred]:
    for vals in product(alg.elements, repeat=len(index)):
        yield Pred(tuple(index), vals)


# ---------------------------------------------------------------- fiber operations


def fiber_entails(alg: ArrowAlgebra, alpha: Pred, beta: Pred) -> bool:
    if alpha.index != beta.index:
        raise IndexMismatch("predicates live on different index sets")
    lat, arr = alg.lattice, alg.arr
    return lat.meet_set(arr[a][b] for a, b in zip(alpha.values, beta.values)) in alg.sep


def fiber_equivalent(alg: ArrowAlgebra, alpha: Pred, beta: Pred) -> bool:
    return fiber_entails(alg, alpha, beta) and fiber_entails(alg, beta, alpha)


def reindex(f: IndexMap, beta: Pred) -> Pred:
    if beta.index != f.target:
        raise IndexMismatch("predicate is not indexed by the map's target")
    return Pred(f.source, tuple(beta.values[t] for t in f.table))


def forall_along(alg: ArrowAlgebra, f: IndexMap, alpha: Pred) -> Pred:
    """``(forall_f alpha)(j)`` = meet over ``f(i) = j`` of ``partial(alpha_i)``."""
    if alpha.index != f.source:
        raise IndexMismatch("predicate is not indexed by the map's source")
    pt = partial_table(alg.structure)
    lat = alg.lattice
    return Pred(f.target, tuple(lat.meet_set(pt[alpha.values[i]] for i in f.fiber(j)) for j in range(len(f.target))))


def exists_along(alg: ArrowAlgebra, f: IndexMap, alpha: Pred, fast: bool = False) -> Pred:
    """``(exists_f alpha)(j)`` = meet over c of ``(meet_{f(i)=j} alpha_i -> partial c) -> partial partial c``.

    With ``fast`` the join of the fiber values is returned instead; it is a
    valid choice only on algebras compatible with joins.
    """
    if alpha.index != f.source:
        raise IndexMismatch("predicate is not indexed by the map's source")
    lat = alg.lattice
    if fast:
        return Pred(f.target, tuple(lat.join_set(alpha.values[i] for i in f.fiber(j)) for j in range(len(f.target))))
    arr = alg.arr
    pt = partial_table(alg.structure)
    out = []
    for j in range(len(f.target)):
        vs = [alpha.values[i] for i in f.fiber(j)]
        out.append(
            lat.meet_set(arr[lat.meet_set(arr[v][pt[c]] for v in vs)][pt[pt[c]]] for c in alg.elements)
        )
    return Pred(f.target, tuple(out))


def pointwise(alg: ArrowAlgebra, fn: Callable[[int], int], alpha: Pred) -> Pred:
    return Pred(alpha.index, tuple(fn(a) for a in alpha.values))


def pointwise2(table, alpha: Pred, beta: Pred) -> Pred:
    if alpha.index != beta.index:
        raise IndexMismatch("predicates live on different index sets")
    return Pred(alpha.index, tuple(table[a][b] for a, b in zip(alpha.values, beta.values)))


# ---------------------------------------------------------------- vectorised checks


class _Tables:
    """numpy copies of the algebra tables for batched fiber computations."""

    def __init__(self, alg: ArrowAlgebra) -> None:
        self.arr = np.asarray(alg.arr, dtype=np.int32)
        self.meet = np.asarray(alg.lattice.meet2, dtype=np.int32)
        self.join = np.asarray(alg.lattice.join2, dtype=np.int32)
        self.partial = np.asarray(partial_table(alg.structure), dtype=np.int32)
        self.sep = np.asarray([a in alg.sep for a in alg.elements], dtype=bool)
        self.top = alg.top
        self.bot = alg.bot
        self.size = alg.size

    def meet_fold(self, cols: Sequence[np.ndarray], shape) -> np.ndarray:
        out = np.full(shape, self.top, dtype=np.int32)
        for c in cols:
            out = self.meet[out, c]
        return out

    def entails(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Row-wise fiber entailment for broadcastable value arrays (last axis = index)."""
        imp = self.arr[left, right]
        shape = imp.shape[:-1]
        return self.sep[self.meet_fold([imp[..., k] for k in range(imp.shape[-1])], shape)]

    def forall(self, f: IndexMap, alpha: np.ndarray) -> np.ndarray:
        n = alpha.shape[0]
        cols = []
        for j in range(len(f.target)):
            cols.append(self.meet_fold([self.partial[alpha[:, i]] for i in f.fiber(j)], (n,)))
        return np.stack(cols, axis=1) if cols else np.zeros((n, 0), dtype=np.int32)

    def exists(self, f: IndexMap, alpha: np.ndarray) -> np.ndarray:
        n = alpha.shape[0]
        pt = self.partial
        cols = []
        for j in range(len(f.target)):
            fib = f.fiber(j)
            acc = np.full((n,), self.top, dtype=np.int32)
            for c in range(self.size):
                inner = self.meet_fold([self.arr[alpha[:, i], pt[c]] for i in fib], (n,))
                acc = self.meet[acc, self.arr[inner, pt[pt[c]]]]
            cols.append(acc)
        return np.stack(cols, axis=1) if cols else np.zeros((n, 0), dtype=np.int32)


def _tables(alg: ArrowAlgebra) -> _Tables:
    t = alg._cache.get("np_tables")
    if t is None:
        t = alg._cache["np_tables"] = _Tables(alg)
    return t


def _grid(size: int, k: int) -> np.ndarray:
    if k == 0:
        return np.zeros((1, 0), dtype=np.int32)
    return np.asarray(list(product(range(size), repeat=k)), dtype=np.int32).reshape(-1, k)


def _pairs(alg: ArrowAlgebra, n: int, m: int) -> tuple[np.ndarray, np.ndarray, bool]:
    """All (alpha over n, beta over m) pairs, or a fixed-seed sample above the threshold."""
    c = caps()
    total = alg.size ** (n + m)
    if total <= c.pair_threshold:
        a, b = _grid(alg.size, n), _grid(alg.size, m)
        ia, ib = np.meshgrid(np.arange(len(a)), np.arange(len(b)), indexing="ij")
        return a[ia.ravel()], b[ib.ravel()], True
    rng = np.random.default_rng(c.sample_seed)
    a = rng.integers(0, alg.size, size=(c.sample_pairs, n), dtype=np.int32)
    b = rng.integers(0, alg.size, size=(c.sample_pairs, m), dtype=np.int32)
    return a, b, False


def _first(mask: np.ndarray) -> int | None:
    bad = np.flatnonzero(~mask)
    return int(bad[0]) if len(bad) else None


def _names(alg: ArrowAlgebra, row) -> list[str]:
    return [alg.lattice.names[int(x)] for x in row]


@dataclass
class CheckReport:
    report: LawReport
    exhaustive: bool
    pairs: int

    @property
    def ok(self) -> bool:
        return self.report.ok


def check_adjunctions(alg: ArrowAlgebra, f: IndexMap, raise_on_failure: bool = False) -> CheckReport:
    """``f* beta |- alpha <=> beta |- forall_f alpha`` and ``alpha |- f* beta <=> exists_f alpha |- beta``."""
    T = _tables(alg)
    n, m = len(f.source), len(f.target)
    alpha, beta, exhaustive = _pairs(alg, n, m)
    pulled = beta[:, list(f.table)] if n else np.zeros((len(beta), 0), dtype=np.int32)
    fa = T.forall(f, alpha)
    ex = T.exists(f, alpha)
    report = LawReport()
    for law, left, right in (
        ("forall", T.entails(pulled, alpha), T.entails(beta, fa)),
        ("exists", T.entails(alpha, pulled), T.entails(ex, beta)),
    ):
        k = _first(left == right)
        witness = None
        if k is not None:
            witness = {"alpha": _names(alg, alpha[k]), "beta": _names(alg, beta[k])}
        report.add(f"adjunction_{law}", k is None, witness, len(alpha))
    if raise_on_failure and not report.ok:
        bad = report.failures[0]
        raise AdjunctionViolated(f"{bad.law} fails", which=bad.law, **bad.witness)
    return CheckReport(report, exhaustive, len(alpha))


def pullback(g1: IndexMap, g2: IndexMap) -> tuple[IndexMap, IndexMap]:
    """Canonical pullback ``{(a, b) : g1(a) = g2(b)}`` with its two projections."""
    if g1.target != g2.target:
        raise IndexMismatch("maps must share a target")
    pairs = [(a, b) for a in range(len(g1.source)) for b in range(len(g2.source)) if g1.table[a] == g2.table[b]]
    names = tuple(f"({g1.source[a]},{g2.source[b]})" for a, b in pairs)
    return (
        IndexMap(names, g1.source, tuple(a for a, _ in pairs)),
        IndexMap(names, g2.source, tuple(b for _, b in pairs)),
    )


def check_beck_chevalley(alg: ArrowAlgebra, g1: IndexMap, g2: IndexMap, raise_on_failure: bool = False) -> CheckReport:
    """``g1* forall_{g2} alpha`` and ``forall_{p1} p2* alpha`` are fiber-equivalent (same for exists)."""
    T = _tables(alg)
    p1, p2 = pullback(g1, g2)
    c = caps()
    k = len(g2.source)
    if alg.size**k <= c.pair_threshold:
        alpha, exhaustive = _grid(alg.size, k), True
    else:
        rng = np.random.default_rng(c.sample_seed)
        alpha, exhaustive = rng.integers(0, alg.size, size=(c.sample_pairs, k), dtype=np.int32), False
    pulled = alpha[:, list(p2.table)] if len(p2.table) else np.zeros((len(alpha), 0), dtype=np.int32)
    g1cols = list(g1.table)
    report = LawReport()
    for law, quant in (("forall", T.forall), ("exists", T.exists)):
        left = quant(g2, alpha)
        left = left[:, g1cols] if g1cols else np.zeros((len(alpha), 0), dtype=np.int32)
        right = quant(p1, pulled)
        ok = T.entails(left, right) & T.entails(right, left)
        bad = _first(ok)
        report.add(
            f"beck_chevalley_{law}", bad is None, None if bad is None else {"alpha": _names(alg, alpha[bad])}, len(alpha)
        )
    if raise_on_failure and not report.ok:
        bad = report.failures[0]
        raise BCViolated(f"{bad.law} fails", which=bad.law, **bad.witness)
    return CheckReport(report, exhaustive, len(alpha))


def check_fast_exists(alg: ArrowAlgebra, f: IndexMap) -> CheckReport:
    """General and join-based existential quantifiers are fiber-equivalent."""
    T = _tables(alg)
    alpha = _grid(alg.size, len(f.source))
    general = T.exists(f, alpha)
    cols = []
    for j in range(len(f.target)):
        acc = np.full((len(alpha),), T.bot, dtype=np.int32)
        for i in f.fiber(j):
            acc = T.join[acc, alpha[:, i]]
        cols.append(acc)
    fast = np.stack(cols, axis=1) if cols else np.zeros((len(alpha), 0), dtype=np.int32)
    ok = T.entails(general, fast) & T.entails(fast, general)
    bad = _first(ok)
    report = LawReport()
    report.add("exists_join_form", bad is None, None if bad is None else {"alpha": _names(alg, alpha[bad])}, len(alpha))
    return CheckReport(report, True, len(alpha))


def check_functoriality(alg: ArrowAlgebra, f: IndexMap, g: IndexMap) -> bool:
    """Reindexing along ``g . f`` equals reindexing along ``g`` then ``f``."""
    gf = compose(f, g)
    return all(reindex(gf, b) == reindex(f, reindex(g, b)) for b in all_preds(alg, g.target))


def generic_element_check(alg: ArrowAlgebra, max_index: int = 3, generic: Sequence[int] | None = None) -> LawReport:
    """Every predicate is the reindexing of the generic element along itself.

    The generic element is the identity predicate on the carrier, or the
    supplied map (a nucleus) for restricted fibers.
    """
    carrier = tuple(alg.lattice.names)
    gen = Pred(carrier, tuple(alg.elements) if generic is None else tuple(generic))
    report = LawReport()
    scan = Scan(report, "generic_element")
    for n in range(max_index + 1):
        index = labels(n)
        for phi in all_preds(alg, index):
            classifier = IndexMap(index, carrier, phi.values)
            got = reindex(classifier, gen)
            scan.check(fiber_equivalent(alg, got, phi), phi=_names(alg, phi.values))
    scan.done()
    return report


def check_separator_inclusion(alg: ArrowAlgebra, max_index: int = 3) -> LawReport:
    """``S^I`` (meet in S) is contained in ``S_I`` (pointwise in S)."""
    lat = alg.lattice
    report = LawReport()
    scan = Scan(report, "meet_separator_in_pointwise")
    for n in range(max_index + 1):
        for vals in product(alg.elements, repeat=n):
            if lat.meet_set(vals) in alg.sep:
                scan.check(all(v in alg.sep for v in vals), phi=_names(alg, vals))
    scan.done()
    return report


# ---------------------------------------------------------------- subtriposes


class SubtriposPj:
    """Fibers of the tripos of the subalgebra ``A_j``: same predicates, changed consequence."""

    def __init__(self, j: Nucleus) -> None:
        self.j = j
        self.alg = j.base

    def entails(self, alpha: Pred, beta: Pred) -> bool:
        lat, arr, J = self.alg.lattice, self.alg.arr, self.j.map
        return lat.meet_set(arr[a][J[b]] for a, b in zip(alpha.values, beta.values)) in self.alg.sep

    def entails_via_subalgebra(self, alpha: Pred, beta: Pred) -> bool:
        """The same relation read off the subalgebra: ``j(meet a_i -> j b_i) in S``."""
        lat, arr, J = self.alg.lattice, self.alg.arr, self.j.map
        return J[lat.meet_set(arr[a][J[b]] for a, b in zip(alpha.values, beta.values))] in self.alg.sep

    def phi_lower(self, alpha: Pred) -> Pred:
        """``Phi_+``: from ``P_j`` to ``P``, postcompose with ``j``."""
        return Pred(alpha.index, tuple(self.j.map[a] for a in alpha.values))

    def phi_upper(self, alpha: Pred) -> Pred:
        """``Phi^+``: from ``P`` to ``P_j``, identity on values."""
        return alpha

    def check(self, max_index: int = 2) -> LawReport:
        alg = self.alg
        tt = times_table(alg)
        report = LawReport()
        s_def = Scan(report, "subalgebra_form")
        s_adj = Scan(report, "geometric_adjunction")
        s_ref = Scan(report, "phi_lower_preserves_reflects")
        s_top = Scan(report, "phi_upper_top")
        s_meet = Scan(report, "phi_upper_meets")
        for n in range(max_index + 1):
            preds = list(all_preds(alg, labels(n)))
            top = Pred(labels(n), (alg.top,) * n)
            for a in preds:
                s_top.check(self.entails(a, top), alpha=_names(alg, a.values))
                for b in preds:
                    w = {"alpha": _names(alg, a.values), "beta": _names(alg, b.values)}
                    e = self.entails(a, b)
                    s_def.check(e == self.entails_via_subalgebra(a, b), **w)
                    s_adj.check(e == fiber_entails(alg, a, self.phi_lower(b)), **w)
                    s_ref.check(e == fiber_entails(alg, self.phi_lower(a), self.phi_lower(b)), **w)
            if n <= 1:
                for g, a, b in product(preds, repeat=3):
                    ab = pointwise2(tt, a, b)
                    s_meet.check(
                        (self.entails(g, a) and self.entails(g, b)) == self.entails(g, ab),
                        gamma=_names(alg, g.values),
                        alpha=_names(alg, a.values),
                        beta=_names(alg, b.values),
                    )
        for s in (s_def, s_adj, s_ref, s_top, s_meet):
            s.done()
        return report


def subtripos_Pj(j: Nucleus) -> SubtriposPj:
    return SubtriposPj(j)


class SubtriposRestricted:
    """Fibers ``{alpha : j . alpha |- alpha}`` with the connectives of the ambient tripos.

    When ``j`` is idempotent the equality form ``j . alpha = alpha`` is also
    available through :meth:`members_fixed`.
    """

    def __init__(self, j: Nucleus) -> None:
        self.j = j
        self.alg = j.base
        self.idempotent = j.idempotent

    def contains(self, alpha: Pred) -> bool:
        return fiber_entails(self.alg, pointwise(self.alg, self.j, alpha), alpha)

    def members(self, index: Sequence[str]) -> list[Pred]:
        return [p for p in all_preds(self.alg, index) if self.contains(p)]

    def members_fixed(self, index: Sequence[str]) -> list[Pred]:
        if not self.idempotent:
            raise ValueError("the equality form needs an idempotent nucleus")
        return [p for p in all_preds(self.alg, index) if all(self.j.map[v] == v for v in p.values)]

    def entails(self, alpha: Pred, beta: Pred) -> bool:
        return fiber_entails(self.alg, alpha, beta)

    def imp(self, alpha: Pred, beta: Pred) -> Pred:
        return pointwise2(self.alg.arr, alpha, beta)

    def meet(self, alpha: Pred, beta: Pred) -> Pred:
        return pointwise2(times_table(self.alg), alpha, beta)

    def join(self, alpha: Pred, beta: Pred) -> Pred:
        return pointwise(self.alg, self.j, pointwise2(plus_table(self.alg), alpha, beta))

    def forall(self, f: IndexMap, alpha: Pred) -> Pred:
        return forall_along(self.alg, f, alpha)

    def exists(self, f: IndexMap, alpha: Pred) -> Pred:
        return pointwise(self.alg, self.j, exists_along(self.alg, f, alpha))

    @property
    def generic(self) -> tuple[int, ...]:
        return self.j.map

    def check(self, max_index: int = 2) -> LawReport:
        alg = self.alg
        pj = SubtriposPj(self.j)
        report = LawReport()
        s_rt1 = Scan(report, "round_trip_Pj")
        s_rt2 = Scan(report, "round_trip_restricted")
        s_fix = Scan(report, "fixed_form_equivalent")
        s_cl = Scan(report, "connectives_closed")
        s_imp = Scan(report, "implication")
        s_meet = Scan(report, "meet")
        s_join = Scan(report, "join")
        s_q = Scan(report, "quantifiers")
        s_gen = Scan(report, "generic_element")
        fibers = {}
        for n in range(max_index + 1):
            index = labels(n)
            preds = list(all_preds(alg, index))
            mem = [p for p in preds if self.contains(p)]
            fibers[n] = mem
            for a in preds:
                ja = pj.phi_lower(a)
                s_rt1.check(pj.entails(ja, a) and pj.entails(a, ja), alpha=_names(alg, a.values))
            for a in mem:
                ja = pointwise(alg, self.j, a)
                s_rt2.check(fiber_equivalent(alg, ja, a), alpha=_names(alg, a.values))
                s_gen.check(
                    fiber_equivalent(alg, reindex(IndexMap(index, tuple(alg.lattice.names), a.values), Pred(tuple(alg.lattice.names), self.generic)), a),
                    alpha=_names(alg, a.values),
                )
            if self.idempotent:
                fixed = self.members_fixed(index)
                # every member is equivalent to a fixed one, and fixed ones are members
                s_fix.check(all(self.contains(p) for p in fixed), index=n)
                for a in mem:
                    s_fix.check(any(fiber_equivalent(alg, a, p) for p in fixed), alpha=_names(alg, a.values))
            if n > 1:
                continue
            for a, b in product(mem, repeat=2):
                w = {"alpha": _names(alg, a.values), "beta": _names(alg, b.values)}
                imp, mt, jn = self.imp(a, b), self.meet(a, b), self.join(a, b)
                s_cl.check(self.contains(imp) and self.contains(mt) and self.contains(jn), **w)
                s_join.check(self.entails(a, jn) and self.entails(b, jn), **w)
                s_meet.check(self.entails(mt, a) and self.entails(mt, b), **w)
                for g in mem:
                    w3 = {**w, "gamma": _names(alg, g.values)}
                    s_imp.check(self.entails(self.meet(g, a), b) == self.entails(g, imp), **w3)
                    s_meet.check((self.entails(g, a) and self.entails(g, b)) == self.entails(g, mt), **w3)
                    s_join.check((self.entails(a, g) and self.entails(b, g)) == self.entails(jn, g), **w3)
        for n in range(max_index + 1):
            for m in range(max_index + 1):
                for f in all_maps(n, m):
                    for a in fibers[n]:
                        a = Pred(f.source, a.values)
                        fa, ea = self.forall(f, a), self.exists(f, a)
                        s_cl.check(self.contains(fa) and self.contains(ea), alpha=_names(alg, a.values), map=list(f.table))
                        for b in fibers[m]:
                            b = Pred(f.target, b.values)
                            fb = reindex(f, b)
                            w = {"alpha": _names(alg, a.values), "beta": _names(alg, b.values), "map": list(f.table)}
                            s_q.check(self.entails(fb, a) == self.entails(b, fa), **w)
                            s_q.check(self.entails(a, fb) == self.entails(ea, b), **w)
        for s in (s_rt1, s_rt2, s_fix, s_cl, s_imp, s_meet, s_join, s_q, s_gen):
            s.done()
        return report


def subtripos_Pj_restricted(j: Nucleus) -> SubtriposRestricted:
    return SubtriposRestricted(j)


# ---------------------------------------------------------------- evidenced frame


@dataclass
class EvidencedFrame:
    """Propositions = carrier, evidence = separator, ``a ->^s b`` iff ``s <= a -> partial b``."""

    algebra: ArrowAlgebra
    e_id: int
    m: int
    e_top: int
    e_fst: int
    e_snd: int
    e_eval: int

    def relates(self, a: int, s: int, b: int) -> bool:
        alg = self.algebra
        return alg.lattice.leq[s][alg.arr[a][partial_table(alg.structure)[b]]]

    def conj(self, a: int, b: int) -> int:
        return times_table(self.algebra)[a][b]

    def implies(self, a: int, psis: Sequence[int]) -> int:
        alg = self.algebra
        pt = partial_table(alg.structure)
        return alg.arr[a][alg.lattice.meet_set(pt[p] for p in psis)]

    def seq(self, e: int, e2: int) -> int:
        ap = application_table(self.algebra.structure)
        return ap[ap[self.m][e]][e2]

    def pair(self, e1: int, e2: int) -> int:
        """``lambda z w. w (e1 z) (e2 z)`` interpreted in the algebra."""
        key = ("pair", e1, e2)
        cache = self.algebra._cache
        if key not in cache:
            z, w = Var("z"), Var("w")
            t = lam("z w", app(w, app(Const(e1), z), app(Const(e2), z)))
            cache[key] = interpret_lambda(self.algebra.structure, t)
        return cache[key]

    def lam(self, e: int) -> int:
        """Least evidence of ``phi1 ->^. phi2 > psis`` over all triples the hypothesis admits."""
        alg = self.algebra
        lat, arr = alg.lattice, alg.arr
        pt = partial_table(alg.structure)
        tt = times_table(alg)
        acc = lat.top
        for p1 in alg.elements:
            for p2 in alg.elements:
                row = arr[tt[p1][p2]]
                allowed = [psi for psi in alg.elements if lat.leq[e][row[pt[psi]]]]
                acc = lat.meet2[acc][arr[p1][pt[self.implies(p2, allowed)]]]
        return acc

    def evidence(self) -> dict[str, str]:
        n = self.algebra.lattice.names
        return {k: n[getattr(self, k)] for k in ("e_id", "m", "e_top", "e_fst", "e_snd", "e_eval")}


def evidenced_frame(alg: ArrowAlgebra) -> EvidencedFrame:
    s = alg.structure
    lat, arr = alg.lattice, alg.arr
    pt = partial_table(s)
    tt = times_table(alg)
    els = list(alg.elements)
    e_id = lat.meet_set(arr[a][pt[a]] for a in els)
    m = lat.meet_set(
        arr[arr[a][pt[b]]][arr[arr[b][pt[c]]][arr[a][pt[c]]]] for a in els for b in els for c in els
    )
    e_top = lat.meet_set(arr[a][pt[lat.top]] for a in els)
    e_fst = lat.meet_set(arr[tt[a][b]][pt[a]] for a in els for b in els)
    e_snd = lat.meet_set(arr[tt[a][b]][pt[b]] for a in els for b in els)
    e_eval = lat.meet_set(arr[tt[arr[a][pt[p]]][a]][pt[p]] for a in els for p in els)
    return EvidencedFrame(alg, e_id, m, e_top, e_fst, e_snd, e_eval)


def check_evidenced_frame(frame: EvidencedFrame, max_psis: int = 2, raise_on_failure: bool = False) -> LawReport:
    """Every frame axiom, exhaustively over propositions, evidence in S and small ``psis``."""
    alg = frame.algebra
    lat = alg.lattice
    n = lat.names
    els = list(alg.elements)
    sep = sorted(alg.sep)
    R = frame.relates
    report = LawReport()

    def member(law: str, x: int) -> None:
        report.add(f"{law}_in_S", x in alg.sep, {"value": n[x]}, 1)

    for key in ("e_id", "m", "e_top", "e_fst", "e_snd", "e_eval"):
        member(key, getattr(frame, key))

    scan = Scan(report, "reflexivity")
    for a in els:
        scan.check(R(a, frame.e_id, a), phi=n[a])
    scan.done()

    scan = Scan(report, "transitivity")
    s_in = Scan(report, "sequence_in_S")
    for e in sep:
        for e2 in sep:
            ee = frame.seq(e, e2)
            s_in.check(ee in alg.sep, e=n[e], e2=n[e2])
            for a in els:
                for b in els:
                    if not R(a, e, b):
                        continue
                    for c in els:
                        if R(b, e2, c):
                            scan.check(R(a, ee, c), phi1=n[a], phi2=n[b], phi3=n[c], e=n[e], e2=n[e2])
    scan.done()
    s_in.done()

    scan = Scan(report, "top")
    for a in els:
        scan.check(R(a, frame.e_top, lat.top), phi=n[a])
    scan.done()

    scan = Scan(report, "projections")
    for a in els:
        for b in els:
            ab = frame.conj(a, b)
            scan.check(R(ab, frame.e_fst, a) and R(ab, frame.e_snd, b), phi1=n[a], phi2=n[b])
    scan.done()

    scan = Scan(report, "pairing")
    s_in = Scan(report, "pairing_in_S")
    for e1 in sep:
        for e2 in sep:
            pe = frame.pair(e1, e2)
            s_in.check(pe in alg.sep, e1=n[e1], e2=n[e2])
            for a in els:
                for b in els:
                    if not R(a, e1, b):
                        continue
                    for c in els:
                        if R(a, e2, c):
                            scan.check(R(a, pe, frame.conj(b, c)), phi=n[a], phi1=n[b], phi2=n[c], e1=n[e1], e2=n[e2])
    scan.done()
    s_in.done()

    psi_sets = [ps for ps in subsets(els, limit=max(len(els), 1)) if len(ps) <= max_psis]
    scan = Scan(report, "abstraction")
    s_in = Scan(report, "abstraction_in_S")
    for e in sep:
        le = frame.lam(e)
        s_in.check(le in alg.sep, e=n[e])
        for a in els:
            for b in els:
                ab = frame.conj(a, b)
                for ps in psi_sets:
                    if all(R(ab, e, p) for p in ps):
                        scan.check(R(a, le, frame.implies(b, ps)), phi1=n[a], phi2=n[b], psis=[n[p] for p in ps], e=n[e])
    scan.done()
    s_in.done()

    scan = Scan(report, "evaluation")
    for a in els:
        for ps in psi_sets:
            imp = frame.conj(frame.implies(a, ps), a)
            for p in ps:
                scan.check(R(imp, frame.e_eval, p), phi1=n[a], psis=[n[q] for q in ps], psi=n[p])
    scan.done()

    if raise_on_failure and not report.ok:
        bad = report.failures[0]
        raise AxiomFailed(f"{bad.law} fails", which=bad.law, **(bad.witness or {}))
    return report
