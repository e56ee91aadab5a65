"""Law suites run by ``arrowkit check`` and by the test suite.

Each function takes one algebra (or structure) and returns a
:class:`~arrowkit.laws.LawReport` with one verdict per law, scanning every
case exhaustively unless stated otherwise.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .arrow import (
    ArrowStructure,
    is_binary_implicative,
    is_compatible_with_joins,
    is_implicative_meet_law,
    meet_inequality_holds,
)
from .config import caps
from .corpus import PEIRCE, TAUTOLOGIES, closed_terms
from .errors import named_witness
from .heyting import check_preheyting, times_table
from .laws import LawReport, Scan
from .lattice import Lattice, subsets
from .nucleus import (
    Nucleus,
    check_nucleus_lemmas,
    nucleus_closed,
    nucleus_disjunction,
    nucleus_dneg,
    nucleus_identity,
    nucleus_open,
    nucleus_partial,
    nucleus_product,
    subalgebra,
)
from .separator import (
    ArrowAlgebra,
    combinator_report,
    generate_separator,
    limited_mp,
    tautology_meet,
    validate_separator,
)
from .terms import (
    App,
    Lam,
    Term,
    Var,
    abstract,
    application_table,
    bracket,
    free_vars,
    interpret_comb,
    interpret_lambda,
    partial_table,
    translate,
)
from .tripos import (
    all_maps,
    check_adjunctions,
    check_beck_chevalley,
    check_evidenced_frame,
    check_fast_exists,
    check_separator_inclusion,
    evidenced_frame,
    generic_element_check,
    subtripos_Pj,
    subtripos_Pj_restricted,
)

# ---------------------------------------------------------------- lattice and arrow


def lattice_laws(lat: Lattice) -> LawReport:
    report = LawReport()
    n = lat.names
    els = list(lat.elements)
    scan = Scan(report, "bounds")
    for x in els:
        scan.check(lat.leq[lat.bot][x] and lat.leq[x][lat.top], x=n[x])
    scan.done()
    if lat.size <= caps().subset:
        s_meet = Scan(report, "meet_universal")
        s_join = Scan(report, "join_universal")
        for bs in subsets(els):
            m, j = lat.meet_set(bs), lat.join_set(bs)
            for x in els:
                w = {"x": n[x], "subset": [n[b] for b in bs]}
                s_meet.check(lat.leq[x][m] == all(lat.leq[x][b] for b in bs), **w)
                s_join.check(lat.leq[j][x] == all(lat.leq[b][x] for b in bs), **w)
        s_meet.done()
        s_join.done()
    return report


def arrow_laws(s: ArrowStructure) -> LawReport:
    """Structural predicates; only the unconditional ones count as laws."""
    report = LawReport()
    chk = meet_inequality_holds(s)
    report.add("meet_inequality", chk.ok, _wit(s.lattice, chk.witness))
    full = is_implicative_meet_law(s)
    binary = is_binary_implicative(s)
    report.add("meet_law_implies_binary", (not full.ok) or binary.ok, _wit(s.lattice, binary.witness))
    return report


def arrow_profile(s: ArrowStructure) -> dict[str, bool]:
    return {
        "compatible_with_joins": is_compatible_with_joins(s).ok,
        "binary_implicative": is_binary_implicative(s).ok,
        "implicative_meet_law": is_implicative_meet_law(s).ok,
    }


def _wit(lat: Lattice, w) -> dict | None:
    if w is None:
        return None
    out = []
    for x in w:
        out.append([lat.names[y] for y in x] if isinstance(x, tuple) else lat.names[x])
    return {"witness": out}


# ---------------------------------------------------------------- separator


def separator_laws(alg: ArrowAlgebra, minimality: bool = True) -> LawReport:
    lat = alg.lattice
    n = lat.names
    report = LawReport()
    try:
        validate_separator(alg.structure, alg.sep)
        report.add("separator", True)
    except Exception as exc:  # noqa: BLE001 - the diagnostic is the verdict
        report.add("separator", False, {"error": f"{type(exc).__name__}: {exc}", **named_witness(lat.names, exc)})
        return report
    combos = combinator_report(alg)
    for name, member in combos.in_separator.items():
        if name == "a_prime":
            continue
        report.add(f"combinator_{name}", member, {"value": n[getattr(combos, name)]}, 1)

    scan = Scan(report, "tautologies")
    for label, formula in TAUTOLOGIES:
        res = tautology_meet(alg, formula)
        scan.check(res.member, formula=label, meet=n[res.meet])
    scan.done()

    scan = Scan(report, "closed_under_application")
    ap = application_table(alg.structure)
    for a in sorted(alg.sep):
        for b in sorted(alg.sep):
            scan.check(ap[a][b] in alg.sep, a=n[a], b=n[b])
    scan.done()

    scan = Scan(report, "limited_modus_ponens")
    els = list(alg.elements)
    arr = alg.arr
    for k in (1, 2):
        for xs in product(els, repeat=k):
            if lat.meet_set(xs) not in alg.sep:
                continue
            for ys in product(els, repeat=k):
                for zs in product(els, repeat=k):
                    if lat.meet_set(arr[x][arr[y][z]] for x, y, z in zip(xs, ys, zs)) in alg.sep:
                        scan.check(limited_mp(alg, xs, ys, zs), xs=[n[v] for v in xs], ys=[n[v] for v in ys], zs=[n[v] for v in zs])
    scan.done()

    if minimality and alg.size <= 5:
        report.verdicts.append(_minimality(alg))
    return report


def _minimality(alg: ArrowAlgebra):
    """The generated separator of a seed lies inside every separator containing the seed."""
    lat = alg.lattice
    s = alg.structure
    report = LawReport()
    scan = Scan(report, "generated_is_least")
    upsets = []
    els = list(alg.elements)
    for bits in range(1 << len(els)):
        xs = frozenset(e for e in els if bits >> e & 1)
        if all(b in xs for a in xs for b in els if lat.leq[a][b]):
            upsets.append(xs)
    seps = []
    for u in upsets:
        try:
            validate_separator(s, u)
            seps.append(u)
        except Exception:  # noqa: BLE001
            pass
    for seed in upsets:
        gen = generate_separator(s, seed).sep
        for sep in seps:
            if seed <= sep:
                scan.check(gen <= sep, seed=[lat.names[x] for x in sorted(seed)], separator=[lat.names[x] for x in sorted(sep)])
        scan.check(gen in seps, seed=[lat.names[x] for x in sorted(seed)])
    return scan.done()


def locale_filter_laws(alg: ArrowAlgebra) -> LawReport:
    """On a locale, separators are exactly the filters."""
    lat = alg.lattice
    s = alg.structure
    report = LawReport()
    scan = Scan(report, "separators_are_filters")
    els = list(alg.elements)
    for bits in range(1 << len(els)):
        xs = frozenset(e for e in els if bits >> e & 1)
        upward = all(b in xs for a in xs for b in els if lat.leq[a][b])
        is_filter = upward and lat.top in xs and all(lat.meet2[a][b] in xs for a in xs for b in xs)
        try:
            validate_separator(s, xs)
            is_sep = True
        except Exception:  # noqa: BLE001
            is_sep = False
        scan.check(is_sep == is_filter, subset=[lat.names[x] for x in sorted(xs)])
    scan.done()
    return report


# ---------------------------------------------------------------- terms


def endomap_family(alg: ArrowAlgebra, limit: int = 64) -> list[tuple[int, ...]]:
    """All monotone endomaps when the carrier has at most four elements, else a fixed random family."""
    lat = alg.lattice
    els = list(alg.elements)
    if alg.size <= 4:
        return [
            f
            for f in product(els, repeat=alg.size)
            if all(lat.leq[f[a]][f[b]] for a in els for b in els if lat.leq[a][b])
        ]
    rng = np.random.default_rng(caps().sample_seed)
    out = [tuple(els), tuple(lat.top for _ in els), tuple(lat.bot for _ in els)]
    while len(out) < limit:
        out.append(tuple(int(v) for v in rng.integers(0, alg.size, size=alg.size)))
    return out


def _open_terms() -> list[tuple[str, Term]]:
    """Terms with one free variable ``x`` used by the abstraction lemmas."""
    out = []
    for name, t in closed_terms().items():
        if isinstance(t, Lam):
            out.append((name, t.var, t.body))
    x, y = Var("x"), Var("y")
    out.append(("xx", "x", App(x, x)))
    out.append(("x", "x", x))
    out.append(("y", "x", y))
    out.append(("xy", "x", App(x, y)))
    return out


def small_terms(max_size: int = 5, free: Sequence[str] = ("x", "y")) -> list[Term]:
    """All lambda terms up to ``max_size`` nodes over the given free variables."""
    by_size: dict[tuple[int, tuple[str, ...]], list[Term]] = {}

    def terms(size: int, scope: tuple[str, ...]) -> list[Term]:
        key = (size, scope)
        if key in by_size:
            return by_size[key]
        out: list[Term] = []
        if size == 1:
            out = [Var(v) for v in scope]
        else:
            bound = f"b{len(scope)}"
            out += [Lam(bound, body) for body in terms(size - 1, scope + (bound,))]
            for k in range(1, size - 1):
                for f in terms(k, scope):
                    for a in terms(size - 1 - k, scope):
                        out.append(App(f, a))
        by_size[key] = out
        return out

    result = []
    for size in range(1, max_size + 1):
        result.extend(terms(size, tuple(free)))
    return result


def term_laws(alg: ArrowAlgebra, monotonicity_terms: int = 5) -> LawReport:
    s = alg.structure
    lat, arr = s.lattice, s.arr
    n = lat.names
    ap = application_table(s)
    pt = partial_table(s)
    els = list(s.elements)
    report = LawReport()

    scan = Scan(report, "application_monotone")
    comparable = [(a, b) for a in els for b in els if lat.leq[a][b]]
    for a, a2 in comparable:
        for b, b2 in comparable:
            scan.check(lat.leq[ap[a][b]][ap[a2][b2]], a=n[a], a2=n[a2], b=n[b], b2=n[b2])
    scan.done()

    scan = Scan(report, "application_beta")
    for a, b, c in product(els, repeat=3):
        scan.check(lat.leq[ap[arr[a][arr[b][c]]][a]][arr[b][c]], a=n[a], b=n[b], c=n[c])
    scan.done()

    scan = Scan(report, "application_beta_family")
    imps = sorted(set(s.values))
    fams = [fam for k in (1, 2) for fam in _families(imps, k)]
    for a in els:
        for fam in fams:
            m = lat.meet_set(fam)
            scan.check(lat.leq[ap[arr[a][m]][a]][m], a=n[a], family=[n[v] for v in fam])
    scan.done()

    fam = endomap_family(alg)
    lams = np.asarray([abstract(s, f) for f in fam])
    F = np.asarray(fam)
    leq = np.asarray(lat.leq)
    below = leq[F[:, None, :], F[None, :, :]].all(axis=2)
    ok = leq[lams[:, None], lams[None, :]] | ~below
    bad = np.argwhere(~ok)
    report.add(
        "abstraction_monotone",
        len(bad) == 0,
        None if len(bad) == 0 else {"f": [n[v] for v in fam[bad[0][0]]], "g": [n[v] for v in fam[bad[0][1]]]},
        int(below.sum()),
    )

    scan = Scan(report, "abstraction_beta")
    for f, lf in zip(fam, lams):
        for a in els:
            scan.check(lat.leq[ap[int(lf)][a]][pt[f[a]]], f=[n[v] for v in f], a=n[a])
    scan.done()

    scan = Scan(report, "partial_glue")
    scan.check(lat.meet_set(arr[a][pt[a]] for a in els) in alg.sep, direction="a->da")
    scan.check(lat.meet_set(arr[pt[a]][a] for a in els) in alg.sep, direction="da->a")
    for a in els:
        scan.check(arr[a][pt[a]] in alg.sep and arr[pt[a]][a] in alg.sep, a=n[a])
    scan.done()

    s_br = Scan(report, "bracket_beta")
    s_tr = Scan(report, "translation_below")
    for name, x, body in _open_terms():
        others = sorted(free_vars(body) - {x})
        mc = translate(body)
        br = bracket(x, mc)
        for vals in product(els, repeat=len(others)):
            env = dict(zip(others, vals))
            b_val = interpret_comb(s, br, env)
            for a in els:
                env_a = {**env, x: a}
                s_br.check(lat.leq[ap[b_val][a]][pt[interpret_comb(s, mc, env_a)]], term=name, a=n[a])
                s_tr.check(
                    lat.leq[interpret_comb(s, mc, env_a)][interpret_lambda(s, body, env_a)], term=name, a=n[a]
                )
    for name, t in closed_terms().items():
        s_tr.check(lat.leq[interpret_comb(s, translate(t))][interpret_lambda(s, t)], term=name)
    s_br.done()
    s_tr.done()

    scan = Scan(report, "closed_terms_in_S")
    s_comb = Scan(report, "closed_combinatory_terms_in_S")
    for name, t in closed_terms().items():
        v = interpret_lambda(s, t)
        scan.check(v in alg.sep, term=name, value=n[v])
        c = interpret_comb(s, translate(t))
        s_comb.check(c in alg.sep, term=name, value=n[c])
    scan.done()
    s_comb.done()

    if alg.size <= 4 and monotonicity_terms:
        report.verdicts.append(_env_monotone(alg, small_terms(monotonicity_terms)))
    return report


def _families(values: Sequence[int], k: int) -> Iterable[tuple[int, ...]]:
    return product(values, repeat=k) if k == 1 else ((a, b) for a in values for b in values if a < b)


def _env_monotone(alg: ArrowAlgebra, terms: list[Term]):
    s = alg.structure
    lat = s.lattice
    els = list(s.elements)
    comparable = [(a, b) for a in els for b in els if lat.leq[a][b]]
    report = LawReport()
    scan = Scan(report, "interpretation_monotone")
    for t in terms:
        table = {(x, y): interpret_lambda(s, t, {"x": x, "y": y}) for x in els for y in els}
        for (x, x2), (y, y2) in product(comparable, repeat=2):
            scan.check(lat.leq[table[x, y]][table[x2, y2]], term=repr(t), x=[lat.names[x], lat.names[x2]], y=[lat.names[y], lat.names[y2]])
    return scan.done()


# ---------------------------------------------------------------- nuclei


def stock_nuclei(alg: ArrowAlgebra) -> list[tuple[str, Nucleus]]:
    """Identity, partial, the three parametrised families, disjunction and one product.

    Maps that coincide are listed once, under their first name.
    """
    n = alg.lattice.names
    out: list[tuple[str, Nucleus]] = [("identity", nucleus_identity(alg)), ("partial", nucleus_partial(alg))]
    for c in alg.elements:
        out.append((f"open {n[c]}", nucleus_open(alg, c)))
        out.append((f"dneg {n[c]}", nucleus_dneg(alg, c)))
        out.append((f"closed {n[c]}", nucleus_closed(alg, c)))
        out.append((f"disj {n[c]}", nucleus_disjunction(alg, c)))
    out.append(("dneg bot x open top", nucleus_product(nucleus_dneg(alg, alg.bot), nucleus_open(alg, alg.top))))
    seen = set()
    unique = []
    for name, j in out:
        if j.map not in seen:
            seen.add(j.map)
            unique.append((name, j))
    return unique


def nucleus_laws(alg: ArrowAlgebra, fibers: int = 2, subtriposes: bool = True) -> LawReport:
    report = LawReport()
    joins = is_compatible_with_joins(alg.structure).ok
    for name, j in stock_nuclei(alg):
        report.extend(check_nucleus_lemmas(j), prefix=f"[{name}] ")
        sub = subalgebra(j)
        report.add(f"[{name}] subalgebra_valid", True)
        if joins:
            report.add(f"[{name}] subalgebra_joins", is_compatible_with_joins(sub.structure).ok)
        if subtriposes:
            report.extend(subtripos_Pj(j).check(fibers), prefix=f"[{name}] Pj ")
            report.extend(subtripos_Pj_restricted(j).check(fibers), prefix=f"[{name}] Pj_restricted ")
    return report


# ---------------------------------------------------------------- tripos


def tripos_laws(alg: ArrowAlgebra, max_index: int = 3, beck_chevalley: bool = True) -> LawReport:
    report = LawReport()
    maps = [f for k in range(max_index + 1) for m in range(max_index + 1) for f in all_maps(k, m)]
    adj = Scan(report, "adjunctions")
    for f in maps:
        r = check_adjunctions(alg, f)
        for v in r.report.verdicts:
            adj.check(v.ok, map=list(f.table), source=len(f.source), law=v.law, **(v.witness or {}))
    adj.done()
    if beck_chevalley:
        bc = Scan(report, "beck_chevalley")
        for m in range(max_index + 1):
            ms = [f for f in maps if len(f.target) == m]
            for g1 in ms:
                for g2 in ms:
                    r = check_beck_chevalley(alg, g1, g2)
                    for v in r.report.verdicts:
                        bc.check(v.ok, g1=list(g1.table), g2=list(g2.table), law=v.law, **(v.witness or {}))
        bc.done()
    report.extend(generic_element_check(alg, max_index))
    report.extend(check_separator_inclusion(alg, max_index))
    if is_compatible_with_joins(alg.structure).ok:
        fx = Scan(report, "exists_join_form")
        for f in maps:
            r = check_fast_exists(alg, f)
            fx.check(r.ok, map=list(f.table), source=len(f.source), **(r.report.verdicts[0].witness or {}))
        fx.done()
    return report


def frame_laws(alg: ArrowAlgebra) -> LawReport:
    return check_evidenced_frame(evidenced_frame(alg))


def full_suite(alg: ArrowAlgebra, max_index: int = 2, fibers: int = 1) -> LawReport:
    """Everything above, at sizes suited to an interactive ``check``."""
    report = LawReport()
    report.extend(lattice_laws(alg.lattice), "lattice: ")
    report.extend(arrow_laws(alg.structure), "arrow: ")
    sep = separator_laws(alg)
    report.extend(sep, "separator: ")
    if not sep["separator"].ok:
        return report
    report.extend(term_laws(alg, monotonicity_terms=4), "terms: ")
    report.extend(check_preheyting(alg), "heyting: ")
    report.extend(nucleus_laws(alg, fibers=fibers), "nucleus: ")
    report.extend(tripos_laws(alg, max_index=max_index), "tripos: ")
    report.extend(frame_laws(alg), "frame: ")
    return report


def peirce(alg: ArrowAlgebra):
    return tautology_meet(alg, PEIRCE)
