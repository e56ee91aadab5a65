"""Command line interface: ``arrowkit <command> [flags]``.

Every command prints one JSON report on standard output.  Exit status is 0
when every verdict passes, 1 when some law fails and 2 on input errors,
which are described on standard error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Callable, Sequence

from .arrow import is_compatible_with_joins
from .config import caps
from .constructions import downset_algebra, modification, per_algebra, power, sierpinski
from .corpus import corpus, locales
from .dsl import (
    NamedConst,
    Workspace,
    algebra_decls,
    applicative_decl,
    bind_constants,
    parse_term,
    parse_workspace,
    print_decl,
    print_term,
    print_workspace,
)
from .errors import ArrowkitError, ClauseFailed, MissingCombinator, NotMPClosed, NotUpwardClosed, SubsetCapExceeded
from .heyting import entails
from .laws import LawReport, Scan
from .nucleus import (
    Nucleus,
    check_nucleus_lemmas,
    nucleus_closed,
    nucleus_disjunction,
    nucleus_dneg,
    nucleus_dom,
    nucleus_identity,
    nucleus_open,
    nucleus_partial,
    subalgebra,
)
from .pca import enumerate_applicative_posets
from .report import Report, Section
from .separator import ArrowAlgebra, combinator_a_prime, combinator_report
from .suite import arrow_laws, arrow_profile, full_suite, separator_laws, tripos_laws
from .terms import Atom, Const, Lam, free_vars, interpret_comb, interpret_lambda, is_combinatory, translate
from .tripos import (
    IndexMap,
    check_adjunctions,
    check_beck_chevalley,
    check_evidenced_frame,
    evidenced_frame,
    subtripos_Pj,
    subtripos_Pj_restricted,
)

SEPARATOR_CLAUSES = {NotUpwardClosed: "upward_closed", NotMPClosed: "modus_ponens", MissingCombinator: "combinators"}


class InputError(Exception):
    """Bad command line input that is not a DSL diagnostic."""


# ---------------------------------------------------------------- helpers


def load(path: str | Path) -> Workspace:
    return parse_workspace(Path(path).read_text(encoding="utf-8"))


def _names(alg: ArrowAlgebra, xs) -> list[str]:
    return [alg.lattice.names[x] for x in xs]


def _element(alg: ArrowAlgebra, name: str) -> int:
    try:
        return alg.lattice.index(name)
    except KeyError:
        raise InputError(f"no element named {name!r}") from None


def _pick(ws: Workspace, name: str | None) -> str:
    if name is not None:
        return name
    if not ws.algebra_names:
        raise InputError("the file declares no algebra")
    return ws.algebra_names[0]


def describe(alg: ArrowAlgebra) -> dict:
    n = alg.lattice.names
    return {
        "size": alg.size,
        "elements": list(n),
        "separator": _names(alg, sorted(alg.sep)),
        "proper": alg.proper,
        "profile": arrow_profile(alg.structure),
    }


def _timed(report: Report, key: str, fn: Callable[[], None]) -> None:
    t0 = time.perf_counter()
    fn()
    if report.timings is not None:
        report.timings[key] = round(time.perf_counter() - t0, 4)


# ---------------------------------------------------------------- check


def check_algebra(section: Section, build: Callable[[], ArrowAlgebra], terms: dict | None = None) -> None:
    """Validate one algebra and run the whole law suite into ``section``."""
    try:
        alg = build()
    except tuple(SEPARATOR_CLAUSES) as exc:
        section.add("separator", False, {"clause": SEPARATOR_CLAUSES[type(exc)], "message": str(exc), **exc.witness})
        return
    except ArrowkitError as exc:
        section.add("construction", False, {"error": type(exc).__name__, "message": str(exc)})
        return
    section.add("separator", True)
    section.data.update(describe(alg))
    section.extend(full_suite(alg))
    if terms:
        closed = {k: t for k, t in terms.items() if not free_vars(t) and not _has_const(t)}
        laws = LawReport()
        scan = Scan(laws, "declared_closed_terms_in_S")
        for name, t in closed.items():
            v = interpret_lambda(alg.structure, t)
            scan.check(v in alg.sep, term=name, value=alg.lattice.names[v])
        scan.done()
        section.extend(laws)


def _has_const(t) -> bool:
    if isinstance(t, (Const, NamedConst)):
        return True
    if hasattr(t, "fn"):
        return _has_const(t.fn) or _has_const(t.arg)
    if isinstance(t, Lam):
        return _has_const(t.body)
    return False


def cmd_check(file: str | None = None, use_corpus: bool = False, timings: bool = True) -> Report:
    report = Report("check", {"file": file, "corpus": use_corpus}, timings={} if timings else None)
    if use_corpus:
        for e in corpus():
            s = report.section(e.name)
            s.data["kind"] = e.kind
            _timed(report, e.name, lambda s=s, e=e: check_algebra(s, lambda: e.algebra))
    if file is not None:
        ws = load(file)
        terms = {name: ws.term(name) for name in ws.term_names}
        for name in ws.algebra_names:
            s = report.section(name)
            _timed(report, name, lambda s=s, name=name: check_algebra(s, lambda: ws.algebra(name), terms))
        for name in ws.nucleus_names:
            s = report.section(name)
            _timed(report, name, lambda s=s, name=name: _check_nucleus(s, lambda: ws.nucleus(name), fibers=1))
    return report


def _check_nucleus(section: Section, build: Callable[[], Nucleus], fibers: int) -> Nucleus | None:
    try:
        j = build()
    except ClauseFailed as exc:
        section.add("nucleus", False, {"clause": exc.clause, "message": str(exc), **exc.witness})
        return None
    except (NotUpwardClosed, NotMPClosed, MissingCombinator) as exc:
        section.add("base_algebra", False, {"clause": SEPARATOR_CLAUSES[type(exc)], "message": str(exc)})
        return None
    alg = j.base
    n = alg.lattice.names
    section.add("nucleus", True)
    section.data["map"] = {n[a]: n[j.map[a]] for a in alg.elements}
    section.data["idempotent"] = j.idempotent
    section.extend(check_nucleus_lemmas(j))
    try:
        sub = subalgebra(j)
        section.add("subalgebra_valid", True)
        section.data["subalgebra_separator"] = _names(sub, sorted(sub.sep))
        if is_compatible_with_joins(alg.structure):
            section.add("subalgebra_joins", bool(is_compatible_with_joins(sub.structure)))
    except ArrowkitError as exc:
        section.add("subalgebra_valid", False, {"error": type(exc).__name__, "message": str(exc)})
        return j
    if fibers:
        section.extend(subtripos_Pj(j).check(fibers), "Pj ")
        section.extend(subtripos_Pj_restricted(j).check(fibers), "Pj_restricted ")
    return j


# ---------------------------------------------------------------- single-algebra commands


def cmd_combinators(file: str, algebra: str | None = None) -> Report:
    ws = load(file)
    name = _pick(ws, algebra)
    alg = ws.algebra(name)
    report = Report("combinators", {"file": file, "algebra": name}, timings=None)
    s = report.section(name)
    try:
        cr = combinator_report(alg)
    except SubsetCapExceeded as exc:
        raise InputError(str(exc)) from None
    n = alg.lattice.names
    s.data["values"] = {k: n[v] for k, v in cr.values().items()}
    s.data["in_separator"] = dict(cr.in_separator)
    for k in ("k", "s", "a"):
        s.add(f"{k}_in_S", cr.in_separator[k], {"value": n[getattr(cr, k)]}, 1)
    return report


def cmd_interpret(file: str, algebra: str | None, term: str, bindings: Sequence[str] = ()) -> Report:
    ws = load(file)
    name = _pick(ws, algebra)
    alg = ws.algebra(name)
    lat = alg.lattice
    t = bind_constants(ws.term(term), lat) if term in ws.term_names else parse_term(term, lat)
    env = {}
    for b in bindings:
        var, sep, value = b.partition("=")
        if not sep:
            raise InputError(f"binding {b!r} is not of the form var=element")
        env[var.strip()] = _element(alg, value.strip())
    report = Report("interpret", {"file": file, "algebra": name, "term": term, "bindings": list(bindings)}, timings=None)
    s = report.section(print_term(t, lat))
    closed = not free_vars(t)
    n = lat.names
    s.data["closed"] = closed
    if is_combinatory(t) and _has_atom(t):
        v = interpret_comb(alg.structure, t, env)
        s.data["combinatory_value"] = n[v]
        s.data["in_S"] = v in alg.sep
        return report
    v = interpret_lambda(alg.structure, t, env)
    c = interpret_comb(alg.structure, translate(t), env)
    s.data["value"] = n[v]
    s.data["in_S"] = v in alg.sep
    s.data["combinatory_value"] = n[c]
    s.add("translation_below", lat.leq[c][v], {"combinatory": n[c], "lambda": n[v]}, 1)
    if closed and not _has_const(t):
        s.add("closed_term_in_S", v in alg.sep, {"value": n[v]}, 1)
        s.add("closed_translation_in_S", c in alg.sep, {"value": n[c]}, 1)
    return report


def _has_atom(t) -> bool:
    if isinstance(t, Atom):
        return True
    if hasattr(t, "fn"):
        return _has_atom(t.fn) or _has_atom(t.arg)
    return False


def cmd_entail(file: str, algebra: str, a: str, b: str) -> Report:
    ws = load(file)
    alg = ws.algebra(algebra)
    x, y = _element(alg, a), _element(alg, b)
    n = alg.lattice.names
    report = Report("entail", {"file": file, "algebra": algebra, "a": a, "b": b}, timings=None)
    s = report.section(f"{a} |- {b}")
    s.data["arrow"] = n[alg.arr[x][y]]
    s.data["entails"] = entails(alg, x, y)
    s.data["converse"] = entails(alg, y, x)
    s.data["below"] = alg.lattice.leq[x][y]
    return report


_NUCLEUS_KINDS = {
    "identity": lambda alg, c: nucleus_identity(alg),
    "partial": lambda alg, c: nucleus_partial(alg),
    "dom": lambda alg, c: nucleus_dom(alg),
    "dneg": lambda alg, c: nucleus_dneg(alg, c),
    "open": lambda alg, c: nucleus_open(alg, c),
    "closed": lambda alg, c: nucleus_closed(alg, c),
    "disj": lambda alg, c: nucleus_disjunction(alg, c),
}


def cmd_nucleus(file: str, name: str, kind: str | None = None, arg: str | None = None, fibers: int = 2) -> Report:
    ws = load(file)
    report = Report("nucleus", {"file": file, "name": name, "kind": kind, "arg": arg, "fibers": fibers}, timings=None)
    if kind is None:
        build = lambda: ws.nucleus(name)  # noqa: E731
        subject = name
    else:
        if kind not in _NUCLEUS_KINDS:
            raise InputError(f"unknown nucleus kind {kind!r}; expected one of {', '.join(_NUCLEUS_KINDS)}")
        alg = ws.algebra(name)
        if kind in ("dneg", "open", "closed", "disj"):
            if arg is None:
                raise InputError(f"nucleus kind {kind} needs an element argument")
            c = _element(alg, arg)
        else:
            c = None
        build = lambda: _NUCLEUS_KINDS[kind](alg, c)  # noqa: E731
        subject = f"{kind} {arg}" if arg is not None else kind
    _check_nucleus(report.section(subject), build, fibers)
    return report


CONSTRUCTIONS = ("sierpinski", "modification", "power", "downset", "per", "subalgebra")


def cmd_construct(
    kind: str, file: str, name: str | None = None, k: int = 2, pointwise: bool = False, unchecked: bool = False
) -> Report:
    if kind not in CONSTRUCTIONS:
        raise InputError(f"unknown construction {kind!r}")
    ws = load(file)
    inputs = {"kind": kind, "file": file, "name": name}
    if kind == "power":
        inputs.update(k=k, pointwise=pointwise)
    if kind in ("sierpinski", "modification"):
        inputs["unchecked"] = unchecked
    report = Report("construct", inputs, timings=None)
    candidate = None
    try:
        if kind in ("downset", "per"):
            src = name or next(iter(ws.applicatives), None)
            if src is None:
                raise InputError("the file declares no applicative poset")
            built = (downset_algebra if kind == "downset" else per_algebra)(ws.applicatives[src])
            alg, candidate = built.algebra, built
        elif kind == "subalgebra":
            src = name or next(iter(ws.nucleus_names), None)
            if src is None:
                raise InputError("the file declares no nucleus")
            alg = subalgebra(ws.nucleus(src))
        else:
            src = _pick(ws, name)
            base = ws.algebra(src)
            if kind == "power":
                alg = power(base, k, pointwise)
            else:
                alg = (sierpinski if kind == "sierpinski" else modification)(base, require_joins=not unchecked)
    except ArrowkitError as exc:
        s = report.section(f"{kind}({name or ''})")
        s.add("construction", False, {"error": type(exc).__name__, "message": str(exc)})
        return report
    subject = f"{kind}({src})"
    s = report.section(subject)
    s.add("construction", True)
    s.data.update(describe(alg))
    if candidate is not None:
        s.data["candidate"] = _names(alg, sorted(candidate.candidate))
        s.data["candidate_is_separator"] = candidate.candidate_valid
        if not candidate.candidate_valid:
            s.data["candidate_error"] = candidate.candidate_error
    s.extend(arrow_laws(alg.structure), "arrow: ")
    s.extend(separator_laws(alg, minimality=alg.size <= 5), "separator: ")
    s.data["dsl"] = print_workspace(algebra_decls(alg, _identifier(subject)))
    return report


def _identifier(text: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in text).strip("_")


# ---------------------------------------------------------------- tripos and frame


def _load_map(ws: Workspace, ref: str) -> IndexMap:
    if ref in ws.maps:
        return ws.maps[ref]
    path = Path(ref)
    if not path.exists():
        raise InputError(f"{ref!r} is neither a declared map nor a map file")
    other = load(path)
    if not other.maps:
        raise InputError(f"{ref} declares no map")
    return next(iter(other.maps.values()))


def cmd_tripos(
    file: str,
    algebra: str | None = None,
    maps: Sequence[str] = (),
    beck_chevalley: Sequence[str] | None = None,
    max_index: int = 2,
    timings: bool = True,
) -> Report:
    ws = load(file)
    name = _pick(ws, algebra)
    alg = ws.algebra(name)
    inputs = {"file": file, "algebra": name, "maps": list(maps), "beck_chevalley": list(beck_chevalley or [])}
    if not maps and not beck_chevalley:
        inputs["max_index"] = max_index
    report = Report("tripos", inputs, timings={} if timings else None)
    for ref in maps:
        f = _load_map(ws, ref)
        s = report.section(f"adjunctions {ref}")
        r = check_adjunctions(alg, f)
        s.extend(r.report)
        s.data.update(exhaustive=r.exhaustive, pairs=r.pairs)
    if beck_chevalley:
        g1, g2 = (_load_map(ws, r) for r in beck_chevalley)
        s = report.section(f"beck-chevalley {beck_chevalley[0]} {beck_chevalley[1]}")
        try:
            r = check_beck_chevalley(alg, g1, g2)
        except ArrowkitError as exc:
            raise InputError(str(exc)) from None
        s.extend(r.report)
        s.data.update(exhaustive=r.exhaustive, predicates=r.pairs)
    if not maps and not beck_chevalley:
        s = report.section(name)
        _timed(report, name, lambda: s.extend(tripos_laws(alg, max_index=max_index)))
    return report


def cmd_evidframe(file: str, algebra: str | None = None, max_psis: int = 2) -> Report:
    ws = load(file)
    name = _pick(ws, algebra)
    alg = ws.algebra(name)
    frame = evidenced_frame(alg)
    report = Report("evidframe", {"file": file, "algebra": name, "max_psis": max_psis}, timings=None)
    s = report.section(name)
    s.data["evidence"] = frame.evidence()
    s.extend(check_evidenced_frame(frame, max_psis))
    return report


# ---------------------------------------------------------------- a' search


def cmd_search_aprime(max_poset: int | None = None, max_lattice: int = 16, files: Sequence[str] = (), with_locales: bool = False) -> Report:
    """Look for an algebra whose ``a'`` lies outside the generated separator."""
    max_poset = caps().search_poset if max_poset is None else max_poset
    if max_poset > caps().search_poset:
        raise InputError(f"poset bound {max_poset} exceeds the search cap {caps().search_poset}")
    if max_lattice > caps().subset:
        raise InputError(f"lattice bound {max_lattice} exceeds the subset cap {caps().subset}")
    report = Report(
        "search-aprime",
        {"max_poset": max_poset, "max_lattice": max_lattice, "files": list(files), "locales": with_locales},
        timings=None,
    )
    found = []
    skipped = 0
    examined = 0

    def visit(subject: str, alg: ArrowAlgebra, extra: dict) -> None:
        nonlocal examined
        examined += 1
        ap = combinator_a_prime(alg.structure)
        s = report.section(subject)
        s.data.update(extra)
        s.data.update(size=alg.size, a_prime=alg.lattice.names[ap], in_S=ap in alg.sep, proper=alg.proper)
        if ap not in alg.sep:
            found.append(subject)

    for k, P in enumerate(enumerate_applicative_posets(max_poset)):
        poset = print_decl(applicative_decl(P, f"P{k}"))
        for kind, build in (("downset", downset_algebra), ("per", per_algebra)):
            built = build(P)
            if built.algebra.size > max_lattice:
                skipped += 1
                continue
            visit(f"{kind}(P{k})", built.algebra, {"poset": poset, "candidate_is_separator": built.candidate_valid})
    if with_locales:
        for e in locales():
            visit(e.name, e.algebra, {"kind": "locale"})
    for file in files:
        ws = load(file)
        for name in ws.algebra_names:
            alg = ws.algebra(name)
            if alg.size <= max_lattice:
                visit(f"{file}:{name}", alg, {"file": file})
            else:
                skipped += 1
    s = report.section("summary")
    s.data.update(
        examined=examined,
        skipped=skipped,
        counterexamples=found,
        outcome="candidate counterexamples found" if found else "none found up to bounds",
    )
    return report


# ---------------------------------------------------------------- argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arrowkit", description="Finite-model workbench for arrow algebras.")
    p.add_argument("--no-timings", action="store_true", help="omit wall-clock timings from the report")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="validate every declared algebra and run the law suite")
    c.add_argument("file", nargs="?")
    c.add_argument("--corpus", action="store_true", help="also check the built-in corpus")

    c = sub.add_parser("combinators", help="values of the combinators and their membership in S")
    c.add_argument("file")
    c.add_argument("algebra", nargs="?")

    c = sub.add_parser("interpret", help="interpret a lambda or combinatory term")
    c.add_argument("file")
    c.add_argument("algebra")
    c.add_argument("term", help="a declared term name or term text")
    c.add_argument("--bind", action="append", default=[], metavar="VAR=ELEMENT")

    c = sub.add_parser("entail", help="decide a |- b")
    c.add_argument("file")
    c.add_argument("algebra")
    c.add_argument("a")
    c.add_argument("b")

    c = sub.add_parser("nucleus", help="validate a nucleus and check its subalgebra and subtriposes")
    c.add_argument("file")
    c.add_argument("name", help="a declared nucleus, or an algebra when --kind is given")
    c.add_argument("--kind", choices=sorted(_NUCLEUS_KINDS))
    c.add_argument("--arg", help="element parameter of the nucleus kind")
    c.add_argument("--fibers", type=int, default=2, help="largest index set for subtripos checks")

    c = sub.add_parser("construct", help="build a derived algebra")
    c.add_argument("kind", choices=CONSTRUCTIONS)
    c.add_argument("file")
    c.add_argument("name", nargs="?", help="base algebra, applicative poset or nucleus")
    c.add_argument("--k", type=int, default=2, help="exponent for power")
    c.add_argument("--pointwise", action="store_true", help="power with the pointwise separator")
    c.add_argument("--unchecked", action="store_true", help="skip the joins-compatibility precondition")

    c = sub.add_parser("tripos", help="adjunction and Beck-Chevalley checks")
    c.add_argument("file")
    c.add_argument("algebra", nargs="?")
    c.add_argument("--map", action="append", default=[], dest="maps", help="map name or .map file")
    c.add_argument("--beck-chevalley", nargs=2, metavar=("G1", "G2"))
    c.add_argument("--max-index", type=int, default=2)

    c = sub.add_parser("evidframe", help="evidence elements and frame axioms")
    c.add_argument("file")
    c.add_argument("algebra", nargs="?")
    c.add_argument("--max-psis", type=int, default=2)

    c = sub.add_parser("search-aprime", help="search small algebras for a' outside S")
    c.add_argument("--max-poset", type=int)
    c.add_argument("--max-lattice", type=int, default=16)
    c.add_argument("--locales", action="store_true", help="include the built-in locales")
    c.add_argument("files", nargs="*")
    return p


def run(args: argparse.Namespace) -> Report:
    timings = not args.no_timings
    cmd = args.command
    if cmd == "check":
        if args.file is None and not args.corpus:
            raise InputError("check needs a file or --corpus")
        return cmd_check(args.file, args.corpus, timings)
    if cmd == "combinators":
        return cmd_combinators(args.file, args.algebra)
    if cmd == "interpret":
        return cmd_interpret(args.file, args.algebra, args.term, args.bind)
    if cmd == "entail":
        return cmd_entail(args.file, args.algebra, args.a, args.b)
    if cmd == "nucleus":
        return cmd_nucleus(args.file, args.name, args.kind, args.arg, args.fibers)
    if cmd == "construct":
        return cmd_construct(args.kind, args.file, args.name, args.k, args.pointwise, args.unchecked)
    if cmd == "tripos":
        return cmd_tripos(args.file, args.algebra, args.maps, args.beck_chevalley, args.max_index, timings)
    if cmd == "evidframe":
        return cmd_evidframe(args.file, args.algebra, args.max_psis)
    return cmd_search_aprime(args.max_poset, args.max_lattice, args.files, args.locales)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except (ArrowkitError, InputError, OSError, KeyError, ValueError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"arrowkit: error: {msg}", file=sys.stderr)
        return 2
    if args.no_timings:
        report.timings = None
    sys.stdout.write(report.dumps())
    return report.exit_code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
