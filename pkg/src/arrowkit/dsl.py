"""The workspace language: declarations of lattices, arrows, separators, nuclei,
applicative posets, constructed algebras, terms and index maps.

Parsing is in two stages.  :func:`parse_declarations` turns text into a list
of declaration records (the syntax tree, which :func:`print_workspace` prints
back); :func:`parse_workspace` additionally resolves every name and builds
lattices and arrow structures.  Separators, nuclei and constructions are
validated on first use, so a broken separator surfaces as a failing verdict
in ``check`` rather than as an input error.

Grammar (``//`` starts a comment; NAME is an identifier or a quoted string)::

    file        = { decl } ;
    decl        = lattice | arrow | separator | nucleus | applicative
                | algebra | term | map ;
    lattice     = "lattice" NAME "{" "elements" NAME+ ";" [ "order" chains [ ";" ] ] "}" ;
    chains      = chain { "," chain } ;
    chain       = NAME "<" NAME { "<" NAME } ;
    arrow       = "arrow" NAME "on" NAME ( "=" "heyting" | "{" { entry ";" } "}" ) ;
    entry       = "(" NAME "," NAME ")" "=" NAME ;
    separator   = "separator" NAME "on" "(" NAME "," NAME ")" "=" [ "generate" ] set ;
    set         = "{" [ NAME { [","] NAME } ] "}" ;
    nucleus     = "nucleus" NAME "on" target "=" nspec ;
    target      = NAME | "(" NAME "," NAME "," NAME ")" ;
    nspec       = "identity" | "partial" | "dom"
                | ( "dneg" | "open" | "closed" | "disj" ) NAME
                | "product" NAME NAME
                | "table" "{" { NAME "->" NAME ";" } "}" ;
    applicative = "applicative" NAME "{" "elements" NAME+ ";" [ "order" chains [ ";" ] ]
                  [ "app" entry { "," entry } ";" ] [ "filter" set [ ";" ] ] "}" ;
    algebra     = "algebra" NAME "=" ( ( "downset" | "per" ) NAME
                | ( "sierpinski" | "modification" ) NAME [ "unchecked" ]
                | "subalgebra" NAME | "power" NAME NUMBER [ "pointwise" ] ) ;
    term        = "term" NAME "=" lambda ";" ;
    map         = "map" NAME "from" set "to" set "{" { NAME "->" NAME ";" } "}" ;
    lambda      = ( "\\" | "λ" ) IDENT+ "." lambda | atom+ ;
    atom        = IDENT | "#" NAME | "(" lambda ")" ;

In a lambda term the identifiers ``i'``, ``k'``, ``s'`` and ``eta`` are the
combinator atoms; in pca mode ``K`` and ``S`` are the term-model constants.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Optional

from .arrow import ArrowStructure, heyting_arrow, validate_arrow
from .constructions import ApplicativePoset, ConstructedAlgebra, downset_algebra, modification, per_algebra, power, sierpinski
from .errors import ArrowkitError, DslSyntaxError, DuplicateName, UnknownName, named_witness
from .lattice import Lattice, validate_lattice
from .nucleus import (
    Nucleus,
    nucleus_closed,
    nucleus_disjunction,
    nucleus_dneg,
    nucleus_dom,
    nucleus_identity,
    nucleus_open,
    nucleus_partial,
    nucleus_product,
    subalgebra,
    validate_nucleus,
)
from .pca import validate_applicative_poset
from .separator import ArrowAlgebra, generate_separator, validate_separator
from .terms import COMB_ATOMS, PCA_ATOMS, App, Atom, Const, Lam, Term, Var
from .tripos import IndexMap

# ---------------------------------------------------------------- tokens

_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<number>\d+(?![A-Za-z_]))
  | (?P<ident>[A-Za-z_0-9][A-Za-z0-9_']*)
  | (?P<punct>->|→|[{}()\[\],;=<:#.\\λ])
    """,
    re.VERBOSE,
)

_IDENT = re.compile(r"[A-Za-z_0-9][A-Za-z0-9_']*\Z")


@dataclass(frozen=True)
class Token:
    kind: str  # ident, string, number, punct, eof
    text: str
    line: int
    col: int

    @property
    def value(self) -> str:
        return json.loads(self.text) if self.kind == "string" else self.text


def tokenize(text: str) -> list[Token]:
    out = []
    line, start, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line, start = line + 1, m.end()
        elif kind not in ("ws", "comment"):
            tok = m.group()
            out.append(Token("punct" if tok == "→" else kind, "->" if tok == "→" else tok, line, pos - start + 1))
        pos = m.end()
    out.append(Token("eof", "", line, pos - start + 1))
    return out


# ---------------------------------------------------------------- declarations


@dataclass(frozen=True)
class Span:
    line: int
    col: int


def _span() -> Span:
    return field(default=Span(0, 0), compare=False, repr=False)


@dataclass(frozen=True)
class LatticeDecl:
    name: str
    elements: tuple[str, ...]
    order: tuple[tuple[str, ...], ...]
    span: Span = _span()


@dataclass(frozen=True)
class ArrowDecl:
    name: str
    lattice: str
    table: Optional[tuple[tuple[str, str, str], ...]]  # None means heyting
    span: Span = _span()


@dataclass(frozen=True)
class SeparatorDecl:
    name: str
    lattice: str
    arrow: str
    generate: bool
    elements: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True)
class NucleusDecl:
    name: str
    on: tuple[str, ...]  # (algebra,) or (lattice, arrow, separator)
    kind: str
    args: tuple[str, ...] = ()
    table: tuple[tuple[str, str], ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class ApplicativeDecl:
    name: str
    elements: tuple[str, ...]
    order: tuple[tuple[str, ...], ...]
    app: tuple[tuple[str, str, str], ...]
    filter: tuple[str, ...]
    span: Span = _span()


@dataclass(frozen=True)
class AlgebraDecl:
    name: str
    kind: str
    args: tuple[str, ...]
    flags: tuple[str, ...] = ()
    span: Span = _span()


@dataclass(frozen=True)
class NamedConst:
    """An algebra constant before it is bound to a carrier index."""

    name: str


@dataclass(frozen=True)
class TermDecl:
    name: str
    term: Term
    span: Span = _span()


@dataclass(frozen=True)
class MapDecl:
    name: str
    source: tuple[str, ...]
    target: tuple[str, ...]
    mapping: tuple[tuple[str, str], ...]
    span: Span = _span()


Decl = LatticeDecl | ArrowDecl | SeparatorDecl | NucleusDecl | ApplicativeDecl | AlgebraDecl | TermDecl | MapDecl

NUCLEUS_KINDS = ("identity", "partial", "dom", "dneg", "open", "closed", "disj", "product", "table")
ALGEBRA_KINDS = ("downset", "per", "sierpinski", "modification", "subalgebra", "power")


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str, pca: bool = False) -> None:
        self.toks = tokenize(text)
        self.pos = 0
        self.pca = pca

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def error(self, msg: str, tok: Token | None = None) -> DslSyntaxError:
        t = tok or self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return DslSyntaxError(f"{msg}, found {found}", t.line, t.col)

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("punct", "ident") and t.text == text

    def eat(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected {text!r}")
        t = self.tok
        self.pos += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def name(self, what: str = "a name") -> str:
        t = self.tok
        if t.kind not in ("ident", "string", "number"):
            raise self.error(f"expected {what}")
        self.pos += 1
        return t.value

    def number(self) -> int:
        t = self.tok
        if t.kind != "number":
            raise self.error("expected a number")
        self.pos += 1
        return int(t.text)

    def name_set(self) -> tuple[str, ...]:
        self.eat("{")
        out = []
        while not self.at("}"):
            out.append(self.name("an element name"))
            self.accept(",")
        self.eat("}")
        return tuple(out)

    def chains(self) -> tuple[tuple[str, ...], ...]:
        out = []
        while True:
            chain = [self.name()]
            self.eat("<")
            chain.append(self.name())
            while self.accept("<"):
                chain.append(self.name())
            out.append(tuple(chain))
            if not self.accept(","):
                return tuple(out)

    def entry(self) -> tuple[str, str, str]:
        self.eat("(")
        a = self.name()
        self.eat(",")
        b = self.name()
        self.eat(")")
        self.eat("=")
        return (a, b, self.name())

    # declarations
    def declarations(self) -> list[Decl]:
        out = []
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind != "ident":
                raise self.error("expected a declaration keyword")
            fn = getattr(self, f"decl_{t.text}", None)
            if fn is None:
                raise self.error("expected a declaration keyword")
            self.pos += 1
            out.append(fn(Span(t.line, t.col)))
        return out

    def decl_lattice(self, span: Span) -> LatticeDecl:
        name = self.name()
        self.eat("{")
        self.eat("elements")
        elements = []
        while not self.at(";"):
            elements.append(self.name("an element name"))
        self.eat(";")
        order: tuple = ()
        if self.accept("order"):
            order = self.chains()
            self.accept(";")
        self.eat("}")
        return LatticeDecl(name, tuple(elements), order, span)

    def decl_arrow(self, span: Span) -> ArrowDecl:
        name = self.name()
        self.eat("on")
        lat = self.name()
        if self.accept("="):
            self.eat("heyting")
            return ArrowDecl(name, lat, None, span)
        self.eat("{")
        entries = []
        while not self.at("}"):
            entries.append(self.entry())
            self.eat(";")
        self.eat("}")
        return ArrowDecl(name, lat, tuple(entries), span)

    def decl_separator(self, span: Span) -> SeparatorDecl:
        name = self.name()
        self.eat("on")
        self.eat("(")
        lat = self.name()
        self.eat(",")
        arr = self.name()
        self.eat(")")
        self.eat("=")
        gen = self.accept("generate")
        return SeparatorDecl(name, lat, arr, gen, self.name_set(), span)

    def decl_nucleus(self, span: Span) -> NucleusDecl:
        name = self.name()
        self.eat("on")
        if self.accept("("):
            on = [self.name()]
            self.eat(",")
            on.append(self.name())
            self.eat(",")
            on.append(self.name())
            self.eat(")")
        else:
            on = [self.name()]
        self.eat("=")
        kind_tok = self.tok
        kind = self.name("a nucleus kind")
        if kind not in NUCLEUS_KINDS:
            raise self.error("expected a nucleus kind", kind_tok)
        args: tuple = ()
        table: tuple = ()
        if kind in ("dneg", "open", "closed", "disj"):
            args = (self.name("an element name"),)
        elif kind == "product":
            args = (self.name("a nucleus name"), self.name("a nucleus name"))
        elif kind == "table":
            table = self.mapping()
        return NucleusDecl(name, tuple(on), kind, args, table, span)

    def mapping(self) -> tuple[tuple[str, str], ...]:
        self.eat("{")
        out = []
        while not self.at("}"):
            a = self.name()
            self.eat("->")
            out.append((a, self.name()))
            self.eat(";")
        self.eat("}")
        return tuple(out)

    def decl_applicative(self, span: Span) -> ApplicativeDecl:
        name = self.name()
        self.eat("{")
        self.eat("elements")
        elements = []
        while not self.at(";"):
            elements.append(self.name("an element name"))
        self.eat(";")
        order: tuple = ()
        app: list = []
        fil: tuple = ()
        if self.accept("order"):
            order = self.chains()
            self.accept(";")
        if self.accept("app"):
            app.append(self.entry())
            while self.accept(","):
                app.append(self.entry())
            self.eat(";")
        if self.accept("filter"):
            fil = self.name_set()
            self.accept(";")
        self.eat("}")
        return ApplicativeDecl(name, tuple(elements), order, tuple(app), fil, span)

    def decl_algebra(self, span: Span) -> AlgebraDecl:
        name = self.name()
        self.eat("=")
        kind_tok = self.tok
        kind = self.name("a construction")
        if kind not in ALGEBRA_KINDS:
            raise self.error("expected a construction", kind_tok)
        args = [self.name()]
        flags = []
        if kind == "power":
            args.append(str(self.number()))
            if self.accept("pointwise"):
                flags.append("pointwise")
        elif kind in ("sierpinski", "modification") and self.accept("unchecked"):
            flags.append("unchecked")
        return AlgebraDecl(name, kind, tuple(args), tuple(flags), span)

    def decl_term(self, span: Span) -> TermDecl:
        name = self.name()
        self.eat("=")
        t = self.term()
        self.eat(";")
        return TermDecl(name, t, span)

    def decl_map(self, span: Span) -> MapDecl:
        name = self.name()
        self.eat("from")
        src = self.name_set()
        self.eat("to")
        tgt = self.name_set()
        return MapDecl(name, src, tgt, self.mapping(), span)

    # lambda terms
    def term(self) -> Term:
        if self.accept("\\") or self.accept("λ"):
            names = []
            while not self.at("."):
                t = self.tok
                if t.kind != "ident" or t.text in COMB_ATOMS or (self.pca and t.text in PCA_ATOMS):
                    raise self.error("expected a bound variable")
                names.append(t.text)
                self.pos += 1
            if not names:
                raise self.error("expected a bound variable")
            self.eat(".")
            body = self.term()
            for v in reversed(names):
                body = Lam(v, body)
            return body
        out = self.atom()
        while self.tok.kind == "ident" or self.at("#") or self.at("(") or self.at("\\") or self.at("λ"):
            if self.at("\\") or self.at("λ"):
                out = App(out, self.term())
                break
            out = App(out, self.atom())
        return out

    def atom(self) -> Term:
        t = self.tok
        if self.accept("("):
            inner = self.term()
            self.eat(")")
            return inner
        if self.accept("#"):
            if self.pca:
                raise self.error("constants are not allowed in pca terms", t)
            return NamedConst(self.name("an element name"))
        if t.kind == "ident":
            self.pos += 1
            if t.text in COMB_ATOMS or (self.pca and t.text in PCA_ATOMS):
                return Atom(t.text)
            return Var(t.text)
        raise self.error("expected a term")


def parse_declarations(text: str) -> list[Decl]:
    return _Parser(text).declarations()


def parse_term(text: str, lattice: Lattice | None = None, pca: bool = False) -> Term:
    """Parse a lambda or combinatory term; ``#name`` constants are bound in ``lattice``."""
    p = _Parser(text, pca)
    t = p.term()
    if p.tok.kind != "eof":
        raise p.error("expected end of term")
    return bind_constants(t, lattice) if lattice is not None else t


def bind_constants(t: Term, lattice: Lattice) -> Term:
    if isinstance(t, NamedConst):
        try:
            return Const(lattice.index(t.name))
        except KeyError:
            raise UnknownName(f"no element named {t.name!r}", name=t.name) from None
    if isinstance(t, App):
        return App(bind_constants(t.fn, lattice), bind_constants(t.arg, lattice))
    if isinstance(t, Lam):
        return Lam(t.var, bind_constants(t.body, lattice))
    return t


# ---------------------------------------------------------------- printer


def quote(name: str) -> str:
    return name if _IDENT.match(name) and name not in _KEYWORDS else json.dumps(name)


_KEYWORDS = frozenset(
    {"elements", "order", "on", "heyting", "generate", "app", "filter", "from", "to", "unchecked", "pointwise"}
)


def print_term(t: Term, lattice: Lattice | None = None) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, NamedConst):
        return "#" + quote(t.name)
    if isinstance(t, Const):
        return "#" + quote(lattice.names[t.value]) if lattice is not None else f"#{t.value}"
    if isinstance(t, Lam):
        names = [t.var]
        body = t.body
        while isinstance(body, Lam):
            names.append(body.var)
            body = body.body
        return "\\" + " ".join(names) + ". " + print_term(body, lattice)
    fn = print_term(t.fn, lattice)
    if isinstance(t.fn, Lam):
        fn = f"({fn})"
    arg = print_term(t.arg, lattice)
    if isinstance(t.arg, (App, Lam)):
        arg = f"({arg})"
    return f"{fn} {arg}"


def _names(xs) -> str:
    return " ".join(quote(x) for x in xs)


def _chains(order) -> str:
    return ", ".join(" < ".join(quote(x) for x in c) for c in order)


def _entry(e) -> str:
    return f"({quote(e[0])},{quote(e[1])}) = {quote(e[2])}"


def print_decl(d: Decl) -> str:
    if isinstance(d, LatticeDecl):
        order = f" order {_chains(d.order)};" if d.order else ""
        return f"lattice {quote(d.name)} {{ elements {_names(d.elements)};{order} }}"
    if isinstance(d, ArrowDecl):
        if d.table is None:
            return f"arrow {quote(d.name)} on {quote(d.lattice)} = heyting"
        body = " ".join(_entry(e) + ";" for e in d.table)
        return f"arrow {quote(d.name)} on {quote(d.lattice)} {{ {body} }}"
    if isinstance(d, SeparatorDecl):
        gen = "generate " if d.generate else ""
        return f"separator {quote(d.name)} on ({quote(d.lattice)},{quote(d.arrow)}) = {gen}{{ {_names(d.elements)} }}"
    if isinstance(d, NucleusDecl):
        on = quote(d.on[0]) if len(d.on) == 1 else "(" + ",".join(quote(x) for x in d.on) + ")"
        spec = d.kind
        if d.args:
            spec += " " + _names(d.args)
        if d.kind == "table":
            spec += " { " + " ".join(f"{quote(a)} -> {quote(b)};" for a, b in d.table) + " }"
        return f"nucleus {quote(d.name)} on {on} = {spec}"
    if isinstance(d, ApplicativeDecl):
        parts = [f"elements {_names(d.elements)};"]
        if d.order:
            parts.append(f"order {_chains(d.order)};")
        if d.app:
            parts.append("app " + ", ".join(_entry(e) for e in d.app) + ";")
        if d.filter:
            parts.append(f"filter {{ {_names(d.filter)} }}")
        return f"applicative {quote(d.name)} {{ {' '.join(parts)} }}"
    if isinstance(d, AlgebraDecl):
        return " ".join([f"algebra {quote(d.name)} = {d.kind}", quote(d.args[0]), *d.args[1:], *d.flags])
    if isinstance(d, TermDecl):
        return f"term {quote(d.name)} = {print_term(d.term)};"
    if isinstance(d, MapDecl):
        body = " ".join(f"{quote(a)} -> {quote(b)};" for a, b in d.mapping)
        return f"map {quote(d.name)} from {{ {_names(d.source)} }} to {{ {_names(d.target)} }} {{ {body} }}"
    raise TypeError(f"not a declaration: {d!r}")


def print_workspace(ws: "Workspace | list[Decl]") -> str:
    decls = ws.decls if isinstance(ws, Workspace) else ws
    return "".join(print_decl(d) + "\n" for d in decls)


# ---------------------------------------------------------------- workspace


@dataclass
class Workspace:
    """Resolved declarations.  Algebras, nuclei and constructions are built lazily."""

    decls: list[Decl]
    lattices: dict[str, Lattice] = field(default_factory=dict)
    arrows: dict[str, ArrowStructure] = field(default_factory=dict)
    applicatives: dict[str, ApplicativePoset] = field(default_factory=dict)
    maps: dict[str, IndexMap] = field(default_factory=dict)
    _by_name: dict[str, Decl] = field(default_factory=dict)
    _built: dict[str, object] = field(default_factory=dict)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Workspace) and self.decls == other.decls

    def decl(self, name: str) -> Decl:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownName(f"nothing named {name!r} is declared", name=name) from None

    @property
    def algebra_names(self) -> list[str]:
        return [d.name for d in self.decls if isinstance(d, (SeparatorDecl, AlgebraDecl))]

    @property
    def nucleus_names(self) -> list[str]:
        return [d.name for d in self.decls if isinstance(d, NucleusDecl)]

    @property
    def term_names(self) -> list[str]:
        return [d.name for d in self.decls if isinstance(d, TermDecl)]

    def term(self, name: str) -> Term:
        d = self.decl(name)
        if not isinstance(d, TermDecl):
            raise UnknownName(f"{name!r} is not a term", d.span.line, d.span.col, name=name)
        return d.term

    def constructed(self, name: str) -> Optional[ConstructedAlgebra]:
        """The construction record of a downset or PER algebra, else ``None``."""
        d = self.decl(name)
        if isinstance(d, AlgebraDecl) and d.kind in ("downset", "per"):
            self.algebra(name)
            return self._built[name + "#constructed"]
        return None

    def algebra(self, name: str) -> ArrowAlgebra:
        """Build and validate the named algebra; validation errors propagate."""
        if name in self._built:
            return self._built[name]
        d = self.decl(name)
        if isinstance(d, SeparatorDecl):
            s = self.arrows[d.arrow]
            lat = s.lattice
            elems = [lat.index(x) for x in d.elements]
            try:
                alg = generate_separator(s, elems) if d.generate else validate_separator(s, elems)
            except ArrowkitError as exc:
                exc.witness = named_witness(lat.names, exc)
                raise
        elif isinstance(d, AlgebraDecl):
            alg = self._construct(d)
        else:
            raise UnknownName(f"{name!r} is not an algebra", d.span.line, d.span.col, name=name)
        self._built[name] = alg
        return alg

    def _construct(self, d: AlgebraDecl) -> ArrowAlgebra:
        if d.kind in ("downset", "per"):
            built = (downset_algebra if d.kind == "downset" else per_algebra)(self.applicatives[d.args[0]])
            self._built[d.name + "#constructed"] = built
            return built.algebra
        if d.kind == "subalgebra":
            return subalgebra(self.nucleus(d.args[0]))
        base = self.algebra(d.args[0])
        if d.kind == "power":
            return power(base, int(d.args[1]), pointwise="pointwise" in d.flags)
        require = "unchecked" not in d.flags
        return (sierpinski if d.kind == "sierpinski" else modification)(base, require_joins=require)

    def nucleus_base(self, name: str) -> str:
        d = self.decl(name)
        return d.on[-1]

    def nucleus(self, name: str) -> Nucleus:
        key = name + "#nucleus"
        if key in self._built:
            return self._built[key]
        d = self.decl(name)
        if not isinstance(d, NucleusDecl):
            raise UnknownName(f"{name!r} is not a nucleus", d.span.line, d.span.col, name=name)
        alg = self.algebra(d.on[-1])
        lat = alg.lattice
        if d.kind == "identity":
            j = nucleus_identity(alg)
        elif d.kind == "partial":
            j = nucleus_partial(alg)
        elif d.kind == "dom":
            j = nucleus_dom(alg)
        elif d.kind == "product":
            j = nucleus_product(self.nucleus(d.args[0]), self.nucleus(d.args[1]))
        elif d.kind == "table":
            mapping = dict(d.table)
            j = validate_nucleus(alg, [lat.index(mapping[x]) for x in lat.names])
        else:
            build = {"dneg": nucleus_dneg, "open": nucleus_open, "closed": nucleus_closed, "disj": nucleus_disjunction}
            j = build[d.kind](alg, lat.index(d.args[0]))
        self._built[key] = j
        return j


def parse_workspace(text: str) -> Workspace:
    """Parse and resolve; raises a :class:`~arrowkit.errors.DslError` with line and column."""
    return resolve(parse_declarations(text))


def resolve(decls: list[Decl]) -> Workspace:
    ws = Workspace(list(decls))

    def ref(name: str, want: tuple[type, ...], d: Decl, what: str) -> None:
        if name not in ws._by_name or not isinstance(ws._by_name[name], want):
            raise UnknownName(f"unknown {what} {name!r}", d.span.line, d.span.col, name=name)

    def elements(lat_names: tuple[str, ...], xs, d: Decl) -> None:
        for x in xs:
            if x not in lat_names:
                raise UnknownName(f"unknown element {x!r}", d.span.line, d.span.col, name=x)

    alg_types = (SeparatorDecl, AlgebraDecl)
    for d in decls:
        if d.name in ws._by_name:
            raise DuplicateName(f"{d.name!r} is declared twice", d.span.line, d.span.col, name=d.name)
        if isinstance(d, LatticeDecl):
            pos = {x: i for i, x in enumerate(d.elements)}
            table = [[False] * len(d.elements) for _ in d.elements]
            for chain in d.order:
                elements(d.elements, chain, d)
                for a, b in zip(chain, chain[1:]):
                    table[pos[a]][pos[b]] = True
            ws.lattices[d.name] = _located(d, validate_lattice, d.elements, table)
        elif isinstance(d, ArrowDecl):
            ref(d.lattice, (LatticeDecl,), d, "lattice")
            lat = ws.lattices[d.lattice]
            if d.table is None:
                ws.arrows[d.name] = _located(d, heyting_arrow, lat)
            else:
                table: list[list[Optional[int]]] = [[None] * lat.size for _ in lat.elements]
                for a, b, c in d.table:
                    elements(lat.names, (a, b, c), d)
                    table[lat.index(a)][lat.index(b)] = lat.index(c)
                for a in lat.elements:
                    for b in lat.elements:
                        if table[a][b] is None:
                            raise DslSyntaxError(
                                f"arrow table misses ({lat.names[a]},{lat.names[b]})", d.span.line, d.span.col
                            )
                ws.arrows[d.name] = _located(d, validate_arrow, lat, table)
        elif isinstance(d, SeparatorDecl):
            ref(d.lattice, (LatticeDecl,), d, "lattice")
            ref(d.arrow, (ArrowDecl,), d, "arrow")
            if ws._by_name[d.arrow].lattice != d.lattice:
                raise UnknownName(f"arrow {d.arrow!r} is not on lattice {d.lattice!r}", d.span.line, d.span.col)
            elements(ws.lattices[d.lattice].names, d.elements, d)
        elif isinstance(d, NucleusDecl):
            if len(d.on) == 3:
                ref(d.on[0], (LatticeDecl,), d, "lattice")
                ref(d.on[1], (ArrowDecl,), d, "arrow")
                ref(d.on[2], (SeparatorDecl,), d, "separator")
                sep = ws._by_name[d.on[2]]
                if (sep.lattice, sep.arrow) != d.on[:2]:
                    raise UnknownName(
                        f"separator {d.on[2]!r} is not on ({d.on[0]},{d.on[1]})", d.span.line, d.span.col
                    )
            else:
                ref(d.on[0], alg_types, d, "algebra")
            if d.kind == "product":
                for k in d.args:
                    ref(k, (NucleusDecl,), d, "nucleus")
            lat = _lattice_of(ws, d.on[-1])
            if lat is not None:
                if d.kind in ("dneg", "open", "closed", "disj"):
                    elements(lat.names, d.args, d)
                if d.kind == "table":
                    elements(lat.names, [x for pair in d.table for x in pair], d)
                    missing = [x for x in lat.names if x not in dict(d.table)]
                    if missing:
                        raise DslSyntaxError(f"nucleus table misses {missing[0]!r}", d.span.line, d.span.col)
        elif isinstance(d, ApplicativeDecl):
            n = len(d.elements)
            pos = {x: i for i, x in enumerate(d.elements)}
            le = [[i == j for j in range(n)] for i in range(n)]
            for chain in d.order:
                elements(d.elements, chain, d)
                for a, b in zip(chain, chain[1:]):
                    le[pos[a]][pos[b]] = True
            app: list[list[Optional[int]]] = [[None] * n for _ in range(n)]
            for a, b, c in d.app:
                elements(d.elements, (a, b, c), d)
                app[pos[a]][pos[b]] = pos[c]
            elements(d.elements, d.filter, d)
            ws.applicatives[d.name] = _located(
                d, validate_applicative_poset, d.elements, le, app, [pos[x] for x in d.filter]
            )
        elif isinstance(d, AlgebraDecl):
            if d.kind in ("downset", "per"):
                ref(d.args[0], (ApplicativeDecl,), d, "applicative poset")
            elif d.kind == "subalgebra":
                ref(d.args[0], (NucleusDecl,), d, "nucleus")
            else:
                ref(d.args[0], alg_types, d, "algebra")
        elif isinstance(d, MapDecl):
            try:
                ws.maps[d.name] = IndexMap.from_dict(d.source, d.target, dict(d.mapping))
            except Exception as exc:  # noqa: BLE001 - rewrap with the span
                raise DslSyntaxError(str(exc), d.span.line, d.span.col) from exc
        ws._by_name[d.name] = d
    return ws


def _lattice_of(ws: Workspace, name: str) -> Optional[Lattice]:
    """The lattice of a declared algebra when it is known without construction."""
    d = ws._by_name.get(name)
    if isinstance(d, SeparatorDecl):
        return ws.lattices[d.lattice]
    return None


def _located(d: Decl, fn, *args):
    """Call a validator; attach the declaration's position to any diagnostic."""
    try:
        return fn(*args)
    except ArrowkitError as exc:
        exc.args = (f"{d.span.line}:{d.span.col}: {exc.args[0]}",)
        exc.line, exc.column = d.span.line, d.span.col
        raise


# ---------------------------------------------------------------- export


def algebra_decls(alg: ArrowAlgebra, name: str) -> list[Decl]:
    """Declarations that rebuild ``alg`` exactly: covering order, full arrow table, separator."""
    lat = alg.lattice
    n = lat.names
    covers = []
    for a in lat.elements:
        for b in lat.elements:
            if a != b and lat.leq[a][b]:
                if not any(c not in (a, b) and lat.leq[a][c] and lat.leq[c][b] for c in lat.elements):
                    covers.append((n[a], n[b]))
    table = tuple((n[a], n[b], n[alg.arr[a][b]]) for a in lat.elements for b in lat.elements)
    return [
        LatticeDecl(f"{name}_L", tuple(n), tuple(covers)),
        ArrowDecl(f"{name}_A", f"{name}_L", table),
        SeparatorDecl(name, f"{name}_L", f"{name}_A", False, tuple(n[x] for x in sorted(alg.sep))),
    ]


def applicative_decl(P: ApplicativePoset, name: str) -> ApplicativeDecl:
    n = P.names
    order = tuple(
        (n[a], n[b]) for a in P.elements for b in P.elements if a != b and P.leq[a][b]
    )
    app = tuple((n[a], n[b], n[P.app[a][b]]) for a in P.elements for b in P.elements if P.app[a][b] is not None)
    return ApplicativeDecl(name, tuple(n), order, app, tuple(n[x] for x in sorted(P.filter)))
