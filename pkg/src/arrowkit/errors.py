"""Exception hierarchy shared by all arrowkit modules.

Every diagnostic carries a ``witness`` mapping so that the CLI can render it
with element names instead of raw indices.
"""

from __future__ import annotations

from typing import Any, Sequence


class ArrowkitError(Exception):
    """Base class; ``witness`` holds the offending data (indices or names)."""

    def __init__(self, message: str, **witness: Any) -> None:
        super().__init__(message)
        self.witness = witness


# lattice
class NotAPoset(ArrowkitError):
    pass


class NotALattice(ArrowkitError):
    pass


# arrow
class VarianceViolation(ArrowkitError):
    pass


class NotHeyting(ArrowkitError):
    pass


class SubsetCapExceeded(ArrowkitError):
    pass


class CarrierCapExceeded(ArrowkitError):
    pass


# separator
class NotUpwardClosed(ArrowkitError):
    pass


class NotMPClosed(ArrowkitError):
    pass


class MissingCombinator(ArrowkitError):
    pass


class PreconditionFailed(ArrowkitError):
    pass


# terms
class UnboundVariable(ArrowkitError):
    pass


class TermSyntaxError(ArrowkitError):
    pass


# heyting / tripos / frames
class LawViolated(ArrowkitError):
    pass


class IndexMismatch(ArrowkitError):
    pass


class AdjunctionViolated(ArrowkitError):
    pass


class BCViolated(ArrowkitError):
    pass


class AxiomFailed(ArrowkitError):
    pass


# nucleus
class ClauseFailed(ArrowkitError):
    def __init__(self, clause: int, message: str = "", **witness: Any) -> None:
        super().__init__(message or f"nucleus clause ({clause}) fails", **witness)
        self.clause = clause


# constructions
class NotBinaryImplicative(ArrowkitError):
    pass


class NotJoinsCompatible(ArrowkitError):
    pass


class ValidationFailed(ArrowkitError):
    pass


# applicative posets
class DomainNotDownClosed(ArrowkitError):
    pass


class AppNotMonotone(ArrowkitError):
    pass


class FilterNotClosed(ArrowkitError):
    pass


# workspace DSL
class DslError(ArrowkitError):
    """Input error with a source span (line, column)."""

    def __init__(self, message: str, line: int = 0, column: int = 0, **witness: Any) -> None:
        super().__init__(f"{line}:{column}: {message}", **witness)
        self.line = line
        self.column = column


class DslSyntaxError(DslError):
    pass


class UnknownName(DslError):
    pass


class DuplicateName(DslError):
    pass


def named_witness(names: Sequence[str], exc: Exception) -> dict[str, Any]:
    """The witness of a diagnostic with carrier indices replaced by element names."""
    out: dict[str, Any] = {}
    for k, v in (getattr(exc, "witness", None) or {}).items():
        if isinstance(v, int) and not isinstance(v, bool) and 0 <= v < len(names):
            out[k] = names[v]
        elif isinstance(v, tuple) and v and all(isinstance(x, int) for x in v):
            out[k] = [names[x] for x in v]
        else:
            out[k] = v
    return out
