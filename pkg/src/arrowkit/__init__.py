"""arrowkit: a finite-model workbench for arrow algebras.

Build finite lattices with an arrow, check separators and combinators,
interpret lambda terms, compute the logical preorder, nuclei and their
subalgebras, finite-index triposes, Sierpinski and modified algebras, and
the applicative structures they come from.
"""

__version__ = "0.1.0"

from .arrow import ArrowStructure, heyting_arrow, validate_arrow  # noqa: E402
from .lattice import Lattice, validate_lattice  # noqa: E402
from .separator import ArrowAlgebra, combinator_report, generate_separator, validate_separator  # noqa: E402

__all__ = [
    "ArrowAlgebra",
    "ArrowStructure",
    "Lattice",
    "__version__",
    "combinator_report",
    "generate_separator",
    "heyting_arrow",
    "validate_arrow",
    "validate_lattice",
    "validate_separator",
]
