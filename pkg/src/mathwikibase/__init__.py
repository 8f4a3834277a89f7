"""LaTeX math parsing, MathML rendering and knowledge-base semantics for wiki formulae."""

from mathwikibase.errors import MathWikibaseError
from mathwikibase.nodes import (
    FormulaAst,
    Fraction,
    Identifier,
    MathNode,
    Number,
    Operator,
    Row,
    Script,
    Sqrt,
    Text,
    canonical_hash,
    canonical_tex,
    normalize,
)

__version__ = "0.1.0"

__all__ = [
    "MathWikibaseError",
    "FormulaAst",
    "Fraction",
    "Identifier",
    "MathNode",
    "Number",
    "Operator",
    "Row",
    "Script",
    "Sqrt",
    "Text",
    "canonical_hash",
    "canonical_tex",
    "normalize",
    "__version__",
]
