"""Math AST node types, normalization, canonical serialization and hashing.

The tree produced by the parser is built from a small set of node kinds:
rows, identifiers, numbers, operators, fractions, square roots, scripts
(sub/superscript pairs) and literal text.  All downstream work -- MathML
rendering, fragment matching, formula lookup -- operates on these nodes.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

VARIANT_PLAIN = "plain"
VARIANT_CALLIGRAPHIC = "calligraphic"
VARIANT_GREEK = "greek"


@dataclass(frozen=True)
class MathNode:
    """Base class for all math tree nodes."""


@dataclass(frozen=True)
class Row(MathNode):
    children: tuple[MathNode, ...]


@dataclass(frozen=True)
class Identifier(MathNode):
    name: str
    variant: str = VARIANT_PLAIN


@dataclass(frozen=True)
class Number(MathNode):
    literal: str


@dataclass(frozen=True)
class Operator(MathNode):
    # Single source characters ("=", "+") or backslash commands ("\\cdot").
    symbol: str


@dataclass(frozen=True)
class Fraction(MathNode):
    numerator: MathNode
    denominator: MathNode


@dataclass(frozen=True)
class Sqrt(MathNode):
    radicand: MathNode


@dataclass(frozen=True)
class Script(MathNode):
    base: MathNode
    sub: MathNode | None = None
    sup: MathNode | None = None


@dataclass(frozen=True)
class Text(MathNode):
    content: str


@dataclass(frozen=True)
class FormulaAst:
    """A parsed formula: the tree plus the source it came from."""

    root: MathNode
    source_tex: str = ""


def children(node: MathNode) -> tuple[MathNode, ...]:
    """Ordered child tuple of a node; leaves return ().

    Script children are enumerated as (base, sub?, sup?) with absent slots
    skipped, so child indices are dense.  Paths used by the fragment
    matcher and the AST wire format index into this enumeration.
    """
    if isinstance(node, Row):
        return node.children
    if isinstance(node, Fraction):
        return (node.numerator, node.denominator)
    if isinstance(node, Sqrt):
        return (node.radicand,)
    if isinstance(node, Script):
        out: list[MathNode] = [node.base]
        if node.sub is not None:
            out.append(node.sub)
        if node.sup is not None:
            out.append(node.sup)
        return tuple(out)
    return ()


def node_at(root: MathNode, path: tuple[int, ...]) -> MathNode:
    node = root
    for index in path:
        node = children(node)[index]
    return node


def count_nodes(node: MathNode) -> int:
    return 1 + sum(count_nodes(child) for child in children(node))


def normalize(ast: FormulaAst) -> FormulaAst:
    """Flatten nested rows and unwrap single-child rows; idempotent."""
    return replace(ast, root=_normalize_node(ast.root))


def _normalize_node(node: MathNode) -> MathNode:
    if isinstance(node, Row):
        flat: list[MathNode] = []
        for child in node.children:
            child = _normalize_node(child)
            if isinstance(child, Row):
                flat.extend(child.children)
            else:
                flat.append(child)
        if len(flat) == 1:
            return flat[0]
        return Row(tuple(flat))
    if isinstance(node, Fraction):
        return Fraction(_normalize_node(node.numerator), _normalize_node(node.denominator))
    if isinstance(node, Sqrt):
        return Sqrt(_normalize_node(node.radicand))
    if isinstance(node, Script):
        return Script(
            base=_normalize_node(node.base),
            sub=_normalize_node(node.sub) if node.sub is not None else None,
            sup=_normalize_node(node.sup) if node.sup is not None else None,
        )
    return node


def canonical_tex(ast: FormulaAst | MathNode) -> str:
    """Deterministic serialization of a normalized tree.

    Every fraction, root and script argument is braced.  Bare command
    words (greek letters, symbol operators) keep one trailing space so
    that the serialization of a node is context free: concatenating the
    serializations of a row's children reproduces the row's own
    serialization exactly.
    """
    node = ast.root if isinstance(ast, FormulaAst) else ast
    return _serialize(node)


def _serialize(node: MathNode) -> str:
    if isinstance(node, Row):
        return "".join(_serialize(child) for child in node.children)
    if isinstance(node, Identifier):
        if node.variant == VARIANT_GREEK:
            return "\\" + node.name + " "
        if node.variant == VARIANT_CALLIGRAPHIC:
            return "\\mathcal{" + node.name + "}"
        return node.name
    if isinstance(node, Number):
        return node.literal
    if isinstance(node, Operator):
        if node.symbol.startswith("\\"):
            return node.symbol + " "
        return node.symbol
    if isinstance(node, Fraction):
        return "\\frac{" + _serialize(node.numerator) + "}{" + _serialize(node.denominator) + "}"
    if isinstance(node, Sqrt):
        return "\\sqrt{" + _serialize(node.radicand) + "}"
    if isinstance(node, Script):
        base = _serialize(node.base)
        if isinstance(node.base, Row):
            base = "{" + base + "}"
        out = base
        if node.sub is not None:
            out += "_{" + _serialize(node.sub) + "}"
        if node.sup is not None:
            out += "^{" + _serialize(node.sup) + "}"
        return out
    if isinstance(node, Text):
        return "\\mbox{" + node.content + "}"
    raise TypeError(f"unknown node type: {type(node).__name__}")


FNV64_OFFSET_BASIS = 0xCBF29CE484222325
FNV64_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    h = FNV64_OFFSET_BASIS
    for byte in data:
        h ^= byte
        h = (h * FNV64_PRIME) & _MASK64
    return h


def canonical_hash(ast: FormulaAst | MathNode) -> int:
    """64-bit FNV-1a of the normalized canonical serialization."""
    if isinstance(ast, MathNode):
        ast = FormulaAst(root=ast)
    return fnv1a_64(canonical_tex(normalize(ast)).encode("utf-8"))
