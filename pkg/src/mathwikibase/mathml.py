"""Rendering of formula trees to Presentation MathML and accessibility text."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from mathwikibase.nodes import (
    VARIANT_CALLIGRAPHIC,
    VARIANT_GREEK,
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
)

# Unicode codepoints for greek letter commands.
GREEK_CHARS = {
    "alpha": "α", "beta": "β", "gamma": "γ", "delta": "δ",
    "epsilon": "ϵ", "zeta": "ζ", "eta": "η", "theta": "θ",
    "iota": "ι", "kappa": "κ", "lambda": "λ", "mu": "μ",
    "nu": "ν", "xi": "ξ", "omicron": "ο", "pi": "π",
    "rho": "ρ", "sigma": "σ", "tau": "τ", "upsilon": "υ",
    "phi": "ϕ", "chi": "χ", "psi": "ψ", "omega": "ω",
    "Gamma": "Γ", "Delta": "Δ", "Theta": "Θ", "Lambda": "Λ",
    "Xi": "Ξ", "Pi": "Π", "Sigma": "Σ", "Upsilon": "Υ",
    "Phi": "Φ", "Psi": "Ψ", "Omega": "Ω",
}

# Printable characters for symbol commands.
SYMBOL_CHARS = {
    "\\bullet": "∙", "\\ldots": "…", "\\cdot": "⋅",
    "\\times": "×", "\\pm": "±", "\\leq": "≤",
    "\\geq": "≥", "\\neq": "≠", "\\infty": "∞",
    "\\partial": "∂",
}

# Spoken words for operators; characters not listed here read as themselves.
OPERATOR_WORDS = {
    "=": "equals", "+": "plus", "-": "minus", "*": "star", "/": "slash",
    "(": "open parenthesis", ")": "close parenthesis",
    "[": "open bracket", "]": "close bracket",
    "!": "exclamation mark", ",": "comma", ".": "point", ";": "semicolon",
    "<": "less than", ">": "greater than", "|": "vertical bar",
    "\\bullet": "bullet", "\\ldots": "ellipsis", "\\cdot": "dot",
    "\\times": "times", "\\pm": "plus or minus",
    "\\leq": "less than or equal to", "\\geq": "greater than or equal to",
    "\\neq": "not equal to", "\\infty": "infinity", "\\partial": "partial",
}


@dataclass(frozen=True)
class RenderedFormula:
    mathml: str
    alt_text: str
    source_tex: str


def render(ast: FormulaAst) -> RenderedFormula:
    return RenderedFormula(
        mathml=render_mathml(ast),
        alt_text=render_alt_text(ast),
        source_tex=ast.source_tex,
    )


def render_mathml(ast: FormulaAst | MathNode) -> str:
    node = ast.root if isinstance(ast, FormulaAst) else ast
    return "<math>" + _element(node) + "</math>"


def _element(node: MathNode) -> str:
    if isinstance(node, Row):
        return "<mrow>" + "".join(_element(child) for child in node.children) + "</mrow>"
    if isinstance(node, Identifier):
        if node.variant == VARIANT_GREEK:
            return "<mi>" + GREEK_CHARS[node.name] + "</mi>"
        if node.variant == VARIANT_CALLIGRAPHIC:
            return '<mi mathvariant="script">' + escape(node.name) + "</mi>"
        return "<mi>" + escape(node.name) + "</mi>"
    if isinstance(node, Number):
        return "<mn>" + escape(node.literal) + "</mn>"
    if isinstance(node, Operator):
        symbol = SYMBOL_CHARS.get(node.symbol, node.symbol)
        return "<mo>" + escape(symbol) + "</mo>"
    if isinstance(node, Fraction):
        return "<mfrac>" + _element(node.numerator) + _element(node.denominator) + "</mfrac>"
    if isinstance(node, Sqrt):
        return "<msqrt>" + _element(node.radicand) + "</msqrt>"
    if isinstance(node, Script):
        base = _element(node.base)
        if node.sub is not None and node.sup is not None:
            return "<msubsup>" + base + _element(node.sub) + _element(node.sup) + "</msubsup>"
        if node.sub is not None:
            return "<msub>" + base + _element(node.sub) + "</msub>"
        return "<msup>" + base + _element(node.sup) + "</msup>"
    if isinstance(node, Text):
        return "<mtext>" + escape(node.content) + "</mtext>"
    raise TypeError(f"unknown node type: {type(node).__name__}")


def render_alt_text(ast: FormulaAst | MathNode) -> str:
    node = ast.root if isinstance(ast, FormulaAst) else ast
    return " ".join(_words(node))


def _words(node: MathNode) -> list[str]:
    if isinstance(node, Row):
        out: list[str] = []
        for child in node.children:
            out.extend(_words(child))
        return out
    if isinstance(node, Identifier):
        if node.variant == VARIANT_CALLIGRAPHIC:
            return ["script", node.name]
        return [node.name]
    if isinstance(node, Number):
        return [node.literal]
    if isinstance(node, Operator):
        word = OPERATOR_WORDS.get(node.symbol)
        if word is None:
            word = node.symbol.lstrip("\\")
        return word.split()
    if isinstance(node, Fraction):
        return ["fraction"] + _words(node.numerator) + ["over"] + _words(node.denominator)
    if isinstance(node, Sqrt):
        return ["square", "root", "of"] + _words(node.radicand)
    if isinstance(node, Script):
        out = _words(node.base)
        if node.sub is not None:
            out += ["sub"] + _words(node.sub)
        if node.sup is not None:
            out += ["to", "the", "power"] + _words(node.sup)
        return out
    if isinstance(node, Text):
        # markup characters are never allowed in spoken output
        cleaned = (
            node.content.replace("<", " less than ")
            .replace(">", " greater than ")
            .replace("&", " and ")
        )
        return cleaned.split()
    raise TypeError(f"unknown node type: {type(node).__name__}")
