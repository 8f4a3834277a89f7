"""Tokenizer for the supported LaTeX math subset.

Splits an input string into tokens carrying byte spans back into the
source.  Whitespace is skipped silently; everything else must be a
known construct or tokenization fails.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from mathwikibase.errors import MathWikibaseError


class TokenKind(enum.Enum):
    CONTROL_SEQUENCE = "ControlSequence"
    LETTER = "Letter"
    DIGITS = "Digits"
    OPERATOR = "Operator"
    BRACE_OPEN = "BraceOpen"
    BRACE_CLOSE = "BraceClose"
    SUPERSCRIPT = "Superscript"
    SUBSCRIPT = "Subscript"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    start: int
    end: int


class TokenizeError(MathWikibaseError):
    """Raised when the input contains something outside the subset."""


class UnknownControlSequence(TokenizeError):
    code = "unknown_control_sequence"

    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown control sequence \\{name} at offset {offset}")
        self.name = name
        self.offset = offset


class IllegalCharacter(TokenizeError):
    code = "illegal_character"

    def __init__(self, char: str, offset: int):
        super().__init__(f"illegal character {char!r} at offset {offset}")
        self.char = char
        self.offset = offset


GREEK_LOWER = (
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "omicron", "pi", "rho",
    "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
)

GREEK_UPPER = (
    "Gamma", "Delta", "Theta", "Lambda", "Xi", "Pi", "Sigma", "Upsilon",
    "Phi", "Psi", "Omega",
)

GREEK_COMMANDS = frozenset(GREEK_LOWER) | frozenset(GREEK_UPPER)

# Commands that stand for a single printable symbol.
SYMBOL_COMMANDS = frozenset({
    "bullet", "ldots", "cdot", "times", "pm",
    "leq", "geq", "neq", "infty", "partial",
})

# Commands that take arguments and shape the tree.
STRUCTURAL_COMMANDS = frozenset({"frac", "sqrt", "mbox", "mathcal"})

KNOWN_COMMANDS = GREEK_COMMANDS | SYMBOL_COMMANDS | STRUCTURAL_COMMANDS

OPERATOR_CHARS = frozenset("=+-*/()[]!,.;<>|")


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "\\":
            start = i
            i += 1
            word_start = i
            while i < n and source[i].isalpha():
                i += 1
            name = source[word_start:i]
            if not name:
                # control symbols like "\," or a trailing backslash
                name = source[i : i + 1]
                raise UnknownControlSequence(name, start)
            if name not in KNOWN_COMMANDS:
                raise UnknownControlSequence(name, start)
            tokens.append(Token(TokenKind.CONTROL_SEQUENCE, source[start:i], start, i))
            continue
        if ch.isascii() and ch.isalpha():
            tokens.append(Token(TokenKind.LETTER, ch, i, i + 1))
            i += 1
            continue
        if ch.isdigit() and ch.isascii():
            start = i
            while i < n and source[i].isascii() and source[i].isdigit():
                i += 1
            tokens.append(Token(TokenKind.DIGITS, source[start:i], start, i))
            continue
        if ch in OPERATOR_CHARS:
            tokens.append(Token(TokenKind.OPERATOR, ch, i, i + 1))
            i += 1
            continue
        if ch == "{":
            tokens.append(Token(TokenKind.BRACE_OPEN, ch, i, i + 1))
            i += 1
            continue
        if ch == "}":
            tokens.append(Token(TokenKind.BRACE_CLOSE, ch, i, i + 1))
            i += 1
            continue
        if ch == "^":
            tokens.append(Token(TokenKind.SUPERSCRIPT, ch, i, i + 1))
            i += 1
            continue
        if ch == "_":
            tokens.append(Token(TokenKind.SUBSCRIPT, ch, i, i + 1))
            i += 1
            continue
        raise IllegalCharacter(ch, i)
    return tokens
