"""Recursive-descent parser from token streams to normalized formula trees.

Argument handling follows standard TeX rules: a command argument is
either a braced group or the single following token, and a digit run
yields exactly one digit when consumed as a single-token argument
(so ``\\frac12`` means one half).  Script marks ``^`` and ``_`` bind to
the immediately preceding atom; a sub and a sup on the same base merge
into one Script node, while a second mark on an occupied slot nests.
"""

from __future__ import annotations

from dataclasses import dataclass

from mathwikibase.errors import MathWikibaseError
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
    normalize,
)
from mathwikibase.tokenizer import (
    GREEK_COMMANDS,
    SYMBOL_COMMANDS,
    Token,
    TokenKind,
    tokenize,
)


class ParseError(MathWikibaseError):
    """Raised when a token stream does not form a valid formula."""


class UnexpectedEnd(ParseError):
    code = "unexpected_end"

    def __init__(self, message: str = "input ended while an argument was expected"):
        super().__init__(message)


class UnbalancedBraces(ParseError):
    # offset points at the unclosed "{" or the stray "}"
    code = "unbalanced_braces"

    def __init__(self, offset: int):
        super().__init__(f"unbalanced braces at offset {offset}")
        self.offset = offset


class EmptyFormula(ParseError):
    code = "empty_formula"

    def __init__(self):
        super().__init__("formula is empty")


class EmptyGroup(ParseError):
    code = "empty_group"

    def __init__(self, offset: int):
        super().__init__(f"empty group at offset {offset}")
        self.offset = offset


class MissingScriptBase(ParseError):
    code = "missing_script_base"

    def __init__(self, offset: int):
        super().__init__(f"script mark without a base at offset {offset}")
        self.offset = offset


@dataclass
class _Entry:
    node: MathNode
    # True for Script nodes whose marks were attached in this sequence;
    # only those accept a later mark for the unfilled slot.
    open_script: bool = False


class _Cursor:
    def __init__(self, tokens: list[Token]):
        self._tokens = list(tokens)
        self._pos = 0

    def peek(self) -> Token | None:
        if self._pos >= len(self._tokens):
            return None
        return self._tokens[self._pos]

    def advance(self) -> Token:
        token = self._tokens[self._pos]
        self._pos += 1
        return token

    def split_leading_digit(self) -> Token:
        """Consume one digit from the Digits token under the cursor."""
        token = self._tokens[self._pos]
        if len(token.text) == 1:
            self._pos += 1
            return token
        head = Token(TokenKind.DIGITS, token.text[0], token.start, token.start + 1)
        rest = Token(TokenKind.DIGITS, token.text[1:], token.start + 1, token.end)
        self._tokens[self._pos] = rest
        return head


def parse(tokens: list[Token], source: str = "") -> FormulaAst:
    """Parse a token stream into a normalized FormulaAst."""
    cursor = _Cursor(tokens)
    entries = _parse_sequence(cursor)
    leftover = cursor.peek()
    if leftover is not None:
        # the only token a sequence stops on is a close brace
        raise UnbalancedBraces(leftover.start)
    if not entries:
        raise EmptyFormula()
    nodes = [entry.node for entry in entries]
    root = Row(tuple(nodes)) if len(nodes) > 1 else nodes[0]
    return normalize(FormulaAst(root=root, source_tex=source))


def parse_tex(source: str) -> FormulaAst:
    """Tokenize and parse a TeX string."""
    return parse(tokenize(source), source)


def _parse_sequence(cursor: _Cursor) -> list[_Entry]:
    entries: list[_Entry] = []
    while True:
        token = cursor.peek()
        if token is None or token.kind is TokenKind.BRACE_CLOSE:
            return entries
        if token.kind in (TokenKind.SUPERSCRIPT, TokenKind.SUBSCRIPT):
            cursor.advance()
            if not entries:
                raise MissingScriptBase(token.start)
            argument = _parse_argument(cursor)
            _attach_script(entries, token, argument)
            continue
        entries.append(_Entry(_parse_atom(cursor)))


def _attach_script(entries: list[_Entry], mark: Token, argument: MathNode) -> None:
    is_sup = mark.kind is TokenKind.SUPERSCRIPT
    last = entries[-1]
    node = last.node
    if last.open_script and isinstance(node, Script):
        slot_empty = node.sup is None if is_sup else node.sub is None
        if slot_empty:
            if is_sup:
                entries[-1] = _Entry(Script(node.base, sub=node.sub, sup=argument), True)
            else:
                entries[-1] = _Entry(Script(node.base, sub=argument, sup=node.sup), True)
            return
    if is_sup:
        entries[-1] = _Entry(Script(base=node, sup=argument), True)
    else:
        entries[-1] = _Entry(Script(base=node, sub=argument), True)


def _parse_atom(cursor: _Cursor) -> MathNode:
    token = cursor.advance()
    if token.kind is TokenKind.LETTER:
        return Identifier(token.text)
    if token.kind is TokenKind.DIGITS:
        return Number(token.text)
    if token.kind is TokenKind.OPERATOR:
        return Operator(token.text)
    if token.kind is TokenKind.BRACE_OPEN:
        return _parse_group(cursor, token)
    if token.kind is TokenKind.CONTROL_SEQUENCE:
        return _parse_command(cursor, token)
    # close braces stop sequences, script marks are handled by the caller
    raise UnbalancedBraces(token.start)


def _parse_group(cursor: _Cursor, open_brace: Token) -> MathNode:
    entries = _parse_sequence(cursor)
    closer = cursor.peek()
    if closer is None:
        raise UnbalancedBraces(open_brace.start)
    cursor.advance()
    if not entries:
        raise EmptyGroup(open_brace.start)
    nodes = [entry.node for entry in entries]
    return Row(tuple(nodes)) if len(nodes) > 1 else nodes[0]


def _parse_command(cursor: _Cursor, token: Token) -> MathNode:
    name = token.text[1:]
    if name in GREEK_COMMANDS:
        return Identifier(name, variant=VARIANT_GREEK)
    if name in SYMBOL_COMMANDS:
        return Operator(token.text)
    if name == "frac":
        numerator = _parse_argument(cursor)
        denominator = _parse_argument(cursor)
        return Fraction(numerator, denominator)
    if name == "sqrt":
        return Sqrt(_parse_argument(cursor))
    if name == "mathcal":
        return _calligraphic(_parse_argument(cursor))
    if name == "mbox":
        return _parse_mbox(cursor)
    raise ParseError(f"unsupported control sequence \\{name}")


def _parse_argument(cursor: _Cursor) -> MathNode:
    """One command argument: a braced group or a single token."""
    token = cursor.peek()
    if token is None:
        raise UnexpectedEnd()
    if token.kind is TokenKind.BRACE_OPEN:
        cursor.advance()
        return _parse_group(cursor, token)
    if token.kind is TokenKind.DIGITS:
        head = cursor.split_leading_digit()
        return Number(head.text)
    if token.kind is TokenKind.BRACE_CLOSE:
        raise UnbalancedBraces(token.start)
    if token.kind in (TokenKind.SUPERSCRIPT, TokenKind.SUBSCRIPT):
        raise MissingScriptBase(token.start)
    return _parse_atom(cursor)


def _parse_mbox(cursor: _Cursor) -> Text:
    """Collect the literal text of an \\mbox argument.

    Inside the braces tokens are not interpreted; their source texts are
    joined, with one space wherever the tokenizer skipped whitespace.
    """
    token = cursor.peek()
    if token is None:
        raise UnexpectedEnd()
    if token.kind is not TokenKind.BRACE_OPEN:
        single = cursor.advance()
        return Text(single.text)
    open_brace = cursor.advance()
    pieces: list[str] = []
    previous_end = open_brace.end
    pending_space = False
    depth = 1
    while True:
        inner = cursor.peek()
        if inner is None:
            raise UnbalancedBraces(open_brace.start)
        cursor.advance()
        if inner.start > previous_end:
            pending_space = True
        previous_end = inner.end
        if inner.kind is TokenKind.BRACE_OPEN:
            depth += 1
            continue
        if inner.kind is TokenKind.BRACE_CLOSE:
            depth -= 1
            if depth == 0:
                break
            continue
        # inner braces group without printing; spaces between words survive
        if pending_space and pieces:
            pieces.append(" ")
        pending_space = False
        pieces.append(inner.text)
    content = "".join(pieces)
    if not content:
        raise EmptyGroup(open_brace.start)
    return Text(content)


def _calligraphic(node: MathNode) -> MathNode:
    """Set the calligraphic variant on every plain identifier in a subtree."""
    if isinstance(node, Identifier):
        if node.variant == VARIANT_GREEK:
            return node
        return Identifier(node.name, variant=VARIANT_CALLIGRAPHIC)
    if isinstance(node, Row):
        return Row(tuple(_calligraphic(child) for child in node.children))
    if isinstance(node, Fraction):
        return Fraction(_calligraphic(node.numerator), _calligraphic(node.denominator))
    if isinstance(node, Sqrt):
        return Sqrt(_calligraphic(node.radicand))
    if isinstance(node, Script):
        return Script(
            base=_calligraphic(node.base),
            sub=_calligraphic(node.sub) if node.sub is not None else None,
            sup=_calligraphic(node.sup) if node.sup is not None else None,
        )
    return node
