"""
Parser module for relator strings

Grammar (whitespace ignored):
    word   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := NAME | '1' | '(' word ')'
"""

import re
from collections.abc import Sequence
from typing import TYPE_CHECKING

from .exceptions import RelatorSyntaxError

if TYPE_CHECKING:
    from .fpgroup import Word

NAME_PATTERN = r"[A-Za-z_][A-Za-z0-9_.@<\[\]'|]*"


class RelatorParser:
    """Parser turning relator strings into words over a fixed generating set"""

    def __init__(self, generators: Sequence[str]) -> None:
        """
        Initialize the parser with the generator alphabet

        Args:
            generators: Generator names; position is the generator index
        """
        self.generators = tuple(generators)
        self.index = {name: i for i, name in enumerate(self.generators)}
        self.token_pattern = re.compile(
            rf"\s*(?:(?P<name>{NAME_PATTERN})|(?P<int>-?\d+)|(?P<op>[*^()]))"
        )
        self.trailing_space = re.compile(r"\s*$")

    def parse(self, text: str) -> "Word":
        """
        Parse a relator string

        Args:
            text: Relator such as "(s*t)^2" or "b*a*b^-1*a^-2"

        Returns:
            Freely reduced word

        Raises:
            RelatorSyntaxError: with the byte offset of the offending token
        """
        if not isinstance(text, str):
            raise RelatorSyntaxError(f"relator must be a string, got {type(text).__name__}", 0)
        self._text = text
        self._tokens = self._tokenize(text)
        self._position = 0
        word = self._word()
        if self._position < len(self._tokens):
            kind, value, offset = self._tokens[self._position]
            raise RelatorSyntaxError(f"unexpected {value!r}", offset)
        return word

    def _tokenize(self, text: str) -> list[tuple[str, str, int]]:
        tokens = []
        position = 0
        while not self.trailing_space.match(text, position):
            match = self.token_pattern.match(text, position)
            if not match:
                offset = self._byte_offset(text, position + self._skip_space(text, position))
                bad = text[position:].strip()[:1]
                raise RelatorSyntaxError(f"unexpected character {bad!r}", offset)
            kind = match.lastgroup or ""
            value = match.group(kind)
            tokens.append((kind, value, self._byte_offset(text, match.start(kind))))
            position = match.end()
        return tokens

    @staticmethod
    def _skip_space(text: str, position: int) -> int:
        return len(text[position:]) - len(text[position:].lstrip())

    @staticmethod
    def _byte_offset(text: str, position: int) -> int:
        return len(text[:position].encode("utf-8"))

    def _peek(self) -> tuple[str, str, int] | None:
        if self._position < len(self._tokens):
            return self._tokens[self._position]
        return None

    def _end_offset(self) -> int:
        return len(self._text.encode("utf-8"))

    def _expect_op(self, op: str) -> None:
        token = self._peek()
        if token is None:
            raise RelatorSyntaxError(f"expected {op!r} but input ended", self._end_offset())
        kind, value, offset = token
        if kind != "op" or value != op:
            raise RelatorSyntaxError(f"expected {op!r} but found {value!r}", offset)
        self._position += 1

    def _word(self) -> "Word":
        word = self._factor()
        while (token := self._peek()) is not None and token[:2] == ("op", "*"):
            self._position += 1
            word = word * self._factor()
        return word

    def _factor(self) -> "Word":
        word = self._atom()
        token = self._peek()
        if token is not None and token[:2] == ("op", "^"):
            self._position += 1
            exponent = self._peek()
            if exponent is None:
                raise RelatorSyntaxError("expected an exponent", self._end_offset())
            kind, value, offset = exponent
            if kind != "int":
                raise RelatorSyntaxError(f"expected an integer exponent, found {value!r}", offset)
            self._position += 1
            word = word ** int(value)
        return word

    def _atom(self) -> "Word":
        from .fpgroup import Word

        token = self._peek()
        if token is None:
            raise RelatorSyntaxError("unexpected end of relator", self._end_offset())
        kind, value, offset = token
        if kind == "name":
            if value not in self.index:
                raise RelatorSyntaxError(f"unknown generator {value!r}", offset)
            self._position += 1
            return Word.generator(self.index[value])
        if kind == "int" and value == "1":
            self._position += 1
            return Word.identity()
        if kind == "op" and value == "(":
            self._position += 1
            word = self._word()
            self._expect_op(")")
            return word
        raise RelatorSyntaxError(f"unexpected {value!r}", offset)


def parse_word(text: str, generators: Sequence[str]) -> "Word":
    """
    Parse one relator string over the given generators

    Args:
        text: Relator string
        generators: Generator names

    Returns:
        The parsed word
    """
    return RelatorParser(generators).parse(text)
