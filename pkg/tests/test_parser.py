"""
Tests for the strat_pi1.parser module
"""

import pytest

from strat_pi1.exceptions import RelatorSyntaxError
from strat_pi1.fpgroup import Word
from strat_pi1.parser import RelatorParser, parse_word


class TestRelatorParser:
    """Test cases for the relator grammar"""

    @pytest.fixture
    def parser(self):
        return RelatorParser(["s", "t"])

    def test_single_generator(self, parser):
        """A bare name is a one-letter word"""
        assert parser.parse("s") == Word.generator(0)

    def test_exponents(self, parser):
        """Positive and negative exponents expand to repeated letters"""
        assert parser.parse("s^2").letters == ((0, 1), (0, 1))
        assert parser.parse("t^-3").letters == ((1, -1),) * 3

    def test_parenthesized_power(self, parser):
        """(s*t)^2 is s t s t"""
        assert parser.parse("(s*t)^2").letters == ((0, 1), (1, 1), (0, 1), (1, 1))

    def test_free_reduction(self, parser):
        """Parsed words are freely reduced"""
        assert parser.parse("s*t*t^-1*s^-1").is_identity
        assert parser.parse("(s*t)^-1") == Word(((1, -1), (0, -1)))

    def test_identity_literal(self, parser):
        """'1' denotes the identity"""
        assert parser.parse("1").is_identity
        assert parser.parse("s*1*t") == parser.parse("s*t")

    def test_whitespace_ignored(self, parser):
        """Spaces around tokens do not matter"""
        assert parser.parse("  ( s * t ) ^ 2 ") == parser.parse("(s*t)^2")

    def test_names_with_site_characters(self):
        """Colimit and edge names contain '@', '<' and brackets"""
        parser = RelatorParser(["d@p<eta", "e[a<b]"])
        assert parser.parse("d@p<eta*e[a<b]^-1").letters == ((0, 1), (1, -1))

    def test_unknown_generator_offset(self, parser):
        """Unknown names report their byte offset"""
        with pytest.raises(RelatorSyntaxError) as excinfo:
            parser.parse("s*u")
        assert excinfo.value.offset == 2
        assert "unknown generator" in str(excinfo.value)

    def test_double_operator(self, parser):
        """A second '*' is unexpected where an atom should start"""
        with pytest.raises(RelatorSyntaxError) as excinfo:
            parser.parse("s**t")
        assert excinfo.value.offset == 2

    def test_unclosed_parenthesis(self, parser):
        """Missing ')' is reported at the end of input"""
        with pytest.raises(RelatorSyntaxError) as excinfo:
            parser.parse("(s*t")
        assert excinfo.value.offset == 4

    def test_non_integer_exponent(self, parser):
        """Exponents must be integers"""
        with pytest.raises(RelatorSyntaxError) as excinfo:
            parser.parse("s^t")
        assert excinfo.value.offset == 2

    def test_bad_character(self, parser):
        """Characters outside the grammar are rejected"""
        with pytest.raises(RelatorSyntaxError) as excinfo:
            parser.parse("s + t")
        assert excinfo.value.offset == 2

    def test_empty_and_non_string(self, parser):
        """Empty text and non-strings are syntax errors"""
        with pytest.raises(RelatorSyntaxError):
            parser.parse("")
        with pytest.raises(RelatorSyntaxError):
            parser.parse(3)

    def test_error_message_cites_bytes(self, parser):
        """The message carries the offset for diagnostics"""
        with pytest.raises(RelatorSyntaxError, match=r"\(at byte 2\)"):
            parser.parse("s*u")

    def test_parse_word_helper(self):
        """parse_word builds a throwaway parser"""
        assert parse_word("b*a", ["a", "b"]).letters == ((1, 1), (0, 1))
