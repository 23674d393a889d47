from dataclasses import dataclass
from enum import Enum, auto

from bofdb.errors import QuerySyntaxError

KEYWORDS = ("SELECT", "FROM", "WHERE", "AND", "IN")


class TokenType(Enum):
    KEYWORD = auto()
    IDENTIFIER = auto()
    INTEGER = auto()
    STRING = auto()
    DIGEST = auto()
    STAR = auto()
    LPAREN = auto()
    RPAREN = auto()
    COMMA = auto()
    EQUALS = auto()
    SEMICOLON = auto()
    EOF = auto()


PUNCTUATION = {
    "*": TokenType.STAR,
    "(": TokenType.LPAREN,
    ")": TokenType.RPAREN,
    ",": TokenType.COMMA,
    "=": TokenType.EQUALS,
    ";": TokenType.SEMICOLON,
}

DIGITS = set("0123456789")
HEX_DIGITS = set("0123456789abcdefABCDEF")


@dataclass(frozen=True)
class Token:
    """A lexical token

    Keywords carry their upper-case spelling as value, integers an int,
    strings the unescaped text and digests 16 bytes.
    """

    type: TokenType
    value: object
    line: int
    column: int


class Tokenizer:
    """Splits a query into tokens, tracking 1-based line and column

    Args:
        text (str): the query text
    """

    def __init__(self, text) -> None:
        self.text = text
        self.pos = 0
        self.line = 1
        self.column = 1

    def _peek(self, offset=0):
        pos = self.pos + offset
        return self.text[pos] if pos < len(self.text) else ""

    def _advance(self, count=1):
        for _ in range(count):
            if self.text[self.pos] == "\n":
                self.line += 1
                self.column = 1
            else:
                self.column += 1
            self.pos += 1

    def _skip_blank(self):
        while self.pos < len(self.text):
            if self._peek().isspace():
                self._advance()
            elif self.text.startswith("--", self.pos):
                while self.pos < len(self.text) and self._peek() != "\n":
                    self._advance()
            else:
                break

    def tokens(self):
        """Returns the list of tokens, ending with an EOF token

        Raises:
            QuerySyntaxError: on a character or literal that can't start a
                token
        """
        result = []
        while True:
            self._skip_blank()
            if self.pos >= len(self.text):
                result.append(Token(TokenType.EOF, None, self.line, self.column))
                return result
            result.append(self._next())

    def _next(self):
        line, column = self.line, self.column
        char = self._peek()
        if char in "xX" and self._peek(1) == "'":
            return Token(TokenType.DIGEST, self._digest(line, column), line, column)
        if char.isalpha() or char == "_":
            start = self.pos
            while self._peek().isalnum() or self._peek() == "_":
                self._advance()
            word = self.text[start : self.pos]
            if word.upper() in KEYWORDS:
                return Token(TokenType.KEYWORD, word.upper(), line, column)
            return Token(TokenType.IDENTIFIER, word, line, column)
        if char in DIGITS or (char == "-" and self._peek(1) in DIGITS):
            start = self.pos
            self._advance()
            while self._peek() in DIGITS:
                self._advance()
            if self._peek().isalpha() or self._peek() == "_":
                raise QuerySyntaxError("malformed number", self.line, self.column)
            return Token(TokenType.INTEGER, int(self.text[start : self.pos]), line, column)
        if char == "'":
            return Token(TokenType.STRING, self._string(line, column), line, column)
        if char in PUNCTUATION:
            self._advance()
            return Token(PUNCTUATION[char], char, line, column)
        raise QuerySyntaxError("unexpected character {!r}".format(char), line, column)

    def _string(self, line, column):
        self._advance()
        chars = []
        while True:
            if self.pos >= len(self.text):
                raise QuerySyntaxError("unterminated string literal", line, column)
            char = self._peek()
            self._advance()
            if char == "'":
                if self._peek() != "'":
                    return "".join(chars)
                self._advance()
            chars.append(char)

    def _digest(self, line, column):
        self._advance(2)
        start = self.pos
        while self._peek() in HEX_DIGITS:
            self._advance()
        digits = self.text[start : self.pos]
        if self._peek() != "'":
            raise QuerySyntaxError("unterminated digest literal", line, column)
        if len(digits) != 32:
            raise QuerySyntaxError(
                "a digest literal has 32 hex digits, got {}".format(len(digits)), line, column
            )
        self._advance()
        return bytes.fromhex(digits)


def tokenize(text):
    """Tokens of a query text, ending with an EOF token"""
    return Tokenizer(text).tokens()
