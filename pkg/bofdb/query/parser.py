"""Recursive-descent parser of the query language::

    statement := "SELECT" projection ["FROM" ident] ["WHERE" conj] ";"
    projection := "*" | item {"," item}
    item      := ident | call
    conj      := pred {"AND" pred}
    pred      := ident "=" literal | ident "IN" "(" literal {"," literal} ")"
               | call ["=" literal]
    call      := ident "(" [literal {"," literal}] ")"
    literal   := integer | string | "x'" 32 hex digits "'"

Keywords are case-insensitive, identifiers case-sensitive. A statement
without FROM reads images_ft.
"""

from bofdb.errors import QuerySyntaxError, UnknownColumn, UnknownFunction, UnknownTable
from bofdb.query.ast_nodes import (
    Call,
    CallPredicate,
    Column,
    Equals,
    InList,
    Literal,
    QueryAst,
    Star,
)
from bofdb.query.schema import DEFAULT_SOURCE, FUNCTIONS, TABLE_COLUMNS
from bofdb.query.tokenizer import TokenType, tokenize

LITERAL_KINDS = {
    TokenType.INTEGER: "integer",
    TokenType.STRING: "string",
    TokenType.DIGEST: "digest",
}


def _describe(token):
    if token.type == TokenType.EOF:
        return "end of input"
    if token.type == TokenType.KEYWORD:
        return token.value
    return repr(token.value) if token.type != TokenType.DIGEST else "digest literal"


class Parser:
    """Parses one statement

    Args:
        text (str): the query text
    """

    def __init__(self, text) -> None:
        self.tokens = tokenize(text)
        self.pos = 0

    @property
    def current(self):
        return self.tokens[self.pos]

    def _peek(self, offset=1):
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def _error(self, expected, token=None):
        token = self.current if token is None else token
        raise QuerySyntaxError(
            "expected {}, found {}".format(expected, _describe(token)),
            token.line,
            token.column,
        )

    def _accept_keyword(self, word):
        if self.current.type == TokenType.KEYWORD and self.current.value == word:
            self.pos += 1
            return True
        return False

    def _expect_keyword(self, word):
        if not self._accept_keyword(word):
            self._error(word)

    def _expect(self, token_type, expected):
        token = self.current
        if token.type != token_type:
            self._error(expected)
        self.pos += 1
        return token

    def parse(self):
        """Returns the QueryAst of the statement

        Raises:
            QuerySyntaxError: if the text doesn't follow the grammar
            UnknownTable: if FROM names a table that doesn't exist
            UnknownFunction: if a call names an unregistered function
            UnknownColumn: if a column doesn't belong to the source table
        """
        self._expect_keyword("SELECT")
        projection = self._projection()

        implicit = True
        source = DEFAULT_SOURCE
        source_token = None
        if self._accept_keyword("FROM"):
            source_token = self._expect(TokenType.IDENTIFIER, "table name")
            source = source_token.value
            implicit = False

        predicates = []
        if self._accept_keyword("WHERE"):
            predicates.append(self._predicate())
            while self._accept_keyword("AND"):
                predicates.append(self._predicate())

        self._expect(TokenType.SEMICOLON, "';'")
        if self.current.type != TokenType.EOF:
            self._error("end of input")

        if source not in TABLE_COLUMNS:
            raise UnknownTable("unknown table {}".format(source))
        ast = QueryAst(tuple(projection), source, implicit, tuple(predicates))
        self._check_columns(ast)
        return ast

    def _projection(self):
        if self.current.type == TokenType.STAR:
            self.pos += 1
            return [Star()]
        items = [self._item()]
        while self.current.type == TokenType.COMMA:
            self.pos += 1
            items.append(self._item())
        return items

    def _item(self):
        token = self._expect(TokenType.IDENTIFIER, "column or function call")
        if self.current.type == TokenType.LPAREN:
            return self._call(token)
        return Column(token.value)

    def _call(self, name_token):
        if name_token.value not in FUNCTIONS:
            raise UnknownFunction("unknown function {}".format(name_token.value))
        self._expect(TokenType.LPAREN, "'('")
        args = []
        if self.current.type != TokenType.RPAREN:
            args.append(self._literal())
            while self.current.type == TokenType.COMMA:
                self.pos += 1
                args.append(self._literal())
        self._expect(TokenType.RPAREN, "')'")
        return Call(name_token.value, tuple(args))

    def _literal(self):
        token = self.current
        if token.type not in LITERAL_KINDS:
            self._error("literal")
        self.pos += 1
        return Literal(LITERAL_KINDS[token.type], token.value)

    def _predicate(self):
        token = self._expect(TokenType.IDENTIFIER, "column or function call")
        if self.current.type == TokenType.LPAREN:
            call = self._call(token)
            if self.current.type == TokenType.EQUALS:
                self.pos += 1
                return Equals(call, self._literal())
            return CallPredicate(call)
        column = Column(token.value)
        if self.current.type == TokenType.EQUALS:
            self.pos += 1
            return Equals(column, self._literal())
        if self._accept_keyword("IN"):
            self._expect(TokenType.LPAREN, "'('")
            values = [self._literal()]
            while self.current.type == TokenType.COMMA:
                self.pos += 1
                values.append(self._literal())
            self._expect(TokenType.RPAREN, "')'")
            return InList(column, tuple(values))
        self._error("'=' or IN")

    def _check_columns(self, ast):
        columns = TABLE_COLUMNS[ast.source]
        names = [item.name for item in ast.projection if isinstance(item, Column)]
        for predicate in ast.predicates:
            if isinstance(predicate, InList):
                names.append(predicate.column.name)
            elif isinstance(predicate, Equals) and isinstance(predicate.left, Column):
                names.append(predicate.left.name)
        for name in names:
            if name not in columns:
                raise UnknownColumn("table {} has no column {}".format(ast.source, name))


def parse(text):
    """Parses a query statement into a QueryAst

    Args:
        text (str): the statement

    Returns:
        bofdb.query.ast_nodes.QueryAst: the syntax tree
    """
    return Parser(text).parse()
