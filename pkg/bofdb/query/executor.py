import logging
from dataclasses import dataclass, field

from bofdb.errors import TypeMismatch, UnknownRecord
from bofdb.query.ast_nodes import Call, CallPredicate, Column, Equals, InList, Star
from bofdb.query.functions import QueryContext, call_function
from bofdb.query.printer import print_literal
from bofdb.query.schema import ID_COLUMN, IMAGE_COLUMN, TABLE_COLUMNS, render_value, row_values

logger = logging.getLogger(__name__)

# literal kinds accepted for each column type
COMPATIBLE = {
    "integer": ("integer",),
    "real": ("integer",),
    "string": ("string",),
    "digest": ("digest",),
}


@dataclass
class ResultSet:
    """Columns and rows of a query result

    Attributes:
        columns (list): column names
        rows (list): tuples of values, one per column
    """

    columns: list
    rows: list = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("every row must have one value per column")

    @property
    def row_count(self):
        return len(self.rows)

    def to_lines(self):
        """Tab-separated header line followed by one line per row"""
        lines = ["\t".join(self.columns)]
        lines += ["\t".join(render_value(v) for v in row) for row in self.rows]
        return lines


def _check_literal(column_type, literal, column_name):
    if literal.kind not in COMPATIBLE[column_type]:
        raise TypeMismatch(
            "column {} is {}, compared with a {} literal".format(
                column_name, column_type, literal.kind
            )
        )


def _function_value(value):
    # lists of ids are rendered as "3,7", an empty list as NULL
    if isinstance(value, list):
        return ",".join(str(v) for v in value) if value else None
    return value


class Executor:
    """Evaluates one statement against a store

    Args:
        context (bofdb.query.functions.QueryContext): the store and the
            loaded dictionary and model
        ast (bofdb.query.ast_nodes.QueryAst): the statement
    """

    def __init__(self, context, ast) -> None:
        self.context = context
        self.ast = ast
        self.store = context.store
        self.columns = TABLE_COLUMNS[ast.source]
        self._calls = {}

    def _call(self, call):
        # arguments are literals, so each call is evaluated once
        if call not in self._calls:
            self._calls[call] = call_function(self.context, call)
        return self._calls[call]

    def run(self):
        ast = self.ast
        projection = list(ast.projection)
        if any(isinstance(item, Star) for item in projection):
            projection = [Column(name) for name in self.columns]
        names = [item.name if isinstance(item, Column) else _call_label(item) for item in projection]

        for predicate in ast.predicates:
            if isinstance(predicate, Equals) and isinstance(predicate.left, Column):
                _check_literal(self.columns[predicate.left.name], predicate.right, predicate.left.name)
            elif isinstance(predicate, InList):
                for value in predicate.values:
                    _check_literal(self.columns[predicate.column.name], value, predicate.column.name)

        only_calls = all(isinstance(item, Call) for item in projection)
        if ast.implicit_source and only_calls and not ast.predicates:
            row = tuple(_function_value(self._call(item)) for item in projection)
            return ResultSet(names, [row])

        restriction = self._call_restriction()
        rows = []
        for record_id, row in self._candidates():
            values = row_values(ast.source, record_id, row)
            if not self._matches(values, restriction):
                continue
            rows.append(
                tuple(
                    values[item.name] if isinstance(item, Column) else _function_value(self._call(item))
                    for item in projection
                )
            )
        return ResultSet(names, rows)

    def _call_restriction(self):
        """Image ids allowed by bare-call predicates, None if unrestricted"""
        allowed = None
        for predicate in self.ast.predicates:
            if isinstance(predicate, Equals) and isinstance(predicate.left, Call):
                value = _function_value(self._call(predicate.left))
                if not isinstance(value, str) or predicate.right.kind != "string":
                    raise TypeMismatch("{} returns a string".format(predicate.left.name))
                if value != predicate.right.value:
                    allowed = set()
            if not isinstance(predicate, CallPredicate):
                continue
            if predicate.call.name == "GetClassOfImage":
                raise TypeMismatch("GetClassOfImage can't be used as a condition")
            if self.ast.source not in IMAGE_COLUMN:
                raise TypeMismatch("table {} has no image column".format(self.ast.source))
            ids = set(self._call(predicate.call))
            allowed = ids if allowed is None else allowed & ids
        return allowed

    def _candidates(self):
        """Rows that may match, fetched through the hash index or by id
        when a predicate allows it"""
        table = self.ast.source
        for predicate in self.ast.predicates:
            if not isinstance(predicate, Equals) or not isinstance(predicate.left, Column):
                continue
            name = predicate.left.name
            if table == "descriptors" and name == "comparative_descriptor":
                ids = sorted(self.store.lookup_by_hash(predicate.right.value))
                logger.debug("index lookup returned %d descriptor ids", len(ids))
                return [(i, self.store.fetch(table, i)) for i in ids]
            if ID_COLUMN.get(table) == name:
                try:
                    return [(predicate.right.value, self.store.fetch(table, predicate.right.value))]
                except UnknownRecord:
                    return []
        return self.store.scan(table)

    def _matches(self, values, restriction):
        if restriction is not None:
            column = IMAGE_COLUMN.get(self.ast.source)
            if column is None or values[column] not in restriction:
                return False
        for predicate in self.ast.predicates:
            if isinstance(predicate, Equals) and isinstance(predicate.left, Column):
                if values[predicate.left.name] != predicate.right.value:
                    return False
            elif isinstance(predicate, InList):
                if values[predicate.column.name] not in {v.value for v in predicate.values}:
                    return False
        return True


def _call_label(call):
    return "{}({})".format(call.name, ", ".join(print_literal(a) for a in call.args))


def execute(store, ast, model=None, dictionary=None, extractor=None):
    """Runs a parsed statement

    Equality on descriptors.comparative_descriptor is answered from the
    hash index and only the rows of the matching bucket are fetched.

    Args:
        store (bofdb.Store): the open store
        ast (bofdb.query.ast_nodes.QueryAst): the statement
        model (bofdb.SvmModel, optional): needed by GetClassOfImage
        dictionary (bofdb.Dictionary, optional): needed by the functions
        extractor (bofdb.DescriptorExtractor, optional): overrides the
            extractor the dictionary was learned with

    Returns:
        ResultSet: the result
    """
    context = QueryContext(store, dictionary=dictionary, model=model, extractor=extractor)
    return Executor(context, ast).run()
