from bofdb.query.ast_nodes import Call, CallPredicate, Column, Equals, InList, Star


def print_literal(literal):
    if literal.kind == "integer":
        return str(literal.value)
    if literal.kind == "string":
        return "'{}'".format(literal.value.replace("'", "''"))
    return "x'{}'".format(literal.value.hex())


def _print_call(call):
    return "{}({})".format(call.name, ", ".join(print_literal(a) for a in call.args))


def _print_item(item):
    if isinstance(item, Star):
        return "*"
    if isinstance(item, Call):
        return _print_call(item)
    return item.name


def _print_predicate(predicate):
    if isinstance(predicate, CallPredicate):
        return _print_call(predicate.call)
    if isinstance(predicate, InList):
        values = ", ".join(print_literal(v) for v in predicate.values)
        return "{} IN ({})".format(predicate.column.name, values)
    left = predicate.left
    left = left.name if isinstance(left, Column) else _print_call(left)
    return "{} = {}".format(left, print_literal(predicate.right))


def print_query(ast):
    """Canonical text of a statement

    Keywords are upper case, items are separated by ", ", digests are
    lowercase hex and the FROM clause is omitted when the source was
    implicit. Parsing the output gives back an equal QueryAst.

    Args:
        ast (bofdb.query.ast_nodes.QueryAst): the statement

    Returns:
        str: the statement text, ending with ";"
    """
    text = "SELECT " + ", ".join(_print_item(item) for item in ast.projection)
    if not ast.implicit_source:
        text += " FROM " + ast.source
    if ast.predicates:
        text += " WHERE " + " AND ".join(_print_predicate(p) for p in ast.predicates)
    return text + ";"
