from dataclasses import dataclass
from typing import Tuple, Union


@dataclass(frozen=True)
class Literal:
    """A typed literal: kind is "integer", "string" or "digest" """

    kind: str
    value: object


@dataclass(frozen=True)
class Column:
    name: str


@dataclass(frozen=True)
class Star:
    pass


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[Literal, ...] = ()


@dataclass(frozen=True)
class Equals:
    """column = literal or call = literal"""

    left: Union[Column, Call]
    right: Literal


@dataclass(frozen=True)
class InList:
    column: Column
    values: Tuple[Literal, ...]


@dataclass(frozen=True)
class CallPredicate:
    """A bare function call restricting the rows to the images it returns"""

    call: Call


@dataclass(frozen=True)
class QueryAst:
    """A parsed SELECT statement

    Attributes:
        projection (tuple): Column, Call or Star items
        source (str): the table read
        implicit_source (bool): True if the statement had no FROM clause
        predicates (tuple): Equals, InList or CallPredicate items, all of
            which must hold
    """

    projection: Tuple[Union[Column, Call, Star], ...]
    source: str
    implicit_source: bool = False
    predicates: tuple = ()

    @property
    def calls(self):
        """Every function call of the statement, projection first"""
        found = [item for item in self.projection if isinstance(item, Call)]
        for predicate in self.predicates:
            if isinstance(predicate, CallPredicate):
                found.append(predicate.call)
            elif isinstance(predicate, Equals) and isinstance(predicate.left, Call):
                found.append(predicate.left)
        return found
