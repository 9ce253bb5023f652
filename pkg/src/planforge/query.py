"""Parser for the SELECT/FROM/WHERE equi-join subset.

Grammar (keywords case-insensitive)::

    query  := SELECT attrs FROM rel ("," rel)* [WHERE pred (AND pred)*] [";"]
    attrs  := "*" | attr ("," attr)*
    attr   := ident ["." ident]
    pred   := ident "." ident "=" ident "." ident

Anything else, including OR, non-equality comparisons and literals, is a
syntax error.
"""

import re
from dataclasses import dataclass

from .errors import ParseError, SemanticError

__all__ = ["JoinPredicate", "Query", "parse_query", "render_query"]

KEYWORDS = {"SELECT", "FROM", "WHERE", "AND"}

_TOKEN = re.compile(
    r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[,.=;*])|(?P<bad>\S))"
)


@dataclass(frozen=True)
class JoinPredicate:
    """``left`` and ``right`` are ``(relation, attribute)`` pairs.

    After parsing, ``left`` names the relation that comes first in FROM.
    """

    left: tuple
    right: tuple

    @property
    def relations(self):
        return self.left[0], self.right[0]


@dataclass(frozen=True)
class Query:
    projection: tuple
    relations: tuple
    join_predicates: tuple = ()

    def __post_init__(self):
        if not self.relations:
            raise SemanticError("query needs at least one relation")
        if len(set(self.relations)) != len(self.relations):
            raise SemanticError("duplicate relation in FROM")
        known = set(self.relations)
        for p in self.join_predicates:
            for rel in p.relations:
                if rel not in known:
                    raise SemanticError(f"predicate references {rel}, which is not in FROM")

    @property
    def n_relations(self):
        return len(self.relations)

    @property
    def join_count(self):
        return len(self.join_predicates)

    def position(self, relation):
        return self.relations.index(relation)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group("bad"):
            raise ParseError(f"unexpected character {m.group('bad')!r}", *_where(text, m.start("bad")))
        kind = "ident" if m.group("ident") else "punct"
        value = m.group(kind)
        start = m.start(kind)
        if kind == "ident" and value.upper() in KEYWORDS:
            kind, value = "kw", value.upper()
        tokens.append((kind, value, start))
        pos = m.end()
    return tokens


def _where(text, offset):
    line = text.count("\n", 0, offset) + 1
    column = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, column


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def error(self, message):
        offset = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        found = self.tokens[self.i][1] if self.i < len(self.tokens) else "end of input"
        return ParseError(f"{message}, found {found!r}", *_where(self.text, offset))

    def peek(self, kind, value=None):
        if self.i >= len(self.tokens):
            return False
        k, v, _ = self.tokens[self.i]
        return k == kind and (value is None or v == value)

    def expect(self, kind, value=None, what=None):
        if not self.peek(kind, value):
            raise self.error(f"expected {what or value or kind}")
        tok = self.tokens[self.i]
        self.i += 1
        return tok[1]

    def parse(self):
        self.expect("kw", "SELECT")
        projection = []
        if self.peek("punct", "*"):
            self.i += 1
            projection.append("*")
        else:
            projection.append(self.attr())
            while self.peek("punct", ","):
                self.i += 1
                projection.append(self.attr())
        self.expect("kw", "FROM")
        relations = [self.expect("ident", what="relation name")]
        while self.peek("punct", ","):
            self.i += 1
            relations.append(self.expect("ident", what="relation name"))
        preds = []
        if self.peek("kw", "WHERE"):
            self.i += 1
            preds.append(self.predicate())
            while self.peek("kw", "AND"):
                self.i += 1
                preds.append(self.predicate())
        if self.peek("punct", ";"):
            self.i += 1
        if self.i != len(self.tokens):
            raise self.error("expected end of statement")
        return projection, relations, preds

    def attr(self):
        name = self.expect("ident", what="attribute")
        if self.peek("punct", "."):
            self.i += 1
            name = f"{name}.{self.expect('ident', what='attribute')}"
        return name

    def column(self):
        rel = self.expect("ident", what="relation name")
        self.expect("punct", ".")
        return rel, self.expect("ident", what="attribute")

    def predicate(self):
        left = self.column()
        self.expect("punct", "=")
        return left, self.column()


def parse_query(text):
    """Parse SQL-subset text into a :class:`Query`.

    Predicates are normalized so the left side is the relation appearing
    earlier in FROM.
    """
    projection, relations, raw = _Parser(text).parse()
    if len(set(relations)) != len(relations):
        dup = next(r for r in relations if relations.count(r) > 1)
        raise SemanticError(f"relation {dup} appears twice in FROM")
    order = {r: i for i, r in enumerate(relations)}
    preds = []
    for left, right in raw:
        for rel, _ in (left, right):
            if rel not in order:
                raise SemanticError(f"predicate references {rel}, which is not in FROM")
        if left[0] == right[0]:
            raise SemanticError(f"predicate {left[0]}.{left[1]} = {right[0]}.{right[1]} is not a join")
        if order[left[0]] > order[right[0]]:
            left, right = right, left
        preds.append(JoinPredicate(left, right))
    return Query(tuple(projection), tuple(relations), tuple(preds))


def render_query(query):
    """Canonical single-line text; ``parse_query(render_query(q)) == q``."""
    text = f"SELECT {', '.join(query.projection)} FROM {', '.join(query.relations)}"
    if query.join_predicates:
        text += " WHERE " + " AND ".join(
            f"{p.left[0]}.{p.left[1]} = {p.right[0]}.{p.right[1]}" for p in query.join_predicates
        )
    return text + ";"
