"""Exception hierarchy shared by every planforge module."""


class PlanforgeError(Exception):
    """Base class for all planforge errors."""


class ParseError(PlanforgeError, ValueError):
    """Input text could not be parsed.

    ``line`` and ``column`` are 1-based when known.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class ValidationError(PlanforgeError, ValueError):
    """Input parsed but violates a domain invariant."""


class DegenerateCatalogError(ValidationError):
    """Total tuple count over the query's relations is zero."""


class UnknownRelationError(PlanforgeError, KeyError):
    """A relation name is not present in the matrix or catalog."""

    def __str__(self):
        return str(self.args[0]) if self.args else "unknown relation"


class SemanticError(PlanforgeError, ValueError):
    """A query references something that does not exist in its own scope."""


class InvalidPlanError(ValidationError):
    """A plan assigns a relation to a site that holds no replica of it."""

    def __init__(self, message, relation=None, site=None):
        self.relation = relation
        self.site = site
        super().__init__(message)


class SaturationError(PlanforgeError):
    """Plan space is too large to enumerate exhaustively."""

    def __init__(self, count, bound):
        self.count = count
        self.bound = bound
        super().__init__(
            f"plan space has {count} plans, above the enumeration bound {bound}; "
            "use a metaheuristic (tlbo, agga, vega) instead"
        )
