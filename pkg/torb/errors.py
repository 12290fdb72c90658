from typing import Optional


class TorbError(Exception):
    """Base class for all torb errors"""


class DomainError(TorbError, ValueError):
    """An operation was called outside its mathematical domain"""


class ParseError(TorbError, ValueError):
    """Malformed matrix, word, presentation, JSON record or setting"""


class SearchInconclusive(TorbError):
    """A bounded search ran out of budget before reaching a decision"""

    def __init__(self, message: str, nodes: int = 0, upper_bound: Optional[int] = None):
        super().__init__(message)
        self.nodes = nodes
        self.upper_bound = upper_bound
