from .engine import QuerySession, apply_context, compose_response, execute, parse_query
from .model import Operation, ParsedQuery, QueryResult, SessionContext

__all__ = [
    "Operation",
    "ParsedQuery",
    "QueryResult",
    "QuerySession",
    "SessionContext",
    "apply_context",
    "compose_response",
    "execute",
    "parse_query",
]
