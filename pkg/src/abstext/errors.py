"""Error codes and the shared exception type.

Every failure that crosses a module boundary (CLI exit, HTTP response,
registry evaluation) carries one of these string codes so callers can
react without parsing messages.
"""


# content / notation
SYNTAX_ERROR = "SYNTAX_ERROR"
PATH_NOT_FOUND = "PATH_NOT_FOUND"
VALIDATION_FAILED = "VALIDATION_FAILED"

# catalog / registry
DUPLICATE_ID = "DUPLICATE_ID"
UNKNOWN_FUNCTION = "UNKNOWN_FUNCTION"
UNKNOWN_CONSTRUCTOR = "UNKNOWN_CONSTRUCTOR"
TYPE_ERROR = "TYPE_ERROR"
PRECONDITION_FAILED = "PRECONDITION_FAILED"
POSTCONDITION_FAILED = "POSTCONDITION_FAILED"
DEPTH_EXCEEDED = "DEPTH_EXCEEDED"
NO_IMPLEMENTATION = "NO_IMPLEMENTATION"
NO_PASSING_IMPLEMENTATION = "NO_PASSING_IMPLEMENTATION"

# lexicon / entities
UNKNOWN_LEXEME = "UNKNOWN_LEXEME"
UNKNOWN_ITEM = "UNKNOWN_ITEM"
UNSUPPORTED_LANGUAGE = "UNSUPPORTED_LANGUAGE"
OUT_OF_TABLE = "OUT_OF_TABLE"
PARSE_ERROR = "PARSE_ERROR"
NETWORK_ERROR = "NETWORK_ERROR"

# rendering
NO_RENDERER = "NO_RENDERER"
INCOMPLETE_PHRASE = "INCOMPLETE_PHRASE"

# service
CONTENT_NOT_FOUND = "CONTENT_NOT_FOUND"
INVALID_DOCUMENT = "INVALID_DOCUMENT"


class AbstextError(Exception):
    """Typed error with a stable code and an optional content path."""

    def __init__(self, code: str, message: str, *, path: str | None = None,
                 details: dict | None = None):
        super().__init__(message)
        self.code = code
        self.message = message
        self.path = path
        self.details = details or {}

    def to_dict(self) -> dict:
        body = {"code": self.code, "message": self.message}
        if self.path is not None:
            body["path"] = self.path
        if self.details:
            body["details"] = self.details
        return body

    def __repr__(self) -> str:
        return f"AbstextError({self.code}: {self.message})"
