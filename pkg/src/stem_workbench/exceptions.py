"""
Stem Workbench Exceptions

Error hierarchy shared by every module of the workbench. The CLI maps
the three families (argument/config, data, provider) onto exit codes.
"""

from typing import List, Optional


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class InvalidArgumentError(WorkbenchError, ValueError):
    """A precondition on an argument was violated."""


class ConfigError(WorkbenchError):
    """The experiment configuration is invalid or incomplete."""


class DataError(WorkbenchError):
    """Input data could not be used."""


class ParseError(DataError):
    """A line of an input file does not follow its format."""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        elif line_number is not None:
            location = f"line {line_number}: "
        super().__init__(f"{location}{message}")


class DuplicateDocumentError(DataError):
    """The same document id was seen twice."""

    def __init__(self, doc_id: str):
        self.doc_id = doc_id
        super().__init__(f"Duplicate document id: {doc_id}")


class NotFoundError(DataError):
    """A referenced document or file does not exist."""


class MisalignedRunsError(DataError):
    """Two per-query score sets do not cover the same queries."""


class CacheConflictError(WorkbenchError):
    """A write-once cache entry was offered a different value."""

    def __init__(self, word: str, stored: List[str], offered: List[str]):
        self.word = word
        self.stored = stored
        self.offered = offered
        super().__init__(
            f"Conflicting stems for '{word}': stored {stored}, offered {offered}"
        )


class ProviderError(WorkbenchError):
    """An LLM provider request failed."""

    def __init__(self, message: str, request_id: Optional[str] = None):
        self.request_id = request_id
        prefix = f"[{request_id}] " if request_id else ""
        super().__init__(f"{prefix}{message}")


class TransportError(ProviderError):
    """The provider could not be reached after all retries."""


class AuthError(ProviderError):
    """The provider rejected the credentials."""


class MalformedResponseError(ProviderError):
    """The provider answered without usable assistant text."""
