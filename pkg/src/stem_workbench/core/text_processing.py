"""
Text Processing Utilities

This module turns raw document and query text into normalized token
streams and applies FirstP truncation (a document is represented by its
leading words only) before any stemming pipeline sees the text.
"""

import re
import unicodedata
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import FrozenSet, Iterable, List, Optional, Union

from ..exceptions import InvalidArgumentError, NotFoundError

logger = logging.getLogger(__name__)

# A token is a maximal run of Unicode letters/digits; everything else separates.
TOKEN_PATTERN = re.compile(r"[^\W_]+")

DEFAULT_TRUNCATION_LIMIT = 300

TokenStream = List[str]


@dataclass(frozen=True)
class RawDocument:
    """A document (or query) as read from disk."""

    doc_id: str
    text: str

    def __post_init__(self):
        if not self.doc_id or any(ch.isspace() for ch in self.doc_id):
            raise InvalidArgumentError(
                f"Document id must be non-empty and contain no whitespace: {self.doc_id!r}"
            )


def _normalize(text: str) -> str:
    return unicodedata.normalize('NFC', unicodedata.normalize('NFC', text).casefold())


def tokenize(text: str) -> TokenStream:
    """
    Split text into lowercase letter/digit tokens.

    Args:
        text: Raw UTF-8 text

    Returns:
        Tokens in original order; empty text gives an empty stream
    """
    if not text:
        return []
    return TOKEN_PATTERN.findall(_normalize(text))


def truncate_first_p(tokens: TokenStream, limit: int = DEFAULT_TRUNCATION_LIMIT) -> TokenStream:
    """
    Keep the first ``limit`` tokens of a stream.

    Args:
        tokens: Token stream
        limit: Maximum number of tokens to keep (>= 1)

    Returns:
        The prefix of length min(limit, len(tokens))
    """
    if limit < 1:
        raise InvalidArgumentError(f"Truncation limit must be >= 1, got {limit}")
    return list(tokens[:limit])


def first_p_text(text: str, limit: int = DEFAULT_TRUNCATION_LIMIT) -> str:
    """
    Cut raw text right after its ``limit``-th token.

    Casing and punctuation are preserved so that LLM prompts and the
    capitalization heuristics see readable text, while tokenizing the
    result gives the same stream as truncate_first_p(tokenize(text)).

    Args:
        text: Raw text
        limit: Maximum number of tokens to keep (>= 1)

    Returns:
        Prefix of the raw text
    """
    if limit < 1:
        raise InvalidArgumentError(f"Truncation limit must be >= 1, got {limit}")
    normalized = unicodedata.normalize('NFC', text or "")
    # Case folding can split a character (U+0130 -> 'i' + U+0307), so tokens
    # are counted in the folded text and mapped back to source characters.
    folded = []
    owners = []
    for i, ch in enumerate(normalized):
        piece = ch.casefold()
        folded.append(piece)
        owners.extend([i] * len(piece))
    end = None
    for count, match in enumerate(TOKEN_PATTERN.finditer("".join(folded)), start=1):
        if count == limit:
            end = owners[match.end() - 1] + 1
            break
    if end is None:
        return normalized
    expected = truncate_first_p(tokenize(normalized), limit)
    while end < len(normalized) and tokenize(normalized[:end]) != expected:
        end += 1
    return normalized[:end]


def load_stopwords(path: Union[str, Path]) -> FrozenSet[str]:
    """
    Load a stopword list: one word per line, '#' lines are comments.

    Args:
        path: Stopword file

    Returns:
        Normalized stopwords
    """
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"Stopword file not found: {path}")
    words = set()
    with open(path, encoding='utf-8') as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith('#'):
                continue
            words.update(tokenize(line))
    logger.info(f"Loaded {len(words)} stopwords from {path}")
    return frozenset(words)


class TextProcessor:
    """
    Document and query analysis shared by every pipeline.

    Documents are tokenized, optionally filtered against a stopword list
    and truncated to their first ``truncation_limit`` tokens. Queries go
    through the same analysis but are never truncated.
    """

    def __init__(self,
                 stopwords: Optional[Iterable[str]] = None,
                 truncation_limit: int = DEFAULT_TRUNCATION_LIMIT):
        """
        Initialize the text processor.

        Args:
            stopwords: Words to drop after tokenization (none by default)
            truncation_limit: FirstP limit for documents
        """
        if truncation_limit < 1:
            raise InvalidArgumentError(f"Truncation limit must be >= 1, got {truncation_limit}")
        self.stopwords: FrozenSet[str] = frozenset(stopwords or ())
        self.truncation_limit = truncation_limit

    def filter_stopwords(self, tokens: TokenStream) -> TokenStream:
        if not self.stopwords:
            return tokens
        return [t for t in tokens if t not in self.stopwords]

    def document_text(self, text: str) -> str:
        """Raw FirstP text of a document, for prompts and entity extraction."""
        return first_p_text(text, self.truncation_limit)

    def process_document(self, text: str) -> TokenStream:
        """Tokenize and truncate a document, then drop stopwords."""
        return self.filter_stopwords(truncate_first_p(tokenize(text), self.truncation_limit))

    def process_query(self, text: str) -> TokenStream:
        """Tokenize and filter a query; queries are not truncated."""
        return self.filter_stopwords(tokenize(text))
