"""
LLM Caches

Write-once stores that save LLM requests across runs. The stem cache maps
words to stems (``word<TAB>stem1[ stem2 ...]`` per line); the response
cache maps the SHA-256 of a prompt to the accepted contextual-stemming
answer (``PROMPT-SHA256<TAB>escaped response`` per line).
"""

from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union
import logging
import re
import threading

from .providers import escape_field, unescape_field
from ..exceptions import CacheConflictError, InvalidArgumentError, NotFoundError, ParseError

logger = logging.getLogger(__name__)


def _check_term(term: str, what: str) -> None:
    if not term or term != term.lower() or any(ch.isspace() for ch in term):
        raise InvalidArgumentError(f"{what} must be a non-empty lowercase word: {term!r}")


class StemCache:
    """Concurrent reads, serialized write-once puts, single-writer persistence."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path else None
        self._entries: Dict[str, Tuple[str, ...]] = {}
        self._lock = threading.Lock()
        self.dirty = False

    @classmethod
    def load(cls, path: Union[str, Path], missing_ok: bool = True) -> 'StemCache':
        """
        Open a cache file.

        Args:
            path: TSV cache file; later saves go to the same path
            missing_ok: Start empty when the file does not exist yet

        Returns:
            StemCache bound to ``path``
        """
        cache = cls(path)
        path = Path(path)
        if not path.exists():
            if not missing_ok:
                raise NotFoundError(f"Stem cache not found: {path}")
            logger.info(f"Stem cache {path} does not exist yet, starting empty")
            return cache
        with open(path, encoding='utf-8') as f:
            for line_number, line in enumerate(f, start=1):
                line = line.rstrip('\n')
                if not line.strip():
                    continue
                word, sep, stems = line.partition('\t')
                if not sep or not word or not stems.split():
                    raise ParseError("expected 'word<TAB>stem1[ stem2 ...]'", str(path), line_number)
                cache._entries[word] = tuple(stems.split())
        logger.info(f"Loaded {len(cache)} cached stems from {path}")
        return cache

    def get(self, word: str) -> Optional[List[str]]:
        """Stored stems for ``word`` or None."""
        stems = self._entries.get(word)
        return list(stems) if stems is not None else None

    def put(self, word: str, stems: List[str]) -> None:
        """
        Store stems for a word.

        Args:
            word: Lowercase word
            stems: Non-empty list of lowercase stems

        Raises:
            CacheConflictError: when the word already holds different stems
        """
        _check_term(word, "Cache key")
        if not stems:
            raise InvalidArgumentError(f"Stem list for '{word}' must be non-empty")
        for stem in stems:
            _check_term(stem, "Stem")
        value = tuple(stems)
        with self._lock:
            stored = self._entries.get(word)
            if stored is not None:
                if stored != value:
                    raise CacheConflictError(word, list(stored), list(value))
                return
            self._entries[word] = value
            self.dirty = True

    def __contains__(self, word: str) -> bool:
        return word in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def items(self) -> Iterator[Tuple[str, List[str]]]:
        """Entries sorted by word."""
        for word in sorted(self._entries):
            yield word, list(self._entries[word])

    def save(self, path: Optional[Union[str, Path]] = None) -> None:
        target = Path(path) if path else self.path
        if target is None:
            raise InvalidArgumentError("StemCache has no path to save to")
        target.parent.mkdir(parents=True, exist_ok=True)
        with self._lock:
            with open(target, 'w', encoding='utf-8') as f:
                for word in sorted(self._entries):
                    f.write(f"{word}\t{' '.join(self._entries[word])}\n")
            self.dirty = False
        logger.info(f"Saved {len(self)} cached stems to {target}")

    def checkpoint(self) -> None:
        """Persist to the bound path if anything changed since the last save."""
        if self.dirty and self.path is not None:
            self.save()


PROMPT_HASH_PATTERN = re.compile(r'[0-9a-f]{64}')


class ResponseCache:
    """Write-once prompt hash -> response store with the same persistence rules as StemCache."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path else None
        self._entries: Dict[str, str] = {}
        self._lock = threading.Lock()
        self.dirty = False

    @classmethod
    def load(cls, path: Union[str, Path], missing_ok: bool = True) -> 'ResponseCache':
        """
        Open a response cache file.

        Args:
            path: TSV cache file; later saves go to the same path
            missing_ok: Start empty when the file does not exist yet

        Returns:
            ResponseCache bound to ``path``
        """
        cache = cls(path)
        path = Path(path)
        if not path.exists():
            if not missing_ok:
                raise NotFoundError(f"Response cache not found: {path}")
            logger.info(f"Response cache {path} does not exist yet, starting empty")
            return cache
        with open(path, encoding='utf-8') as f:
            for line_number, line in enumerate(f, start=1):
                line = line.rstrip('\n')
                if not line.strip():
                    continue
                key, sep, response = line.partition('\t')
                if not sep or not PROMPT_HASH_PATTERN.fullmatch(key) or not response:
                    raise ParseError("expected 'PROMPT-SHA256<TAB>response'", str(path), line_number)
                cache._entries[key] = unescape_field(response)
        logger.info(f"Loaded {len(cache)} cached responses from {path}")
        return cache

    def get(self, key: str) -> Optional[str]:
        return self._entries.get(key)

    def put(self, key: str, response: str) -> None:
        """
        Store the response to a prompt.

        Args:
            key: Prompt SHA-256 hex digest
            response: Non-empty response text

        Raises:
            CacheConflictError: when the prompt already holds a different response
        """
        if not PROMPT_HASH_PATTERN.fullmatch(key):
            raise InvalidArgumentError(f"Response cache key must be a SHA-256 hex digest: {key!r}")
        if not response:
            raise InvalidArgumentError(f"Response for {key[:12]} must be non-empty")
        with self._lock:
            stored = self._entries.get(key)
            if stored is not None:
                if stored != response:
                    raise CacheConflictError(key, [stored], [response])
                return
            self._entries[key] = response
            self.dirty = True

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def save(self, path: Optional[Union[str, Path]] = None) -> None:
        target = Path(path) if path else self.path
        if target is None:
            raise InvalidArgumentError("ResponseCache has no path to save to")
        target.parent.mkdir(parents=True, exist_ok=True)
        with self._lock:
            with open(target, 'w', encoding='utf-8') as f:
                for key in sorted(self._entries):
                    f.write(f"{key}\t{escape_field(self._entries[key])}\n")
            self.dirty = False
        logger.info(f"Saved {len(self)} cached responses to {target}")

    def checkpoint(self) -> None:
        """Persist to the bound path if anything changed since the last save."""
        if self.dirty and self.path is not None:
            self.save()
