"""
Base Stemmer

Abstract interface shared by the classic stemmers and the LLM-backed
vocabulary stemmer, plus the element-wise stream application.
"""

from abc import ABC, abstractmethod
from enum import Enum
from typing import Callable, Dict, Iterable, List
import logging

from ..core.text_processing import TokenStream

logger = logging.getLogger(__name__)


class StemmerKind(Enum):
    """Stemmer families; values are the stable serialized names."""

    NO_STEM = "none"
    PORTER = "porter"
    DICTIONARY = "dict"
    LLM_VOCABULARY = "llm"


def is_stemmable(word: str) -> bool:
    """Only purely alphabetic ASCII words are touched by the classic stemmers."""
    return word.isascii() and word.isalpha()


class BaseStemmer(ABC):
    """
    Abstract base class for vocabulary-level stemmers.

    Subclasses implement ``stem`` for a single word; ``stem_batch`` maps
    a batch of words to stem lists and may be overridden by stemmers that
    can return several stems per word.
    """

    kind: StemmerKind

    @abstractmethod
    def stem(self, word: str) -> str:
        """
        Stem a single lowercase word.

        Args:
            word: Token from the tokenizer

        Returns:
            Stemmed word
        """
        pass

    def stem_batch(self, words: Iterable[str]) -> Dict[str, List[str]]:
        """
        Stem a batch of words.

        Args:
            words: Lowercase words

        Returns:
            Mapping word -> list of stems
        """
        return {word: [self.stem(word)] for word in words}

    def __call__(self, word: str) -> str:
        return self.stem(word)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(kind='{self.kind.value}')"


class IdentityStemmer(BaseStemmer):
    """The no-stemming baseline."""

    kind = StemmerKind.NO_STEM

    def stem(self, word: str) -> str:
        return word


def stem_stream(tokens: TokenStream, stem_fn: Callable[[str], str]) -> TokenStream:
    """
    Apply a stemmer to every token, preserving order and length.

    Args:
        tokens: Token stream
        stem_fn: Function mapping one token to one stem

    Returns:
        Stemmed token stream
    """
    return [stem_fn(token) for token in tokens]
