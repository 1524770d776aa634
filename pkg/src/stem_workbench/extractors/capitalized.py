"""
Capitalized-Word Entity Extractor

Deterministic, offline stand-in for an NER model. A word is treated as
part of an entity when it is capitalized and one of the following holds:
it does not start a sentence, it is an acronym (all capitals, two or
more letters), or it is directly followed by another capitalized word.
Common function words are never entities.
"""

from typing import FrozenSet, Iterable, Optional
import logging
import re
import unicodedata

from .base_extractor import BaseEntityExtractor
from ..core.telemetry import RunTelemetry
from ..core.text_processing import TOKEN_PATTERN, RawDocument, tokenize
from ..pipelines.entity import EntitySet

logger = logging.getLogger(__name__)

SENTENCE_END = re.compile(r"[.!?]\s*$")

FUNCTION_WORDS = frozenset("""
a about after all also an and any are as at be because been before but by
can could did do does during each for from had has have he her here his how
however i if in into is it its many may more most much no not now of on once
only or other our out over she should since so some such than that the their
them then there these they this those through to under until up very was we
were what when where which while who why will with would yet you your
""".split())


def _is_capitalized(word: str) -> bool:
    return word[0].isupper()


class CapitalizedEntityExtractor(BaseEntityExtractor):
    """Rule-based entity provider over the raw (cased) text."""

    name = "capitalized"

    def __init__(self,
                 function_words: Optional[Iterable[str]] = None,
                 telemetry: Optional[RunTelemetry] = None):
        super().__init__(telemetry)
        self.function_words: FrozenSet[str] = frozenset(
            function_words if function_words is not None else FUNCTION_WORDS
        )

    def entity_words(self, text: str) -> FrozenSet[str]:
        """
        Entity words of a raw text.

        Args:
            text: Cased raw text

        Returns:
            Lowercase entity words
        """
        text = unicodedata.normalize('NFC', text or "")
        matches = list(TOKEN_PATTERN.finditer(text))
        words = set()
        for i, match in enumerate(matches):
            word = match.group()
            if not _is_capitalized(word) or word.lower() in self.function_words:
                continue
            previous_end = matches[i - 1].end() if i > 0 else None
            sentence_start = previous_end is None or bool(SENTENCE_END.search(text[previous_end:match.start()]))
            acronym = len(word) > 1 and word.isupper()
            followed_by_capital = (
                i + 1 < len(matches)
                and not text[match.end():matches[i + 1].start()].strip()
                and _is_capitalized(matches[i + 1].group())
                and matches[i + 1].group().lower() not in self.function_words
            )
            if not sentence_start or acronym or followed_by_capital:
                words.update(tokenize(word))
        return frozenset(words)

    def extract(self, doc: RawDocument) -> EntitySet:
        return EntitySet(doc.doc_id, self.entity_words(doc.text))
