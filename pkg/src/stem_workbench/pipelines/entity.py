"""
Entity-based Contextual Stemming (ECS)

Entities found in a document (names, brands, organisations) are exempt
from stemming while every other word goes through a vocabulary-level
stemmer. ECS.1 indexes entity words in their original form only; ECS.2
indexes the original followed by its stem.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import AbstractSet, Callable, FrozenSet, List, Union
import logging
import re

from ..core.text_processing import TOKEN_PATTERN, TokenStream, tokenize
from ..exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

# Base stemmers may return one stem or an ordered list of stems.
StemFn = Callable[[str], Union[str, List[str]]]

ENTITY_SEPARATORS = re.compile(r"[\n,;]")
LIST_MARKER = re.compile(r"^\s*(?:[-*•·]+|\d+[.)])\s*")
# A refusal is either the whole answer ("None.") or a sentence opening that
# no entity list starts with; entity names such as "None Such Records" pass.
BARE_REFUSAL = re.compile(
    r"(?:none|n/?a|nothing|sorry|no entities(?: found)?)[.!]?",
    re.IGNORECASE,
)
SENTENCE_REFUSAL = re.compile(
    r"^(?:i cannot\b|i can['’]t\b|i['’]m sorry\b|i am sorry\b|sorry,|as an ai\b"
    r"|there (?:are|were|is) no (?:named )?entit"
    r"|no (?:named )?entities (?:were |are )?(?:found|identified|present|mentioned|in)\b)",
    re.IGNORECASE,
)


def is_refusal(text: str) -> bool:
    """True when an extraction answer declines to list entities."""
    text = text.strip()
    return bool(BARE_REFUSAL.fullmatch(text) or SENTENCE_REFUSAL.match(text))


class EcsVariant(Enum):
    """How entity words are indexed."""

    KEEP_ORIGINAL_ONLY = "ecs1"
    KEEP_ORIGINAL_AND_STEM = "ecs2"


@dataclass(frozen=True)
class EntitySet:
    """Entity words of one document, split into single words."""

    doc_id: str
    words: FrozenSet[str] = field(default_factory=frozenset)

    def __post_init__(self):
        words = frozenset(self.words)
        for word in words:
            if not TOKEN_PATTERN.fullmatch(word) or word != word.lower():
                raise InvalidArgumentError(f"Entity word {word!r} of {self.doc_id} is not a token")
        object.__setattr__(self, 'words', words)

    def __contains__(self, word: str) -> bool:
        return word in self.words

    def __len__(self) -> int:
        return len(self.words)


def parse_entities(text: str) -> FrozenSet[str]:
    """
    Parse an entity extraction response into entity words.

    Args:
        text: Assistant text listing entities separated by newlines,
            commas or semicolons, optionally with list markers

    Returns:
        Union of the tokenized entity phrases; empty for refusals
    """
    text = (text or "").strip()
    if not text or is_refusal(text):
        return frozenset()
    words = set()
    for phrase in ENTITY_SEPARATORS.split(text):
        phrase = LIST_MARKER.sub("", phrase)
        words.update(tokenize(phrase))
    return frozenset(words)


def _as_list(stems: Union[str, List[str]]) -> List[str]:
    return [stems] if isinstance(stems, str) else list(stems)


def ecs_transform(tokens: TokenStream,
                  entities: Union[EntitySet, AbstractSet[str]],
                  base_stem_fn: StemFn,
                  variant: EcsVariant) -> TokenStream:
    """
    Stem a token stream while exempting the document's entity words.

    Args:
        tokens: Token stream of the document
        entities: Entity words of the same document
        base_stem_fn: Vocabulary-level stemmer for non-entity words
        variant: ECS.1 or ECS.2

    Returns:
        Transformed token stream
    """
    words = entities.words if isinstance(entities, EntitySet) else entities
    output: TokenStream = []
    for token in tokens:
        if token not in words:
            output.extend(_as_list(base_stem_fn(token)))
            continue
        output.append(token)
        if variant is EcsVariant.KEEP_ORIGINAL_AND_STEM:
            output.extend(stem for stem in _as_list(base_stem_fn(token)) if stem != token)
    return output
