"""
Dictionary Stemmer

Krovetz-style dictionary-gated stemming: a word is only reduced when the
dictionary (or an inflectional variant found in it) says what its root
is. Unknown words are left alone, which is what makes dictionary
stemmers conservative.
"""

from dataclasses import dataclass, field
from pathlib import Path
from types import MappingProxyType
from typing import Iterator, List, Mapping, Union
import logging

from .base_stemmer import BaseStemmer, StemmerKind, is_stemmable
from ..exceptions import InvalidArgumentError, NotFoundError, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StemDictionary:
    """Immutable word -> root mapping."""

    entries: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for word, root in self.entries.items():
            if not word or not root or word != word.lower() or root != root.lower():
                raise InvalidArgumentError(f"Dictionary entries must be lowercase and non-empty: {word!r} -> {root!r}")
        object.__setattr__(self, 'entries', MappingProxyType(dict(self.entries)))

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def __getitem__(self, word: str) -> str:
        return self.entries[word]

    def __len__(self) -> int:
        return len(self.entries)


def load_stem_dictionary(path: Union[str, Path]) -> StemDictionary:
    """
    Load a dictionary from a TSV file of ``word<TAB>root`` lines.

    Args:
        path: UTF-8 file; '#' lines and blank lines are ignored

    Returns:
        Loaded dictionary
    """
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"Stem dictionary not found: {path}")
    entries = {}
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            line = line.rstrip('\n').rstrip('\r')
            if not line.strip() or line.startswith('#'):
                continue
            parts = line.split('\t')
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise ParseError("expected 'word<TAB>root'", str(path), line_number)
            word, root = parts[0].strip().lower(), parts[1].strip().lower()
            entries[word] = root
    logger.info(f"Loaded {len(entries)} dictionary entries from {path}")
    return StemDictionary(entries)


def _inflection_candidates(word: str) -> Iterator[str]:
    """Candidate roots for plural, past and continuous forms, in priority order."""
    if word.endswith("ies") and len(word) > 3:
        yield word[:-3] + "y"
    if word.endswith("es") and len(word) > 2:
        yield word[:-2]
    if word.endswith("s") and not word.endswith("ss") and len(word) > 1:
        yield word[:-1]

    if word.endswith("ied") and len(word) > 3:
        yield word[:-3] + "y"
    if word.endswith("ed") and len(word) > 2:
        yield from _strip_verbal(word[:-2])

    if word.endswith("ing") and len(word) > 3:
        yield from _strip_verbal(word[:-3])


def _strip_verbal(base: str) -> Iterator[str]:
    yield base
    if len(base) >= 2 and base[-1] == base[-2] and base[-1] not in "aeiou":
        yield base[:-1]
    yield base + "e"


def dict_stem(word: str, dictionary: StemDictionary) -> str:
    """
    Stem a word using a dictionary with an inflectional fallback.

    Args:
        word: Lowercase token
        dictionary: Word -> root mapping

    Returns:
        The dictionary root, the root of the first inflectional candidate
        found in the dictionary, or the word unchanged
    """
    if any(ch.isdigit() for ch in word):
        return word
    if word in dictionary:
        return dictionary[word]
    if not is_stemmable(word):
        return word
    for candidate in _inflection_candidates(word):
        if candidate in dictionary:
            return dictionary[candidate]
    return word


class DictionaryStemmer(BaseStemmer):
    """Dictionary-gated stemmer standing in for Krovetz."""

    kind = StemmerKind.DICTIONARY

    def __init__(self, dictionary: StemDictionary):
        self.dictionary = dictionary
        logger.info(f"Initialized DictionaryStemmer with {len(dictionary)} entries")

    def stem(self, word: str) -> str:
        return dict_stem(word, self.dictionary)
