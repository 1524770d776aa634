"""
Porter Stemmer

Table-driven implementation of the Porter (1980) suffix-stripping
algorithm. The step 2/3/4 tables carry British "-is-" spellings next to
the "-iz-" ones, so that e.g. "organisation" and "organization" both
reduce to "organ".

Words of one or two letters, and anything that is not purely ASCII
alphabetic (numbers, identifiers, accented words), are returned
unchanged.
"""

from functools import lru_cache
from typing import List, Tuple
import logging

from .base_stemmer import BaseStemmer, StemmerKind, is_stemmable

logger = logging.getLogger(__name__)

VOWELS = frozenset("aeiou")


def _by_length(table: List[Tuple[str, str]]) -> List[Tuple[str, str]]:
    # Longest suffix wins; only the matched rule's condition is tested.
    return sorted(table, key=lambda rule: len(rule[0]), reverse=True)


STEP2_RULES = _by_length([
    ("ational", "ate"),
    ("tional", "tion"),
    ("enci", "ence"),
    ("anci", "ance"),
    ("izer", "ize"),
    ("iser", "ise"),
    ("abli", "able"),
    ("alli", "al"),
    ("entli", "ent"),
    ("eli", "e"),
    ("ousli", "ous"),
    ("ization", "ize"),
    ("isation", "ise"),
    ("ation", "ate"),
    ("ator", "ate"),
    ("alism", "al"),
    ("iveness", "ive"),
    ("fulness", "ful"),
    ("ousness", "ous"),
    ("aliti", "al"),
    ("iviti", "ive"),
    ("biliti", "ble"),
])

STEP3_RULES = _by_length([
    ("icate", "ic"),
    ("ative", ""),
    ("alize", "al"),
    ("alise", "al"),
    ("iciti", "ic"),
    ("ical", "ic"),
    ("ful", ""),
    ("ness", ""),
])

STEP4_SUFFIXES = sorted([
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement",
    "ment", "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive",
    "ize", "ise",
], key=len, reverse=True)

STEP1B_RESTORE = {"at": "ate", "bl": "ble", "iz": "ize", "is": "ise"}


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in VOWELS:
        return False
    if ch == 'y':
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def measure(stem: str) -> int:
    """
    Number of VC sequences in ``stem`` ([C](VC)^m[V]).

    Args:
        stem: Lowercase ASCII string

    Returns:
        The measure m
    """
    m = 0
    previous_vowel = False
    for i in range(len(stem)):
        consonant = _is_consonant(stem, i)
        if consonant and previous_vowel:
            m += 1
        previous_vowel = not consonant
    return m


def _contains_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (len(word) >= 2 and word[-1] == word[-2]
            and _is_consonant(word, len(word) - 1))


def _ends_cvc(word: str) -> bool:
    if len(word) < 3:
        return False
    n = len(word)
    return (_is_consonant(word, n - 3) and not _is_consonant(word, n - 2)
            and _is_consonant(word, n - 1) and word[-1] not in "wxy")


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        if measure(word[:-3]) > 0:
            return word[:-1]
        return word

    for suffix in ("ed", "ing"):
        if word.endswith(suffix) and _contains_vowel(word[:-len(suffix)]):
            stem = word[:-len(suffix)]
            break
    else:
        return word

    for ending, restored in STEP1B_RESTORE.items():
        if stem.endswith(ending):
            return stem[:-len(ending)] + restored
    if _ends_double_consonant(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(word: str) -> str:
    if word.endswith("y") and _contains_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _replace_suffix(word: str, rules: List[Tuple[str, str]]) -> str:
    for suffix, replacement in rules:
        if word.endswith(suffix):
            stem = word[:-len(suffix)]
            if measure(stem) > 0:
                return stem + replacement
            return word
    return word


def _step4(word: str) -> str:
    for suffix in STEP4_SUFFIXES:
        if word.endswith(suffix):
            stem = word[:-len(suffix)]
            if suffix == "ion" and not stem.endswith(("s", "t")):
                return word
            if measure(stem) > 1:
                return stem
            return word
    return word


def _step5(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem
    if word.endswith("ll") and measure(word) > 1:
        word = word[:-1]
    return word


@lru_cache(maxsize=131072)
def porter_stem(word: str) -> str:
    """
    Porter stem of a lowercase word.

    Args:
        word: Token from the tokenizer

    Returns:
        Stem, never longer than the word
    """
    if len(word) <= 2 or not is_stemmable(word):
        return word
    word = _step1a(word)
    word = _step1b(word)
    word = _step1c(word)
    word = _replace_suffix(word, STEP2_RULES)
    word = _replace_suffix(word, STEP3_RULES)
    word = _step4(word)
    word = _step5(word)
    return word


class PorterStemmer(BaseStemmer):
    """Porter stemmer with British suffix parallels."""

    kind = StemmerKind.PORTER

    def stem(self, word: str) -> str:
        return porter_stem(word)
