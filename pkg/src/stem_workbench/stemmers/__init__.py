"""
Classic baseline stemmers.
"""

from .base_stemmer import BaseStemmer, IdentityStemmer, StemmerKind, stem_stream
from .porter import PorterStemmer, porter_stem
from .dictionary import DictionaryStemmer, StemDictionary, dict_stem, load_stem_dictionary

__all__ = [
    'BaseStemmer',
    'IdentityStemmer',
    'StemmerKind',
    'stem_stream',
    'PorterStemmer',
    'porter_stem',
    'DictionaryStemmer',
    'StemDictionary',
    'dict_stem',
    'load_stem_dictionary',
]
