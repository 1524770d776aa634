"""
Core modules: text analysis, inverted index and BM25, run telemetry.
"""

from .text_processing import (
    RawDocument,
    TextProcessor,
    TokenStream,
    first_p_text,
    load_stopwords,
    tokenize,
    truncate_first_p,
)
from .index import (
    Bm25Params,
    InvertedIndex,
    bm25_score,
    build_index,
    load_index,
    save_index,
    search,
)
from .telemetry import RunTelemetry

__all__ = [
    'RawDocument',
    'TextProcessor',
    'TokenStream',
    'first_p_text',
    'load_stopwords',
    'tokenize',
    'truncate_first_p',
    'Bm25Params',
    'InvertedIndex',
    'bm25_score',
    'build_index',
    'load_index',
    'save_index',
    'search',
    'RunTelemetry',
]
