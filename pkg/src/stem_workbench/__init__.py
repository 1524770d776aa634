"""
Stem Workbench: LLM-based Stemming for Retrieval Experiments

This package stems documents and queries with classic stemmers or with
a large language model (vocabulary, contextual and entity-aware
variants), indexes the result with BM25 and evaluates the runs with
TREC metrics and paired significance tests.
"""

__version__ = "0.1.0"

from .core.index import Bm25Params, InvertedIndex, build_index, search
from .core.text_processing import RawDocument, TextProcessor, tokenize
from .data.config import ExperimentConfig, load_config
from .analysis.experiment import run_experiment
from .pipelines.factory import build_pipeline

__all__ = [
    'Bm25Params',
    'InvertedIndex',
    'build_index',
    'search',
    'RawDocument',
    'TextProcessor',
    'tokenize',
    'ExperimentConfig',
    'load_config',
    'run_experiment',
    'build_pipeline',
]
