"""
File formats, experiment configuration and the bundled toy collection.
"""

from .corpus_io import (
    Qrels,
    RunRanking,
    bundled_toy_paths,
    load_corpus,
    load_qrels,
    load_topics,
    read_entity_cache,
    read_run,
    write_entity_cache,
    write_run,
    write_topics,
    write_transformed_corpus,
)
from .config import ExperimentConfig, load_config, save_resolved_config

__all__ = [
    'Qrels',
    'RunRanking',
    'bundled_toy_paths',
    'load_corpus',
    'load_qrels',
    'load_topics',
    'read_entity_cache',
    'read_run',
    'write_entity_cache',
    'write_run',
    'write_topics',
    'write_transformed_corpus',
    'ExperimentConfig',
    'load_config',
    'save_resolved_config',
]
