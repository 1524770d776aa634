"""
LLM stemming methods: vocabulary, contextual and entity-based contextual
stemming. The pipeline factory lives in ``pipelines.factory`` because it
depends on the entity extractors, which depend on this package.
"""

from .vocabulary import (
    LlmVocabularyStemmer,
    StemMapping,
    apply_mapping,
    parse_vs_response,
    vocabulary_stem,
)
from .contextual import contextual_stem
from .entity import EcsVariant, EntitySet, ecs_transform, parse_entities

__all__ = [
    'LlmVocabularyStemmer',
    'StemMapping',
    'apply_mapping',
    'parse_vs_response',
    'vocabulary_stem',
    'contextual_stem',
    'EcsVariant',
    'EntitySet',
    'ecs_transform',
    'parse_entities',
]
