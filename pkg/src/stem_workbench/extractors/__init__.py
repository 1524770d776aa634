"""
Entity providers for entity-based contextual stemming.
"""

from .base_extractor import BaseEntityExtractor
from .capitalized import CapitalizedEntityExtractor
from .llm_entities import LlmEntityExtractor
from .precomputed import PrecomputedEntityExtractor

__all__ = [
    'BaseEntityExtractor',
    'CapitalizedEntityExtractor',
    'LlmEntityExtractor',
    'PrecomputedEntityExtractor',
]
