"""
Precomputed Entity Extractor

Serves entity sets produced elsewhere, e.g. by an external NER model,
from an entity cache file. Documents without a record have no entities.
"""

from typing import Dict, FrozenSet, Optional
import logging

from .base_extractor import BaseEntityExtractor
from ..core.telemetry import RunTelemetry
from ..core.text_processing import RawDocument
from ..pipelines.entity import EntitySet

logger = logging.getLogger(__name__)


class PrecomputedEntityExtractor(BaseEntityExtractor):
    """Entity provider reading from a fixed doc_id -> words table."""

    name = "precomputed"

    def __init__(self,
                 entities: Dict[str, FrozenSet[str]],
                 telemetry: Optional[RunTelemetry] = None):
        super().__init__(telemetry)
        self.entities = dict(entities)

    def extract(self, doc: RawDocument) -> EntitySet:
        words = self.entities.get(doc.doc_id)
        if words is None:
            self.telemetry.incr('entity_missing_records')
            return EntitySet(doc.doc_id)
        return EntitySet(doc.doc_id, words)
