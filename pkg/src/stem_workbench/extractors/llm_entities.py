"""
LLM Entity Extractor

Asks the LLM for the entities of each document with the ECS one-shot
prompt and parses the listed phrases into entity words. Answers are
kept in an in-memory cache that the experiment persists as an entity
cache file.
"""

from typing import Dict, FrozenSet, Optional
import logging
import threading

from .base_extractor import BaseEntityExtractor
from ..core.telemetry import RunTelemetry
from ..core.text_processing import RawDocument, tokenize
from ..exceptions import ProviderError
from ..llm.gateway import LLMGateway
from ..llm.prompts import OneShotSamples, build_ecs_prompt
from ..pipelines.entity import EntitySet, parse_entities

logger = logging.getLogger(__name__)


class LlmEntityExtractor(BaseEntityExtractor):
    """Entity provider backed by the ECS prompt."""

    name = "llm"

    def __init__(self,
                 gateway: LLMGateway,
                 samples: OneShotSamples,
                 known: Optional[Dict[str, FrozenSet[str]]] = None,
                 telemetry: Optional[RunTelemetry] = None):
        """
        Initialize the extractor.

        Args:
            gateway: LLM gateway
            samples: One-shot samples
            known: Previously extracted entities by doc_id (entity cache)
            telemetry: Counter sink (defaults to the gateway's)
        """
        super().__init__(telemetry or gateway.telemetry)
        self.gateway = gateway
        self.samples = samples
        self.known: Dict[str, FrozenSet[str]] = dict(known or {})
        self._lock = threading.Lock()

    def extract(self, doc: RawDocument) -> EntitySet:
        cached = self.known.get(doc.doc_id)
        if cached is not None:
            self.telemetry.incr('entity_cache_hits')
            return EntitySet(doc.doc_id, cached)
        if not tokenize(doc.text):
            return EntitySet(doc.doc_id)

        try:
            request = build_ecs_prompt(doc.text, self.samples, **self.gateway.decoding)
            words = parse_entities(self.gateway.complete(request))
        except ProviderError as e:
            # Not cached, so a later run retries the document.
            self.telemetry.incr('entity_failures')
            logger.warning(f"Entity extraction for {doc.doc_id} failed, no exemptions: {e}")
            return EntitySet(doc.doc_id)

        with self._lock:
            self.known[doc.doc_id] = words
        return EntitySet(doc.doc_id, words)
