"""
Base Entity Extractor

This module provides the abstract base class for the entity providers
used by entity-based contextual stemming. An extractor turns the
(truncated) raw text of a document or query into the set of entity
words that must not be stemmed.
"""

from abc import ABC, abstractmethod
from typing import Dict, Optional, Sequence
import logging

from joblib import Parallel, delayed
from tqdm import tqdm

from ..core.telemetry import RunTelemetry
from ..core.text_processing import RawDocument
from ..pipelines.entity import EntitySet

logger = logging.getLogger(__name__)


class BaseEntityExtractor(ABC):
    """
    Abstract base class for entity providers.

    Implementations only need ``extract``; ``extract_many`` runs it over
    a collection in a bounded thread pool and returns the results keyed
    by doc_id in sorted order, whatever the completion order was.
    """

    name = "base"

    def __init__(self, telemetry: Optional[RunTelemetry] = None):
        """
        Initialize the base extractor.

        Args:
            telemetry: Counter sink for extraction events
        """
        self.telemetry = telemetry or RunTelemetry()
        logger.info(f"Initialized {self.__class__.__name__}")

    @abstractmethod
    def extract(self, doc: RawDocument) -> EntitySet:
        """
        Extract the entity words of one document.

        Args:
            doc: Document (or query) with FirstP-truncated raw text

        Returns:
            EntitySet for ``doc.doc_id``
        """
        pass

    def extract_many(self,
                     docs: Sequence[RawDocument],
                     workers: int = 1,
                     progress: bool = False) -> Dict[str, EntitySet]:
        """
        Extract entities for many documents.

        Args:
            docs: Documents to process
            workers: Number of concurrent extractions
            progress: Show a progress bar

        Returns:
            Mapping doc_id -> EntitySet, sorted by doc_id
        """
        items = tqdm(docs, desc=f"Entities ({self.name})", unit="doc", disable=not progress)
        if workers <= 1:
            results = [self.extract(doc) for doc in items]
        else:
            results = Parallel(n_jobs=workers, backend="threading")(
                delayed(self.extract)(doc) for doc in items
            )
        entities = {result.doc_id: result for result in sorted(results, key=lambda r: r.doc_id)}
        total = sum(len(e) for e in entities.values())
        logger.info(f"{self.name}: {total} entity words over {len(entities)} documents")
        return entities

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name='{self.name}')"
