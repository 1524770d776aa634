"""
Pipeline Factory

Turns an ExperimentConfig into a ``StemPipeline``: the object that maps
raw documents and queries to the token streams that get indexed and
searched. Corpus-level work (vocabulary stemming, entity extraction)
happens in ``prepare``; per-document transforms can then run in a
bounded thread pool.
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple
import logging

from joblib import Parallel, delayed
from tqdm import tqdm

from .contextual import contextual_stem
from .entity import EcsVariant, ecs_transform
from .vocabulary import LlmVocabularyStemmer, StemMapping, apply_mapping, vocabulary_stem
from ..core.telemetry import RunTelemetry
from ..core.text_processing import RawDocument, TextProcessor, TokenStream, load_stopwords
from ..data.config import ExperimentConfig
from ..data.corpus_io import read_entity_cache, write_entity_cache
from ..exceptions import InvalidArgumentError
from ..extractors import (
    BaseEntityExtractor,
    CapitalizedEntityExtractor,
    LlmEntityExtractor,
    PrecomputedEntityExtractor,
)
from ..llm.cache import ResponseCache, StemCache
from ..llm.gateway import LLMGateway
from ..llm.prompts import OneShotSamples, load_samples
from ..stemmers import (
    BaseStemmer,
    DictionaryStemmer,
    IdentityStemmer,
    PorterStemmer,
    load_stem_dictionary,
    stem_stream,
)

logger = logging.getLogger(__name__)

# Query records in entity caches are keyed "query:<qid>" so that query
# and document ids never collide.
QUERY_ENTITY_PREFIX = "query:"

TransformedStreams = List[Tuple[str, TokenStream]]


class StemPipeline(ABC):
    """Document and query transformation shared by every experiment."""

    name = "base"

    def __init__(self, processor: TextProcessor, telemetry: Optional[RunTelemetry] = None):
        self.processor = processor
        self.telemetry = telemetry or RunTelemetry()

    def prepare(self,
                documents: Sequence[RawDocument],
                queries: Sequence[RawDocument],
                workers: int = 1,
                progress: bool = False) -> None:
        """Corpus-level work that must precede the transforms."""

    @abstractmethod
    def transform_document(self, doc: RawDocument) -> TokenStream:
        pass

    @abstractmethod
    def transform_query(self, query: RawDocument) -> TokenStream:
        pass

    def stems_for(self, word: str) -> List[str]:
        """Vocabulary-level stems of a word (used as the ECS base stemmer)."""
        raise InvalidArgumentError(f"Pipeline '{self.name}' cannot serve as a vocabulary stemmer")

    def _run(self, fn, items: Sequence[RawDocument], workers: int, progress: bool,
             desc: str) -> TransformedStreams:
        iterator = tqdm(items, desc=desc, unit="doc", disable=not progress)
        if workers > 1:
            streams = Parallel(n_jobs=workers, backend="threading")(delayed(fn)(item) for item in iterator)
        else:
            streams = [fn(item) for item in iterator]
        return [(item.doc_id, stream) for item, stream in zip(items, streams)]

    def transform_corpus(self, documents: Sequence[RawDocument], workers: int = 1,
                         progress: bool = False) -> TransformedStreams:
        """Transform documents; results keep the input order."""
        return self._run(self.transform_document, documents, workers, progress, f"Transform ({self.name})")

    def transform_queries(self, queries: Sequence[RawDocument], workers: int = 1,
                          progress: bool = False) -> TransformedStreams:
        return self._run(self.transform_query, queries, workers, progress, f"Queries ({self.name})")

    def finalize(self) -> None:
        """Persist caches; called once after all transforms."""

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(name='{self.name}')"


class ClassicPipeline(StemPipeline):
    """Token-by-token application of a classic stemmer (or none)."""

    def __init__(self, stemmer: BaseStemmer, processor: TextProcessor,
                 telemetry: Optional[RunTelemetry] = None):
        super().__init__(processor, telemetry)
        self.stemmer = stemmer
        self.name = stemmer.kind.value

    def transform_document(self, doc: RawDocument) -> TokenStream:
        return stem_stream(self.processor.process_document(doc.text), self.stemmer.stem)

    def transform_query(self, query: RawDocument) -> TokenStream:
        return stem_stream(self.processor.process_query(query.text), self.stemmer.stem)

    def stems_for(self, word: str) -> List[str]:
        return [self.stemmer.stem(word)]


class VocabularyPipeline(StemPipeline):
    """Vocabulary stemming: one mapping for the whole corpus and the queries."""

    name = "vs"

    def __init__(self,
                 stemmer: BaseStemmer,
                 processor: TextProcessor,
                 cache: Optional[StemCache] = None,
                 first_stem_only: bool = False,
                 telemetry: Optional[RunTelemetry] = None):
        super().__init__(processor, telemetry)
        self.stemmer = stemmer
        self.cache = cache
        self.first_stem_only = first_stem_only
        self.mapping: Optional[StemMapping] = None

    def prepare(self, documents, queries, workers=1, progress=False) -> None:
        streams = [self.processor.process_document(doc.text) for doc in documents]
        streams.extend(self.processor.process_query(query.text) for query in queries)
        with self.telemetry.stage("vocabulary_stemming"):
            self.mapping = vocabulary_stem(streams, self.stemmer, self.cache, workers,
                                           self.telemetry, progress)

    def _mapping(self) -> StemMapping:
        if self.mapping is None:
            raise InvalidArgumentError("Vocabulary pipeline used before prepare()")
        return self.mapping

    def transform_document(self, doc: RawDocument) -> TokenStream:
        return apply_mapping(self.processor.process_document(doc.text), self._mapping(),
                             self.first_stem_only)

    def transform_query(self, query: RawDocument) -> TokenStream:
        return apply_mapping(self.processor.process_query(query.text), self._mapping(),
                             self.first_stem_only)

    def stems_for(self, word: str) -> List[str]:
        return self._mapping().stems_for(word, self.first_stem_only)

    def finalize(self) -> None:
        if self.cache is not None:
            self.cache.checkpoint()


class ContextualPipeline(StemPipeline):
    """Contextual stemming: every document goes through the LLM."""

    name = "cs"

    def __init__(self, gateway: LLMGateway, samples: OneShotSamples, processor: TextProcessor,
                 telemetry: Optional[RunTelemetry] = None,
                 cache: Optional[ResponseCache] = None):
        super().__init__(processor, telemetry)
        self.gateway = gateway
        self.samples = samples
        self.cache = cache

    def _stem(self, doc: RawDocument) -> TokenStream:
        stemmed = contextual_stem(doc, self.gateway, self.samples, self.telemetry, self.cache)
        return self.processor.filter_stopwords(stemmed)

    def transform_document(self, doc: RawDocument) -> TokenStream:
        return self._stem(RawDocument(doc.doc_id, self.processor.document_text(doc.text)))

    def transform_query(self, query: RawDocument) -> TokenStream:
        return self._stem(query)

    def finalize(self) -> None:
        if self.cache is not None:
            self.cache.checkpoint()


class EntityPipeline(StemPipeline):
    """Entity-based contextual stemming (ECS.1 / ECS.2) over a vocabulary-level base."""

    def __init__(self,
                 extractor: BaseEntityExtractor,
                 base: StemPipeline,
                 variant: EcsVariant,
                 processor: TextProcessor,
                 query_entities: bool = True,
                 entity_cache_path: Optional[str] = None,
                 telemetry: Optional[RunTelemetry] = None):
        super().__init__(processor, telemetry)
        self.extractor = extractor
        self.base = base
        self.variant = variant
        self.name = variant.value
        self.query_entities = query_entities
        self.entity_cache_path = entity_cache_path
        self.entities: Dict[str, FrozenSet[str]] = {}

    def prepare(self, documents, queries, workers=1, progress=False) -> None:
        inputs = [RawDocument(doc.doc_id, self.processor.document_text(doc.text)) for doc in documents]
        if self.query_entities:
            inputs.extend(RawDocument(f"{QUERY_ENTITY_PREFIX}{query.doc_id}", query.text)
                          for query in queries)
        with self.telemetry.stage("entity_extraction"):
            extracted = self.extractor.extract_many(inputs, workers, progress)
        self.entities = {doc_id: entity_set.words for doc_id, entity_set in extracted.items()}
        self.base.prepare(documents, queries, workers, progress)

    def transform_document(self, doc: RawDocument) -> TokenStream:
        return ecs_transform(self.processor.process_document(doc.text),
                             self.entities.get(doc.doc_id, frozenset()),
                             self.base.stems_for, self.variant)

    def transform_query(self, query: RawDocument) -> TokenStream:
        words = self.entities.get(f"{QUERY_ENTITY_PREFIX}{query.doc_id}", frozenset())
        return ecs_transform(self.processor.process_query(query.text), words,
                             self.base.stems_for, self.variant)

    def finalize(self) -> None:
        self.base.finalize()
        if isinstance(self.extractor, LlmEntityExtractor) and self.entity_cache_path:
            write_entity_cache(self.entity_cache_path, self.extractor.known)
            logger.info(f"Saved {len(self.extractor.known)} entity records to {self.entity_cache_path}")


class _Resources:
    """Lazily created shared objects for one build."""

    def __init__(self, config: ExperimentConfig, telemetry: RunTelemetry):
        self.config = config
        self.telemetry = telemetry
        self._gateway: Optional[LLMGateway] = None
        self._samples: Optional[OneShotSamples] = None

    @property
    def gateway(self) -> LLMGateway:
        if self._gateway is None:
            self._gateway = LLMGateway.from_config(self.config.provider, self.telemetry)
        return self._gateway

    @property
    def samples(self) -> OneShotSamples:
        if self._samples is None:
            self._samples = load_samples(self.config.samples_path)
        return self._samples


def _vocabulary_level(kind: str, config: ExperimentConfig, processor: TextProcessor,
                      resources: _Resources, telemetry: RunTelemetry) -> StemPipeline:
    if kind == "none":
        return ClassicPipeline(IdentityStemmer(), processor, telemetry)
    if kind == "porter":
        return ClassicPipeline(PorterStemmer(), processor, telemetry)
    if kind == "dict":
        dictionary = load_stem_dictionary(config.stem_dictionary_path)
        return ClassicPipeline(DictionaryStemmer(dictionary), processor, telemetry)
    stemmer = LlmVocabularyStemmer(resources.gateway, resources.samples, config.vs_batch_size, telemetry)
    cache = StemCache.load(config.stem_cache_path) if config.stem_cache_path else None
    return VocabularyPipeline(stemmer, processor, cache, config.first_stem_only, telemetry)


def _entity_extractor(config: ExperimentConfig, resources: _Resources,
                      telemetry: RunTelemetry) -> BaseEntityExtractor:
    if config.entity_provider == "capitalized":
        return CapitalizedEntityExtractor(telemetry=telemetry)
    if config.entity_provider == "precomputed":
        return PrecomputedEntityExtractor(read_entity_cache(config.entity_cache_path), telemetry)
    known = {}
    if config.entity_cache_path and Path(config.entity_cache_path).is_file():
        known = read_entity_cache(config.entity_cache_path)
    return LlmEntityExtractor(resources.gateway, resources.samples, known, telemetry)


def build_processor(config: ExperimentConfig) -> TextProcessor:
    stopwords = load_stopwords(config.stopwords_path) if config.stopwords_path else None
    return TextProcessor(stopwords, config.truncation_limit)


def build_pipeline(config: ExperimentConfig,
                   telemetry: Optional[RunTelemetry] = None,
                   processor: Optional[TextProcessor] = None) -> StemPipeline:
    """
    Create the pipeline named by ``config.pipeline``.

    Args:
        config: Validated experiment configuration
        telemetry: Counter sink shared with the gateway
        processor: Text processor (built from the config when omitted)

    Returns:
        StemPipeline for one of none, porter, dict, vs, cs, ecs1, ecs2
    """
    telemetry = telemetry or RunTelemetry()
    processor = processor or build_processor(config)
    resources = _Resources(config, telemetry)

    if config.pipeline in ("none", "porter", "dict", "vs"):
        pipeline = _vocabulary_level(config.pipeline, config, processor, resources, telemetry)
    elif config.pipeline == "cs":
        cache = ResponseCache.load(config.cs_cache_path) if config.cs_cache_path else None
        pipeline = ContextualPipeline(resources.gateway, resources.samples, processor, telemetry, cache)
    else:
        base = _vocabulary_level(config.base_stemmer, config, processor, resources, telemetry)
        pipeline = EntityPipeline(
            _entity_extractor(config, resources, telemetry),
            base,
            EcsVariant(config.pipeline),
            processor,
            query_entities=config.query_entities,
            entity_cache_path=config.entity_cache_path,
            telemetry=telemetry,
        )
    logger.info(f"Built pipeline {pipeline!r}")
    return pipeline
