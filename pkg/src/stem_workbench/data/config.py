"""
Experiment Configuration

Structured experiment configuration. Files are YAML, read through
omegaconf structured configs so that unknown keys and wrong types are
rejected; ``key.path=value`` overrides are applied on top, and the
resolved configuration is written next to every run.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union
import logging

from omegaconf import OmegaConf
from omegaconf.errors import OmegaConfBaseException

from ..core.index import Bm25Params
from ..exceptions import ConfigError, InvalidArgumentError
from ..llm.prompts import DEFAULT_VS_BATCH_SIZE
from ..llm.providers import ProviderConfig

logger = logging.getLogger(__name__)

PIPELINES = ("none", "porter", "dict", "vs", "cs", "ecs1", "ecs2")
BASE_STEMMERS = ("none", "porter", "dict", "vs")
ENTITY_PROVIDERS = ("llm", "capitalized", "precomputed")


@dataclass
class ExperimentConfig:
    """Every parameter of one retrieval experiment."""

    corpus_path: Optional[str] = None
    topics_path: Optional[str] = None
    qrels_path: Optional[str] = None
    pipeline: str = "none"
    base_stemmer: str = "porter"
    provider: ProviderConfig = field(default_factory=ProviderConfig)
    entity_provider: Optional[str] = None
    bm25: Bm25Params = field(default_factory=Bm25Params)
    k: int = 1000
    truncation_limit: int = 300
    output_dir: str = "runs"
    run_tag: str = "stemwb"
    stopwords_path: Optional[str] = None
    stem_dictionary_path: Optional[str] = None
    samples_path: Optional[str] = None
    stem_cache_path: Optional[str] = None
    entity_cache_path: Optional[str] = None
    cs_cache_path: Optional[str] = None
    vs_batch_size: int = DEFAULT_VS_BATCH_SIZE
    first_stem_only: bool = False
    query_entities: bool = True
    workers: int = 1
    save_index: bool = False
    metrics: List[str] = field(default_factory=lambda: ["rr", "map", "ndcg@10", "recall@1000"])

    @property
    def is_ecs(self) -> bool:
        return self.pipeline in ("ecs1", "ecs2")

    def uses_dictionary(self) -> bool:
        return self.pipeline == "dict" or (self.is_ecs and self.base_stemmer == "dict")

    def validate(self) -> None:
        """Raise ConfigError on inconsistent or out-of-range fields."""
        from ..analysis.metrics import parse_metric  # analysis imports this module

        if self.pipeline not in PIPELINES:
            raise ConfigError(f"pipeline must be one of {PIPELINES}, got '{self.pipeline}'")
        if self.base_stemmer not in BASE_STEMMERS:
            raise ConfigError(f"base_stemmer must be one of {BASE_STEMMERS}, got '{self.base_stemmer}'")
        if self.is_ecs:
            if self.entity_provider not in ENTITY_PROVIDERS:
                raise ConfigError(f"pipeline {self.pipeline} needs entity_provider in {ENTITY_PROVIDERS}")
            if self.entity_provider == "precomputed" and not self.entity_cache_path:
                raise ConfigError("entity_provider 'precomputed' needs entity_cache_path")
        if self.uses_dictionary() and not self.stem_dictionary_path:
            raise ConfigError("dictionary stemming needs stem_dictionary_path")
        if not self.run_tag or any(ch.isspace() for ch in self.run_tag):
            raise ConfigError(f"run_tag must be non-empty without whitespace: {self.run_tag!r}")
        for name in ("k", "truncation_limit", "vs_batch_size", "workers"):
            if getattr(self, name) < 1:
                raise ConfigError(f"{name} must be >= 1, got {getattr(self, name)}")
        if not self.metrics:
            raise ConfigError("metrics must not be empty")
        try:
            for metric in self.metrics:
                parse_metric(metric)
        except InvalidArgumentError as e:
            raise ConfigError(str(e)) from e
        self.provider.validate()

    def require(self, *names: str) -> None:
        """Raise ConfigError unless every named path field is set."""
        missing = [name for name in names if not getattr(self, name)]
        if missing:
            raise ConfigError(f"Missing required configuration: {', '.join(missing)}")


def _nested(updates: Dict[str, Any]) -> Dict[str, Any]:
    nested: Dict[str, Any] = {}
    for dotted, value in updates.items():
        if value is None:
            continue
        node = nested
        *parents, leaf = dotted.split('.')
        for parent in parents:
            node = node.setdefault(parent, {})
        node[leaf] = value
    return nested


def load_config(path: Optional[Union[str, Path]] = None,
                overrides: Sequence[str] = (),
                updates: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Build an ExperimentConfig from defaults, a YAML file and overrides.

    Args:
        path: Optional YAML configuration file
        overrides: ``key.path=value`` strings
        updates: Dotted key -> value pairs from dedicated CLI flags
            (None values are ignored)

    Returns:
        Validated ExperimentConfig
    """
    try:
        merged = OmegaConf.structured(ExperimentConfig)
        if path:
            if not Path(path).is_file():
                raise ConfigError(f"Configuration file not found: {path}")
            merged = OmegaConf.merge(merged, OmegaConf.load(path))
        if overrides:
            merged = OmegaConf.merge(merged, OmegaConf.from_dotlist(list(overrides)))
        if updates:
            merged = OmegaConf.merge(merged, OmegaConf.create(_nested(updates)))
        config = OmegaConf.to_object(merged)
    except OmegaConfBaseException as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
    except InvalidArgumentError as e:
        raise ConfigError(str(e)) from e
    config.validate()
    logger.info(f"Loaded configuration: pipeline={config.pipeline}, provider={config.provider.kind}")
    return config


def save_resolved_config(config: ExperimentConfig, path: Union[str, Path]) -> None:
    """Write the fully resolved configuration as YAML."""
    OmegaConf.save(OmegaConf.structured(config), path)
