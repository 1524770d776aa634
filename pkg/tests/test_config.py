"""
Tests for experiment configuration loading and validation.
"""

import pytest
from omegaconf import OmegaConf

from stem_workbench.data.config import ExperimentConfig, load_config, save_resolved_config
from stem_workbench.exceptions import ConfigError


class TestLoadConfig:
    """Test suite for load_config."""

    def test_defaults(self):
        """Test configuration defaults."""
        config = load_config()
        assert isinstance(config, ExperimentConfig)
        assert config.pipeline == "none"
        assert config.k == 1000
        assert config.truncation_limit == 300
        assert (config.bm25.k1, config.bm25.b) == (0.9, 0.4)
        assert config.provider.kind == "mock"
        assert config.metrics == ["rr", "map", "ndcg@10", "recall@1000"]

    def test_yaml_file(self, tmp_path):
        """Test loading a YAML configuration file."""
        path = tmp_path / "exp.yaml"
        path.write_text("pipeline: cs\nk: 100\nbm25:\n  k1: 1.2\nprovider:\n  preset: open-model\n")
        config = load_config(path)
        assert config.pipeline == "cs"
        assert config.k == 100
        assert config.bm25.k1 == 1.2
        assert config.bm25.b == 0.4
        assert config.provider.preset == "open-model"

    def test_overrides_and_updates(self, tmp_path):
        """Test overrides and updates."""
        path = tmp_path / "exp.yaml"
        path.write_text("pipeline: cs\nrun_tag: fromfile\n")
        config = load_config(path, overrides=["run_tag=fromset", "provider.max_retries=1"],
                             updates={"pipeline": "porter", "workers": None})
        assert config.run_tag == "fromset"
        assert config.provider.max_retries == 1
        assert config.pipeline == "porter"
        assert config.workers == 1

    @pytest.mark.parametrize("overrides", [
        ["no_such_key=1"],
        ["k=abc"],
        ["pipeline=lemmatize"],
        ["run_tag=has space"],
        ["k=0"],
        ["bm25.b=2"],
        ["metrics=[p@5]"],
        ["provider.kind=grpc"],
        ["provider.max_retries=99"],
    ])
    def test_invalid(self, overrides):
        """Test that invalid settings raise ConfigError."""
        with pytest.raises(ConfigError):
            load_config(overrides=overrides)

    def test_missing_file(self, tmp_path):
        """Test that a missing configuration file raises ConfigError."""
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.yaml")

    def test_ecs_needs_entity_provider(self):
        """Test ECS needs entity provider."""
        with pytest.raises(ConfigError):
            load_config(updates={"pipeline": "ecs1"})
        config = load_config(overrides=["entity_provider=capitalized"], updates={"pipeline": "ecs2"})
        assert config.is_ecs

    def test_precomputed_needs_cache(self):
        """Test precomputed needs cache."""
        with pytest.raises(ConfigError):
            load_config(overrides=["pipeline=ecs1", "entity_provider=precomputed"])

    def test_dictionary_needs_path(self):
        """Test dictionary needs path."""
        with pytest.raises(ConfigError):
            load_config(overrides=["pipeline=dict"])
        with pytest.raises(ConfigError):
            load_config(overrides=["pipeline=ecs1", "entity_provider=capitalized", "base_stemmer=dict"])
        config = load_config(overrides=["pipeline=dict", "stem_dictionary_path=stems.tsv"])
        assert config.uses_dictionary()

    def test_require(self):
        """Test required path checks."""
        config = load_config()
        with pytest.raises(ConfigError, match="corpus_path"):
            config.require("corpus_path")


class TestSaveResolvedConfig:
    """Test suite for save_resolved_config."""

    def test_round_trip(self, tmp_path):
        """Test saving and reloading the resolved configuration."""
        config = load_config(overrides=["pipeline=vs", "provider.mock_mode=porter", "k=50"])
        path = tmp_path / "resolved.yaml"
        save_resolved_config(config, path)
        assert OmegaConf.load(path).provider.mock_mode == "porter"
        assert load_config(path) == config


if __name__ == "__main__":
    pytest.main([__file__])
