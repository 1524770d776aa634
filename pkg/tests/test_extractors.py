"""
Tests for the entity extractors used by entity-based contextual stemming.
"""

import pytest

from stem_workbench.core.telemetry import RunTelemetry
from stem_workbench.core.text_processing import RawDocument
from stem_workbench.exceptions import TransportError
from stem_workbench.extractors import (
    BaseEntityExtractor,
    CapitalizedEntityExtractor,
    LlmEntityExtractor,
    PrecomputedEntityExtractor,
)
from stem_workbench.llm import LLMGateway, MockChatProvider, load_samples
from stem_workbench.llm.prompts import build_ecs_prompt
from stem_workbench.llm.providers import ChatProvider
from stem_workbench.pipelines import EntitySet


class TestCapitalizedEntityExtractor:
    """Test suite for CapitalizedEntityExtractor."""

    @pytest.fixture
    def extractor(self):
        return CapitalizedEntityExtractor()

    def test_company_sentence(self, extractor):
        """Test a company name with abbreviations."""
        assert extractor.entity_words("Programs PTY. LTD. sold for 1 billion euros") == {
            "programs", "pty", "ltd"
        }

    def test_multiword_names(self, extractor):
        """Test multiword company and university names."""
        text = "Apple Inc. was connecting its engineers with researchers at Cambridge University."
        assert extractor.entity_words(text) == {"apple", "inc", "cambridge", "university"}

    def test_sentence_initial_words_ignored(self, extractor):
        """Test sentence initial words ignored."""
        assert extractor.entity_words("The cat sat. Dogs run! Birds sing?") == frozenset()

    def test_acronyms_and_mid_sentence_names(self, extractor):
        """Test acronyms and mid sentence names."""
        assert extractor.entity_words("We met NASA staff in Houston") == {"nasa", "houston"}

    def test_function_words_never_entities(self, extractor):
        """Test function words never entities."""
        assert extractor.entity_words("Visitors saw The Hague and Of Mice") == {"hague", "mice"}

    def test_custom_function_words(self):
        """Test custom function words."""
        extractor = CapitalizedEntityExtractor(function_words=["houston"])
        assert extractor.entity_words("We met NASA staff in Houston") == {"nasa"}

    def test_extract(self, extractor):
        """Test extract returns an EntitySet."""
        entities = extractor.extract(RawDocument("d1", "Engineers visited Paris"))
        assert entities == EntitySet("d1", frozenset({"paris"}))

    def test_extract_many(self, extractor):
        """Test extraction over several documents."""
        docs = [RawDocument(f"d{i}", f"Visitors from Town{i} arrived") for i in (3, 1, 2)]
        sequential = extractor.extract_many(docs)
        parallel = extractor.extract_many(docs, workers=3)
        assert list(sequential) == ["d1", "d2", "d3"]
        assert sequential == parallel
        assert sequential["d2"].words == {"town2"}


class TestPrecomputedEntityExtractor:
    """Test suite for PrecomputedEntityExtractor."""

    def test_lookup(self):
        """Test looking up precomputed entities."""
        telemetry = RunTelemetry()
        extractor = PrecomputedEntityExtractor({"d1": frozenset({"apple"})}, telemetry)
        assert extractor.extract(RawDocument("d1", "x")).words == {"apple"}
        assert len(extractor.extract(RawDocument("d2", "x"))) == 0
        assert telemetry.get('entity_missing_records') == 1


class FailingProvider(ChatProvider):
    @property
    def name(self):
        return "failing"

    def complete(self, request, request_id):
        raise TransportError("unreachable", request_id)


class TestLlmEntityExtractor:
    """Test suite for LlmEntityExtractor."""

    @pytest.fixture
    def samples(self):
        return load_samples()

    def test_extract_and_cache(self, samples):
        """Test extract and cache."""
        doc = RawDocument("d1", "Apple Inc. opened a store in Paris.")
        request = build_ecs_prompt(doc.text, samples)
        provider = MockChatProvider.from_prompts({request.user_text: "Apple Inc.\nParis"})
        telemetry = RunTelemetry()
        extractor = LlmEntityExtractor(LLMGateway(provider, telemetry=telemetry), samples)

        assert extractor.extract(doc).words == {"apple", "inc", "paris"}
        assert extractor.extract(doc).words == {"apple", "inc", "paris"}
        assert telemetry.get('llm_requests') == 1
        assert telemetry.get('entity_cache_hits') == 1
        assert extractor.known == {"d1": frozenset({"apple", "inc", "paris"})}

    def test_known_entities_skip_requests(self, samples):
        """Test known entities skip requests."""
        telemetry = RunTelemetry()
        extractor = LlmEntityExtractor(LLMGateway(FailingProvider(), telemetry=telemetry), samples,
                                       known={"d1": frozenset({"nasa"})})
        assert extractor.extract(RawDocument("d1", "NASA launched")).words == {"nasa"}
        assert telemetry.get('llm_requests') == 0

    def test_failure_gives_empty_set(self, samples):
        """Test failure gives empty set."""
        telemetry = RunTelemetry()
        extractor = LlmEntityExtractor(LLMGateway(FailingProvider(), telemetry=telemetry), samples)
        assert len(extractor.extract(RawDocument("d1", "Apple Inc."))) == 0
        assert telemetry.get('entity_failures') == 1
        assert "d1" not in extractor.known

    def test_refusal_gives_empty_set(self, samples):
        """Test refusal gives empty set."""
        doc = RawDocument("d1", "nothing here")
        request = build_ecs_prompt(doc.text, samples)
        provider = MockChatProvider.from_prompts({request.user_text: "I'm sorry, there are no entities."})
        extractor = LlmEntityExtractor(LLMGateway(provider), samples)
        assert len(extractor.extract(doc)) == 0
        assert extractor.known["d1"] == frozenset()

    def test_empty_text(self, samples):
        """Test that empty text sends no request."""
        telemetry = RunTelemetry()
        extractor = LlmEntityExtractor(LLMGateway(FailingProvider(), telemetry=telemetry), samples)
        assert len(extractor.extract(RawDocument("d1", "  "))) == 0
        assert telemetry.get('llm_requests') == 0


class TestBaseEntityExtractor:
    """Test suite for the abstract base class."""

    def test_cannot_instantiate(self):
        """Test that the abstract extractor cannot be instantiated."""
        with pytest.raises(TypeError):
            BaseEntityExtractor()


if __name__ == "__main__":
    pytest.main([__file__])
