"""
End-to-end experiments on the bundled toy collection with the offline
mock provider.
"""

import json
from collections import Counter

import pytest

from stem_workbench.analysis.experiment import run_experiment
from stem_workbench.core.index import build_index
from stem_workbench.core.telemetry import RunTelemetry
from stem_workbench.core.text_processing import RawDocument, tokenize
from stem_workbench.data.config import load_config
from stem_workbench.data.corpus_io import bundled_toy_paths, load_corpus, load_topics, write_entity_cache
from stem_workbench.llm import MockChatProvider
from stem_workbench.llm.prompts import extract_vs_terms
from stem_workbench.pipelines.factory import build_pipeline


def toy_config(output_dir, pipeline, *overrides):
    paths = bundled_toy_paths()
    return load_config(overrides=list(overrides), updates={
        'pipeline': pipeline,
        'corpus_path': str(paths['corpus']),
        'topics_path': str(paths['topics']),
        'qrels_path': str(paths['qrels']),
        'stem_dictionary_path': str(paths['dictionary']),
        'output_dir': str(output_dir),
        'run_tag': 'toy',
    })


def run_bytes(tmp_path, name, pipeline, *overrides):
    result = run_experiment(toy_config(tmp_path / name, pipeline, *overrides))
    return result.run_path.read_bytes()


@pytest.fixture(scope="module")
def toy_collection():
    paths = bundled_toy_paths()
    documents = list(load_corpus(paths['corpus']))
    queries = [RawDocument(qid, text) for qid, text in load_topics(paths['topics'])]
    return documents, queries


@pytest.fixture
def empty_entity_cache(tmp_path):
    path = tmp_path / "no_entities.tsv"
    path.write_text("", encoding="utf-8")
    return str(path)


@pytest.fixture
def all_words_entity_cache(tmp_path, toy_collection):
    documents, queries = toy_collection
    entities = {doc.doc_id: set(tokenize(doc.text)) for doc in documents}
    entities.update({f"query:{q.doc_id}": set(tokenize(q.text)) for q in queries})
    path = tmp_path / "all_words.tsv"
    write_entity_cache(path, entities)
    return str(path)


class TestRunExperiment:
    """Test suite for run_experiment."""

    def test_artifacts(self, tmp_path):
        """Test the files written by an experiment."""
        config = toy_config(tmp_path / "out", "porter", "save_index=true")
        result = run_experiment(config)
        out = tmp_path / "out"
        for name in ("toy.run", "report.json", "per_query.tsv", "resolved_config.yaml",
                     "telemetry.json", "index.snapshot"):
            assert (out / name).is_file(), name
        report = json.loads((out / "report.json").read_text())
        assert report["run"] == "toy"
        assert report["pipeline"] == "porter"
        assert report["queries"] == 10
        assert set(report["means"]) == {"rr", "map", "ndcg@10", "recall@1000"}
        assert report["counters"] == {"cs_fallbacks": 0, "vs_unresolved": 0, "vs_skipped_lines": 0,
                                      "entity_failures": 0}
        assert result.report.means == pytest.approx(report["means"])
        assert len(result.run) == 10

    def test_run_file_format(self, tmp_path):
        """Test run file format."""
        result = run_experiment(toy_config(tmp_path / "out", "porter"))
        first = result.run_path.read_text().splitlines()[0].split()
        assert len(first) == 6
        assert first[1] == "Q0" and first[3] == "1" and first[5] == "toy"
        assert len(first[4].split(".")[1]) == 6

    def test_porter_beats_no_stemming(self, tmp_path):
        """Test porter beats no stemming."""
        porter = run_experiment(toy_config(tmp_path / "porter", "porter")).report
        none = run_experiment(toy_config(tmp_path / "none", "none")).report
        assert porter.means["ndcg@10"] > none.means["ndcg@10"]
        assert porter.means["recall@1000"] == pytest.approx(1.0)
        for qid in porter.query_ids:
            assert porter.per_query[qid]["ndcg@10"] >= none.per_query[qid]["ndcg@10"]

    def test_deterministic(self, tmp_path):
        """Test that two identical VS runs give identical files."""
        first = run_experiment(toy_config(tmp_path / "a", "vs", "provider.mock_mode=porter"))
        second = run_experiment(toy_config(tmp_path / "b", "vs", "provider.mock_mode=porter"))
        assert first.run_path.read_bytes() == second.run_path.read_bytes()
        assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()
        assert ((tmp_path / "a" / "per_query.tsv").read_bytes()
                == (tmp_path / "b" / "per_query.tsv").read_bytes())

    def test_workers_do_not_change_results(self, tmp_path):
        """Test workers do not change results."""
        serial = run_bytes(tmp_path, "serial", "vs", "provider.mock_mode=porter")
        parallel = run_bytes(tmp_path, "parallel", "vs", "provider.mock_mode=porter", "workers=4")
        assert serial == parallel

    def test_cs_response_cache_reused(self, tmp_path):
        """Test that rerunning contextual stemming with a response cache sends no LLM requests."""
        cache = tmp_path / "cs_responses.tsv"
        first = run_experiment(toy_config(tmp_path / "a", "cs", "provider.mock_mode=porter",
                                          f"cs_cache_path={cache}"))
        assert cache.is_file()
        telemetry = RunTelemetry()
        second = run_experiment(toy_config(tmp_path / "b", "cs", "provider.mock_mode=porter",
                                           f"cs_cache_path={cache}"), telemetry=telemetry)
        assert telemetry.get("llm_requests") == 0
        assert telemetry.get("cs_cache_hits") > 0
        assert second.run_path.read_bytes() == first.run_path.read_bytes()

    def test_skipped_vs_lines_reported(self, tmp_path, monkeypatch):
        """Test that unparseable VS response lines are counted in report.json."""
        rule_answer = MockChatProvider._rule_answer

        def chatty(provider, user_text):
            answer = rule_answer(provider, user_text)
            if answer is not None and extract_vs_terms(user_text) is not None:
                answer = "Here are the stems\n" + answer
            return answer

        monkeypatch.setattr(MockChatProvider, "_rule_answer", chatty)
        telemetry = RunTelemetry()
        run_experiment(toy_config(tmp_path / "vs", "vs", "provider.mock_mode=porter"), telemetry=telemetry)
        report = json.loads((tmp_path / "vs" / "report.json").read_text())
        assert report["counters"]["vs_skipped_lines"] == telemetry.get("vs_skipped_lines")
        assert report["counters"]["vs_skipped_lines"] > 0


class TestPipelineEquivalences:
    """Pipelines that must reduce to simpler ones on the toy collection."""

    def test_vs_identity_equals_no_stemming(self, tmp_path):
        """Test VS identity equals no stemming."""
        assert run_bytes(tmp_path, "vs", "vs") == run_bytes(tmp_path, "none", "none")

    def test_vs_porter_mock_equals_porter(self, tmp_path):
        """Test VS porter mock equals porter."""
        vs = run_bytes(tmp_path, "vs", "vs", "provider.mock_mode=porter")
        assert vs == run_bytes(tmp_path, "porter", "porter")

    def test_cs_porter_mock_equals_porter(self, tmp_path):
        """Test CS porter mock equals porter."""
        cs = run_bytes(tmp_path, "cs", "cs", "provider.mock_mode=porter")
        assert cs == run_bytes(tmp_path, "porter", "porter")

    def test_dictionary_pipeline_runs(self, tmp_path):
        """Test dictionary pipeline runs."""
        result = run_experiment(toy_config(tmp_path / "dict", "dict"))
        assert result.report.means["ndcg@10"] > 0

    @pytest.mark.parametrize("pipeline", ["ecs1", "ecs2"])
    def test_ecs_without_entities_equals_base(self, tmp_path, empty_entity_cache, pipeline):
        """Test ECS without entities equals base."""
        ecs = run_bytes(tmp_path, pipeline, pipeline, "entity_provider=precomputed",
                        f"entity_cache_path={empty_entity_cache}")
        assert ecs == run_bytes(tmp_path, "porter", "porter")

    def test_ecs1_with_every_word_an_entity_equals_no_stemming(self, tmp_path, all_words_entity_cache):
        """Test ECS1 with every word an entity equals no stemming."""
        ecs = run_bytes(tmp_path, "ecs1", "ecs1", "entity_provider=precomputed",
                        f"entity_cache_path={all_words_entity_cache}")
        assert ecs == run_bytes(tmp_path, "none", "none")

    def test_ecs_over_vs_base(self, tmp_path, empty_entity_cache):
        """Test ECS over VS base."""
        ecs = run_bytes(tmp_path, "ecs1", "ecs1", "entity_provider=precomputed",
                        f"entity_cache_path={empty_entity_cache}", "base_stemmer=vs",
                        "provider.mock_mode=porter")
        assert ecs == run_bytes(tmp_path, "porter", "porter")

    def test_ecs2_keeps_every_ecs1_token(self, tmp_path, toy_collection):
        """Test ECS2 keeps every ECS1 token."""
        documents, queries = toy_collection
        streams = {}
        for variant in ("ecs1", "ecs2"):
            config = toy_config(tmp_path / variant, variant, "entity_provider=capitalized")
            pipeline = build_pipeline(config)
            pipeline.prepare(documents, queries)
            streams[variant] = dict(pipeline.transform_corpus(documents))
        assert any(len(streams["ecs2"][d]) > len(streams["ecs1"][d]) for d in streams["ecs1"])
        for doc_id, tokens in streams["ecs1"].items():
            assert not Counter(tokens) - Counter(streams["ecs2"][doc_id])

        indexes = {variant: build_index(streams[variant].items()) for variant in streams}
        extra_terms = 0
        for doc_id, tokens in streams["ecs2"].items():
            for term in set(tokens) - set(streams["ecs1"][doc_id]):
                extra_terms += 1
                assert doc_id in dict(indexes["ecs2"].postings_for(term))
                assert doc_id not in dict(indexes["ecs1"].postings_for(term))
        assert extra_terms > 0
        france = [doc_id for doc_id, tokens in streams["ecs1"].items() if "france" in tokens]
        assert france
        for doc_id in france:
            assert doc_id in dict(indexes["ecs2"].postings_for("franc"))


if __name__ == "__main__":
    pytest.main([__file__])
