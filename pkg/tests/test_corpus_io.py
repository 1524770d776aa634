"""
Tests for corpus, topic, qrels, run and entity cache files.
"""

import json

import pytest

from stem_workbench.data.corpus_io import (
    bundled_toy_paths,
    load_corpus,
    load_qrels,
    load_topics,
    read_entity_cache,
    read_run,
    write_entity_cache,
    write_run,
    write_topics,
    write_transformed_corpus,
)
from stem_workbench.exceptions import (
    DuplicateDocumentError,
    InvalidArgumentError,
    NotFoundError,
    ParseError,
)


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCorpus:
    """Test suite for load_corpus."""

    def test_file_order(self, tmp_path):
        """Test that documents come back in file order."""
        path = write(tmp_path / "c.jsonl",
                     '{"id": "b", "contents": "Second doc"}\n{"id": "a", "contents": "First"}\n')
        docs = list(load_corpus(path))
        assert [(d.doc_id, d.text) for d in docs] == [("b", "Second doc"), ("a", "First")]

    def test_empty_file(self, tmp_path):
        """Test loading an empty corpus file."""
        assert list(load_corpus(write(tmp_path / "c.jsonl", ""))) == []

    def test_streaming(self, tmp_path):
        """Test that the corpus is read lazily."""
        path = write(tmp_path / "c.jsonl", '{"id": "a", "contents": "x"}\nnot json\n')
        docs = load_corpus(path)
        assert next(docs).doc_id == "a"
        with pytest.raises(ParseError) as excinfo:
            next(docs)
        assert excinfo.value.line_number == 2

    @pytest.mark.parametrize("line", [
        '{"contents": "no id"}',
        '{"id": "a"}',
        '{"id": "a", "contents": 3}',
        '{"id": "a b", "contents": "x"}',
        '[1, 2]',
    ])
    def test_malformed_record(self, tmp_path, line):
        """Test that a malformed record is a parse error with its line."""
        path = write(tmp_path / "c.jsonl", '{"id": "ok", "contents": "x"}\n' + line + "\n")
        with pytest.raises(ParseError) as excinfo:
            list(load_corpus(path))
        assert excinfo.value.line_number == 2
        assert ":2:" in str(excinfo.value)

    def test_duplicate(self, tmp_path):
        """Test that duplicate document ids are rejected."""
        path = write(tmp_path / "c.jsonl",
                     '{"id": "a", "contents": "x"}\n{"id": "a", "contents": "y"}\n')
        with pytest.raises(DuplicateDocumentError):
            list(load_corpus(path))

    def test_missing(self, tmp_path):
        """Test that a missing corpus file raises NotFoundError."""
        with pytest.raises(NotFoundError):
            load_corpus(tmp_path / "absent.jsonl")

    def test_transformed_corpus_is_readable(self, tmp_path):
        """Test transformed corpus is readable."""
        path = tmp_path / "out.jsonl"
        write_transformed_corpus(path, [("d1", ["run", "fast"]), ("d2", [])])
        docs = list(load_corpus(path))
        assert [(d.doc_id, d.text) for d in docs] == [("d1", "run fast"), ("d2", "")]
        assert json.loads(path.read_text().splitlines()[0]) == {"id": "d1", "contents": "run fast"}


class TestLoadTopics:
    """Test suite for load_topics."""

    def test_basic(self, tmp_path):
        """Test topic parsing."""
        path = write(tmp_path / "t.tsv", "1\tcoronavirus origin\n\n2\tmask mandates\n")
        assert load_topics(path) == [("1", "coronavirus origin"), ("2", "mask mandates")]

    def test_duplicate(self, tmp_path):
        """Test that duplicate query ids are rejected."""
        path = write(tmp_path / "t.tsv", "1\ta\n1\tb\n")
        with pytest.raises(ParseError) as excinfo:
            load_topics(path)
        assert excinfo.value.line_number == 2

    def test_missing_tab(self, tmp_path):
        """Test that a topic line without a tab is a parse error."""
        path = write(tmp_path / "t.tsv", "1\ta\n2 no tab\n")
        with pytest.raises(ParseError) as excinfo:
            load_topics(path)
        assert excinfo.value.line_number == 2

    def test_round_trip(self, tmp_path):
        """Test writing and reading topics."""
        topics = [("q2", "beta query"), ("q1", "alpha")]
        write_topics(tmp_path / "t.tsv", topics)
        assert load_topics(tmp_path / "t.tsv") == topics


class TestQrels:
    """Test suite for load_qrels."""

    def test_basic(self, tmp_path):
        """Test qrels parsing."""
        path = write(tmp_path / "q.txt", "q1 0 d1 1\nq1 0 d2 0\nq2 0 d9 2\n")
        assert load_qrels(path) == {"q1": {"d1": 1, "d2": 0}, "q2": {"d9": 2}}

    @pytest.mark.parametrize("text", [
        "q1 0 d1\n",
        "q1 0 d1 x\n",
        "q1 0 d1 -1\n",
        "q1 0 d1 1\nq1 0 d1 2\n",
    ])
    def test_malformed(self, tmp_path, text):
        """Test malformed qrels lines."""
        with pytest.raises(ParseError):
            load_qrels(write(tmp_path / "q.txt", text))


class TestRunFiles:
    """Test suite for write_run and read_run."""

    def test_round_trip(self, tmp_path):
        """Test writing and reading a TREC run."""
        run = {"q1": [("d3", 2.5), ("d1", 1.25)], "q2": [("d7", 0.5)]}
        path = tmp_path / "a.run"
        write_run(path, run, "tag")
        assert path.read_text().splitlines()[0] == "q1 Q0 d3 1 2.500000 tag"
        assert read_run(path) == run

    def test_rank_order_wins_over_line_order(self, tmp_path):
        """Test rank order wins over line order."""
        path = write(tmp_path / "a.run", "q1 Q0 d2 2 1.0 t\nq1 Q0 d1 1 2.0 t\n")
        assert read_run(path) == {"q1": [("d1", 2.0), ("d2", 1.0)]}

    @pytest.mark.parametrize("text, line", [
        ("q1 Q0 d1 1 1.0\n", 1),
        ("q1 Q0 d1 1 1.0 t\nq1 Q0 d2 x 1.0 t\n", 2),
        ("q1 Q0 d1 0 1.0 t\n", 1),
        ("q1 Q0 d1 1 1.0 t\nq1 Q0 d1 2 0.5 t\n", 2),
    ])
    def test_malformed(self, tmp_path, text, line):
        """Test malformed run lines."""
        with pytest.raises(ParseError) as excinfo:
            read_run(write(tmp_path / "a.run", text))
        assert excinfo.value.line_number == line

    def test_bad_tag(self, tmp_path):
        """Test that a run tag with whitespace is rejected."""
        with pytest.raises(InvalidArgumentError):
            write_run(tmp_path / "a.run", {}, "two words")


class TestEntityCache:
    """Test suite for entity cache files."""

    def test_round_trip(self, tmp_path):
        """Test writing and reading an entity cache."""
        path = tmp_path / "entities.tsv"
        write_entity_cache(path, {"query:q1": ["paris"], "d2": [], "d1": ["nasa", "apple"]})
        assert path.read_text().splitlines() == ["d1\tapple\tnasa", "d2", "query:q1\tparis"]
        assert read_entity_cache(path) == {
            "d1": frozenset({"apple", "nasa"}),
            "d2": frozenset(),
            "query:q1": frozenset({"paris"}),
        }

    @pytest.mark.parametrize("text", ["d1\tParis\n", "d1\tnew york\n", "d1\ta\nd1\tb\n"])
    def test_malformed(self, tmp_path, text):
        """Test malformed entity cache lines."""
        with pytest.raises(ParseError):
            read_entity_cache(write(tmp_path / "entities.tsv", text))


class TestToyCollection:
    """Test suite for the bundled toy collection."""

    def test_files_load(self):
        """Test that the bundled toy files load."""
        paths = bundled_toy_paths()
        docs = list(load_corpus(paths["corpus"]))
        topics = load_topics(paths["topics"])
        qrels = load_qrels(paths["qrels"])
        assert len(docs) == 100
        assert len(topics) == 10
        assert set(qrels) == {qid for qid, _ in topics}
        assert all(any(g >= 1 for g in grades.values()) for grades in qrels.values())
        assert paths["dictionary"].is_file()


if __name__ == "__main__":
    pytest.main([__file__])
