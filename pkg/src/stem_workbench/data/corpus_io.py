"""
Corpus and Evaluation File Formats

Readers and writers for every file the workbench consumes or produces:
JSON-lines corpora ("id"/"contents"), topic TSVs, TREC qrels and run
files, and entity cache files. Every reader reports the file and line
number of the first malformed record.
"""

from pathlib import Path
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Tuple, Union
import json
import logging

from ..core.text_processing import TOKEN_PATTERN, RawDocument, TokenStream
from ..exceptions import DuplicateDocumentError, InvalidArgumentError, NotFoundError, ParseError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

# query_id -> doc_id -> grade
Qrels = Dict[str, Dict[str, int]]
# query_id -> ranked (doc_id, score) pairs
RunRanking = Dict[str, List[Tuple[str, float]]]

TOY_DIR = Path(__file__).resolve().parent / 'toy'


def _require(path: PathLike, what: str) -> Path:
    path = Path(path)
    if not path.is_file():
        raise NotFoundError(f"{what} not found: {path}")
    return path


def _iter_corpus(path: Path) -> Iterator[RawDocument]:
    seen = set()
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise ParseError(f"invalid JSON ({e.msg})", str(path), line_number) from e
            if not isinstance(record, dict) or "id" not in record or "contents" not in record:
                raise ParseError("record needs 'id' and 'contents' fields", str(path), line_number)
            if not isinstance(record["contents"], str):
                raise ParseError("'contents' must be a string", str(path), line_number)
            try:
                doc = RawDocument(str(record["id"]), record["contents"])
            except InvalidArgumentError as e:
                raise ParseError(str(e), str(path), line_number) from e
            if doc.doc_id in seen:
                raise DuplicateDocumentError(doc.doc_id)
            seen.add(doc.doc_id)
            yield doc


def load_corpus(path: PathLike) -> Iterator[RawDocument]:
    """
    Stream documents from a JSON-lines corpus.

    Args:
        path: File with one {"id": ..., "contents": ...} object per line

    Returns:
        Iterator over documents in file order
    """
    return _iter_corpus(_require(path, "Corpus"))


def load_topics(path: PathLike) -> List[Tuple[str, str]]:
    """
    Load topics from a ``qid<TAB>text`` file.

    Args:
        path: Topic file; blank lines are skipped

    Returns:
        (query_id, query_text) pairs in file order
    """
    path = _require(path, "Topics file")
    topics = []
    seen = set()
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            line = line.rstrip('\n').rstrip('\r')
            if not line.strip():
                continue
            qid, sep, text = line.partition('\t')
            qid = qid.strip()
            if not sep or not qid or any(ch.isspace() for ch in qid):
                raise ParseError("expected 'qid<TAB>text'", str(path), line_number)
            if qid in seen:
                raise ParseError(f"duplicate query id '{qid}'", str(path), line_number)
            seen.add(qid)
            topics.append((qid, text.strip()))
    logger.info(f"Loaded {len(topics)} topics from {path}")
    return topics


def write_topics(path: PathLike, topics: Iterable[Tuple[str, str]]) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        for qid, text in topics:
            f.write(f"{qid}\t{text}\n")


def load_qrels(path: PathLike) -> Qrels:
    """
    Load TREC relevance judgments (``qid 0 docid grade``).

    Args:
        path: Qrels file

    Returns:
        Qrels mapping
    """
    path = _require(path, "Qrels file")
    qrels: Qrels = {}
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 4:
                raise ParseError("expected 'qid 0 docid grade'", str(path), line_number)
            qid, _, doc_id, grade = fields
            try:
                grade = int(grade)
            except ValueError as e:
                raise ParseError(f"grade must be an integer, got '{grade}'", str(path), line_number) from e
            if grade < 0:
                raise ParseError(f"grade must be >= 0, got {grade}", str(path), line_number)
            judgments = qrels.setdefault(qid, {})
            if doc_id in judgments:
                raise ParseError(f"duplicate judgment for ({qid}, {doc_id})", str(path), line_number)
            judgments[doc_id] = grade
    logger.info(f"Loaded judgments for {len(qrels)} queries from {path}")
    return qrels


def write_run(path: PathLike, run: RunRanking, run_tag: str) -> None:
    """
    Write a TREC run file (``qid Q0 docid rank score tag``).

    Args:
        path: Output file
        run: Ranked results per query; queries are written in mapping order
        run_tag: Run name, no whitespace
    """
    if not run_tag or any(ch.isspace() for ch in run_tag):
        raise InvalidArgumentError(f"run tag must be non-empty without whitespace: {run_tag!r}")
    with open(path, 'w', encoding='utf-8') as f:
        for qid, ranking in run.items():
            for rank, (doc_id, score) in enumerate(ranking, start=1):
                f.write(f"{qid} Q0 {doc_id} {rank} {score:.6f} {run_tag}\n")


def read_run(path: PathLike) -> RunRanking:
    """
    Read a TREC run file.

    Args:
        path: Run file

    Returns:
        Ranked results per query, in rank order
    """
    path = _require(path, "Run file")
    ranked: Dict[str, List[Tuple[int, str, float]]] = {}
    seen: Dict[str, set] = {}
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 6:
                raise ParseError("expected 'qid Q0 docid rank score tag'", str(path), line_number)
            qid, _, doc_id, rank, score, _ = fields
            try:
                rank, score = int(rank), float(score)
            except ValueError as e:
                raise ParseError("rank must be an integer and score a number", str(path), line_number) from e
            if rank < 1:
                raise ParseError(f"rank must be >= 1, got {rank}", str(path), line_number)
            if doc_id in seen.setdefault(qid, set()):
                raise ParseError(f"document {doc_id} ranked twice for query {qid}", str(path), line_number)
            seen[qid].add(doc_id)
            ranked.setdefault(qid, []).append((rank, doc_id, score))
    return {
        qid: [(doc_id, score) for _, doc_id, score in sorted(rows, key=lambda row: row[0])]
        for qid, rows in ranked.items()
    }


def read_entity_cache(path: PathLike) -> Dict[str, FrozenSet[str]]:
    """
    Read an entity cache: ``doc_id<TAB>word<TAB>word...`` per line.

    Args:
        path: Entity cache file

    Returns:
        Entity words by doc_id
    """
    path = _require(path, "Entity cache")
    entities: Dict[str, FrozenSet[str]] = {}
    with open(path, encoding='utf-8') as f:
        for line_number, line in enumerate(f, start=1):
            line = line.rstrip('\n').rstrip('\r')
            if not line.strip():
                continue
            doc_id, *words = line.split('\t')
            if not doc_id or any(ch.isspace() for ch in doc_id):
                raise ParseError("record must start with a doc_id", str(path), line_number)
            for word in words:
                if not TOKEN_PATTERN.fullmatch(word) or word != word.lower():
                    raise ParseError(f"entity word {word!r} is not a lowercase token", str(path), line_number)
            if doc_id in entities:
                raise ParseError(f"duplicate record for {doc_id}", str(path), line_number)
            entities[doc_id] = frozenset(words)
    logger.info(f"Loaded entity sets for {len(entities)} documents from {path}")
    return entities


def write_entity_cache(path: PathLike, entities: Mapping[str, Iterable[str]]) -> None:
    """Write entity sets sorted by doc_id, words sorted within a record."""
    with open(path, 'w', encoding='utf-8') as f:
        for doc_id in sorted(entities):
            f.write("\t".join([doc_id, *sorted(entities[doc_id])]) + "\n")


def write_transformed_corpus(path: PathLike, streams: Iterable[Tuple[str, TokenStream]]) -> None:
    """Write transformed token streams as a JSON-lines corpus (tokens joined by spaces)."""
    with open(path, 'w', encoding='utf-8') as f:
        for doc_id, tokens in streams:
            f.write(json.dumps({"id": doc_id, "contents": " ".join(tokens)}, ensure_ascii=False) + "\n")


def bundled_toy_paths() -> Dict[str, Path]:
    """Paths of the bundled toy collection."""
    return {
        'corpus': TOY_DIR / 'corpus.jsonl',
        'topics': TOY_DIR / 'topics.tsv',
        'qrels': TOY_DIR / 'qrels.txt',
        'dictionary': TOY_DIR / 'stem_dictionary.tsv',
    }
