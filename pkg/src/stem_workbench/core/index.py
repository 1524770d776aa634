"""
Inverted Index and BM25 Retrieval

In-memory inverted index over transformed token streams, BM25 scoring
with Lucene-style idf, top-k search and a versioned text snapshot
format (documented in docs/index_snapshot.md).
"""

from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple, Union
import heapq
import logging
import math

from joblib import Parallel, delayed

from .text_processing import TokenStream
from ..exceptions import (
    DataError,
    DuplicateDocumentError,
    InvalidArgumentError,
    NotFoundError,
    ParseError,
)

logger = logging.getLogger(__name__)

SNAPSHOT_MAGIC = "STEMWB-INDEX"
SNAPSHOT_VERSION = 1

SearchResult = List[Tuple[str, float]]


@dataclass
class Bm25Params:
    """BM25 free parameters (Pyserini defaults)."""

    k1: float = 0.9
    b: float = 0.4

    def __post_init__(self):
        if self.k1 < 0:
            raise InvalidArgumentError(f"k1 must be >= 0, got {self.k1}")
        if not 0 <= self.b <= 1:
            raise InvalidArgumentError(f"b must be in [0, 1], got {self.b}")


class InvertedIndex:
    """
    Immutable term -> postings index with the corpus statistics BM25 needs.

    Postings of every term are ordered by doc_id; documents with empty
    token streams are counted in N with length 0.
    """

    def __init__(self, doc_len: Dict[str, int], postings: Dict[str, Dict[str, int]]):
        self._doc_len = {doc_id: doc_len[doc_id] for doc_id in sorted(doc_len)}
        self._postings = {
            term: {doc_id: plist[doc_id] for doc_id in sorted(plist)}
            for term, plist in sorted(postings.items())
        }
        self.doc_count = len(self._doc_len)
        self.avg_doc_len = (sum(self._doc_len.values()) / self.doc_count) if self.doc_count else 0.0

    @property
    def doc_ids(self) -> List[str]:
        return list(self._doc_len)

    @property
    def vocabulary_size(self) -> int:
        return len(self._postings)

    def terms(self) -> List[str]:
        return list(self._postings)

    def doc_length(self, doc_id: str) -> int:
        if doc_id not in self._doc_len:
            raise NotFoundError(f"Unknown document: {doc_id}")
        return self._doc_len[doc_id]

    def df(self, term: str) -> int:
        return len(self._postings.get(term, ()))

    def tf(self, term: str, doc_id: str) -> int:
        return self._postings.get(term, {}).get(doc_id, 0)

    def postings_for(self, term: str) -> List[Tuple[str, int]]:
        """(doc_id, tf) pairs of a term, sorted by doc_id."""
        return list(self._postings.get(term, {}).items())

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._doc_len

    def __len__(self) -> int:
        return self.doc_count

    def __eq__(self, other) -> bool:
        if not isinstance(other, InvertedIndex):
            return NotImplemented
        return self._doc_len == other._doc_len and self._postings == other._postings

    def __repr__(self) -> str:
        return (f"InvertedIndex(N={self.doc_count}, terms={self.vocabulary_size}, "
                f"avg_doc_len={self.avg_doc_len:.2f})")


def build_index(docs: Iterable[Tuple[str, TokenStream]], workers: int = 1) -> InvertedIndex:
    """
    Build an inverted index.

    Term counting may run in parallel; merging is single-threaded in
    doc_id order.

    Args:
        docs: (doc_id, token stream) pairs with unique ids
        workers: Number of counting threads

    Returns:
        InvertedIndex
    """
    docs = list(docs)
    if not docs:
        raise InvalidArgumentError("Cannot build an index without documents")
    seen = set()
    for doc_id, _ in docs:
        if doc_id in seen:
            raise DuplicateDocumentError(doc_id)
        seen.add(doc_id)

    if workers > 1:
        counts = Parallel(n_jobs=workers, backend="threading")(
            delayed(Counter)(tokens) for _, tokens in docs
        )
    else:
        counts = [Counter(tokens) for _, tokens in docs]

    doc_len: Dict[str, int] = {}
    postings: Dict[str, Dict[str, int]] = {}
    for (doc_id, tokens), counter in sorted(zip(docs, counts), key=lambda item: item[0][0]):
        doc_len[doc_id] = len(tokens)
        for term, tf in counter.items():
            postings.setdefault(term, {})[doc_id] = tf

    index = InvertedIndex(doc_len, postings)
    logger.info(f"Built {index!r}")
    return index


def _idf(index: InvertedIndex, df: int) -> float:
    return math.log(1.0 + (index.doc_count - df + 0.5) / (df + 0.5))


def _term_weight(index: InvertedIndex, params: Bm25Params, df: int, tf: int, doc_len: int) -> float:
    norm = params.k1 * (1.0 - params.b + params.b * doc_len / index.avg_doc_len)
    return _idf(index, df) * tf * (params.k1 + 1.0) / (tf + norm)


def bm25_score(index: InvertedIndex, params: Bm25Params, query: TokenStream, doc_id: str) -> float:
    """
    BM25 score of one document.

    Every query token occurrence contributes, so repeated query terms
    count repeatedly.

    Args:
        index: Inverted index
        params: BM25 parameters
        query: Query token stream
        doc_id: Document to score

    Returns:
        Score (0.0 when no query term occurs in the document)
    """
    doc_len = index.doc_length(doc_id)
    score = 0.0
    for term in query:
        tf = index.tf(term, doc_id)
        if tf:
            score += _term_weight(index, params, index.df(term), tf, doc_len)
    return score


def search(index: InvertedIndex, params: Bm25Params, query: TokenStream, k: int) -> SearchResult:
    """
    Top-k BM25 retrieval.

    Args:
        index: Inverted index
        params: BM25 parameters
        query: Query token stream
        k: Maximum number of results (>= 1)

    Returns:
        (doc_id, score) pairs with positive scores, by descending score
        and then ascending doc_id
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    scores: Dict[str, float] = {}
    for term in query:
        postings = index.postings_for(term)
        if not postings:
            continue
        df = len(postings)
        for doc_id, tf in postings:
            weight = _term_weight(index, params, df, tf, index.doc_length(doc_id))
            scores[doc_id] = scores.get(doc_id, 0.0) + weight
    candidates = ((doc_id, score) for doc_id, score in scores.items() if score > 0)
    return heapq.nsmallest(k, candidates, key=lambda item: (-item[1], item[0]))


def save_index(index: InvertedIndex, path: Union[str, Path]) -> None:
    """
    Write an index snapshot.

    Args:
        index: Index to save
        path: Output file
    """
    doc_ids = index.doc_ids
    ordinal = {doc_id: i for i, doc_id in enumerate(doc_ids)}
    with open(path, 'w', encoding='utf-8') as f:
        f.write(f"{SNAPSHOT_MAGIC}\t{SNAPSHOT_VERSION}\n")
        f.write(f"docs\t{len(doc_ids)}\n")
        for doc_id in doc_ids:
            f.write(f"{doc_id}\t{index.doc_length(doc_id)}\n")
        terms = index.terms()
        f.write(f"terms\t{len(terms)}\n")
        for term in terms:
            previous = 0
            encoded = []
            for doc_id, tf in index.postings_for(term):
                current = ordinal[doc_id]
                encoded.append(f"{current - previous}:{tf}")
                previous = current
            f.write(f"{term}\t{index.df(term)}\t{','.join(encoded)}\n")
    logger.info(f"Saved index snapshot to {path}")


def _expect_count(line: str, label: str, path: str, line_number: int) -> int:
    parts = line.split('\t')
    if len(parts) != 2 or parts[0] != label or not parts[1].isdigit():
        raise ParseError(f"expected '{label}<TAB>count'", path, line_number)
    return int(parts[1])


def load_index(path: Union[str, Path]) -> InvertedIndex:
    """
    Read an index snapshot written by save_index.

    Args:
        path: Snapshot file

    Returns:
        InvertedIndex equal to the saved one
    """
    path = Path(path)
    if not path.exists():
        raise NotFoundError(f"Index snapshot not found: {path}")
    with open(path, encoding='utf-8') as f:
        lines: Sequence[str] = f.read().split('\n')
    if lines and lines[-1] == "":
        lines = lines[:-1]
    name = str(path)

    header = lines[0].split('\t') if lines else []
    if len(header) != 2 or header[0] != SNAPSHOT_MAGIC:
        raise ParseError("not an index snapshot", name, 1)
    if header[1] != str(SNAPSHOT_VERSION):
        raise DataError(f"{name}: unsupported index snapshot version {header[1]}")

    try:
        position = 1
        doc_count = _expect_count(lines[position], "docs", name, position + 1)
        doc_ids: List[str] = []
        doc_len: Dict[str, int] = {}
        for position in range(2, 2 + doc_count):
            doc_id, sep, length = lines[position].partition('\t')
            if not sep or not length.isdigit():
                raise ParseError("expected 'doc_id<TAB>length'", name, position + 1)
            doc_ids.append(doc_id)
            doc_len[doc_id] = int(length)

        position = 2 + doc_count
        term_count = _expect_count(lines[position], "terms", name, position + 1)
        postings: Dict[str, Dict[str, int]] = {}
        for position in range(position + 1, position + 1 + term_count):
            parts = lines[position].split('\t')
            if len(parts) != 3:
                raise ParseError("expected 'term<TAB>df<TAB>postings'", name, position + 1)
            term, df, encoded = parts
            plist: Dict[str, int] = {}
            current = 0
            for item in encoded.split(','):
                gap, _, tf = item.partition(':')
                current += int(gap)
                plist[doc_ids[current]] = int(tf)
            if len(plist) != int(df):
                raise ParseError(f"document frequency mismatch for '{term}'", name, position + 1)
            postings[term] = plist
    except IndexError as e:
        raise ParseError(f"truncated index snapshot ({e})", name, len(lines)) from e
    except ValueError as e:
        raise ParseError(f"malformed index snapshot ({e})", name, position + 1) from e

    index = InvertedIndex(doc_len, postings)
    logger.info(f"Loaded {index!r} from {path}")
    return index
