"""
Ranking Metrics

trec_eval-style effectiveness measures over a single ranked list:
reciprocal rank, average precision, nDCG@k (linear gain, log2(i+1)
discount) and recall@k. Grades >= 1 count as relevant; unjudged
documents are non-relevant.
"""

from typing import AbstractSet, Callable, Dict, Mapping, Sequence, Tuple
import logging
import re

import numpy as np

from ..exceptions import InvalidArgumentError

logger = logging.getLogger(__name__)

DEFAULT_METRICS = ("rr", "map", "ndcg@10", "recall@1000")

_METRIC_PATTERN = re.compile(r"^(rr|map|ndcg@(\d+)|recall@(\d+))$")


def reciprocal_rank(ranking: Sequence[str], relevant: AbstractSet[str]) -> float:
    """1/rank of the first relevant document, 0 if none is retrieved."""
    for rank, doc_id in enumerate(ranking, start=1):
        if doc_id in relevant:
            return 1.0 / rank
    return 0.0


def average_precision(ranking: Sequence[str], relevant: AbstractSet[str]) -> float:
    """
    Average precision of a ranking.

    Args:
        ranking: Ranked doc_ids
        relevant: All relevant doc_ids of the query (retrieved or not)

    Returns:
        Sum of precision at each relevant hit divided by |relevant|
    """
    if not relevant:
        return 0.0
    hits = 0
    total = 0.0
    for rank, doc_id in enumerate(ranking, start=1):
        if doc_id in relevant:
            hits += 1
            total += hits / rank
    return total / len(relevant)


def ndcg_at(ranking: Sequence[str], grades: Mapping[str, int], k: int = 10) -> float:
    """
    nDCG@k with linear gain.

    Args:
        ranking: Ranked doc_ids
        grades: Judged grades of the query
        k: Cutoff (>= 1)

    Returns:
        DCG@k / ideal DCG@k, 0 when the query has no positive grade
    """
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    ideal = sorted((g for g in grades.values() if g > 0), reverse=True)[:k]
    if not ideal:
        return 0.0
    discounts = 1.0 / np.log2(np.arange(2, k + 2))
    gains = np.array([max(grades.get(doc_id, 0), 0) for doc_id in ranking[:k]], dtype=np.float64)
    dcg = float(np.dot(gains, discounts[:len(gains)]))
    idcg = float(np.dot(np.array(ideal, dtype=np.float64), discounts[:len(ideal)]))
    return dcg / idcg


def recall_at(ranking: Sequence[str], relevant: AbstractSet[str], k: int = 1000) -> float:
    """Fraction of the relevant documents found in the top k."""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    if not relevant:
        return 0.0
    return len(relevant.intersection(ranking[:k])) / len(relevant)


MetricFn = Callable[[Sequence[str], Mapping[str, int]], float]


def parse_metric(name: str) -> Tuple[str, int]:
    """
    Split a metric name such as "ndcg@10" into (kind, cutoff).

    Args:
        name: One of rr, map, ndcg@K, recall@K

    Returns:
        (kind, cutoff); cutoff is 0 for rr and map
    """
    match = _METRIC_PATTERN.match(name)
    if not match:
        raise InvalidArgumentError(f"Unknown metric '{name}' (use rr, map, ndcg@K or recall@K)")
    cutoff = match.group(2) or match.group(3)
    if cutoff is not None and int(cutoff) < 1:
        raise InvalidArgumentError(f"Metric cutoff must be >= 1 in '{name}'")
    return name.split('@')[0], int(cutoff or 0)


def metric_function(name: str) -> MetricFn:
    """Function computing ``name`` from a ranking and the query's grades."""
    kind, cutoff = parse_metric(name)

    def relevant(grades: Mapping[str, int]) -> AbstractSet[str]:
        return {doc_id for doc_id, grade in grades.items() if grade >= 1}

    if kind == "rr":
        return lambda ranking, grades: reciprocal_rank(ranking, relevant(grades))
    if kind == "map":
        return lambda ranking, grades: average_precision(ranking, relevant(grades))
    if kind == "ndcg":
        return lambda ranking, grades: ndcg_at(ranking, grades, cutoff)
    return lambda ranking, grades: recall_at(ranking, relevant(grades), cutoff)


def compute_metrics(ranking: Sequence[str], grades: Mapping[str, int],
                    metrics: Sequence[str] = DEFAULT_METRICS) -> Dict[str, float]:
    """All requested metrics of one query."""
    return {name: metric_function(name)(ranking, grades) for name in metrics}
