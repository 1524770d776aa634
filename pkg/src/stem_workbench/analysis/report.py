"""
Evaluation Reports

Per-query and mean effectiveness of a run over the judged query set
(queries missing from the run score 0, as with trec_eval -c), plus the
query-by-query gain-loss analysis between two systems.
"""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union
import logging

import numpy as np
import pandas as pd

from .metrics import DEFAULT_METRICS, compute_metrics, parse_metric
from ..data.corpus_io import Qrels, RunRanking
from ..exceptions import InvalidArgumentError, MisalignedRunsError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.6f"


@dataclass
class EvalReport:
    """Effectiveness of one run."""

    run_name: str
    metrics: List[str]
    per_query: Dict[str, Dict[str, float]] = field(default_factory=dict)

    @property
    def query_ids(self) -> List[str]:
        return list(self.per_query)

    def scores(self, metric: str) -> Dict[str, float]:
        """Per-query values of one metric."""
        if metric not in self.metrics:
            raise InvalidArgumentError(f"Metric '{metric}' not in report {self.run_name}")
        return {qid: values[metric] for qid, values in self.per_query.items()}

    @property
    def means(self) -> Dict[str, float]:
        """Arithmetic mean of every metric over the full query set."""
        if not self.per_query:
            return {metric: 0.0 for metric in self.metrics}
        return {metric: float(np.mean(list(self.scores(metric).values()))) for metric in self.metrics}

    def to_dict(self) -> Dict:
        return {
            'run': self.run_name,
            'queries': len(self.per_query),
            'means': self.means,
            'per_query': self.per_query,
        }

    def to_frame(self) -> pd.DataFrame:
        """One row per query, one column per metric."""
        frame = pd.DataFrame.from_dict(self.per_query, orient='index', columns=self.metrics)
        frame.index.name = 'query_id'
        return frame

    def write_per_query_tsv(self, path: Union[str, Path]) -> None:
        self.to_frame().to_csv(path, sep='\t', float_format=FLOAT_FORMAT)


def check_run_queries(run: RunRanking, qrels: Qrels, name: str = "run") -> None:
    """Raise MisalignedRunsError when a run holds queries the qrels do not judge."""
    unknown = sorted(set(run) - set(qrels))
    if unknown:
        raise MisalignedRunsError(
            f"{name} contains {len(unknown)} queries without judgments, e.g. {unknown[:3]}"
        )


def check_aligned_runs(runs: Mapping[str, RunRanking],
                       qrels: Qrels,
                       topic_ids: Optional[Iterable[str]] = None) -> None:
    """
    Raise MisalignedRunsError unless all runs answer the same judged queries.

    A query that retrieved nothing leaves no line in a run file, so when the
    topic list is known its judged queries count as answered by every run.

    Args:
        runs: Rankings by run name
        qrels: Judgments
        topic_ids: Query ids every run was searched with, when known
    """
    judged = set(qrels)
    searched = judged & set(topic_ids) if topic_ids is not None else set()
    covered = {name: (set(run) & judged) | searched for name, run in runs.items()}
    names = list(covered)
    for name in names[1:]:
        differing = sorted(covered[names[0]] ^ covered[name])
        if differing:
            raise MisalignedRunsError(
                f"{names[0]} and {name} answer different judged queries "
                f"({len(differing)} differ, e.g. {differing[:3]}); give the topic list "
                f"when some queries retrieved nothing"
            )


def evaluate_run(run: RunRanking,
                 qrels: Qrels,
                 metrics: Sequence[str] = DEFAULT_METRICS,
                 run_name: str = "run") -> EvalReport:
    """
    Evaluate a run against relevance judgments.

    Args:
        run: Ranked (doc_id, score) lists per query
        qrels: Judgments; their query set defines the evaluated queries
        metrics: Metric names (rr, map, ndcg@K, recall@K)
        run_name: Name stored in the report

    Returns:
        EvalReport with queries sorted by query_id
    """
    for metric in metrics:
        parse_metric(metric)
    ignored = set(run) - set(qrels)
    if ignored:
        logger.warning(f"{run_name}: {len(ignored)} queries have no judgments and are ignored")
    per_query = {}
    for qid in sorted(qrels):
        ranking = [doc_id for doc_id, _ in run.get(qid, [])]
        per_query[qid] = compute_metrics(ranking, qrels[qid], metrics)
    report = EvalReport(run_name, list(metrics), per_query)
    logger.info(f"Evaluated {run_name} over {len(per_query)} queries: "
                + ", ".join(f"{k}={v:.4f}" for k, v in report.means.items()))
    return report


def gain_loss(a: Mapping[str, float], b: Mapping[str, float]) -> List[Tuple[str, float]]:
    """
    Per-query deltas a - b, largest gain first.

    Args:
        a: Per-query metric of system A
        b: Per-query metric of system B over the same queries

    Returns:
        (query_id, delta) sorted by descending delta, then query_id
    """
    if set(a) != set(b):
        raise InvalidArgumentError("Gain-loss needs both systems scored on the same queries")
    deltas = [(qid, a[qid] - b[qid]) for qid in a]
    return sorted(deltas, key=lambda item: (-item[1], item[0]))


def write_gain_loss_csv(path: Union[str, Path], deltas: Sequence[Tuple[str, float]]) -> None:
    """Write deltas as CSV with header ``query_id,delta``."""
    frame = pd.DataFrame(list(deltas), columns=['query_id', 'delta'])
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
