"""
Significance Testing

Two-tailed paired Student t-test over per-query scores with Bonferroni
correction, and the multi-system comparison table built from it.
"""

from dataclasses import dataclass, asdict
from typing import TYPE_CHECKING, List, Mapping, Optional, Sequence, Tuple, Union
import logging

import numpy as np
import pandas as pd
from scipy import stats

from ..exceptions import InvalidArgumentError

if TYPE_CHECKING:
    from .report import EvalReport

logger = logging.getLogger(__name__)

ALPHA = 0.05

Scores = Union[Mapping[str, float], Sequence[float]]


def _aligned(a: Scores, b: Scores) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(a, Mapping) != isinstance(b, Mapping):
        raise InvalidArgumentError("Both score sets must be mappings or both sequences")
    if isinstance(a, Mapping):
        if set(a) != set(b):
            raise InvalidArgumentError(
                f"Score sets cover different queries ({len(set(a) ^ set(b))} not shared)"
            )
        keys = sorted(a)
        return (np.array([a[k] for k in keys], dtype=np.float64),
                np.array([b[k] for k in keys], dtype=np.float64))
    if len(a) != len(b):
        raise InvalidArgumentError(f"Score lists differ in length: {len(a)} vs {len(b)}")
    return np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64)


def paired_t_test(a: Scores, b: Scores) -> Tuple[float, float]:
    """
    Two-tailed paired t-test.

    Args:
        a: Per-query scores of system A (mapping by query_id, or aligned list)
        b: Per-query scores of system B over the same queries

    Returns:
        (t, p); (0.0, 1.0) when all differences are identical up to rounding
    """
    x, y = _aligned(a, b)
    n = len(x)
    if n < 2:
        raise InvalidArgumentError(f"Paired t-test needs at least 2 queries, got {n}")
    d = x - y
    # differences equal up to rounding noise
    if float(np.ptp(d)) <= 1e-12 * max(1.0, abs(float(np.mean(d)))):
        return 0.0, 1.0
    sd = float(np.std(d, ddof=1))
    t = float(np.mean(d)) / (sd / np.sqrt(n))
    p = float(2.0 * stats.t.sf(abs(t), df=n - 1))
    return t, min(p, 1.0)


def bonferroni(p: float, m: int) -> float:
    """Bonferroni-adjusted p-value min(1, m * p)."""
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError(f"p must be in [0, 1], got {p}")
    if m < 1:
        raise InvalidArgumentError(f"m must be >= 1, got {m}")
    return min(1.0, m * p)


@dataclass
class Comparison:
    """One system-vs-reference test on one metric."""

    system: str
    reference: str
    metric: str
    mean: float
    reference_mean: float
    t: float
    p: float
    p_adjusted: float

    @property
    def significant(self) -> bool:
        return self.p_adjusted < ALPHA

    @property
    def mark(self) -> str:
        return "*" if self.significant else ""

    def to_dict(self) -> dict:
        return {**asdict(self), 'significant': self.significant}


def compare_scores(system: str, reference: str, metric: str,
                   scores: Mapping[str, float], reference_scores: Mapping[str, float],
                   m: int = 1) -> Comparison:
    """Paired t-test of one system against a reference with Bonferroni factor ``m``."""
    t, p = paired_t_test(scores, reference_scores)
    return Comparison(
        system=system,
        reference=reference,
        metric=metric,
        mean=float(np.mean(list(scores.values()))),
        reference_mean=float(np.mean(list(reference_scores.values()))),
        t=t,
        p=p,
        p_adjusted=bonferroni(p, m),
    )


def significance_table(reports: Mapping[str, 'EvalReport'],
                       reference: str,
                       metrics: Optional[Sequence[str]] = None,
                       m: Optional[int] = None) -> List[Comparison]:
    """
    Compare every system with a reference on every metric.

    Args:
        reports: EvalReports by system name, including the reference
        reference: Name of the reference system
        metrics: Metrics to test (the reference report's metrics by default)
        m: Bonferroni factor; defaults to the number of compared systems

    Returns:
        Comparisons ordered by system name, then metric order
    """
    if reference not in reports:
        raise InvalidArgumentError(f"Reference system '{reference}' is not among the reports")
    others = sorted(name for name in reports if name != reference)
    if not others:
        raise InvalidArgumentError("Need at least one system besides the reference")
    metrics = list(metrics or reports[reference].metrics)
    m = m if m is not None else len(others)
    rows = []
    for name in others:
        for metric in metrics:
            rows.append(compare_scores(name, reference, metric,
                                       reports[name].scores(metric),
                                       reports[reference].scores(metric), m))
    logger.info(f"Compared {len(others)} systems against '{reference}' on {len(metrics)} metrics (m={m})")
    return rows


def comparisons_frame(rows: Sequence[Comparison]) -> pd.DataFrame:
    """Comparisons as a DataFrame, one row per (system, metric)."""
    return pd.DataFrame([row.to_dict() for row in rows],
                        columns=['system', 'reference', 'metric', 'mean', 'reference_mean',
                                 't', 'p', 'p_adjusted', 'significant'])
