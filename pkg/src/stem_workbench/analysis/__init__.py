"""
Evaluation: ranking metrics, significance testing, reports and the
experiment runner.
"""

from .metrics import (
    DEFAULT_METRICS,
    average_precision,
    compute_metrics,
    ndcg_at,
    parse_metric,
    recall_at,
    reciprocal_rank,
)
from .significance import Comparison, bonferroni, paired_t_test, significance_table
from .report import EvalReport, evaluate_run, gain_loss, write_gain_loss_csv
from .experiment import ExperimentResult, run_experiment

__all__ = [
    'DEFAULT_METRICS',
    'average_precision',
    'compute_metrics',
    'ndcg_at',
    'parse_metric',
    'recall_at',
    'reciprocal_rank',
    'Comparison',
    'bonferroni',
    'paired_t_test',
    'significance_table',
    'EvalReport',
    'evaluate_run',
    'gain_loss',
    'write_gain_loss_csv',
    'ExperimentResult',
    'run_experiment',
]
