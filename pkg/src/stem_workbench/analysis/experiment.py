"""
Experiment Runner

End-to-end retrieval experiment: load the collection, transform
documents and queries with the configured stemming pipeline, build the
index, retrieve the top k documents per topic with BM25, evaluate, and
write every artifact into the output directory.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Optional
import json
import logging

from tqdm import tqdm

from .report import EvalReport, evaluate_run
from ..core.index import build_index, save_index, search
from ..core.telemetry import RunTelemetry
from ..core.text_processing import RawDocument
from ..data.config import ExperimentConfig, save_resolved_config
from ..data.corpus_io import RunRanking, load_corpus, load_qrels, load_topics, write_run
from ..pipelines.factory import build_pipeline

logger = logging.getLogger(__name__)

# Pipeline fallback counters exported in report.json. vs_skipped_lines only
# counts lines of responses received in this run, so it drops to 0 on a warm cache.
REPORTED_COUNTERS = ("cs_fallbacks", "vs_unresolved", "vs_skipped_lines", "entity_failures")

RUN_SUFFIX = ".run"
REPORT_FILE = "report.json"
PER_QUERY_FILE = "per_query.tsv"
RESOLVED_CONFIG_FILE = "resolved_config.yaml"
TELEMETRY_FILE = "telemetry.json"
INDEX_FILE = "index.snapshot"


@dataclass
class ExperimentResult:
    """Outcome of run_experiment."""

    report: EvalReport
    run: RunRanking
    output_dir: Path
    counters: Dict[str, int]

    @property
    def run_path(self) -> Path:
        return self.output_dir / f"{self.report.run_name}{RUN_SUFFIX}"


def _write_json(path: Path, data: Dict) -> None:
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")


def run_experiment(config: ExperimentConfig,
                   telemetry: Optional[RunTelemetry] = None,
                   progress: bool = False) -> ExperimentResult:
    """
    Run one configured experiment.

    Args:
        config: Experiment configuration
        telemetry: Counter sink (a fresh one by default)
        progress: Show progress bars

    Returns:
        ExperimentResult; artifacts are written to ``config.output_dir``
    """
    config.validate()
    config.require("corpus_path", "topics_path", "qrels_path")
    telemetry = telemetry or RunTelemetry()
    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    with telemetry.stage("load"):
        documents = list(load_corpus(config.corpus_path))
        queries = [RawDocument(qid, text) for qid, text in load_topics(config.topics_path)]
        qrels = load_qrels(config.qrels_path)
    logger.info(f"Experiment '{config.run_tag}': {len(documents)} documents, {len(queries)} topics, "
                f"pipeline {config.pipeline}")

    pipeline = build_pipeline(config, telemetry)
    with telemetry.stage("prepare"):
        pipeline.prepare(documents, queries, config.workers, progress)
    with telemetry.stage("transform"):
        doc_streams = pipeline.transform_corpus(documents, config.workers, progress)
        query_streams = pipeline.transform_queries(queries, config.workers, progress)
    pipeline.finalize()

    with telemetry.stage("index"):
        index = build_index(doc_streams, config.workers)
    if config.save_index:
        save_index(index, output_dir / INDEX_FILE)

    run: RunRanking = {}
    with telemetry.stage("search"):
        for qid, tokens in tqdm(query_streams, desc="Search", unit="query", disable=not progress):
            run[qid] = search(index, config.bm25, tokens, config.k)
    run_path = output_dir / f"{config.run_tag}{RUN_SUFFIX}"
    write_run(run_path, run, config.run_tag)

    report = evaluate_run(run, qrels, config.metrics, config.run_tag)
    counters = {name: telemetry.get(name) for name in REPORTED_COUNTERS}
    _write_json(output_dir / REPORT_FILE, {**report.to_dict(), 'pipeline': config.pipeline,
                                            'counters': counters})
    report.write_per_query_tsv(output_dir / PER_QUERY_FILE)
    save_resolved_config(config, output_dir / RESOLVED_CONFIG_FILE)
    _write_json(output_dir / TELEMETRY_FILE, telemetry.to_dict())

    for name, value in counters.items():
        if value:
            logger.warning(f"{name}: {value}")
    logger.info(f"Wrote run {run_path} and report to {output_dir}")
    return ExperimentResult(report, run, output_dir, counters)
