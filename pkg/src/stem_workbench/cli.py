"""
Stem Workbench Command Line

Commands for every stage of an experiment (stem-vocab, transform,
index, search, evaluate, compare, report) and for the whole protocol at
once (experiment). Exit codes: 0 success, 1 usage or configuration
error, 2 data error, 3 provider error.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence
import functools
import logging
import sys

import click
from dotenv import load_dotenv

from .analysis.experiment import run_experiment
from .analysis.metrics import DEFAULT_METRICS
from .analysis.report import check_aligned_runs, check_run_queries, evaluate_run, gain_loss, write_gain_loss_csv
from .analysis.significance import compare_scores, comparisons_frame, significance_table
from .core.index import build_index, load_index, save_index, search
from .core.telemetry import RunTelemetry
from .core.text_processing import RawDocument, tokenize
from .data.config import PIPELINES, ExperimentConfig, load_config
from .data.corpus_io import (
    bundled_toy_paths,
    load_corpus,
    load_qrels,
    load_topics,
    read_run,
    write_run,
    write_topics,
    write_transformed_corpus,
)
from .exceptions import (
    CacheConflictError,
    ConfigError,
    DataError,
    InvalidArgumentError,
    ProviderError,
)
from .llm.cache import StemCache
from .pipelines.factory import VocabularyPipeline, build_pipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_PROVIDER = 3

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def config_options(fn):
    """Options shared by every command that builds an ExperimentConfig."""
    options = [
        click.option('--config', 'config_path', help="YAML experiment configuration."),
        click.option('--set', 'overrides', multiple=True, metavar='KEY=VALUE',
                     help="Override a configuration value, e.g. --set bm25.k1=1.2."),
        click.option('--pipeline', type=click.Choice(PIPELINES), help="Stemming pipeline."),
        click.option('--provider', type=click.Choice(["mock", "http"]), help="LLM provider kind."),
        click.option('--workers', type=int, help="Concurrent workers."),
        click.option('--output-dir', help="Directory for run artifacts."),
        click.option('--run-tag', help="Run name used in run files."),
        click.option('--toy', is_flag=True, help="Use the bundled toy collection."),
    ]
    for option in reversed(options):
        fn = option(fn)
    return fn


def _build_config(config_path: Optional[str], overrides: Sequence[str], pipeline: Optional[str],
                  provider: Optional[str], workers: Optional[int], output_dir: Optional[str],
                  run_tag: Optional[str], toy: bool) -> ExperimentConfig:
    updates: Dict[str, object] = {
        'pipeline': pipeline,
        'provider.kind': provider,
        'workers': workers,
        'output_dir': output_dir,
        'run_tag': run_tag,
    }
    if toy:
        paths = bundled_toy_paths()
        updates.update({
            'corpus_path': str(paths['corpus']),
            'topics_path': str(paths['topics']),
            'qrels_path': str(paths['qrels']),
            'stem_dictionary_path': str(paths['dictionary']),
        })
    return load_config(config_path, overrides, updates)


def _documents_and_queries(config: ExperimentConfig):
    config.require("corpus_path")
    documents = list(load_corpus(config.corpus_path))
    queries = []
    if config.topics_path:
        queries = [RawDocument(qid, text) for qid, text in load_topics(config.topics_path)]
    return documents, queries


@click.group()
@click.option('-v', '--verbose', count=True, help="-v for INFO, -vv for DEBUG logging.")
@click.option('--progress', is_flag=True, help="Show progress bars.")
@click.pass_context
def cli(ctx, verbose: int, progress: bool):
    """LLM-based stemming workbench for BM25 retrieval experiments."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT)
    load_dotenv()
    ctx.ensure_object(dict)
    ctx.obj['progress'] = progress


@cli.command()
@config_options
@click.pass_context
def experiment(ctx, **options):
    """Run the full protocol: transform, index, search and evaluate."""
    config = _build_config(**options)
    telemetry = RunTelemetry()
    result = run_experiment(config, telemetry, progress=ctx.obj['progress'])
    click.echo(f"run\t{result.run_path}")
    for metric, value in result.report.means.items():
        click.echo(f"{metric}\t{value:.4f}")
    for name, value in result.counters.items():
        click.echo(f"{name}\t{value}")


@cli.command('stem-vocab')
@config_options
@click.option('--output', required=True, help="Stem mapping output (cache TSV format).")
@click.pass_context
def stem_vocab(ctx, output: str, **options):
    """Stem the corpus and query vocabulary once and save the mapping."""
    config = _build_config(**options)
    config.pipeline = "vs"
    documents, queries = _documents_and_queries(config)
    pipeline = build_pipeline(config)
    if not isinstance(pipeline, VocabularyPipeline):
        raise InvalidArgumentError("stem-vocab needs the vs pipeline")
    pipeline.prepare(documents, queries, config.workers, ctx.obj['progress'])
    pipeline.finalize()
    mapping = StemCache(output)
    for word, stems in pipeline.mapping.mapping.items():
        mapping.put(word, stems)
    mapping.save()
    click.echo(f"{len(mapping)} words\t{output}")


@cli.command()
@config_options
@click.pass_context
def transform(ctx, **options):
    """Write the transformed corpus (JSON lines) and topics (TSV)."""
    config = _build_config(**options)
    documents, queries = _documents_and_queries(config)
    progress = ctx.obj['progress']
    pipeline = build_pipeline(config)
    pipeline.prepare(documents, queries, config.workers, progress)
    streams = pipeline.transform_corpus(documents, config.workers, progress)
    query_streams = pipeline.transform_queries(queries, config.workers, progress)
    pipeline.finalize()

    output_dir = Path(config.output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)
    corpus_path = output_dir / f"corpus.{config.pipeline}.jsonl"
    write_transformed_corpus(corpus_path, streams)
    click.echo(f"corpus\t{corpus_path}")
    if query_streams:
        topics_path = output_dir / f"topics.{config.pipeline}.tsv"
        write_topics(topics_path, ((qid, " ".join(tokens)) for qid, tokens in query_streams))
        click.echo(f"topics\t{topics_path}")


@cli.command()
@click.option('--corpus', 'corpus_path', required=True, help="Corpus (typically transformed) JSON lines.")
@click.option('--output', required=True, help="Index snapshot file.")
@click.option('--workers', type=int, default=1, show_default=True)
def index(corpus_path: str, output: str, workers: int):
    """Index a corpus as-is (contents are only tokenized) and save a snapshot."""
    docs = ((doc.doc_id, tokenize(doc.text)) for doc in load_corpus(corpus_path))
    idx = build_index(docs, workers)
    save_index(idx, output)
    click.echo(f"{idx.doc_count} documents\t{idx.vocabulary_size} terms\t{output}")


@cli.command('search')
@config_options
@click.option('--index', 'index_path', required=True, help="Index snapshot.")
@click.option('--topics', 'topics_file', required=True, help="Topics TSV (typically transformed).")
@click.option('--output', required=True, help="Run file to write.")
@click.option('-k', 'k', type=int, help="Results per query (default from config).")
def search_command(index_path: str, topics_file: str, output: str, k: Optional[int], **options):
    """Retrieve with BM25 for every topic and write a TREC run file."""
    config = _build_config(**options)
    idx = load_index(index_path)
    k = k if k is not None else config.k
    run = {qid: search(idx, config.bm25, tokenize(text), k) for qid, text in load_topics(topics_file)}
    write_run(output, run, config.run_tag)
    click.echo(f"{len(run)} queries\t{output}")


@cli.command()
@click.option('--run', 'run_path', required=True, help="TREC run file.")
@click.option('--qrels', 'qrels_path', required=True, help="TREC qrels file.")
@click.option('--metric', 'metrics', multiple=True, help="Metric (repeatable); default rr, map, ndcg@10, recall@1000.")
@click.option('--per-query', 'per_query_path', help="Write per-query values as TSV.")
def evaluate(run_path: str, qrels_path: str, metrics: Sequence[str], per_query_path: Optional[str]):
    """Evaluate a run file against qrels."""
    metrics = list(metrics) or list(DEFAULT_METRICS)
    report = evaluate_run(read_run(run_path), load_qrels(qrels_path), metrics, Path(run_path).stem)
    for metric, value in report.means.items():
        click.echo(f"{metric}\t{value:.4f}")
    if per_query_path:
        report.write_per_query_tsv(per_query_path)


@cli.command()
@click.argument('run_a')
@click.argument('run_b')
@click.option('--qrels', 'qrels_path', required=True, help="TREC qrels file.")
@click.option('--metric', 'metrics', multiple=True, help="Metric (repeatable); default all four.")
@click.option('--m', 'm', type=int, default=1, show_default=True, help="Bonferroni factor.")
@click.option('--gain-loss', 'gain_loss_path', help="Write the gain-loss CSV of the first metric.")
@click.option('--topics', 'topics_path', help="Topics TSV both runs were searched with.")
def compare(run_a: str, run_b: str, qrels_path: str, metrics: Sequence[str], m: int,
            gain_loss_path: Optional[str], topics_path: Optional[str]):
    """Paired t-test (Bonferroni-adjusted) of RUN_A against RUN_B."""
    metrics = list(metrics) or list(DEFAULT_METRICS)
    qrels = load_qrels(qrels_path)
    runs = {run_a: read_run(run_a), run_b: read_run(run_b)}
    for name, run in runs.items():
        check_run_queries(run, qrels, name)
    check_aligned_runs(runs, qrels, _topic_ids(topics_path))
    report_a = evaluate_run(runs[run_a], qrels, metrics, Path(run_a).stem)
    report_b = evaluate_run(runs[run_b], qrels, metrics, Path(run_b).stem)

    click.echo("metric\tmean_a\tmean_b\tt\tp\tp_adjusted\tsig")
    for metric in metrics:
        row = compare_scores(report_a.run_name, report_b.run_name, metric,
                             report_a.scores(metric), report_b.scores(metric), m)
        click.echo(f"{metric}\t{row.mean:.4f}\t{row.reference_mean:.4f}\t{row.t:.4f}\t"
                   f"{row.p:.4f}\t{row.p_adjusted:.4f}\t{row.mark}")
    if gain_loss_path:
        deltas = gain_loss(report_a.scores(metrics[0]), report_b.scores(metrics[0]))
        write_gain_loss_csv(gain_loss_path, deltas)


@cli.command()
@click.argument('runs', nargs=-1, required=True)
@click.option('--reference', required=True, help="Run file of the reference system.")
@click.option('--qrels', 'qrels_path', required=True, help="TREC qrels file.")
@click.option('--metric', 'metrics', multiple=True, help="Metric (repeatable); default all four.")
@click.option('--m', 'm', type=int, help="Bonferroni factor (default: number of compared runs).")
@click.option('--output', help="Write the table as TSV.")
@click.option('--topics', 'topics_path', help="Topics TSV all runs were searched with.")
def report(runs: Sequence[str], reference: str, qrels_path: str, metrics: Sequence[str],
           m: Optional[int], output: Optional[str], topics_path: Optional[str]):
    """Significance table of several runs against a reference run."""
    metrics = list(metrics) or list(DEFAULT_METRICS)
    qrels = load_qrels(qrels_path)
    loaded = {}
    for path in [reference, *runs]:
        name = Path(path).stem
        if name in loaded:
            raise InvalidArgumentError(f"Two runs share the name '{name}'")
        loaded[name] = read_run(path)
        check_run_queries(loaded[name], qrels, path)
    check_aligned_runs(loaded, qrels, _topic_ids(topics_path))
    reports = {name: evaluate_run(run, qrels, metrics, name) for name, run in loaded.items()}
    rows = significance_table(reports, Path(reference).stem, metrics, m)
    frame = comparisons_frame(rows)
    click.echo(frame.to_string(index=False, float_format=lambda v: f"{v:.4f}"))
    if output:
        frame.to_csv(output, sep='\t', index=False, float_format="%.6f")


def _topic_ids(topics_path: Optional[str]) -> Optional[List[str]]:
    if not topics_path:
        return None
    return [qid for qid, _ in load_topics(topics_path)]


def _fail(message: str, code: int) -> int:
    click.echo(f"Error: {message}", err=True)
    return code


def main(argv: Optional[List[str]] = None) -> int:
    """
    Console entry point.

    Args:
        argv: Arguments (sys.argv[1:] when omitted)

    Returns:
        Process exit code
    """
    try:
        cli.main(args=argv, prog_name="stem-workbench", standalone_mode=False)
    except click.exceptions.Abort:
        return _fail("aborted", EXIT_USAGE)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except (ConfigError, InvalidArgumentError) as e:
        return _fail(str(e), EXIT_USAGE)
    except (DataError, CacheConflictError, OSError) as e:
        return _fail(str(e), EXIT_DATA)
    except ProviderError as e:
        return _fail(str(e), EXIT_PROVIDER)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
