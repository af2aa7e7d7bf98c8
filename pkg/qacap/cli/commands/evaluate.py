# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import json
from pathlib import Path

import click

from qacap.cli.utils import UsageError, as_json, read_transcripts, transcripts_path
from qacap.core.evaluation import (
    LabelsParseError,
    MetricEnum,
    MissingCaptionError,
    TaxonomyError,
    build_report,
    load_labels,
    parse_tsv_taxonomy,
    parse_wordnet_nouns,
    render_tables,
)


def _load_taxonomy(wordnet_dir, taxonomy_tsv):
    if wordnet_dir is not None and taxonomy_tsv is not None:
        raise UsageError("--wordnet-dir and --taxonomy-tsv are mutually exclusive")
    try:
        if wordnet_dir is not None:
            return parse_wordnet_nouns(wordnet_dir)
        if taxonomy_tsv is not None:
            return parse_tsv_taxonomy(taxonomy_tsv)
    except (TaxonomyError, OSError, UnicodeDecodeError) as e:
        raise UsageError(f"Cannot load taxonomy: {e}") from e
    return None


@click.command("eval", short_help="Compute metrics over a transcripts file.")
@transcripts_path
@click.option(
    "--metric",
    "metrics",
    multiple=True,
    default=[MetricEnum.ALL.value],
    show_default=True,
    type=click.Choice([metric.value for metric in MetricEnum]),
    help="Metric to compute, can be repeated. `all` skips coverage without its inputs",
)
@click.option(
    "--labels",
    type=click.Path(dir_okay=False, path_type=Path),
    help="JSONL object labels, one {image_id, labels} record per line",
)
@click.option(
    "--wordnet-dir",
    type=click.Path(file_okay=False, path_type=Path),
    help="WordNet database directory holding data.noun and index.noun",
)
@click.option(
    "--taxonomy-tsv",
    type=click.Path(dir_okay=False, path_type=Path),
    help="TSV taxonomy, used instead of a WordNet database",
)
@click.option(
    "--all-turns",
    is_flag=True,
    help="Count the hard-coded opening question in question metrics",
)
@click.option(
    "--first-sense-only",
    is_flag=True,
    help="Match words on their first noun sense only",
)
@as_json
def evaluate(
    transcripts_path,
    metrics,
    labels,
    wordnet_dir,
    taxonomy_tsv,
    all_turns,
    first_sense_only,
    as_json,
):
    requested = [MetricEnum(metric) for metric in metrics]
    metrics = MetricEnum.expand(requested)
    coverage_inputs = (labels, wordnet_dir, taxonomy_tsv)
    if MetricEnum.ALL in requested and MetricEnum.COVERAGE not in requested:
        # `all` skips coverage when none of its inputs is given
        if all(path is None for path in coverage_inputs):
            metrics.remove(MetricEnum.COVERAGE)
    transcripts = read_transcripts(transcripts_path)
    if not transcripts:
        raise UsageError(f"No transcript in {transcripts_path}")

    object_labels = taxonomy = None
    if MetricEnum.COVERAGE in metrics:
        if labels is None:
            raise UsageError("Object coverage needs --labels")
        try:
            object_labels = load_labels(labels)
        except (OSError, UnicodeDecodeError, LabelsParseError) as e:
            raise UsageError(f"Cannot read labels: {e}") from e
        taxonomy = _load_taxonomy(wordnet_dir, taxonomy_tsv)
        if taxonomy is None:
            raise UsageError("Object coverage needs --wordnet-dir or --taxonomy-tsv")

    try:
        report = build_report(
            transcripts,
            metrics,
            labels=object_labels,
            taxonomy=taxonomy,
            questioner_turns_only=not all_turns,
            first_sense_only=first_sense_only,
        )
    except MissingCaptionError as e:
        raise UsageError(str(e)) from e

    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        click.echo(render_tables(report))
