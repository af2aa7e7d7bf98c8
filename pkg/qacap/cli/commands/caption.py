# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path

import click

from qacap.cli.utils import (
    PartialFailure,
    UsageError,
    collect_overrides,
    config,
    config_overrides,
    read_image_refs,
)
from qacap.core.config import ConfigError, load_run_config
from qacap.core.pipeline import run_batch


@click.command(short_help="Caption images through question/answer dialogues.")
@config
@click.option(
    "--images",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="File listing one image ref per line",
)
@click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Transcripts JSONL file, overrides `output_path`",
)
@click.option(
    "--parallelism",
    default=1,
    show_default=True,
    type=click.IntRange(min=1),
    help="Maximum number of dialogues in flight",
)
@click.option(
    "--deterministic",
    is_flag=True,
    help="Pin every timestamp to the Unix epoch",
)
@config_overrides
def caption(config_path, images, out, parallelism, deterministic, **kwargs):
    overrides = collect_overrides(kwargs)
    if out is not None:
        overrides["output_path"] = str(out)
    try:
        run_config = load_run_config(config_path, overrides)
    except ConfigError as e:
        raise UsageError(str(e)) from e
    image_refs = read_image_refs(images)

    result = run_batch(
        image_refs, run_config, parallelism=parallelism, deterministic=deterministic
    )
    click.echo(
        f"{len(result.transcripts)}/{len(image_refs)} transcripts written to "
        f"{run_config.output_path}"
    )
    if result.failures:
        for failure in result.failures:
            stage = "summary" if failure.turn is None else f"turn {failure.turn}"
            click.echo(f"{failure.image_ref}: failed at {stage}: {failure.cause}", err=True)
        raise PartialFailure(
            f"{len(result.failures)} dialogues failed, "
            f"partial transcripts in {run_config.aborted_path}"
        )
