# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path
from typing import Any

import click
from click.decorators import FC

from qacap.core.dialogue import Transcript
from qacap.core.pipeline import TranscriptParseError, load_transcripts

# Exit code of usage, configuration and unreadable input errors.
USAGE_EXIT_CODE = 2
# Exit code of a batch where some images failed.
PARTIAL_FAILURE_EXIT_CODE = 1

BACKEND_SECTIONS = ("questioner", "answerer", "summarizer")

# Run configuration scalars exposed as `--<key>` options, with their click type.
TOP_LEVEL_OVERRIDES = {
    "total_questions": click.IntRange(min=1),
    "first_question": str,
    "max_question_retries": click.IntRange(min=0),
    "max_answer_retries": click.IntRange(min=0),
    "aborted_path": str,
}
BACKEND_OVERRIDES = {
    "kind": click.Choice(["chat_http", "vqa_http", "scripted"]),
    "endpoint": str,
    "model_id": str,
    "temperature": float,
    "max_tokens": click.IntRange(min=1),
    "timeout": float,
    "max_retries": click.IntRange(min=0),
    "backoff": float,
    "auth_env_var": str,
}


class UsageError(click.ClickException):
    """Usage, configuration or input error, exits with code 2."""

    exit_code = USAGE_EXIT_CODE


class PartialFailure(click.ClickException):
    """Some dialogues of a batch failed, exits with code 1."""

    exit_code = PARTIAL_FAILURE_EXIT_CODE


def override_keys() -> dict[str, Any]:
    """Dotted configuration keys accepted as options, with their click type."""
    keys = dict(TOP_LEVEL_OVERRIDES)
    for section in BACKEND_SECTIONS:
        for field, field_type in BACKEND_OVERRIDES.items():
            keys[f"{section}.{field}"] = field_type
    return keys


def _parameter_name(dotted_key: str) -> str:
    return "override__" + dotted_key.replace(".", "__")


def config_overrides(func: FC) -> FC:
    """Add one `--<section>.<field>` option per overridable configuration key."""
    for dotted_key, field_type in reversed(override_keys().items()):
        func = click.option(
            f"--{dotted_key}",
            _parameter_name(dotted_key),
            type=field_type,
            default=None,
            help=f"Override `{dotted_key}` of the configuration file",
        )(func)
    return func


def collect_overrides(kwargs: dict[str, Any]) -> dict[str, Any]:
    """Pop the override options out of a command's arguments, keyed by dotted key."""
    return {
        dotted_key: kwargs.pop(_parameter_name(dotted_key))
        for dotted_key in override_keys()
        if _parameter_name(dotted_key) in kwargs
    }


def config(func: FC) -> FC:
    return click.option(
        "--config",
        "config_path",
        envvar="QACAP_CONFIG",
        type=click.Path(dir_okay=False, path_type=Path),
        help="Run configuration file (.toml, .json, .yml or .yaml)",
    )(func)


def transcripts_path(func: FC) -> FC:
    return click.option(
        "--transcripts",
        "transcripts_path",
        required=True,
        type=click.Path(dir_okay=False, path_type=Path),
        help="Transcripts JSONL file",
    )(func)


def as_json(func: FC) -> FC:
    return click.option(
        "--json", "as_json", is_flag=True, help="Print JSON instead of tables"
    )(func)


def read_image_refs(path: Path) -> list[str]:
    """Image refs of a file, one per line, blank lines and `#` comments skipped.

    Raises:
        UsageError: If the file cannot be read.
    """
    try:
        with path.open(encoding="utf-8") as fd:
            lines = [line.strip() for line in fd]
    except (OSError, UnicodeDecodeError) as e:
        raise UsageError(f"Cannot read image list {path}: {e}") from e
    return [line for line in lines if line and not line.startswith("#")]


def read_transcripts(path: Path) -> list[Transcript]:
    """Load a transcripts file, turning read and parse errors into usage errors."""
    try:
        return load_transcripts(path)
    except OSError as e:
        raise UsageError(f"Cannot read transcripts {path}: {e}") from e
    except TranscriptParseError as e:
        raise UsageError(f"Invalid transcripts file {e}") from e
