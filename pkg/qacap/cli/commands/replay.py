# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path

import click
from tabulate import tabulate

from qacap.cli.utils import UsageError, as_json, read_transcripts
from qacap.core.dialogue import ANSWER_MARKER, QUESTION_MARKER, Transcript

NONE_PLACEHOLDER = "<none>"


def render_dialogue(transcript: Transcript) -> str:
    """Alternating questions and answers followed by the caption."""
    lines = [f"Image: {transcript.image_ref}"]
    for turn in transcript.turns:
        lines.append(f"{QUESTION_MARKER} {turn.question}")
        lines.append(f"{ANSWER_MARKER} {turn.answer if turn.answered else NONE_PLACEHOLDER}")
    lines.append(f"caption: {transcript.caption or NONE_PLACEHOLDER}")
    return "\n".join(lines)


def transcripts_table(transcripts: list[Transcript]) -> str:
    return tabulate(
        [
            [
                transcript.image_ref,
                len(transcript.completed_turns),
                "yes" if transcript.completed else "no",
                transcript.questioner_id,
                transcript.answerer_id,
            ]
            for transcript in transcripts
        ],
        headers=["image_ref", "turns", "captioned", "questioner", "answerer"],
    )


@click.command(short_help="Print transcripts as dialogues.")
@click.argument("transcripts", type=click.Path(dir_okay=False, path_type=Path))
@click.option("--id", "image_id", help="Image ref of the transcript to print")
@as_json
def replay(transcripts, image_id, as_json):
    records = read_transcripts(transcripts)
    if image_id is None:
        if as_json:
            for record in records:
                click.echo(record.to_json())
        else:
            click.echo(transcripts_table(records))
        return

    matches = [record for record in records if record.image_ref == image_id]
    if not matches:
        raise UsageError(f"No transcript for image {image_id!r} in {transcripts}")
    for record in matches:
        click.echo(record.to_json() if as_json else render_dialogue(record))
