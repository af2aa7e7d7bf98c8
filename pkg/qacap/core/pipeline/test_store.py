# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import json
from pathlib import Path

import pytest

from qacap.conftest import make_transcript, opening
from qacap.core.dialogue import Turn
from qacap.core.pipeline import (
    OrderedTranscriptWriter,
    TranscriptParseError,
    TranscriptWriter,
    load_transcripts,
    write_manifest,
)


def test_round_trip(tmp_path: Path):
    path = tmp_path / "out.jsonl"
    writer = TranscriptWriter(path)
    transcripts = [
        make_transcript("img1", opening("Where is it?")),
        make_transcript("img2", opening("What color is the car?"), caption="Un chat é."),
    ]
    for transcript in transcripts:
        writer.write(transcript)
    assert load_transcripts(path) == transcripts
    assert len(path.read_text().splitlines()) == 2


def test_empty_file(tmp_path: Path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    assert load_transcripts(path) == []


def test_blank_lines_are_skipped(tmp_path: Path):
    path = tmp_path / "out.jsonl"
    path.write_text("\n" + make_transcript("img", opening()).to_json() + "\n\n")
    assert len(load_transcripts(path)) == 1


def test_corrupted_line(tmp_path: Path):
    path = tmp_path / "out.jsonl"
    path.write_text(
        make_transcript("img1", opening()).to_json()
        + "\n{not json\n"
        + make_transcript("img3", opening()).to_json()
        + "\n"
    )
    with pytest.raises(TranscriptParseError) as e:
        load_transcripts(path)
    assert e.value.line_number == 2


def test_invalid_utf8_line(tmp_path: Path):
    path = tmp_path / "out.jsonl"
    path.write_bytes(
        make_transcript("img1", opening()).to_json().encode() + b"\n\xff\xfe garbage\n"
    )
    with pytest.raises(TranscriptParseError) as e:
        load_transcripts(path)
    assert e.value.line_number == 2
    assert "UTF-8" in str(e.value)


def test_invalid_record(tmp_path: Path):
    record = make_transcript("img", opening("Where?")).to_dict()
    record["turns"][1]["index"] = 5
    path = tmp_path / "out.jsonl"
    path.write_text(json.dumps({"image_ref": "img"}) + "\n" + json.dumps(record) + "\n")
    with pytest.raises(TranscriptParseError) as e:
        load_transcripts(path)
    assert e.value.line_number == 1


def test_writer_routes_aborted_transcripts(tmp_path: Path):
    writer = TranscriptWriter(tmp_path / "out.jsonl", tmp_path / "out.aborted.jsonl")
    completed = make_transcript("img1", opening())
    aborted = make_transcript("img2", opening(), caption=None).with_turn(
        Turn(index=2, question="Where?")
    )
    assert writer.write(completed) == tmp_path / "out.jsonl"
    assert writer.write(aborted) == tmp_path / "out.aborted.jsonl"
    assert load_transcripts(tmp_path / "out.aborted.jsonl") == [aborted]


def test_ordered_writer(tmp_path: Path):
    path = tmp_path / "out.jsonl"
    ordered = OrderedTranscriptWriter(TranscriptWriter(path))
    transcripts = [make_transcript(f"img{index}", opening()) for index in range(4)]
    ordered.settle(2, transcripts[2])
    ordered.settle(1, None)
    assert not path.exists()
    ordered.settle(0, transcripts[0])
    assert [t.image_ref for t in load_transcripts(path)] == ["img0", "img2"]
    ordered.settle(3, transcripts[3])
    assert [t.image_ref for t in load_transcripts(path)] == ["img0", "img2", "img3"]


def test_write_manifest(tmp_path: Path):
    path = tmp_path / "nested" / "out.manifest.json"
    write_manifest(path, {"images": 3, "failures": []})
    assert json.loads(path.read_text()) == {"failures": [], "images": 3}
