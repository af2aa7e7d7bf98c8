# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import json
from pathlib import Path

import pytest

from qacap.conftest import (
    make_transcript,
    opening,
    scripted_config_document,
    write_config,
    write_tsv_taxonomy,
)
from qacap.core.dialogue import Turn
from qacap.core.pipeline import TranscriptWriter

QUESTIONS = [f"What is object number {index}?" for index in range(1, 10)]
ANSWERS = ["a dog by a tree"] + [f"answer {index}" for index in range(1, 10)]


@pytest.fixture
def config_path(tmp_path: Path) -> Path:
    document = scripted_config_document(
        questions=QUESTIONS, answers=ANSWERS, total_questions=10
    )
    document["answerer"]["script"]["on_exhausted"] = "error"
    return write_config(tmp_path / "qacap.yml", document)


@pytest.fixture
def images_path(tmp_path: Path) -> Path:
    path = tmp_path / "images.txt"
    path.write_text("# evaluation split\nimg1\n\nimg2\nimg3\n")
    return path


@pytest.fixture
def transcripts_file(tmp_path: Path) -> Path:
    path = tmp_path / "transcripts.jsonl"
    writer = TranscriptWriter(path)
    writer.write(
        make_transcript(
            "img1",
            opening("Is there a cat?", "What is the dog doing?"),
            answers=["a dog", "no", "sleeping"],
            caption="A dog sleeps under a tree.",
        )
    )
    writer.write(
        make_transcript(
            "img2",
            opening("What color is the car?", "Where is the car?"),
            answers=["a car", "red", "on a road"],
            caption="A red car on a road.",
        )
    )
    writer.write(
        make_transcript("img3", opening(), answers=["a kitchen"], caption=None).with_turn(
            Turn(index=2, question="Is there a stove?")
        )
    )
    return path


@pytest.fixture
def labels_file(tmp_path: Path) -> Path:
    path = tmp_path / "labels.jsonl"
    path.write_text(
        json.dumps({"image_id": "img1", "labels": ["dog", "cat"]})
        + "\n"
        + json.dumps({"image_id": "img2", "labels": []})
        + "\n"
    )
    return path


@pytest.fixture
def taxonomy_tsv(tmp_path: Path) -> Path:
    return write_tsv_taxonomy(tmp_path / "taxonomy.tsv")
