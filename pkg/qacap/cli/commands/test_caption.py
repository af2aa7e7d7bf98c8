# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import json
from pathlib import Path

from click.testing import CliRunner

from qacap.cli.commands.caption import caption
from qacap.conftest import scripted_config_document, write_config
from qacap.core.pipeline import load_transcripts


def test_caption(config_path: Path, images_path: Path, tmp_path: Path):
    out = tmp_path / "out.jsonl"
    args = ["--config", config_path, "--images", images_path, "--out", out]
    runner = CliRunner()
    result = runner.invoke(caption, args)
    assert result.exit_code == 0, result.output
    transcripts = load_transcripts(out)
    assert [t.image_ref for t in transcripts] == ["img1", "img2", "img3"]
    assert all(len(t.turns) == 10 and t.completed for t in transcripts)
    assert (tmp_path / "out.manifest.json").exists()


def test_caption_is_deterministic(config_path: Path, images_path: Path, tmp_path: Path):
    runner = CliRunner()
    outputs = []
    for parallelism in ("1", "4"):
        out = tmp_path / f"out{parallelism}.jsonl"
        args = [
            "--config",
            config_path,
            "--images",
            images_path,
            "--out",
            out,
            "--parallelism",
            parallelism,
            "--deterministic",
        ]
        result = runner.invoke(caption, args)
        assert result.exit_code == 0, result.output
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1]


def test_caption_override(config_path: Path, images_path: Path, tmp_path: Path):
    out = tmp_path / "out.jsonl"
    args = [
        "--config",
        config_path,
        "--images",
        images_path,
        "--out",
        out,
        "--total_questions",
        "3",
    ]
    result = CliRunner().invoke(caption, args)
    assert result.exit_code == 0, result.output
    assert all(len(t.turns) == 3 for t in load_transcripts(out))


def test_caption_missing_config(images_path: Path, tmp_path: Path):
    args = [
        "--config",
        tmp_path / "missing.yml",
        "--images",
        images_path,
        "--out",
        tmp_path / "out.jsonl",
    ]
    result = CliRunner().invoke(caption, args)
    assert result.exit_code == 2, result.output


def test_caption_invalid_config(images_path: Path, tmp_path: Path):
    config_path = write_config(tmp_path / "qacap.yml", {"questioner": {"kind": "scripted"}})
    args = ["--config", config_path, "--images", images_path, "--out", tmp_path / "out.jsonl"]
    result = CliRunner().invoke(caption, args)
    assert result.exit_code == 2, result.output


def test_caption_partial_failure(images_path: Path, tmp_path: Path):
    document = scripted_config_document(
        answers=[f"answer {index}" for index in range(10)]
    )
    document["answerer"]["script"]["on_exhausted"] = "error"
    document["answerer"]["script"]["per_image"] = {"img2": ["only one answer"]}
    config_path = write_config(tmp_path / "qacap.yml", document)
    out = tmp_path / "out.jsonl"
    args = ["--config", config_path, "--images", images_path, "--out", out]

    result = CliRunner().invoke(caption, args)
    assert result.exit_code == 1, result.output
    assert len(out.read_text().splitlines()) == 2
    (aborted,) = load_transcripts(tmp_path / "out.aborted.jsonl")
    assert aborted.image_ref == "img2"
    manifest = json.loads((tmp_path / "out.manifest.json").read_text())
    assert manifest["completed"] == 2
    assert manifest["failures"][0]["turn"] == 2


def test_caption_undecodable_images(config_path: Path, tmp_path: Path):
    images_path = tmp_path / "images.txt"
    images_path.write_bytes(b"img\xff1\n")
    args = ["--config", config_path, "--images", images_path, "--out", tmp_path / "out.jsonl"]
    result = CliRunner().invoke(caption, args)
    assert result.exit_code == 2, result.output
