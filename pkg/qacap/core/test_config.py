# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import json
from pathlib import Path

import pytest

from qacap.conftest import scripted_config_document, scripted_run_config, write_config
from qacap.core.backends import RoleEnum
from qacap.core.config import ConfigError, RunConfig, load_run_config, set_dotted
from qacap.core.prompts import DEFAULT_FIRST_QUESTION


def test_load_yaml_config(tmp_path: Path):
    path = write_config(tmp_path / "run.yml", scripted_config_document(total_questions=4))
    config = load_run_config(path)
    assert config.total_questions == 4
    assert config.first_question == DEFAULT_FIRST_QUESTION
    assert config.max_question_retries == 2
    assert config.max_answer_retries == 2
    assert config.questioner.role == RoleEnum.QUESTIONER
    assert config.summarizer.role == RoleEnum.SUMMARIZER


def test_load_toml_config(tmp_path: Path):
    path = tmp_path / "run.toml"
    path.write_text(
        "total_questions = 3\n"
        'output_path = "out.jsonl"\n'
        "[questioner]\n"
        'kind = "chat_http"\n'
        'endpoint = "https://api.openai.com/v1"\n'
        'model_id = "gpt-3.5-turbo"\n'
        "[answerer]\n"
        'kind = "vqa_http"\n'
        'endpoint = "http://localhost:8000"\n'
        "[templates]\n"
        'question_instr = "Next Question. Question:"\n'
    )
    config = load_run_config(path)
    assert config.total_questions == 3
    assert config.output_path == Path("out.jsonl")
    assert config.aborted_path == Path("out.aborted.jsonl")
    assert config.manifest_path == Path("out.manifest.json")
    assert config.templates.question_instr == "Next Question. Question:"
    assert config.summarizer.endpoint == "https://api.openai.com/v1"
    assert config.summarizer.temperature == 0.0
    assert config.summarizer.max_tokens == 512


def test_overrides_take_precedence(tmp_path: Path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(scripted_config_document(total_questions=4)))
    config = load_run_config(
        path,
        {
            "total_questions": 2,
            "questioner.temperature": 0.3,
            "output_path": str(tmp_path / "o.jsonl"),
            "first_question": None,
        },
    )
    assert config.total_questions == 2
    assert config.questioner.temperature == 0.3
    assert config.questioner.kind == "scripted"
    assert config.output_path == tmp_path / "o.jsonl"
    assert config.first_question == DEFAULT_FIRST_QUESTION


def test_summarizer_override_inherits_questioner(tmp_path: Path):
    document = scripted_config_document()
    del document["summarizer"]
    document["questioner"] = {
        "kind": "chat_http",
        "endpoint": "https://api.example.com/v1",
        "model_id": "chat-model",
        "temperature": 0.7,
    }
    path = write_config(tmp_path / "run.yml", document)
    config = load_run_config(path, {"summarizer.max_tokens": 100})
    assert config.summarizer.role == RoleEnum.SUMMARIZER
    assert config.summarizer.kind == "chat_http"
    assert config.summarizer.endpoint == "https://api.example.com/v1"
    assert config.summarizer.model_id == "chat-model"
    assert config.summarizer.temperature == 0.0
    assert config.summarizer.max_tokens == 100
    assert config.questioner.max_tokens == 256


def test_first_question_with_answer_marker(tmp_path: Path):
    path = write_config(
        tmp_path / "run.yml",
        scripted_config_document(first_question="What is it? Answer: a dog"),
    )
    with pytest.raises(ConfigError, match="Answer:"):
        load_run_config(path)
    with pytest.raises(ConfigError):
        scripted_run_config(tmp_path / "out.jsonl", first_question="Answer: none")


def test_missing_config_file(tmp_path: Path):
    with pytest.raises(ConfigError, match="not found"):
        load_run_config(tmp_path / "absent.toml")


def test_without_file_backends_are_required():
    with pytest.raises(ConfigError, match="required property"):
        load_run_config(None)


def test_schema_violation_names_location(tmp_path: Path):
    document = scripted_config_document()
    document["questioner"]["temperature"] = 3
    path = write_config(tmp_path / "run.yml", document)
    with pytest.raises(ConfigError, match="questioner.temperature"):
        load_run_config(path)


def test_unknown_key_rejected(tmp_path: Path):
    path = write_config(tmp_path / "run.yml", scripted_config_document(total_question=3))
    with pytest.raises(ConfigError):
        load_run_config(path)


def test_wrong_kind_for_role(tmp_path: Path):
    document = scripted_config_document()
    document["answerer"] = {"kind": "chat_http", "endpoint": "http://llm"}
    path = write_config(tmp_path / "run.yml", document)
    with pytest.raises(ConfigError, match="answerer backend cannot be of kind chat_http"):
        load_run_config(path)


def test_unparsable_file(tmp_path: Path):
    path = tmp_path / "run.toml"
    path.write_text("total_questions = = 3\n")
    with pytest.raises(ConfigError, match="Cannot parse"):
        load_run_config(path)


def test_total_questions_must_be_positive(tmp_path: Path):
    with pytest.raises(ConfigError):
        scripted_run_config(tmp_path / "out.jsonl", total_questions=0)


def test_digest_ignores_output_paths(tmp_path: Path):
    config_a = scripted_run_config(tmp_path / "a.jsonl")
    config_b = scripted_run_config(tmp_path / "b" / "b.jsonl")
    config_c = scripted_run_config(tmp_path / "a.jsonl", total_questions=5)
    assert config_a.digest == config_b.digest
    assert config_a.digest != config_c.digest
    assert len(config_a.digest) == 64


def test_to_dict_has_no_secret(tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
    monkeypatch.setenv("OPENAI_API_KEY", "sk-secret")
    path = write_config(
        tmp_path / "run.yml",
        {
            "questioner": {"kind": "chat_http", "endpoint": "http://llm"},
            "answerer": {"kind": "vqa_http", "endpoint": "http://vqa"},
        },
    )
    config = load_run_config(path)
    assert "sk-secret" not in json.dumps(config.to_dict())


def test_set_dotted_creates_tables():
    assert set_dotted({}, "questioner.temperature", 0.5) == {"questioner": {"temperature": 0.5}}
    assert set_dotted({"a": 1}, "a", 2) == {"a": 2}


def test_run_config_from_mapping_is_frozen(tmp_path: Path):
    config = RunConfig.from_mapping(scripted_config_document())
    with pytest.raises(Exception):
        config.total_questions = 3
