# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import json
from datetime import datetime, timezone
from pathlib import Path

import pytest

from qacap.core.utils import (
    EPOCH,
    BaseEnum,
    UnsupportedDocumentError,
    canonical_json,
    format_timestamp,
    load_document,
    merge_hash,
    parse_timestamp,
)


class SampleEnum(BaseEnum):
    """Sample enum."""

    VALUE1 = "value1"
    VALUE2 = "value2"
    VALUE3 = "value3"


class TestBaseEnum:
    def test_base_enum_contains(self):
        assert "value1" in SampleEnum
        assert "value4" not in SampleEnum

    def test_base_enum_equals(self):
        assert SampleEnum.VALUE1 == SampleEnum("value1")
        assert SampleEnum.VALUE1 == "value1"

    def test_base_enum_str_is_value(self):
        assert str(SampleEnum.VALUE2) == "value2"
        assert f"{SampleEnum.VALUE3}" == "value3"

    def test_base_enum_wrong_value(self):
        with pytest.raises(ValueError):
            SampleEnum("value4")


def test_format_timestamp_uses_z_suffix():
    assert format_timestamp(EPOCH) == "1970-01-01T00:00:00Z"


def test_format_timestamp_naive_is_utc():
    assert format_timestamp(datetime(2023, 3, 1, 12, 30)) == "2023-03-01T12:30:00Z"


def test_parse_timestamp_inverts_format():
    value = datetime(2023, 3, 1, 12, 30, 15, 250000, tzinfo=timezone.utc)
    assert parse_timestamp(format_timestamp(value)) == value


def test_canonical_json_is_key_order_independent():
    assert canonical_json({"b": 1, "a": [1, 2]}) == canonical_json({"a": [1, 2], "b": 1})
    assert canonical_json({"b": 1, "a": "é"}) == '{"a":"é","b":1}'


def test_merge_hash_recursive():
    a = {"questioner": {"kind": "chat_http", "temperature": 1.0}, "total_questions": 10}
    b = {"questioner": {"temperature": 0.7}, "first_question": "Hi?"}
    merged = merge_hash(a, b)
    assert merged == {
        "questioner": {"kind": "chat_http", "temperature": 0.7},
        "total_questions": 10,
        "first_question": "Hi?",
    }
    assert a["questioner"]["temperature"] == 1.0


def test_load_document_by_suffix(tmp_path: Path):
    (tmp_path / "doc.toml").write_text('total_questions = 3\n[questioner]\nkind = "scripted"\n')
    (tmp_path / "doc.json").write_text(json.dumps({"total_questions": 3}))
    (tmp_path / "doc.yml").write_text("total_questions: 3\n")
    assert load_document(tmp_path / "doc.toml") == {
        "total_questions": 3,
        "questioner": {"kind": "scripted"},
    }
    assert load_document(tmp_path / "doc.json") == {"total_questions": 3}
    assert load_document(tmp_path / "doc.yml") == {"total_questions": 3}


def test_load_document_empty_yaml(tmp_path: Path):
    (tmp_path / "empty.yaml").write_text("")
    assert load_document(tmp_path / "empty.yaml") == {}


def test_load_document_unsupported(tmp_path: Path):
    (tmp_path / "doc.ini").write_text("[section]\n")
    with pytest.raises(UnsupportedDocumentError):
        load_document(tmp_path / "doc.ini")


def test_load_document_not_a_mapping(tmp_path: Path):
    (tmp_path / "list.yml").write_text("- a\n- b\n")
    with pytest.raises(UnsupportedDocumentError, match="mapping"):
        load_document(tmp_path / "list.yml")
