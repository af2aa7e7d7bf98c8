# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import json
import os
import tomllib
from datetime import datetime, timezone
from enum import Enum, EnumMeta
from pathlib import Path
from typing import Any, Union

import yaml

try:
    from yaml import CLoader as Loader
except ImportError:
    from yaml import Loader

EPOCH = datetime(1970, 1, 1, tzinfo=timezone.utc)

JSON_EXTENSION = ".json"
TOML_EXTENSION = ".toml"
YAML_EXTENSIONS = (".yml", ".yaml")


class UnsupportedDocumentError(Exception):
    pass


class _MetaEnum(EnumMeta):
    """Meta class for Enum."""

    def __contains__(cls: _MetaEnum, item: str) -> bool:
        """Check if value is a valid Enum value.

        Args:
            item: Value to check.

        Returns:
            True if value is a valid Enum value, False otherwise.
        """
        try:
            cls(item)
        except ValueError:
            return False
        return True


class BaseEnum(str, Enum, metaclass=_MetaEnum):
    """Base class for string enums, compared and serialized by value."""

    def __str__(self) -> str:
        return self.value


def utc_now() -> datetime:
    """Current time, timezone aware, in UTC."""
    return datetime.now(timezone.utc)


def format_timestamp(value: datetime) -> str:
    """Render a datetime as an RFC 3339 UTC timestamp with a `Z` suffix.

    Naive datetimes are taken as UTC.
    """
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc).isoformat().replace("+00:00", "Z")


def parse_timestamp(value: str) -> datetime:
    """Parse an RFC 3339 timestamp into an aware UTC datetime.

    Raises:
        ValueError: If the value is not a valid timestamp.
    """
    parsed = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc)


def canonical_json(value: Any) -> str:
    """Stable JSON text: sorted keys, compact separators, unicode kept."""
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def merge_hash(dict_a: dict, dict_b: dict) -> dict:
    """Recursively merges two dictionaries, values of `dict_b` win.

    Args:
        dict_a: First dictionary.
        dict_b: Second dictionary.

    Returns:
        A new merged dictionary, inputs are left untouched.
    """
    merged = dict(dict_a)
    for key, value in dict_b.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_hash(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_document(path: Union[str, os.PathLike]) -> dict:
    """Load a TOML, JSON or YAML mapping, selected by file suffix.

    Args:
        path: Path to the document.

    Returns:
        The parsed mapping, empty when the file is empty.

    Raises:
        UnsupportedDocumentError: If the suffix is unknown or the content is not a mapping.
    """
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == TOML_EXTENSION:
        with path.open("rb") as fd:
            content = tomllib.load(fd)
    elif suffix == JSON_EXTENSION:
        with path.open() as fd:
            text = fd.read()
        content = json.loads(text) if text.strip() else {}
    elif suffix in YAML_EXTENSIONS:
        with path.open() as fd:
            content = yaml.load(fd, Loader=Loader) or {}
    else:
        raise UnsupportedDocumentError(
            f"{path}: unsupported extension '{suffix}', "
            f"expected {TOML_EXTENSION}, {JSON_EXTENSION} or {', '.join(YAML_EXTENSIONS)}"
        )
    if not isinstance(content, dict):
        raise UnsupportedDocumentError(
            f"{path}: top level must be a mapping, got {type(content).__name__}"
        )
    return content
