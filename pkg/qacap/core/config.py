# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
import os
from pathlib import Path
from typing import Any, Mapping, Optional, Union

import jsonschema
import yaml
from jsonschema import exceptions

from qacap.core.backends.descriptor import (
    BackendDescriptor,
    BackendKindEnum,
    InvalidDescriptorError,
    RoleEnum,
)
from qacap.core.dialogue import ANSWER_MARKER
from qacap.core.prompts import InvalidTemplateError, PromptTemplateSet
from qacap.core.utils import (
    UnsupportedDocumentError,
    canonical_json,
    load_document,
    merge_hash,
)

logger = logging.getLogger("qacap").getChild("config")

RUN_CONFIG_SCHEMA_PATH = Path(__file__).parent / "schemas" / "run_config.json"

DEFAULT_TOTAL_QUESTIONS = 10
DEFAULT_MAX_QUESTION_RETRIES = 2
DEFAULT_MAX_ANSWER_RETRIES = 2
DEFAULT_OUTPUT_PATH = "transcripts.jsonl"
ABORTED_SUFFIX = ".aborted.jsonl"
MANIFEST_SUFFIX = ".manifest.json"
# Fields a summarizer inheriting the questioner backend does not take over.
SUMMARIZER_OWN_FIELDS = ("temperature", "max_tokens")

ALLOWED_KINDS = {
    RoleEnum.QUESTIONER: (BackendKindEnum.CHAT_HTTP, BackendKindEnum.SCRIPTED),
    RoleEnum.ANSWERER: (BackendKindEnum.VQA_HTTP, BackendKindEnum.SCRIPTED),
    RoleEnum.SUMMARIZER: (BackendKindEnum.CHAT_HTTP, BackendKindEnum.SCRIPTED),
}


class ConfigError(Exception):
    """Run configuration cannot be loaded or is invalid."""

    def __init__(self, msg: str, source: Optional[Union[str, os.PathLike]] = None):
        self.msg = msg
        self.source = source
        super().__init__(msg, source)

    def __str__(self):
        if self.source is None:
            return self.msg
        return f"{self.msg}: {self.source}"


def _sidecar(path: Path, suffix: str) -> Path:
    name = path.name
    if name.endswith(".jsonl"):
        name = name[: -len(".jsonl")]
    return path.with_name(name + suffix)


@dataclasses.dataclass(frozen=True)
class RunConfig:
    """Configuration of captioning dialogues.

    Attributes:
        questioner: Backend generating questions.
        answerer: Backend answering from the image.
        summarizer: Backend writing the caption, defaults to the questioner.
        templates: Instruction strings.
        total_questions: Questions per image, the opening one included.
        first_question: Opening question, defaults to `templates.first_question`.
        max_question_retries: Re-asks of the questioner on an empty question.
        max_answer_retries: Re-asks of the answerer on an empty answer.
        output_path: JSONL file receiving completed transcripts.
        aborted_path: JSONL file receiving aborted transcripts.
    """

    questioner: BackendDescriptor
    answerer: BackendDescriptor
    summarizer: Optional[BackendDescriptor] = None
    templates: PromptTemplateSet = PromptTemplateSet()
    total_questions: int = DEFAULT_TOTAL_QUESTIONS
    first_question: Optional[str] = None
    max_question_retries: int = DEFAULT_MAX_QUESTION_RETRIES
    max_answer_retries: int = DEFAULT_MAX_ANSWER_RETRIES
    output_path: Path = Path(DEFAULT_OUTPUT_PATH)
    aborted_path: Optional[Path] = None

    def __post_init__(self) -> None:
        if self.total_questions < 1:
            raise ConfigError(
                f"total_questions must be >= 1, got {self.total_questions}"
            )
        if self.max_question_retries < 0 or self.max_answer_retries < 0:
            raise ConfigError("retry counts must be >= 0")
        if self.summarizer is None:
            object.__setattr__(
                self, "summarizer", self.questioner.as_role(RoleEnum.SUMMARIZER)
            )
        if self.first_question is None:
            object.__setattr__(self, "first_question", self.templates.first_question)
        elif not self.first_question.strip():
            raise ConfigError("first_question cannot be empty")
        elif ANSWER_MARKER in self.first_question:
            raise ConfigError(f"first_question cannot contain '{ANSWER_MARKER}'")
        object.__setattr__(self, "output_path", Path(self.output_path))
        if self.aborted_path is None:
            object.__setattr__(
                self, "aborted_path", _sidecar(self.output_path, ABORTED_SUFFIX)
            )
        else:
            object.__setattr__(self, "aborted_path", Path(self.aborted_path))
        for descriptor, role in (
            (self.questioner, RoleEnum.QUESTIONER),
            (self.answerer, RoleEnum.ANSWERER),
            (self.summarizer, RoleEnum.SUMMARIZER),
        ):
            if descriptor.role != role:
                raise ConfigError(f"{role} backend is declared with role {descriptor.role}")
            if descriptor.kind not in ALLOWED_KINDS[role]:
                raise ConfigError(
                    f"{role} backend cannot be of kind {descriptor.kind}, expected one of "
                    f"{', '.join(kind.value for kind in ALLOWED_KINDS[role])}"
                )

    @property
    def manifest_path(self) -> Path:
        return _sidecar(self.output_path, MANIFEST_SUFFIX)

    def to_dict(self, include_paths: bool = True) -> dict[str, Any]:
        """Serializable form, API keys are never part of it.

        Args:
            include_paths: Whether output locations are included.
        """
        data = {
            "total_questions": self.total_questions,
            "first_question": self.first_question,
            "max_question_retries": self.max_question_retries,
            "max_answer_retries": self.max_answer_retries,
            "questioner": self.questioner.to_dict(),
            "answerer": self.answerer.to_dict(),
            "summarizer": self.summarizer.to_dict(),
            "templates": self.templates.to_dict(),
        }
        if include_paths:
            data["output_path"] = str(self.output_path)
            data["aborted_path"] = str(self.aborted_path)
        return data

    @property
    def digest(self) -> str:
        """SHA-256 of the canonical JSON form, output locations excluded."""
        return hashlib.sha256(
            canonical_json(self.to_dict(include_paths=False)).encode("utf-8")
        ).hexdigest()

    @staticmethod
    def from_mapping(document: Mapping[str, Any]) -> "RunConfig":
        """Build a RunConfig from a validated configuration document.

        Raises:
            ConfigError: If a value is out of its domain.
        """
        try:
            templates = PromptTemplateSet.from_mapping(document.get("templates", {}))
            questioner = BackendDescriptor.from_dict(
                RoleEnum.QUESTIONER, document["questioner"]
            )
            answerer = BackendDescriptor.from_dict(
                RoleEnum.ANSWERER, document["answerer"]
            )
            summarizer = None
            if "summarizer" in document:
                summarizer = BackendDescriptor.from_dict(
                    RoleEnum.SUMMARIZER, document["summarizer"]
                )
            return RunConfig(
                questioner=questioner,
                answerer=answerer,
                summarizer=summarizer,
                templates=templates,
                total_questions=document.get("total_questions", DEFAULT_TOTAL_QUESTIONS),
                first_question=document.get("first_question"),
                max_question_retries=document.get(
                    "max_question_retries", DEFAULT_MAX_QUESTION_RETRIES
                ),
                max_answer_retries=document.get(
                    "max_answer_retries", DEFAULT_MAX_ANSWER_RETRIES
                ),
                output_path=Path(document.get("output_path", DEFAULT_OUTPUT_PATH)),
                aborted_path=document.get("aborted_path"),
            )
        except KeyError as e:
            raise ConfigError(f"Missing configuration key {e}") from e
        except (InvalidDescriptorError, InvalidTemplateError, ValueError) as e:
            raise ConfigError(str(e)) from e


def set_dotted(document: dict, dotted_key: str, value: Any) -> dict:
    """Copy of `document` where `a.b.c` is set to `value`, creating tables on the way."""
    head, _, rest = dotted_key.partition(".")
    updated = dict(document)
    if rest:
        child = updated.get(head)
        updated[head] = set_dotted(child if isinstance(child, dict) else {}, rest, value)
    else:
        updated[head] = value
    return updated


def _inherit_summarizer(document: dict) -> dict:
    """Complete a summarizer section without `kind` from the questioner section.

    Sampling fields are not inherited, the summarizer keeps its role defaults
    unless the section sets them.
    """
    summarizer = document.get("summarizer")
    questioner = document.get("questioner")
    if not isinstance(summarizer, dict) or "kind" in summarizer:
        return document
    if not isinstance(questioner, dict):
        return document
    inherited = {
        key: value
        for key, value in questioner.items()
        if key not in SUMMARIZER_OWN_FIELDS
    }
    return {**document, "summarizer": merge_hash(inherited, summarizer)}


def validate_document(document: Mapping[str, Any], source: Any = None) -> None:
    """Validate a configuration document against the run configuration schema.

    Raises:
        ConfigError: If the document does not follow the schema.
    """
    with RUN_CONFIG_SCHEMA_PATH.open() as fd:
        schema = json.load(fd)
    try:
        jsonschema.validate(dict(document), schema, jsonschema.Draft7Validator)
    except exceptions.ValidationError as e:
        location = ".".join(str(part) for part in e.absolute_path) or "<root>"
        raise ConfigError(f"Invalid configuration at '{location}': {e.message}", source) from e


def load_run_config(
    path: Optional[Union[str, os.PathLike]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Load, override and validate a run configuration.

    Args:
        path: TOML, JSON or YAML configuration file, None to start empty.
        overrides: Dotted keys (`questioner.temperature`) taking precedence over the file.

    Returns:
        The run configuration.

    Raises:
        ConfigError: If the file cannot be read or the result is invalid.
    """
    document: dict = {}
    if path is not None:
        try:
            document = load_document(path)
        except FileNotFoundError as e:
            raise ConfigError("Configuration file not found", path) from e
        except (
            UnsupportedDocumentError,
            ValueError,
            yaml.YAMLError,
        ) as e:
            raise ConfigError(f"Cannot parse configuration ({e})", path) from e
    overridden: dict = {}
    for dotted_key, value in (overrides or {}).items():
        if value is not None:
            overridden = set_dotted(overridden, dotted_key, value)
    document = _inherit_summarizer(merge_hash(document, overridden))
    validate_document(document, path)
    config = RunConfig.from_mapping(document)
    logger.debug(f"Run configuration loaded, digest {config.digest[:12]}")
    return config
