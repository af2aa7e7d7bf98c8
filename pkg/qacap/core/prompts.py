# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

"""
Instruction strings and prompt contexts for the three dialogue roles.

Every context is `<task framing> + separator + <chat log> + separator + <cue>`,
the builders only concatenate, they never rewrite template or chat log text.
"""

from __future__ import annotations

import dataclasses
import os
from typing import Any, Mapping, Union

from qacap.core.dialogue import (
    ANSWER_MARKER,
    DEFAULT_CHAT_SEPARATOR,
    QUESTION_MARKER,
    Transcript,
    render_chat_log,
)
from qacap.core.utils import load_document

DEFAULT_TASK_Q = (
    "I have an image. Ask me questions about the content of this image. "
    "Carefully asking me informative questions to maximize your information "
    "about this image content. Each time ask one question only without giving "
    "an answer. Avoid asking yes/no questions. "
    'I\'ll put my answer beginning with "Answer:".'
)
DEFAULT_QUESTION_INSTR = "Next Question. Avoid asking yes/no questions. Question:"
DEFAULT_TASK_A = (
    "Answer given questions. If you are not sure about the answer, say you "
    "don't know honestly. Don't imagine any contents that are not in the image."
)
DEFAULT_ANSWER_INSTR_PREFIX = QUESTION_MARKER + " "
DEFAULT_ANSWER_INSTR_SUFFIX = " " + ANSWER_MARKER
DEFAULT_SUMMARIZE_INSTR = (
    "Now summarize the information you get in a few sentences. "
    "Ignore the questions with answers no or not sure. "
    "Don't add information. Don't miss information. Summary:"
)
DEFAULT_FIRST_QUESTION = "Describe the image in detail."
DEFAULT_SECTION_SEPARATOR = "\n"


class InvalidTemplateError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class PromptTemplateSet:
    """Instruction strings of the questioner, answerer and summarizer.

    Attributes:
        task_q: Questioner task framing, also leads the summarizer context.
        question_instr: Cue closing the questioner context.
        task_a: Answerer task framing, carries the uncertainty prompt.
        answer_instr_prefix: Text before the question in the answerer cue.
        answer_instr_suffix: Text after the question in the answerer cue.
        summarize_instr: Cue closing the summarizer context.
        first_question: Question opening every dialogue.
        section_separator: Text between framing, chat log and cue.
        chat_separator: Text between two chat log blocks.
        include_task_q_in_summary: Whether the summarizer context starts with `task_q`.
    """

    task_q: str = DEFAULT_TASK_Q
    question_instr: str = DEFAULT_QUESTION_INSTR
    task_a: str = DEFAULT_TASK_A
    answer_instr_prefix: str = DEFAULT_ANSWER_INSTR_PREFIX
    answer_instr_suffix: str = DEFAULT_ANSWER_INSTR_SUFFIX
    summarize_instr: str = DEFAULT_SUMMARIZE_INSTR
    first_question: str = DEFAULT_FIRST_QUESTION
    section_separator: str = DEFAULT_SECTION_SEPARATOR
    chat_separator: str = DEFAULT_CHAT_SEPARATOR
    include_task_q_in_summary: bool = True

    def __post_init__(self) -> None:
        if not self.first_question.strip():
            raise InvalidTemplateError("first_question cannot be empty")
        if ANSWER_MARKER in self.first_question:
            raise InvalidTemplateError(
                f"first_question cannot contain '{ANSWER_MARKER}'"
            )

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @staticmethod
    def from_mapping(mapping: Mapping[str, Any]) -> "PromptTemplateSet":
        """Build a template set, unspecified fields keep their default.

        Raises:
            InvalidTemplateError: On unknown keys or wrongly typed values.
        """
        fields = {field.name: field for field in dataclasses.fields(PromptTemplateSet)}
        unknown = set(mapping) - set(fields)
        if unknown:
            raise InvalidTemplateError(
                f"Unknown template fields: {', '.join(sorted(unknown))}"
            )
        for key, value in mapping.items():
            expected = bool if key == "include_task_q_in_summary" else str
            if not isinstance(value, expected):
                raise InvalidTemplateError(
                    f"Template field '{key}' must be {expected.__name__}"
                )
        return PromptTemplateSet(**mapping)

    @staticmethod
    def from_file(path: Union[str, os.PathLike]) -> "PromptTemplateSet":
        """Build a template set from a TOML, JSON or YAML override file."""
        return PromptTemplateSet.from_mapping(load_document(path))


def _compose(templates: PromptTemplateSet, *parts: str) -> str:
    return templates.section_separator.join(parts)


def build_questioner_context(
    templates: PromptTemplateSet, transcript: Transcript
) -> str:
    """Context asking the questioner for its next question."""
    return _compose(
        templates,
        templates.task_q,
        render_chat_log(transcript, templates.chat_separator),
        templates.question_instr,
    )


def build_answerer_context(
    templates: PromptTemplateSet, transcript: Transcript, question: str
) -> str:
    """Context asking the answerer to answer `question` about the image."""
    return _compose(
        templates,
        templates.task_a,
        render_chat_log(transcript, templates.chat_separator),
        f"{templates.answer_instr_prefix}{question}{templates.answer_instr_suffix}",
    )


def build_summarizer_context(
    templates: PromptTemplateSet, transcript: Transcript
) -> str:
    """Context asking the summarizer for the final caption."""
    chat_log = render_chat_log(transcript, templates.chat_separator)
    if templates.include_task_q_in_summary:
        return _compose(templates, templates.task_q, chat_log, templates.summarize_instr)
    return _compose(templates, chat_log, templates.summarize_instr)
