# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

"""
Backend-free model of a question/answer dialogue about one image.

A `Transcript` holds the ordered `Turn` values of a dialogue, the final caption
and the run metadata. `trim_question` and `trim_answer` clean raw model output
and `render_chat_log` produces the chat log included in every prompt context.
"""

from __future__ import annotations

import dataclasses
import json
from datetime import datetime
from typing import Any, Optional

from qacap.core.utils import EPOCH, format_timestamp, parse_timestamp

QUESTION_MARKER = "Question:"
ANSWER_MARKER = "Answer:"

DEFAULT_CHAT_SEPARATOR = "\n"


class EmptyQuestionError(ValueError):
    """Nothing is left of a question once trimmed."""

    def __init__(self, raw: str):
        self.raw = raw
        super().__init__(f"Question is empty after trimming: {raw!r}")


class EmptyAnswerError(ValueError):
    """Nothing is left of an answer once trimmed."""

    def __init__(self, raw: str):
        self.raw = raw
        super().__init__(f"Answer is empty after trimming: {raw!r}")


class InvalidTranscriptError(ValueError):
    pass


def _truncate_at(raw: str, marker: str) -> str:
    position = raw.find(marker)
    if position != -1:
        raw = raw[:position]
    return raw.strip()


def trim_question(raw: str) -> str:
    """Drop a fabricated answer from a questioner output.

    Everything from the first `Answer:` marker on is removed, then surrounding
    whitespace is stripped.

    Args:
        raw: Raw questioner output.

    Returns:
        The trimmed question.

    Raises:
        EmptyQuestionError: If nothing is left after trimming.
    """
    question = _truncate_at(raw, ANSWER_MARKER)
    if not question:
        raise EmptyQuestionError(raw)
    return question


def trim_answer(raw: str) -> str:
    """Drop a follow-up question from an answerer output.

    Everything from the first `Question:` marker on is removed, then surrounding
    whitespace is stripped.

    Args:
        raw: Raw answerer output.

    Returns:
        The trimmed answer.

    Raises:
        EmptyAnswerError: If nothing is left after trimming.
    """
    answer = _truncate_at(raw, QUESTION_MARKER)
    if not answer:
        raise EmptyAnswerError(raw)
    return answer


@dataclasses.dataclass(frozen=True)
class Turn:
    """One question/answer exchange.

    Attributes:
        index: 1-based turn number.
        question: Trimmed question.
        answer: Trimmed answer, None while the turn is in progress.
        raw_question: Question as produced (or configured) before trimming.
        raw_answer: Answer as produced before trimming, None while in progress.
    """

    index: int
    question: str
    answer: Optional[str] = None
    raw_question: str = ""
    raw_answer: Optional[str] = None

    def __post_init__(self) -> None:
        if self.index < 1:
            raise InvalidTranscriptError(f"turn index must be >= 1, got {self.index}")
        if not self.question.strip():
            raise InvalidTranscriptError(f"turn {self.index}: question is empty")
        if ANSWER_MARKER in self.question:
            raise InvalidTranscriptError(
                f"turn {self.index}: question contains '{ANSWER_MARKER}'"
            )
        if self.answer is not None:
            if not self.answer.strip():
                raise InvalidTranscriptError(f"turn {self.index}: answer is empty")
            if QUESTION_MARKER in self.answer:
                raise InvalidTranscriptError(
                    f"turn {self.index}: answer contains '{QUESTION_MARKER}'"
                )

    @property
    def answered(self) -> bool:
        return self.answer is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "index": self.index,
            "question": self.question,
            "answer": self.answer,
            "raw_question": self.raw_question,
            "raw_answer": self.raw_answer,
        }

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "Turn":
        return Turn(
            index=data["index"],
            question=data["question"],
            answer=data.get("answer"),
            raw_question=data.get("raw_question", data["question"]),
            raw_answer=data.get("raw_answer"),
        )


@dataclasses.dataclass(frozen=True)
class Transcript:
    """Dialogue about one image, with its final caption and run metadata.

    Attributes:
        image_ref: Opaque identifier or URI of the image.
        turns: Ordered turns, indices contiguous from 1.
        caption: Final caption, None until summarized (or when aborted).
        questioner_id: Identifier of the questioner backend.
        answerer_id: Identifier of the answerer backend.
        summarizer_id: Identifier of the summarizer backend.
        config_digest: Stable hash of the run configuration.
        created_at: UTC creation time.
    """

    image_ref: str
    turns: tuple[Turn, ...] = ()
    caption: Optional[str] = None
    questioner_id: str = ""
    answerer_id: str = ""
    summarizer_id: str = ""
    config_digest: str = ""
    created_at: datetime = EPOCH

    def __post_init__(self) -> None:
        object.__setattr__(self, "turns", tuple(self.turns))
        for expected, turn in enumerate(self.turns, start=1):
            if turn.index != expected:
                raise InvalidTranscriptError(
                    f"{self.image_ref}: turn indices must be contiguous from 1, "
                    f"found {turn.index} at position {expected}"
                )
            if not turn.answered and expected != len(self.turns):
                raise InvalidTranscriptError(
                    f"{self.image_ref}: only the last turn may be unanswered"
                )
        if self.caption is not None:
            if not all(turn.answered for turn in self.turns):
                raise InvalidTranscriptError(
                    f"{self.image_ref}: a captioned transcript must have every turn answered"
                )

    @property
    def completed_turns(self) -> tuple[Turn, ...]:
        """Turns having an answer."""
        return tuple(turn for turn in self.turns if turn.answered)

    @property
    def completed(self) -> bool:
        """Whether the dialogue reached its caption."""
        return self.caption is not None

    def with_turn(self, turn: Turn) -> "Transcript":
        """Copy of the transcript with `turn` appended (or replacing an in-progress last turn)."""
        turns = self.turns
        if turns and not turns[-1].answered and turns[-1].index == turn.index:
            turns = turns[:-1]
        return dataclasses.replace(self, turns=turns + (turn,))

    def to_dict(self) -> dict[str, Any]:
        return {
            "image_ref": self.image_ref,
            "turns": [turn.to_dict() for turn in self.turns],
            "caption": self.caption,
            "questioner_id": self.questioner_id,
            "answerer_id": self.answerer_id,
            "summarizer_id": self.summarizer_id,
            "config_digest": self.config_digest,
            "created_at": format_timestamp(self.created_at),
        }

    def to_json(self) -> str:
        """One JSONL line, without the trailing newline."""
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @staticmethod
    def from_dict(data: dict[str, Any]) -> "Transcript":
        return Transcript(
            image_ref=data["image_ref"],
            turns=tuple(Turn.from_dict(turn) for turn in data.get("turns", [])),
            caption=data.get("caption"),
            questioner_id=data.get("questioner_id", ""),
            answerer_id=data.get("answerer_id", ""),
            summarizer_id=data.get("summarizer_id", ""),
            config_digest=data.get("config_digest", ""),
            created_at=parse_timestamp(data["created_at"]),
        )

    @staticmethod
    def from_json(line: str) -> "Transcript":
        return Transcript.from_dict(json.loads(line))


def render_chat_log(
    transcript: Transcript, separator: str = DEFAULT_CHAT_SEPARATOR
) -> str:
    """Render the answered turns as `Question: q\\nAnswer: a` blocks.

    Args:
        transcript: Transcript to render, an in-progress turn is skipped.
        separator: Text joining two consecutive blocks.

    Returns:
        The chat log, empty for a transcript without answered turns.
    """
    return separator.join(
        f"{QUESTION_MARKER} {turn.question}\n{ANSWER_MARKER} {turn.answer}"
        for turn in transcript.completed_turns
    )
