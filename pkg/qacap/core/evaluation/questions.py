# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

"""
Statistics over the questions and answers of dialogue transcripts: unique
questions, questions expecting a yes/no answer and answers admitting
uncertainty.
"""

from __future__ import annotations

import dataclasses
from collections.abc import Iterable, Sequence

from qacap.core.dialogue import Transcript, Turn

TRAILING_PUNCTUATION = ".?!,;:"

YES_NO_LEADERS = frozenset(
    {
        "is",
        "are",
        "was",
        "were",
        "am",
        "do",
        "does",
        "did",
        "can",
        "could",
        "will",
        "would",
        "shall",
        "should",
        "has",
        "have",
        "had",
        "may",
        "might",
        "must",
    }
)

DEFAULT_UNCERTAINTY_PHRASES = (
    "don't know",
    "do not know",
    "not sure",
    "cannot tell",
    "can't tell",
)


def normalize_question(text: str) -> str:
    """Casefold, collapse whitespace and strip trailing punctuation."""
    collapsed = " ".join(text.casefold().split())
    return collapsed.rstrip(TRAILING_PUNCTUATION + " ")


def normalize_answer(text: str) -> str:
    return " ".join(text.casefold().replace("’", "'").split())


@dataclasses.dataclass(frozen=True)
class QuestionKey:
    """Identity of a question when counting unique ones."""

    normalized: str

    @classmethod
    def from_text(cls, text: str) -> "QuestionKey":
        return cls(normalize_question(text))


@dataclasses.dataclass(frozen=True)
class QuestionStats:
    """Unique question counts of a corpus.

    Attributes:
        per_dialogue_unique_mean: Unique questions per dialogue, averaged.
        total_unique: Unique questions over the whole corpus.
        total_questions: Questions asked over the whole corpus.
        dialogues: Number of dialogues.
        questions_per_dialogue: Largest number of questions of a dialogue.
    """

    per_dialogue_unique_mean: float
    total_unique: int
    total_questions: int
    dialogues: int
    questions_per_dialogue: int


@dataclasses.dataclass(frozen=True)
class RateCount:
    """Number of matching items among counted ones."""

    count: int
    total: int

    @property
    def ratio(self) -> float:
        return self.count / self.total if self.total else 0.0


def asked_turns(transcript: Transcript, questioner_turns_only: bool) -> list[Turn]:
    """Turns of `transcript`, the hard-coded opening one dropped when asked to."""
    if questioner_turns_only:
        return [turn for turn in transcript.turns if turn.index != 1]
    return list(transcript.turns)


def unique_question_stats(
    transcripts: Sequence[Transcript], questioner_turns_only: bool = False
) -> QuestionStats:
    """Unique questions per dialogue and over the corpus.

    Args:
        transcripts: Dialogue transcripts.
        questioner_turns_only: Whether the hard-coded opening question is left out.

    Raises:
        ValueError: If `transcripts` is empty.
    """
    if not transcripts:
        raise ValueError("No transcript to compute question statistics on")
    corpus_keys = set()
    per_dialogue = []
    total_questions = 0
    questions_per_dialogue = 0
    for transcript in transcripts:
        keys = [
            QuestionKey.from_text(turn.question)
            for turn in asked_turns(transcript, questioner_turns_only)
        ]
        per_dialogue.append(len(set(keys)))
        corpus_keys.update(keys)
        total_questions += len(keys)
        questions_per_dialogue = max(questions_per_dialogue, len(keys))
    return QuestionStats(
        per_dialogue_unique_mean=sum(per_dialogue) / len(per_dialogue),
        total_unique=len(corpus_keys),
        total_questions=total_questions,
        dialogues=len(transcripts),
        questions_per_dialogue=questions_per_dialogue,
    )


def group_by_questioner(
    transcripts: Iterable[Transcript],
) -> dict[str, list[Transcript]]:
    """Transcripts per questioner identifier, in order of first appearance."""
    groups: dict[str, list[Transcript]] = {}
    for transcript in transcripts:
        groups.setdefault(transcript.questioner_id, []).append(transcript)
    return groups


def is_yes_no_question(question: str) -> bool:
    """Whether the question opens with an auxiliary or modal verb."""
    tokens = normalize_question(question).split()
    return bool(tokens) and tokens[0].strip(TRAILING_PUNCTUATION) in YES_NO_LEADERS


def is_uncertain_answer(
    answer: str, phrases: Sequence[str] = DEFAULT_UNCERTAINTY_PHRASES
) -> bool:
    """Whether the answer contains one of the uncertainty `phrases`."""
    normalized = normalize_answer(answer)
    return any(normalize_answer(phrase) in normalized for phrase in phrases)


def yes_no_rate(
    transcripts: Iterable[Transcript], questioner_turns_only: bool = False
) -> RateCount:
    count = total = 0
    for transcript in transcripts:
        for turn in asked_turns(transcript, questioner_turns_only):
            total += 1
            count += is_yes_no_question(turn.question)
    return RateCount(count, total)


def uncertain_answer_rate(
    transcripts: Iterable[Transcript],
    questioner_turns_only: bool = False,
    phrases: Sequence[str] = DEFAULT_UNCERTAINTY_PHRASES,
) -> RateCount:
    count = total = 0
    for transcript in transcripts:
        for turn in asked_turns(transcript, questioner_turns_only):
            if not turn.answered:
                continue
            total += 1
            count += is_uncertain_answer(turn.answer, phrases)
    return RateCount(count, total)
