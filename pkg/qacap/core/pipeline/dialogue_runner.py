# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
import logging
from typing import TYPE_CHECKING, Callable, NoReturn, Optional

from qacap.core.backends import Backend, BackendError
from qacap.core.dialogue import (
    EmptyAnswerError,
    EmptyQuestionError,
    Transcript,
    Turn,
    trim_answer,
    trim_question,
)
from qacap.core.prompts import (
    build_answerer_context,
    build_questioner_context,
    build_summarizer_context,
)
from qacap.core.utils import EPOCH, utc_now

if TYPE_CHECKING:
    from qacap.core.config import RunConfig
    from qacap.core.pipeline.store import TranscriptWriter

logger = logging.getLogger("qacap").getChild("dialogue_runner")


class EmptyCaptionError(ValueError):
    pass


class DialogueAbortedError(Exception):
    """A dialogue stopped before its caption.

    Attributes:
        turn: Turn being played, None when the summary failed.
        cause: Underlying error.
        transcript: Partial transcript, caption absent.
    """

    def __init__(self, turn: Optional[int], cause: Exception, transcript: Transcript):
        self.turn = turn
        self.cause = cause
        self.transcript = transcript
        stage = "summary" if turn is None else f"turn {turn}"
        super().__init__(
            f"Dialogue about {transcript.image_ref!r} aborted at {stage}: "
            f"{cause.__class__.__name__}: {cause}"
        )


@dataclasses.dataclass
class DialogueBackends:
    """Backend handles of the three roles."""

    questioner: Backend
    answerer: Backend
    summarizer: Backend

    @staticmethod
    def from_config(config: RunConfig) -> "DialogueBackends":
        return DialogueBackends(
            questioner=Backend.from_descriptor(config.questioner),
            answerer=Backend.from_descriptor(config.answerer),
            summarizer=Backend.from_descriptor(config.summarizer),
        )

    def token_usage(self) -> dict[str, dict[str, int]]:
        return {
            "questioner": self.questioner.usage.to_dict(),
            "answerer": self.answerer.usage.to_dict(),
            "summarizer": self.summarizer.usage.to_dict(),
        }

    def close(self) -> None:
        for backend in (self.questioner, self.answerer, self.summarizer):
            backend.close()


class DialogueRunner:
    """Plays captioning dialogues with a fixed configuration and backends."""

    def __init__(
        self,
        config: RunConfig,
        backends: DialogueBackends,
        clock: Callable = utc_now,
    ):
        """Dialogue runner.

        Args:
            config: Run configuration.
            backends: Questioner, answerer and summarizer handles.
            clock: Source of the transcript creation time.
        """
        self._config = config
        self._backends = backends
        self._clock = clock

    @property
    def config(self) -> RunConfig:
        return self._config

    @property
    def backends(self) -> DialogueBackends:
        return self._backends

    def _ask(self, transcript: Transcript) -> tuple[str, str]:
        """Next question from the questioner, re-asked while empty after trimming."""
        context = build_questioner_context(self._config.templates, transcript)
        attempts = self._config.max_question_retries + 1
        for attempt in range(attempts):
            raw = self._backends.questioner.complete_text(
                context, image_ref=transcript.image_ref
            )
            try:
                return trim_question(raw), raw
            except EmptyQuestionError as e:
                if attempt + 1 == attempts:
                    raise
                logger.warning(
                    f"{transcript.image_ref!r}: {e}, re-asking the questioner "
                    f"({attempt + 1}/{self._config.max_question_retries})"
                )
        raise AssertionError("unreachable")

    def _answer(self, transcript: Transcript, question: str) -> tuple[str, str]:
        """Answer from the answerer, re-asked while empty after trimming."""
        context = build_answerer_context(self._config.templates, transcript, question)
        attempts = self._config.max_answer_retries + 1
        for attempt in range(attempts):
            raw = self._backends.answerer.answer_visual(transcript.image_ref, context)
            try:
                return trim_answer(raw), raw
            except EmptyAnswerError as e:
                if attempt + 1 == attempts:
                    raise
                logger.warning(
                    f"{transcript.image_ref!r}: {e}, re-asking the answerer "
                    f"({attempt + 1}/{self._config.max_answer_retries})"
                )
        raise AssertionError("unreachable")

    def _summarize(self, transcript: Transcript) -> str:
        context = build_summarizer_context(self._config.templates, transcript)
        caption = self._backends.summarizer.complete_text(
            context, image_ref=transcript.image_ref
        ).strip()
        if not caption:
            raise EmptyCaptionError("Summarizer returned an empty caption")
        return caption

    def run(self, image_ref: str) -> Transcript:
        """Play one dialogue: opening question, follow-up rounds, summary.

        Args:
            image_ref: Image the dialogue is about.

        Returns:
            Transcript with `total_questions` answered turns and a caption.

        Raises:
            DialogueAbortedError: If a backend fails or a question/answer stays empty.
        """
        config = self._config
        transcript = Transcript(
            image_ref=image_ref,
            questioner_id=self._backends.questioner.identifier,
            answerer_id=self._backends.answerer.identifier,
            summarizer_id=self._backends.summarizer.identifier,
            config_digest=config.digest,
            created_at=self._clock(),
        )
        logger.info(f"Dialogue about {image_ref!r} started")

        for index in range(1, config.total_questions + 1):
            if index == 1:
                question = raw_question = config.first_question
            else:
                try:
                    question, raw_question = self._ask(transcript)
                except (BackendError, EmptyQuestionError) as e:
                    self._abort(index, e, transcript)
            logger.debug(f"{image_ref!r} Q{index}: {question}")
            pending = Turn(index=index, question=question, raw_question=raw_question)

            try:
                answer, raw_answer = self._answer(transcript, question)
            except (BackendError, EmptyAnswerError) as e:
                self._abort(index, e, transcript.with_turn(pending))
            logger.debug(f"{image_ref!r} A{index}: {answer}")
            transcript = transcript.with_turn(
                dataclasses.replace(pending, answer=answer, raw_answer=raw_answer)
            )

        try:
            caption = self._summarize(transcript)
        except (BackendError, EmptyCaptionError) as e:
            self._abort(None, e, transcript)
        logger.info(f"Dialogue about {image_ref!r} finished")
        return dataclasses.replace(transcript, caption=caption)

    @staticmethod
    def _abort(turn: Optional[int], cause: Exception, partial: Transcript) -> NoReturn:
        stage = "summary" if turn is None else f"turn {turn}"
        logger.error(f"Dialogue about {partial.image_ref!r} aborted at {stage}: {cause}")
        raise DialogueAbortedError(turn, cause, partial) from cause


def run_caption_dialogue(
    image_ref: str,
    config: RunConfig,
    backends: Optional[DialogueBackends] = None,
    writer: Optional[TranscriptWriter] = None,
    deterministic: bool = False,
) -> Transcript:
    """Play and persist one captioning dialogue.

    The transcript is appended to the output file before returning; an aborted
    dialogue is appended, caption absent, to the aborted file before the error
    propagates.

    Args:
        image_ref: Image the dialogue is about.
        config: Run configuration.
        backends: Backend handles, built from `config` when None.
        writer: Transcript writer, built from `config` when None.
        deterministic: Whether timestamps are pinned to the Unix epoch.

    Returns:
        The completed transcript.

    Raises:
        DialogueAbortedError: If the dialogue could not complete.
    """
    from qacap.core.pipeline.store import TranscriptWriter

    owned = backends is None
    backends = backends or DialogueBackends.from_config(config)
    writer = writer or TranscriptWriter(config.output_path, config.aborted_path)
    runner = DialogueRunner(
        config, backends, clock=(lambda: EPOCH) if deterministic else utc_now
    )
    try:
        transcript = runner.run(image_ref)
    except DialogueAbortedError as e:
        writer.write(e.transcript)
        raise
    finally:
        if owned:
            backends.close()
    writer.write(transcript)
    return transcript
