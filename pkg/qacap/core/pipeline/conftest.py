# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from typing import Optional, Sequence

import pytest

from qacap.conftest import scripted_descriptor
from qacap.core.backends import Backend, BackendDescriptor, RoleEnum
from qacap.core.pipeline import DialogueBackends


class RecordingBackend(Backend):
    """Backend returning `responses` in order and recording every context."""

    def __init__(self, descriptor: BackendDescriptor, responses: Sequence[str]):
        super().__init__(descriptor)
        self.contexts: list[str] = []
        self._responses = list(responses)

    def _next(self, context: str) -> str:
        self.contexts.append(context)
        if not self._responses:
            raise AssertionError(f"{self.descriptor.role} called once too often")
        return self._responses.pop(0)

    def complete_text(self, context: str, image_ref: Optional[str] = None) -> str:
        return self._next(context)

    def answer_visual(self, image_ref: str, context: str) -> str:
        return self._next(context)


def recording_backends(
    questions: Sequence[str], answers: Sequence[str], captions: Sequence[str]
) -> DialogueBackends:
    return DialogueBackends(
        questioner=RecordingBackend(scripted_descriptor(RoleEnum.QUESTIONER, ["-"]), questions),
        answerer=RecordingBackend(scripted_descriptor(RoleEnum.ANSWERER, ["-"]), answers),
        summarizer=RecordingBackend(scripted_descriptor(RoleEnum.SUMMARIZER, ["-"]), captions),
    )


@pytest.fixture
def ten_questions() -> list[str]:
    return [f"Question number {index}?" for index in range(2, 11)]


@pytest.fixture
def ten_answers() -> list[str]:
    return [f"answer number {index}" for index in range(1, 11)]
