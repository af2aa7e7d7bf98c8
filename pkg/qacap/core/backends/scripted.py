# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import logging
import threading
from typing import Optional

from qacap.core.backends.base import Backend, ScriptExhaustedError
from qacap.core.backends.descriptor import BackendDescriptor, OnExhaustedEnum

logger = logging.getLogger("qacap").getChild("scripted_backend")


class ScriptedBackend(Backend):
    """Deterministic backend replaying canned responses.

    One cursor is kept per image ref, so dialogues about different images read
    their script independently whatever the interleaving of workers.
    """

    def __init__(self, descriptor: BackendDescriptor):
        super().__init__(descriptor)
        self._behavior = descriptor.script
        self._lock = threading.Lock()
        self._cursors: dict[Optional[str], int] = {}

    def _pop(self, image_ref: Optional[str]) -> str:
        script = self._behavior.script_for(image_ref)
        with self._lock:
            position = self._cursors.get(image_ref, 0)
            if position >= len(script):
                if self._behavior.on_exhausted == OnExhaustedEnum.ERROR:
                    raise ScriptExhaustedError(
                        f"{self.descriptor.role} script exhausted after "
                        f"{len(script)} responses (image {image_ref!r})"
                    )
                response = script[-1]
            else:
                response = script[position]
            self._cursors[image_ref] = position + 1
        logger.debug(
            f"{self.descriptor.role} response #{position + 1} for {image_ref!r}"
        )
        return response

    def complete_text(self, context: str, image_ref: Optional[str] = None) -> str:
        return self._pop(image_ref)

    def answer_visual(self, image_ref: str, context: str) -> str:
        return self._pop(image_ref)
