# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import abc
import threading
from typing import TYPE_CHECKING, Optional

from qacap.core.backends.descriptor import BackendDescriptor, BackendKindEnum

if TYPE_CHECKING:
    import httpx


class BackendError(Exception):
    """Base class of backend failures."""


class TransportError(BackendError):
    """Request failed for good, retries included."""

    def __init__(self, status: Optional[int], body: str):
        self.status = status
        self.body = body
        super().__init__(f"Transport failure (status={status}): {body}")


class AuthMissingError(BackendError):
    """The API key environment variable is unset."""

    def __init__(self, env_var: str):
        self.env_var = env_var
        super().__init__(f"Environment variable {env_var} holding the API key is unset")


class ScriptExhaustedError(BackendError):
    """A scripted backend has no response left."""


class ImageUnavailableError(BackendError):
    """The answering service cannot load the image."""

    def __init__(self, image_ref: str, body: str = ""):
        self.image_ref = image_ref
        self.body = body
        super().__init__(f"Image '{image_ref}' is unavailable: {body}")


class UnsupportedOperationError(BackendError):
    pass


class TokenUsage:
    """Token counters reported by chat endpoints, safe to update concurrently."""

    def __init__(self):
        self._lock = threading.Lock()
        self.prompt_tokens = 0
        self.completion_tokens = 0
        self.total_tokens = 0

    def add(self, usage: dict) -> None:
        with self._lock:
            self.prompt_tokens += int(usage.get("prompt_tokens", 0) or 0)
            self.completion_tokens += int(usage.get("completion_tokens", 0) or 0)
            self.total_tokens += int(usage.get("total_tokens", 0) or 0)

    def to_dict(self) -> dict[str, int]:
        with self._lock:
            return {
                "prompt_tokens": self.prompt_tokens,
                "completion_tokens": self.completion_tokens,
                "total_tokens": self.total_tokens,
            }


class Backend(abc.ABC):
    """Model backend playing one dialogue role.

    Handles are shareable between concurrent dialogues.
    """

    def __init__(self, descriptor: BackendDescriptor):
        self._descriptor = descriptor
        self._usage = TokenUsage()

    @property
    def descriptor(self) -> BackendDescriptor:
        return self._descriptor

    @property
    def identifier(self) -> str:
        return self._descriptor.identifier

    @property
    def usage(self) -> TokenUsage:
        """Tokens consumed through this handle, zero when never reported."""
        return self._usage

    def complete_text(self, context: str, image_ref: Optional[str] = None) -> str:
        """Raw completion of a text context.

        Args:
            context: Prompt context, sent verbatim.
            image_ref: Image the dialogue is about, only scripted backends use it.

        Returns:
            The raw completion.
        """
        raise UnsupportedOperationError(
            f"{self._descriptor.kind} backends cannot complete text"
        )

    def answer_visual(self, image_ref: str, context: str) -> str:
        """Raw answer of a visual question answering model.

        Args:
            image_ref: Image reference resolvable by the service.
            context: Prompt context, sent verbatim.

        Returns:
            The raw answer.
        """
        raise UnsupportedOperationError(
            f"{self._descriptor.kind} backends cannot answer visual questions"
        )

    def close(self) -> None:
        """Release transport resources."""

    def __enter__(self) -> "Backend":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        self.close()

    @staticmethod
    def from_descriptor(
        descriptor: BackendDescriptor,
        transport: Optional["httpx.BaseTransport"] = None,
    ) -> "Backend":
        """Factory method building the backend matching `descriptor.kind`.

        Args:
            descriptor: Backend description.
            transport: Transport handed to the HTTP client, tests pass a stub.

        Returns:
            A backend handle.
        """
        if descriptor.kind == BackendKindEnum.SCRIPTED:
            from qacap.core.backends.scripted import ScriptedBackend

            return ScriptedBackend(descriptor)
        from qacap.core.backends.http import ChatHttpBackend, VqaHttpBackend

        if descriptor.kind == BackendKindEnum.CHAT_HTTP:
            return ChatHttpBackend(descriptor, transport=transport)
        return VqaHttpBackend(descriptor, transport=transport)
