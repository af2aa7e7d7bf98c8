# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import logging
import os
import time
from typing import Any, Optional

import httpx

from qacap.core.backends.base import (
    AuthMissingError,
    Backend,
    ImageUnavailableError,
    TransportError,
)
from qacap.core.backends.descriptor import BackendDescriptor

logger = logging.getLogger("qacap").getChild("http_backend")

CHAT_COMPLETIONS_PATH = "/chat/completions"
VQA_PATH = "/vqa"

RETRYABLE_STATUS = frozenset({408, 429})
IMAGE_UNAVAILABLE_STATUS = frozenset({404, 422})


def _is_retryable(status: int) -> bool:
    return status in RETRYABLE_STATUS or status >= 500


class _HttpBackend(Backend):
    """JSON over HTTP POST with retries and exponential backoff."""

    def __init__(
        self,
        descriptor: BackendDescriptor,
        transport: Optional[httpx.BaseTransport] = None,
    ):
        super().__init__(descriptor)
        self._client = httpx.Client(
            base_url=descriptor.endpoint.rstrip("/"),
            timeout=descriptor.timeout,
            transport=transport,
        )

    def _headers(self) -> dict[str, str]:
        env_var = self.descriptor.api_key_env_var
        if not env_var:
            return {}
        api_key = os.environ.get(env_var)
        if not api_key:
            raise AuthMissingError(env_var)
        return {"Authorization": f"Bearer {api_key}"}

    def _sleep_before_retry(self, attempt: int) -> None:
        delay = self.descriptor.backoff * 2**attempt
        if delay > 0:
            time.sleep(delay)

    def _post(self, path: str, body: dict[str, Any]) -> httpx.Response:
        """POST `body` to `path`, retrying transient failures.

        Returns:
            The first response that is neither a transport failure nor a
            retryable status, non retryable error statuses included.

        Raises:
            TransportError: When every attempt failed.
        """
        headers = self._headers()
        attempts = self.descriptor.max_retries + 1
        status: Optional[int] = None
        detail = ""
        for attempt in range(attempts):
            if attempt:
                logger.warning(
                    f"{self.descriptor.role}: retry {attempt}/{self.descriptor.max_retries} "
                    f"of POST {path} after: {detail}"
                )
                self._sleep_before_retry(attempt - 1)
            try:
                response = self._client.post(path, json=body, headers=headers)
            except httpx.TransportError as e:
                status, detail = None, f"{e.__class__.__name__}: {e}"
                continue
            if _is_retryable(response.status_code):
                status, detail = response.status_code, response.text
                continue
            return response
        raise TransportError(status, detail)

    @staticmethod
    def _json(response: httpx.Response) -> dict[str, Any]:
        if response.is_error:
            raise TransportError(response.status_code, response.text)
        try:
            payload = response.json()
        except ValueError as e:
            raise TransportError(response.status_code, f"invalid JSON: {e}") from e
        if not isinstance(payload, dict):
            raise TransportError(response.status_code, "response is not a JSON object")
        return payload

    def close(self) -> None:
        self._client.close()


class ChatHttpBackend(_HttpBackend):
    """OpenAI-compatible chat completions client.

    The context is sent as a single user message.
    """

    def complete_text(self, context: str, image_ref: Optional[str] = None) -> str:
        descriptor = self.descriptor
        body = {
            "model": descriptor.model_id,
            "messages": [{"role": "user", "content": context}],
            "temperature": descriptor.temperature,
            "max_tokens": descriptor.max_tokens,
        }
        logger.debug(f"{descriptor.role}: chat completion ({len(context)} chars)")
        payload = self._json(self._post(CHAT_COMPLETIONS_PATH, body))
        try:
            content = payload["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as e:
            raise TransportError(
                200, f"missing choices[0].message.content in {payload!r}"
            ) from e
        if isinstance(payload.get("usage"), dict):
            self.usage.add(payload["usage"])
        return content or ""


class VqaHttpBackend(_HttpBackend):
    """Client of a visual question answering service.

    Request body `{image_ref, prompt, temperature, max_tokens}`, response
    `{answer}`. Status 404 or 422 means the image cannot be loaded.
    """

    def answer_visual(self, image_ref: str, context: str) -> str:
        descriptor = self.descriptor
        body = {
            "image_ref": image_ref,
            "prompt": context,
            "temperature": descriptor.temperature,
            "max_tokens": descriptor.max_tokens,
        }
        logger.debug(f"{descriptor.role}: visual answer for {image_ref!r}")
        response = self._post(VQA_PATH, body)
        if response.status_code in IMAGE_UNAVAILABLE_STATUS:
            raise ImageUnavailableError(image_ref, response.text)
        payload = self._json(response)
        answer = payload.get("answer")
        if not isinstance(answer, str):
            raise TransportError(response.status_code, f"missing answer in {payload!r}")
        return answer
