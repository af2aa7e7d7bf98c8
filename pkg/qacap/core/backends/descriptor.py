# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
from types import MappingProxyType
from typing import Any, Mapping, Optional

from qacap.core.utils import BaseEnum

DEFAULT_CHAT_AUTH_ENV_VAR = "OPENAI_API_KEY"
MAX_TEMPERATURE = 2.0


class InvalidDescriptorError(ValueError):
    pass


class RoleEnum(BaseEnum):
    """Role a backend plays in a dialogue.

    Attributes:
        QUESTIONER: Generates the next question from the chat log.
        ANSWERER: Answers questions from the image.
        SUMMARIZER: Turns the chat log into the final caption.
    """

    QUESTIONER = "questioner"
    ANSWERER = "answerer"
    SUMMARIZER = "summarizer"


class BackendKindEnum(BaseEnum):
    """Transport of a backend.

    Attributes:
        CHAT_HTTP: OpenAI-compatible chat completions endpoint.
        VQA_HTTP: Visual question answering endpoint.
        SCRIPTED: Deterministic in-process responses.
    """

    CHAT_HTTP = "chat_http"
    VQA_HTTP = "vqa_http"
    SCRIPTED = "scripted"


class OnExhaustedEnum(BaseEnum):
    """What a scripted backend does once its responses are used up."""

    REPEAT_LAST = "repeat_last"
    ERROR = "error"


@dataclasses.dataclass(frozen=True)
class _RoleDefaults:
    temperature: float
    max_tokens: int


ROLE_DEFAULTS = {
    RoleEnum.QUESTIONER: _RoleDefaults(temperature=1.0, max_tokens=256),
    RoleEnum.ANSWERER: _RoleDefaults(temperature=0.0, max_tokens=128),
    RoleEnum.SUMMARIZER: _RoleDefaults(temperature=0.0, max_tokens=512),
}

DEFAULT_TIMEOUT = 60.0
DEFAULT_MAX_RETRIES = 3
DEFAULT_BACKOFF = 0.5


@dataclasses.dataclass(frozen=True)
class ScriptedBehavior:
    """Canned responses of a scripted backend.

    Attributes:
        responses: Responses returned in order.
        on_exhausted: Behavior once every response was returned.
        per_image: Responses replacing `responses` for specific image refs.
    """

    responses: tuple[str, ...]
    on_exhausted: OnExhaustedEnum = OnExhaustedEnum.REPEAT_LAST
    per_image: Mapping[str, tuple[str, ...]] = dataclasses.field(
        default_factory=dict
    )

    def __post_init__(self) -> None:
        object.__setattr__(self, "responses", tuple(self.responses))
        object.__setattr__(self, "on_exhausted", OnExhaustedEnum(self.on_exhausted))
        object.__setattr__(
            self,
            "per_image",
            MappingProxyType(
                {ref: tuple(script) for ref, script in self.per_image.items()}
            ),
        )
        if not self.responses:
            raise InvalidDescriptorError("scripted responses cannot be empty")
        for image_ref, script in self.per_image.items():
            if not script:
                raise InvalidDescriptorError(
                    f"scripted responses for '{image_ref}' cannot be empty"
                )

    def script_for(self, image_ref: Optional[str]) -> tuple[str, ...]:
        """Responses used for `image_ref`."""
        if image_ref is not None and image_ref in self.per_image:
            return self.per_image[image_ref]
        return self.responses

    def to_dict(self) -> dict[str, Any]:
        data = {
            "responses": list(self.responses),
            "on_exhausted": self.on_exhausted.value,
        }
        if self.per_image:
            data["per_image"] = {
                ref: list(script) for ref, script in sorted(self.per_image.items())
            }
        return data

    @staticmethod
    def from_dict(data: Mapping[str, Any]) -> "ScriptedBehavior":
        return ScriptedBehavior(
            responses=tuple(data["responses"]),
            on_exhausted=OnExhaustedEnum(
                data.get("on_exhausted", OnExhaustedEnum.REPEAT_LAST.value)
            ),
            per_image={
                ref: tuple(script)
                for ref, script in data.get("per_image", {}).items()
            },
        )


@dataclasses.dataclass(frozen=True)
class BackendDescriptor:
    """Where and how to reach one model backend.

    Attributes:
        role: Role played in the dialogue.
        kind: Transport.
        endpoint: Base URL, empty for scripted backends.
        model_id: Model identifier sent to the endpoint.
        temperature: Sampling temperature in [0, 2].
        max_tokens: Completion length limit.
        timeout: Request timeout in seconds.
        max_retries: Retries of a transient failure, total attempts is one more.
        backoff: Base delay in seconds of the exponential backoff.
        auth_env_var: Environment variable holding the API key.
        script: Canned responses, scripted backends only.
    """

    role: RoleEnum
    kind: BackendKindEnum
    endpoint: str = ""
    model_id: str = ""
    temperature: float = 0.0
    max_tokens: int = 256
    timeout: float = DEFAULT_TIMEOUT
    max_retries: int = DEFAULT_MAX_RETRIES
    backoff: float = DEFAULT_BACKOFF
    auth_env_var: str = ""
    script: Optional[ScriptedBehavior] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "role", RoleEnum(self.role))
        object.__setattr__(self, "kind", BackendKindEnum(self.kind))
        if not 0.0 <= self.temperature <= MAX_TEMPERATURE:
            raise InvalidDescriptorError(
                f"{self.role}: temperature must be within [0, {MAX_TEMPERATURE}], "
                f"got {self.temperature}"
            )
        if self.max_tokens < 1:
            raise InvalidDescriptorError(
                f"{self.role}: max_tokens must be >= 1, got {self.max_tokens}"
            )
        if self.timeout <= 0:
            raise InvalidDescriptorError(f"{self.role}: timeout must be positive")
        if self.max_retries < 0:
            raise InvalidDescriptorError(f"{self.role}: max_retries must be >= 0")
        if self.backoff < 0:
            raise InvalidDescriptorError(f"{self.role}: backoff must be >= 0")
        if self.kind == BackendKindEnum.SCRIPTED:
            if self.endpoint or self.auth_env_var:
                raise InvalidDescriptorError(
                    f"{self.role}: scripted backends take no endpoint nor auth_env_var"
                )
            if self.script is None:
                raise InvalidDescriptorError(
                    f"{self.role}: scripted backends need a script"
                )
        else:
            if not self.endpoint:
                raise InvalidDescriptorError(
                    f"{self.role}: {self.kind} backends need an endpoint"
                )
            if self.script is not None:
                raise InvalidDescriptorError(
                    f"{self.role}: only scripted backends take a script"
                )

    @property
    def identifier(self) -> str:
        """Identifier recorded in transcripts, `<kind>:<model_id>`."""
        return f"{self.kind.value}:{self.model_id or self.role.value}"

    @property
    def api_key_env_var(self) -> str:
        """Environment variable read for the API key, empty when none applies."""
        if self.auth_env_var:
            return self.auth_env_var
        if self.kind == BackendKindEnum.CHAT_HTTP:
            return DEFAULT_CHAT_AUTH_ENV_VAR
        return ""

    @staticmethod
    def for_role(role: RoleEnum, **fields: Any) -> "BackendDescriptor":
        """Factory applying the sampling defaults of `role` to missing fields."""
        role = RoleEnum(role)
        defaults = ROLE_DEFAULTS[role]
        fields.setdefault("temperature", defaults.temperature)
        fields.setdefault("max_tokens", defaults.max_tokens)
        return BackendDescriptor(role=role, **fields)

    def as_role(self, role: RoleEnum) -> "BackendDescriptor":
        """Same backend playing `role`, with that role's sampling defaults."""
        defaults = ROLE_DEFAULTS[RoleEnum(role)]
        return dataclasses.replace(
            self,
            role=role,
            temperature=defaults.temperature,
            max_tokens=defaults.max_tokens,
        )

    def to_dict(self) -> dict[str, Any]:
        """Serializable form. Only the environment variable name is kept, never its value."""
        data = {
            "role": self.role.value,
            "kind": self.kind.value,
            "endpoint": self.endpoint,
            "model_id": self.model_id,
            "temperature": self.temperature,
            "max_tokens": self.max_tokens,
            "timeout": self.timeout,
            "max_retries": self.max_retries,
            "backoff": self.backoff,
            "auth_env_var": self.auth_env_var,
        }
        if self.script is not None:
            data["script"] = self.script.to_dict()
        return data

    @staticmethod
    def from_dict(role: RoleEnum, data: Mapping[str, Any]) -> "BackendDescriptor":
        fields = {key: value for key, value in data.items() if key != "role"}
        if "script" in fields:
            fields["script"] = ScriptedBehavior.from_dict(fields["script"])
        return BackendDescriptor.for_role(role, **fields)
