# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from qacap.core.backends.base import (
    AuthMissingError,
    Backend,
    BackendError,
    ImageUnavailableError,
    ScriptExhaustedError,
    TokenUsage,
    TransportError,
    UnsupportedOperationError,
)
from qacap.core.backends.descriptor import (
    DEFAULT_CHAT_AUTH_ENV_VAR,
    ROLE_DEFAULTS,
    BackendDescriptor,
    BackendKindEnum,
    InvalidDescriptorError,
    OnExhaustedEnum,
    RoleEnum,
    ScriptedBehavior,
)
from qacap.core.backends.http import ChatHttpBackend, VqaHttpBackend
from qacap.core.backends.scripted import ScriptedBackend
