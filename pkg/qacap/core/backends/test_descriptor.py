# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import pytest

from qacap.core.backends import (
    BackendDescriptor,
    BackendKindEnum,
    InvalidDescriptorError,
    RoleEnum,
    ScriptedBehavior,
)


def test_for_role_applies_role_defaults():
    questioner = BackendDescriptor.for_role(
        RoleEnum.QUESTIONER, kind="chat_http", endpoint="http://llm"
    )
    answerer = BackendDescriptor.for_role(
        RoleEnum.ANSWERER, kind="vqa_http", endpoint="http://vqa"
    )
    assert (questioner.temperature, questioner.max_tokens) == (1.0, 256)
    assert (answerer.temperature, answerer.max_tokens) == (0.0, 128)
    assert questioner.timeout == 60.0
    assert questioner.max_retries == 3
    assert questioner.backoff == 0.5


def test_as_role_switches_defaults():
    questioner = BackendDescriptor.for_role(
        RoleEnum.QUESTIONER, kind="chat_http", endpoint="http://llm", model_id="gpt"
    )
    summarizer = questioner.as_role(RoleEnum.SUMMARIZER)
    assert summarizer.role == RoleEnum.SUMMARIZER
    assert (summarizer.temperature, summarizer.max_tokens) == (0.0, 512)
    assert summarizer.endpoint == "http://llm"
    assert summarizer.identifier == "chat_http:gpt"


def test_scripted_rejects_endpoint():
    with pytest.raises(InvalidDescriptorError):
        BackendDescriptor(
            role=RoleEnum.QUESTIONER,
            kind=BackendKindEnum.SCRIPTED,
            endpoint="http://llm",
            script=ScriptedBehavior(responses=("q",)),
        )


def test_scripted_needs_script():
    with pytest.raises(InvalidDescriptorError):
        BackendDescriptor(role=RoleEnum.QUESTIONER, kind=BackendKindEnum.SCRIPTED)


def test_http_needs_endpoint():
    with pytest.raises(InvalidDescriptorError):
        BackendDescriptor(role=RoleEnum.ANSWERER, kind=BackendKindEnum.VQA_HTTP)


@pytest.mark.parametrize(
    "fields",
    [{"temperature": 2.5}, {"temperature": -0.1}, {"max_tokens": 0}, {"max_retries": -1}],
)
def test_out_of_range_values(fields):
    with pytest.raises(InvalidDescriptorError):
        BackendDescriptor.for_role(
            RoleEnum.QUESTIONER, kind="chat_http", endpoint="http://llm", **fields
        )


def test_scripted_behavior_needs_responses():
    with pytest.raises(InvalidDescriptorError):
        ScriptedBehavior(responses=())


def test_api_key_env_var_default():
    chat = BackendDescriptor.for_role(RoleEnum.QUESTIONER, kind="chat_http", endpoint="http://llm")
    vqa = BackendDescriptor.for_role(RoleEnum.ANSWERER, kind="vqa_http", endpoint="http://vqa")
    assert chat.api_key_env_var == "OPENAI_API_KEY"
    assert vqa.api_key_env_var == ""


def test_to_dict_round_trip():
    descriptor = BackendDescriptor.for_role(
        RoleEnum.ANSWERER,
        kind="scripted",
        script=ScriptedBehavior(
            responses=("a",), on_exhausted="error", per_image={"img": ("b",)}
        ),
    )
    assert BackendDescriptor.from_dict(RoleEnum.ANSWERER, descriptor.to_dict()) == descriptor
