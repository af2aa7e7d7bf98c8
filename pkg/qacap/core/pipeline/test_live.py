# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

import os
from pathlib import Path

import pytest

from qacap.core.backends import BackendDescriptor, RoleEnum
from qacap.core.config import RunConfig
from qacap.core.pipeline import run_caption_dialogue

CHAT_ENDPOINT = os.environ.get("QACAP_LIVE_CHAT_ENDPOINT")
VQA_ENDPOINT = os.environ.get("QACAP_LIVE_VQA_ENDPOINT")


@pytest.mark.skipif(
    not (CHAT_ENDPOINT and VQA_ENDPOINT),
    reason="QACAP_LIVE_CHAT_ENDPOINT and QACAP_LIVE_VQA_ENDPOINT are unset",
)
def test_live_dialogue(tmp_path: Path):
    config = RunConfig(
        questioner=BackendDescriptor.for_role(
            RoleEnum.QUESTIONER,
            kind="chat_http",
            endpoint=CHAT_ENDPOINT,
            model_id=os.environ.get("QACAP_LIVE_CHAT_MODEL", "gpt-3.5-turbo"),
        ),
        answerer=BackendDescriptor.for_role(
            RoleEnum.ANSWERER, kind="vqa_http", endpoint=VQA_ENDPOINT
        ),
        output_path=tmp_path / "live.jsonl",
    )
    image_ref = os.environ.get("QACAP_LIVE_IMAGE_REF", "demo.jpg")
    transcript = run_caption_dialogue(image_ref, config)
    assert len(transcript.turns) == 10
    assert transcript.caption
