# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from qacap.core.pipeline.batch import BatchResult, DialogueFailure, run_batch
from qacap.core.pipeline.dialogue_runner import (
    DialogueAbortedError,
    DialogueBackends,
    DialogueRunner,
    EmptyCaptionError,
    run_caption_dialogue,
)
from qacap.core.pipeline.store import (
    OrderedTranscriptWriter,
    TranscriptParseError,
    TranscriptWriter,
    load_transcripts,
    write_manifest,
)
