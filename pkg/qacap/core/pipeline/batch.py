# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional, Sequence

from qacap.core.config import RunConfig
from qacap.core.dialogue import Transcript
from qacap.core.pipeline.dialogue_runner import (
    DialogueAbortedError,
    DialogueBackends,
    DialogueRunner,
)
from qacap.core.pipeline.store import (
    OrderedTranscriptWriter,
    TranscriptWriter,
    write_manifest,
)
from qacap.core.utils import EPOCH, format_timestamp, utc_now

logger = logging.getLogger("qacap").getChild("batch")


@dataclasses.dataclass(frozen=True)
class DialogueFailure:
    """Image whose dialogue did not reach a caption.

    Attributes:
        image_ref: Image of the dialogue.
        turn: Turn being played, None for the summary stage or unexpected errors.
        cause: Error description.
    """

    image_ref: str
    turn: Optional[int]
    cause: str

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)


@dataclasses.dataclass
class BatchResult:
    """Outcome of a batch.

    Attributes:
        transcripts: Completed transcripts, in input order.
        failures: Failed images, in input order.
        token_usage: Tokens reported by chat endpoints, per role.
        started_at: Batch start time.
        finished_at: Batch end time.
    """

    transcripts: list[Transcript]
    failures: list[DialogueFailure]
    token_usage: dict[str, dict[str, int]] = dataclasses.field(default_factory=dict)
    started_at: Any = EPOCH
    finished_at: Any = EPOCH

    @property
    def success(self) -> bool:
        return not self.failures


def build_manifest(config: RunConfig, result: BatchResult, image_count: int) -> dict:
    """Run manifest: redacted configuration, timing, failures and token usage."""
    return {
        "config": config.to_dict(),
        "config_digest": config.digest,
        "started_at": format_timestamp(result.started_at),
        "finished_at": format_timestamp(result.finished_at),
        "images": image_count,
        "completed": len(result.transcripts),
        "failures": [failure.to_dict() for failure in result.failures],
        "token_usage": result.token_usage,
    }


def run_batch(
    image_refs: Sequence[str],
    config: RunConfig,
    parallelism: int = 1,
    backends: Optional[DialogueBackends] = None,
    deterministic: bool = False,
    manifest: bool = True,
) -> BatchResult:
    """Play one dialogue per image with at most `parallelism` in flight.

    Lines of the output files follow input order, so their bytes do not depend
    on `parallelism`. A failing image is recorded and does not stop the batch.

    Args:
        image_refs: Images to caption.
        config: Run configuration.
        parallelism: Maximum number of concurrent dialogues.
        backends: Shared backend handles, built from `config` when None.
        deterministic: Whether timestamps are pinned to the Unix epoch.
        manifest: Whether the run manifest is written next to the output.

    Returns:
        Completed transcripts and failures, both in input order.
    """
    if parallelism < 1:
        raise ValueError(f"parallelism must be >= 1, got {parallelism}")
    clock = (lambda: EPOCH) if deterministic else utc_now
    started_at = clock()

    owned = backends is None
    backends = backends or DialogueBackends.from_config(config)
    runner = DialogueRunner(config, backends, clock=clock)
    writer = OrderedTranscriptWriter(
        TranscriptWriter(config.output_path, config.aborted_path)
    )
    outcomes: list[Optional[Transcript]] = [None] * len(image_refs)
    failures: list[Optional[DialogueFailure]] = [None] * len(image_refs)

    def play(position: int) -> None:
        image_ref = image_refs[position]
        try:
            transcript = runner.run(image_ref)
        except DialogueAbortedError as e:
            failures[position] = DialogueFailure(
                image_ref, e.turn, f"{e.cause.__class__.__name__}: {e.cause}"
            )
            writer.settle(position, e.transcript)
            return
        except Exception as e:
            logger.exception(f"Unexpected failure of the dialogue about {image_ref!r}")
            failures[position] = DialogueFailure(
                image_ref, None, f"{e.__class__.__name__}: {e}"
            )
            writer.settle(position, None)
            return
        outcomes[position] = transcript
        writer.settle(position, transcript)

    logger.info(f"Captioning {len(image_refs)} images, parallelism {parallelism}")
    try:
        with ThreadPoolExecutor(max_workers=parallelism) as executor:
            list(executor.map(play, range(len(image_refs))))
    finally:
        if owned:
            backends.close()

    result = BatchResult(
        transcripts=[transcript for transcript in outcomes if transcript is not None],
        failures=[failure for failure in failures if failure is not None],
        token_usage=backends.token_usage(),
        started_at=started_at,
        finished_at=clock(),
    )
    if result.failures:
        logger.warning(
            f"{len(result.failures)}/{len(image_refs)} dialogues failed: "
            + ", ".join(failure.image_ref for failure in result.failures)
        )
    if manifest:
        write_manifest(config.manifest_path, build_manifest(config, result, len(image_refs)))
    return result
