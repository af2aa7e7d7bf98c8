# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import json
import logging
import os
import threading
from pathlib import Path
from typing import Any, Optional, Union

from qacap.core.dialogue import InvalidTranscriptError, Transcript

logger = logging.getLogger("qacap").getChild("store")


class TranscriptParseError(Exception):
    """A JSONL line is not a valid transcript."""

    def __init__(self, line_number: int, detail: str, path: Any = None):
        self.line_number = line_number
        self.detail = detail
        self.path = path
        super().__init__(line_number, detail, path)

    def __str__(self):
        location = f"{self.path}:{self.line_number}" if self.path else f"line {self.line_number}"
        return f"{location}: {self.detail}"


class TranscriptWriter:
    """Appends transcripts to JSONL files, one complete line per record.

    Completed transcripts go to `output_path`, aborted ones to `aborted_path`.
    Appends are serialized so lines of concurrent dialogues never interleave.
    """

    def __init__(self, output_path: Path, aborted_path: Optional[Path] = None):
        self._output_path = Path(output_path)
        self._aborted_path = Path(aborted_path) if aborted_path else None
        self._lock = threading.Lock()

    @property
    def output_path(self) -> Path:
        return self._output_path

    @property
    def aborted_path(self) -> Optional[Path]:
        return self._aborted_path

    def _target(self, transcript: Transcript) -> Path:
        if transcript.completed or self._aborted_path is None:
            return self._output_path
        return self._aborted_path

    def write(self, transcript: Transcript) -> Path:
        """Append `transcript` and flush it to disk.

        Returns:
            Path of the file the record went to.
        """
        target = self._target(transcript)
        line = transcript.to_json() + "\n"
        with self._lock:
            target.parent.mkdir(parents=True, exist_ok=True)
            with target.open("a", encoding="utf-8") as fd:
                fd.write(line)
                fd.flush()
                os.fsync(fd.fileno())
        logger.debug(f"Transcript of {transcript.image_ref!r} written to {target}")
        return target


class OrderedTranscriptWriter:
    """Writes transcripts of a batch in input order, whatever their completion order.

    Slot `i` is flushed once slots `0..i-1` are settled, either written or
    skipped.
    """

    def __init__(self, writer: TranscriptWriter):
        self._writer = writer
        self._lock = threading.Lock()
        self._pending: dict[int, Optional[Transcript]] = {}
        self._next = 0

    def settle(self, position: int, transcript: Optional[Transcript]) -> None:
        """Hand over the outcome of slot `position`, None when nothing is to be written."""
        with self._lock:
            self._pending[position] = transcript
            while self._next in self._pending:
                ready = self._pending.pop(self._next)
                if ready is not None:
                    self._writer.write(ready)
                self._next += 1


def load_transcripts(path: Union[str, os.PathLike]) -> list[Transcript]:
    """Read every transcript of a JSONL file.

    Blank lines are ignored.

    Args:
        path: JSONL file.

    Returns:
        Transcripts in file order.

    Raises:
        TranscriptParseError: Naming the first offending line (1-based).
    """
    transcripts = []
    with Path(path).open("rb") as fd:
        for line_number, raw in enumerate(fd, start=1):
            try:
                line = raw.decode("utf-8")
            except UnicodeDecodeError as e:
                raise TranscriptParseError(
                    line_number, f"invalid UTF-8: {e.reason}", path
                ) from e
            if not line.strip():
                continue
            try:
                transcripts.append(Transcript.from_json(line))
            except json.JSONDecodeError as e:
                raise TranscriptParseError(line_number, f"invalid JSON: {e.msg}", path) from e
            except (KeyError, TypeError, AttributeError) as e:
                raise TranscriptParseError(
                    line_number, f"missing or mistyped field {e}", path
                ) from e
            except (InvalidTranscriptError, ValueError) as e:
                raise TranscriptParseError(line_number, str(e), path) from e
    return transcripts


def write_manifest(path: Union[str, os.PathLike], manifest: dict[str, Any]) -> None:
    """Write the run manifest next to the transcripts."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fd:
        json.dump(manifest, fd, indent=2, ensure_ascii=False, sort_keys=True)
        fd.write("\n")
