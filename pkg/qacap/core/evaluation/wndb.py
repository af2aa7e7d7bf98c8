# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

"""
Reader of the noun part of a WordNet database in the WNDB file layout.

`data.noun` gives the synsets and their pointers, `index.noun` the sense order
of each lemma's synsets and the optional `noun.exc` the irregular plurals.
Only hypernym pointers (`@` and `@i`) between noun synsets are kept.
"""

from __future__ import annotations

import logging
import os
import re
from pathlib import Path
from typing import Union

from qacap.core.evaluation.taxonomy import (
    MalformedLineError,
    MissingFileError,
    Synset,
    Taxonomy,
    normalize_lemma,
)

logger = logging.getLogger("qacap").getChild("wndb")

DATA_FILE = "data.noun"
INDEX_FILE = "index.noun"
EXCEPTION_FILE = "noun.exc"

NOUN_POS = "n"
HYPERNYM_POINTERS = ("@", "@i")
SYNSET_ID_PREFIX = "n"

_OFFSET = re.compile(r"^\d{8}$")
_POINTER_COUNT = re.compile(r"^\d{3}$")


def synset_id(offset: str) -> str:
    return SYNSET_ID_PREFIX + offset


def _is_header(line: str) -> bool:
    # License lines of WNDB files start with a space.
    return line.startswith(" ")


def parse_data_line(line: str, path: Path, line_number: int) -> Synset:
    """Parse one `data.noun` synset line.

    Raises:
        MalformedLineError: If a field is missing or out of format.
    """
    fields = line.split(" | ", 1)[0].split()
    if len(fields) < 4:
        raise MalformedLineError(path, line_number, "truncated synset line")
    offset, _lex_filenum, ss_type, word_count = fields[:4]
    if not _OFFSET.match(offset):
        raise MalformedLineError(path, line_number, f"invalid synset offset {offset!r}")
    if ss_type != NOUN_POS:
        raise MalformedLineError(path, line_number, f"not a noun synset: {ss_type!r}")
    try:
        words = int(word_count, 16)
    except ValueError:
        raise MalformedLineError(
            path, line_number, f"invalid hexadecimal word count {word_count!r}"
        ) from None

    position = 4 + 2 * words
    if len(fields) <= position:
        raise MalformedLineError(path, line_number, f"expected {words} words")
    lemmas = tuple(normalize_lemma(word) for word in fields[4:position:2])

    pointer_count = fields[position]
    if not _POINTER_COUNT.match(pointer_count):
        raise MalformedLineError(
            path, line_number, f"invalid pointer count {pointer_count!r}"
        )
    pointers = int(pointer_count)
    position += 1
    if len(fields) < position + 4 * pointers:
        raise MalformedLineError(path, line_number, f"expected {pointers} pointers")

    hypernyms = []
    for start in range(position, position + 4 * pointers, 4):
        symbol, target, pos, _source_target = fields[start : start + 4]
        if not _OFFSET.match(target):
            raise MalformedLineError(
                path, line_number, f"invalid pointer offset {target!r}"
            )
        if symbol in HYPERNYM_POINTERS and pos == NOUN_POS:
            hypernym = synset_id(target)
            if hypernym not in hypernyms:
                hypernyms.append(hypernym)
    return Synset(synset_id(offset), lemmas, tuple(hypernyms))


def parse_index_line(line: str, path: Path, line_number: int) -> tuple[str, list[str]]:
    """Parse one `index.noun` line into the lemma and its synset ids in sense order.

    Raises:
        MalformedLineError: If the synset count does not match the offsets.
    """
    fields = line.split()
    try:
        lemma, _pos, synset_count, pointer_count = fields[:4]
        synsets = int(synset_count)
        pointers = int(pointer_count)
    except ValueError:
        raise MalformedLineError(path, line_number, "malformed index line") from None
    offsets = fields[4 + pointers + 2 :]
    if len(offsets) != synsets or not all(_OFFSET.match(offset) for offset in offsets):
        raise MalformedLineError(
            path, line_number, f"expected {synsets} synset offsets, got {len(offsets)}"
        )
    return normalize_lemma(lemma), [synset_id(offset) for offset in offsets]


def _read_lines(path: Path):
    with path.open(encoding="utf-8") as fd:
        for line_number, line in enumerate(fd, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or _is_header(line):
                continue
            yield line_number, line


def parse_wordnet_nouns(db_dir: Union[str, os.PathLike]) -> Taxonomy:
    """Build the noun taxonomy of a WNDB directory.

    Args:
        db_dir: Directory holding `data.noun`, `index.noun` and optionally `noun.exc`.

    Returns:
        Taxonomy whose synset ids are `n` followed by the data file offset.

    Raises:
        MissingFileError: If `data.noun` or `index.noun` is absent.
        MalformedLineError: If a line cannot be parsed.
    """
    db_dir = Path(db_dir)
    data_path = db_dir / DATA_FILE
    index_path = db_dir / INDEX_FILE
    exception_path = db_dir / EXCEPTION_FILE
    for path in (data_path, index_path):
        if not path.is_file():
            raise MissingFileError(path)

    synsets = [
        parse_data_line(line, data_path, line_number)
        for line_number, line in _read_lines(data_path)
    ]
    sense_order = dict(
        parse_index_line(line, index_path, line_number)
        for line_number, line in _read_lines(index_path)
    )
    exceptions = {}
    if exception_path.is_file():
        for _, line in _read_lines(exception_path):
            form, *bases = line.split()
            if bases:
                exceptions[form] = bases
    logger.info(f"Read {len(synsets)} noun synsets from {db_dir}")
    return Taxonomy(synsets, sense_order=sense_order, exceptions=exceptions)
