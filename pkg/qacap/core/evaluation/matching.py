# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
import json
import logging
import os
import re
from collections.abc import Mapping, Sequence
from pathlib import Path
from typing import Optional, Union

from qacap.core.evaluation.taxonomy import Taxonomy

logger = logging.getLogger("qacap").getChild("matching")

DEFAULT_WUP_THRESHOLD = 0.9

_TOKEN = re.compile(r"[a-z0-9]+")


class MissingCaptionError(KeyError):
    def __init__(self, image_id: str):
        self.image_id = image_id
        super().__init__(image_id)

    def __str__(self):
        return f"No caption for labeled image {self.image_id!r}"


class LabelsParseError(Exception):
    def __init__(self, line_number: int, detail: str, path=None):
        self.line_number = line_number
        self.detail = detail
        self.path = path
        super().__init__(f"{path}:{line_number}: {detail}")


def synsets_match(
    a: str, b: str, taxonomy: Taxonomy, threshold: float = DEFAULT_WUP_THRESHOLD
) -> bool:
    return taxonomy.wup_similarity(a, b) > threshold or taxonomy.in_closure(a, b)


def words_match(
    w1: str,
    w2: str,
    taxonomy: Taxonomy,
    first_sense_only: bool = False,
    threshold: float = DEFAULT_WUP_THRESHOLD,
) -> bool:
    """Whether two words name matching objects.

    Any pair of noun synsets of the two words matches when their Wu-Palmer
    similarity is above `threshold` or one is in the other's closure. Unknown
    words have no synsets and match nothing.

    Args:
        w1: First word, spaces allowed for multiword lemmas.
        w2: Second word.
        taxonomy: Noun taxonomy.
        first_sense_only: Whether only the first sense of each word is used.
        threshold: Wu-Palmer similarity above which synsets match.
    """
    synsets_1 = taxonomy.lookup(w1)
    synsets_2 = taxonomy.lookup(w2)
    if first_sense_only:
        synsets_1, synsets_2 = synsets_1[:1], synsets_2[:1]
    return any(
        synsets_match(s1, s2, taxonomy, threshold)
        for s1 in synsets_1
        for s2 in synsets_2
    )


def tokenize(text: str) -> list[str]:
    return _TOKEN.findall(text.lower())


def candidate_terms(caption: str, taxonomy: Taxonomy) -> list[str]:
    """Unigrams and underscore-joined bigrams of `caption` known to `taxonomy`."""
    tokens = tokenize(caption)
    grams = tokens + [f"{a}_{b}" for a, b in zip(tokens, tokens[1:])]
    terms = []
    for gram in grams:
        if gram not in terms and taxonomy.lookup(gram):
            terms.append(gram)
    return terms


@dataclasses.dataclass(frozen=True)
class CoverageCounts:
    """Labeled objects found in captions.

    Attributes:
        objects_covered: Labels matched by a caption term.
        objects_total: Labels, counted once per image.
        coverage_ratio: `objects_covered / objects_total`, 0.0 without labels.
    """

    objects_covered: int
    objects_total: int
    coverage_ratio: float

    def __post_init__(self):
        if not 0 <= self.objects_covered <= self.objects_total:
            raise ValueError(
                f"objects_covered must be in [0, {self.objects_total}], "
                f"got {self.objects_covered}"
            )


def object_coverage(
    captions: Mapping[str, str],
    labels: Mapping[str, Sequence[str]],
    taxonomy: Taxonomy,
    first_sense_only: bool = False,
    threshold: float = DEFAULT_WUP_THRESHOLD,
) -> CoverageCounts:
    """Count labeled objects named by the caption of their image.

    Args:
        captions: Image id to caption.
        labels: Image id to object labels, duplicates within an image count once.
        taxonomy: Noun taxonomy.
        first_sense_only: Whether only the first sense of each word is used.
        threshold: Wu-Palmer similarity above which synsets match.

    Raises:
        MissingCaptionError: If a labeled image has no caption.
    """
    covered = 0
    total = 0
    for image_id, image_labels in labels.items():
        if image_id not in captions or captions[image_id] is None:
            raise MissingCaptionError(image_id)
        terms = candidate_terms(captions[image_id], taxonomy)
        for label in dict.fromkeys(image_labels):
            total += 1
            if any(
                words_match(term, label, taxonomy, first_sense_only, threshold)
                for term in terms
            ):
                covered += 1
    ratio = covered / total if total else 0.0
    logger.debug(f"Object coverage {covered}/{total}")
    return CoverageCounts(covered, total, ratio)


def load_labels(path: Union[str, os.PathLike]) -> dict[str, list[str]]:
    """Read a JSONL labels file of `{"image_id": ..., "labels": [...]}` records.

    Labels of an image listed on several lines are concatenated.

    Raises:
        LabelsParseError: Naming the first offending line.
    """
    labels: dict[str, list[str]] = {}
    with Path(path).open(encoding="utf-8") as fd:
        for line_number, line in enumerate(fd, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                image_id = record["image_id"]
                image_labels = record["labels"]
            except json.JSONDecodeError as e:
                raise LabelsParseError(line_number, f"invalid JSON: {e.msg}", path) from e
            except (KeyError, TypeError) as e:
                raise LabelsParseError(line_number, f"missing field {e}", path) from e
            if not isinstance(image_id, str) or not isinstance(image_labels, list):
                raise LabelsParseError(
                    line_number, "image_id must be a string and labels a list", path
                )
            labels.setdefault(image_id, []).extend(str(label) for label in image_labels)
    return labels


def relative_improvement(baseline: int, improved: int) -> Optional[float]:
    """`(improved - baseline) / baseline`, None when the baseline is zero."""
    if baseline == 0:
        return None
    return (improved - baseline) / baseline
