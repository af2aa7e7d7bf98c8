# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from __future__ import annotations

import dataclasses
import logging
from collections.abc import Collection, Mapping, Sequence
from typing import Any, Optional

from tabulate import tabulate

from qacap.core.dialogue import Transcript
from qacap.core.evaluation.matching import (
    DEFAULT_WUP_THRESHOLD,
    CoverageCounts,
    object_coverage,
    relative_improvement,
)
from qacap.core.evaluation.questions import (
    DEFAULT_UNCERTAINTY_PHRASES,
    QuestionStats,
    group_by_questioner,
    uncertain_answer_rate,
    unique_question_stats,
    yes_no_rate,
)
from qacap.core.evaluation.taxonomy import Taxonomy
from qacap.core.utils import BaseEnum

logger = logging.getLogger("qacap").getChild("report")

TABLE_FORMAT = "simple"


class MetricEnum(BaseEnum):
    UNIQUE = "unique"
    YESNO = "yesno"
    UNCERTAIN = "uncertain"
    COVERAGE = "coverage"
    ALL = "all"

    @classmethod
    def expand(cls, metrics: Collection["MetricEnum"]) -> list["MetricEnum"]:
        """Requested metrics with `all` replaced by every metric."""
        if cls.ALL in metrics:
            return [metric for metric in cls if metric != cls.ALL]
        return [metric for metric in cls if metric in metrics]


def format_percent(ratio: float, decimals: int = 1) -> str:
    """Percentage rounded to `decimals` places, `0.508` gives `50.8%`."""
    return f"{ratio * 100:.{decimals}f}%"


def format_fraction(count: int, total: int) -> str:
    return f"{count}/{total}"


def format_per_dialogue(mean: float, questions_per_dialogue: int) -> str:
    """Mean unique questions over questions per dialogue, as in `8.98/9`."""
    return f"{mean:.2f}/{questions_per_dialogue}"


@dataclasses.dataclass(frozen=True)
class MetricsReport:
    """Evaluation results, a field is None when its metric was not requested.

    Attributes:
        dialogues: Transcripts evaluated.
        per_dialogue_unique_mean: Unique questions per dialogue, averaged.
        total_unique: Unique questions over the corpus.
        total_questions: Questions counted.
        questions_per_dialogue: Largest number of questions of a dialogue.
        per_questioner: Unique question statistics per questioner identifier.
        yes_no_count: Questions opening with an auxiliary or modal verb.
        uncertain_answer_count: Answers admitting uncertainty.
        answers_total: Answers counted for uncertainty.
        objects_covered: Labels found in the dialogue captions.
        objects_total: Labels counted.
        coverage_ratio: `objects_covered / objects_total`.
        baseline_objects_covered: Labels found in the answers to the opening question.
        baseline_coverage_ratio: `baseline_objects_covered / objects_total`.
        coverage_improvement: Relative gain of the captions over the baseline.
    """

    dialogues: int = 0
    per_dialogue_unique_mean: Optional[float] = None
    total_unique: Optional[int] = None
    total_questions: Optional[int] = None
    questions_per_dialogue: Optional[int] = None
    per_questioner: Optional[dict[str, QuestionStats]] = None
    yes_no_count: Optional[int] = None
    uncertain_answer_count: Optional[int] = None
    answers_total: Optional[int] = None
    objects_covered: Optional[int] = None
    objects_total: Optional[int] = None
    coverage_ratio: Optional[float] = None
    baseline_objects_covered: Optional[int] = None
    baseline_coverage_ratio: Optional[float] = None
    coverage_improvement: Optional[float] = None

    def __post_init__(self):
        if self.total_unique is not None and self.total_questions is not None:
            if self.total_unique > self.total_questions:
                raise ValueError("total_unique cannot exceed total_questions")
        if self.objects_covered is not None and self.objects_total is not None:
            if self.objects_covered > self.objects_total:
                raise ValueError("objects_covered cannot exceed objects_total")

    @property
    def yes_no_ratio(self) -> Optional[float]:
        if self.yes_no_count is None or not self.total_questions:
            return None
        return self.yes_no_count / self.total_questions

    @property
    def uncertain_answer_ratio(self) -> Optional[float]:
        if self.uncertain_answer_count is None or not self.answers_total:
            return None
        return self.uncertain_answer_count / self.answers_total

    def to_dict(self) -> dict[str, Any]:
        """JSON form, metrics not computed are left out."""
        data = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if value is None:
                continue
            if field.name == "per_questioner":
                value = {
                    questioner: dataclasses.asdict(stats)
                    for questioner, stats in value.items()
                }
            data[field.name] = value
        for name in ("yes_no_ratio", "uncertain_answer_ratio"):
            if getattr(self, name) is not None:
                data[name] = getattr(self, name)
        return data


def captions_of(transcripts: Sequence[Transcript]) -> dict[str, Optional[str]]:
    """Image to final caption, the last transcript of an image wins."""
    return {transcript.image_ref: transcript.caption for transcript in transcripts}


def opening_answers_of(transcripts: Sequence[Transcript]) -> dict[str, Optional[str]]:
    """Image to the answer given to the opening question."""
    answers = {}
    for transcript in transcripts:
        answered = [turn for turn in transcript.turns if turn.index == 1 and turn.answered]
        answers[transcript.image_ref] = answered[0].answer if answered else None
    return answers


def build_report(
    transcripts: Sequence[Transcript],
    metrics: Collection[MetricEnum] = (MetricEnum.ALL,),
    labels: Optional[Mapping[str, Sequence[str]]] = None,
    taxonomy: Optional[Taxonomy] = None,
    questioner_turns_only: bool = True,
    first_sense_only: bool = False,
    uncertainty_phrases: Sequence[str] = DEFAULT_UNCERTAINTY_PHRASES,
    threshold: float = DEFAULT_WUP_THRESHOLD,
) -> MetricsReport:
    """Compute the requested metrics over `transcripts`.

    Args:
        transcripts: Dialogue transcripts, non empty.
        metrics: Metrics to compute.
        labels: Image to object labels, required for coverage.
        taxonomy: Noun taxonomy, required for coverage.
        questioner_turns_only: Whether the hard-coded opening question is left out
            of the question metrics.
        first_sense_only: Whether coverage only uses the first sense of each word.
        uncertainty_phrases: Phrases marking an uncertain answer.
        threshold: Wu-Palmer similarity above which synsets match.

    Raises:
        ValueError: If `transcripts` is empty or coverage lacks labels or taxonomy.
        MissingCaptionError: If a labeled image has no caption.
    """
    if not transcripts:
        raise ValueError("No transcript to evaluate")
    metrics = MetricEnum.expand(metrics)
    fields: dict[str, Any] = {"dialogues": len(transcripts)}

    if {MetricEnum.UNIQUE, MetricEnum.YESNO} & set(metrics):
        stats = unique_question_stats(transcripts, questioner_turns_only)
        fields["total_questions"] = stats.total_questions
        fields["questions_per_dialogue"] = stats.questions_per_dialogue
    if MetricEnum.UNIQUE in metrics:
        fields["per_dialogue_unique_mean"] = stats.per_dialogue_unique_mean
        fields["total_unique"] = stats.total_unique
        fields["per_questioner"] = {
            questioner: unique_question_stats(group, questioner_turns_only)
            for questioner, group in group_by_questioner(transcripts).items()
        }
    if MetricEnum.YESNO in metrics:
        fields["yes_no_count"] = yes_no_rate(transcripts, questioner_turns_only).count
    if MetricEnum.UNCERTAIN in metrics:
        rate = uncertain_answer_rate(
            transcripts, questioner_turns_only, uncertainty_phrases
        )
        fields["uncertain_answer_count"] = rate.count
        fields["answers_total"] = rate.total
    if MetricEnum.COVERAGE in metrics:
        if labels is None or taxonomy is None:
            raise ValueError("Object coverage needs labels and a taxonomy")
        caption_counts = object_coverage(
            captions_of(transcripts), labels, taxonomy, first_sense_only, threshold
        )
        baseline_counts = object_coverage(
            opening_answers_of(transcripts), labels, taxonomy, first_sense_only, threshold
        )
        fields.update(coverage_fields(baseline_counts, caption_counts))

    report = MetricsReport(**fields)
    logger.debug(f"Report of {len(transcripts)} dialogues: {report.to_dict()}")
    return report


def coverage_fields(baseline: CoverageCounts, captions: CoverageCounts) -> dict[str, Any]:
    return {
        "objects_covered": captions.objects_covered,
        "objects_total": captions.objects_total,
        "coverage_ratio": captions.coverage_ratio,
        "baseline_objects_covered": baseline.objects_covered,
        "baseline_coverage_ratio": baseline.coverage_ratio,
        "coverage_improvement": relative_improvement(
            baseline.objects_covered, captions.objects_covered
        ),
    }


def coverage_table(report: MetricsReport) -> str:
    """Covered objects of the opening answers and of the dialogue captions."""
    improvement = report.coverage_improvement
    rows = [
        [
            "Answerer only",
            format_fraction(report.baseline_objects_covered, report.objects_total),
            format_percent(report.baseline_coverage_ratio),
            "",
        ],
        [
            "Dialogue caption",
            format_fraction(report.objects_covered, report.objects_total),
            format_percent(report.coverage_ratio),
            format_percent(improvement) if improvement is not None else "n/a",
        ],
    ]
    return tabulate(
        rows, headers=["", "Covered/All", "Ratio", "Improved"], tablefmt=TABLE_FORMAT
    )


def unique_questions_table(report: MetricsReport) -> str:
    """Unique over total questions, one column per questioner."""
    per_questioner = report.per_questioner or {}
    headers = ["Unique Q/Total Q", *per_questioner]
    rows = [
        [
            "Per Dialogue",
            *(
                format_per_dialogue(stats.per_dialogue_unique_mean, stats.questions_per_dialogue)
                for stats in per_questioner.values()
            ),
        ],
        [
            "All Questions",
            *(
                format_fraction(stats.total_unique, stats.total_questions)
                for stats in per_questioner.values()
            ),
        ],
    ]
    return tabulate(rows, headers=headers, tablefmt=TABLE_FORMAT)


def rates_table(report: MetricsReport) -> str:
    """Yes/no questions and uncertain answers, ratios without decimals."""
    rows = []
    if report.yes_no_count is not None:
        rows.append(
            [
                "Yes/No questions",
                format_fraction(report.yes_no_count, report.total_questions),
                format_percent(report.yes_no_ratio or 0.0, decimals=0),
            ]
        )
    if report.uncertain_answer_count is not None:
        rows.append(
            [
                "Uncertain answers",
                format_fraction(report.uncertain_answer_count, report.answers_total),
                format_percent(report.uncertain_answer_ratio or 0.0, decimals=0),
            ]
        )
    return tabulate(rows, headers=["", "Count/All", "Ratio"], tablefmt=TABLE_FORMAT)


def render_tables(report: MetricsReport) -> str:
    """Human readable tables of the computed metrics."""
    tables = []
    if report.per_questioner is not None:
        tables.append(unique_questions_table(report))
    if report.yes_no_count is not None or report.uncertain_answer_count is not None:
        tables.append(rates_table(report))
    if report.objects_total is not None:
        tables.append(coverage_table(report))
    return "\n\n".join(tables)
