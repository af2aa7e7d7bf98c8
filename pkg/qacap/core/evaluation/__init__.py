# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from qacap.core.evaluation.matching import (
    CoverageCounts,
    LabelsParseError,
    MissingCaptionError,
    candidate_terms,
    load_labels,
    object_coverage,
    words_match,
)
from qacap.core.evaluation.questions import (
    QuestionKey,
    QuestionStats,
    is_uncertain_answer,
    is_yes_no_question,
    unique_question_stats,
)
from qacap.core.evaluation.report import (
    MetricEnum,
    MetricsReport,
    build_report,
    format_percent,
    render_tables,
)
from qacap.core.evaluation.taxonomy import (
    VIRTUAL_ROOT,
    CyclicTaxonomyError,
    DanglingEdgeError,
    MalformedLineError,
    MissingFileError,
    Synset,
    Taxonomy,
    TaxonomyError,
    UnknownSynsetError,
    dump_tsv_taxonomy,
    in_closure,
    parse_tsv_taxonomy,
    wup_similarity,
)
from qacap.core.evaluation.wndb import parse_wordnet_nouns
