# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path

import pytest

from qacap.conftest import TOY_TAXONOMY_ROWS, write_tsv_taxonomy
from qacap.core.evaluation import Taxonomy, parse_tsv_taxonomy


@pytest.fixture
def toy_taxonomy(tmp_path: Path) -> Taxonomy:
    return parse_tsv_taxonomy(write_tsv_taxonomy(tmp_path / "toy.tsv", TOY_TAXONOMY_ROWS))
