# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

"""
The `Taxonomy` class holds a noun hypernym hierarchy as a `networkx.DiGraph`
whose edges go from a synset to each of its hypernyms.

A virtual root sits above every synset without hypernyms, so any two synsets
share at least one common hypernym. Depths count nodes on the longest path
down from the virtual root, which has depth 1.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import os
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Optional, Union

import networkx as nx

logger = logging.getLogger("qacap").getChild("taxonomy")

VIRTUAL_ROOT = "*ROOT*"

# Noun detachment rules, tried in order on inflected forms.
NOUN_SUFFIX_RULES = (
    ("s", ""),
    ("ses", "s"),
    ("ves", "f"),
    ("xes", "x"),
    ("zes", "z"),
    ("ches", "ch"),
    ("shes", "sh"),
    ("men", "man"),
    ("ies", "y"),
)

TSV_COMMENT = "#"


class TaxonomyError(Exception):
    pass


class MissingFileError(TaxonomyError):
    def __init__(self, path: Union[str, os.PathLike]):
        self.path = path
        super().__init__(f"Taxonomy file not found: {path}")


class MalformedLineError(TaxonomyError):
    """A line of a taxonomy file cannot be parsed."""

    def __init__(self, file: Union[str, os.PathLike], line_number: int, detail: str):
        self.file = file
        self.line_number = line_number
        self.detail = detail
        super().__init__(f"{file}:{line_number}: {detail}")


class DanglingEdgeError(TaxonomyError):
    def __init__(self, synset_id: str, hypernym_id: str):
        self.synset_id = synset_id
        self.hypernym_id = hypernym_id
        super().__init__(
            f'Hypernym "{hypernym_id}" of synset "{synset_id}" does not exist'
        )


class CyclicTaxonomyError(TaxonomyError):
    def __init__(self, cycle: Sequence[str]):
        self.cycle = list(cycle)
        super().__init__(
            "Hypernym cycle: " + " -> ".join([*self.cycle, self.cycle[0]])
        )


class UnknownSynsetError(TaxonomyError, KeyError):
    def __init__(self, synset_id: str):
        self.synset_id = synset_id
        super().__init__(synset_id)

    def __str__(self):
        return f'Unknown synset "{self.synset_id}"'


def normalize_lemma(text: str) -> str:
    """Lemma key of a word: lowercased, spaces joined by underscores."""
    return "_".join(text.strip().lower().split())


@dataclasses.dataclass(frozen=True)
class Synset:
    """Set of synonymous noun lemmas.

    Attributes:
        id: Synset identifier.
        lemmas: Lowercase lemmas, underscores between words.
        hypernyms: Identifiers of the direct hypernyms.
    """

    id: str
    lemmas: tuple[str, ...]
    hypernyms: tuple[str, ...] = ()


class Taxonomy:
    """Immutable noun hypernym hierarchy."""

    def __init__(
        self,
        synsets: Iterable[Synset],
        sense_order: Optional[Mapping[str, Sequence[str]]] = None,
        exceptions: Optional[Mapping[str, Sequence[str]]] = None,
    ):
        """Build and check a taxonomy.

        Args:
            synsets: Synsets, in the order used for lemma senses by default.
            sense_order: Lemma to synset ids in sense order, overrides the default
                order for the listed ids.
            exceptions: Irregular inflected form to base forms.

        Raises:
            DanglingEdgeError: If a hypernym is not a synset of the taxonomy.
            CyclicTaxonomyError: If hypernym edges form a cycle.
        """
        self._synsets: dict[str, Synset] = {}
        for synset in synsets:
            if synset.id == VIRTUAL_ROOT:
                raise TaxonomyError(f'"{VIRTUAL_ROOT}" is a reserved synset id')
            if synset.id in self._synsets:
                raise TaxonomyError(f'Duplicate synset "{synset.id}"')
            self._synsets[synset.id] = synset

        graph = nx.DiGraph()
        graph.add_node(VIRTUAL_ROOT)
        graph.add_nodes_from(self._synsets)
        for synset in self._synsets.values():
            for hypernym in synset.hypernyms:
                if hypernym not in self._synsets:
                    raise DanglingEdgeError(synset.id, hypernym)
                graph.add_edge(synset.id, hypernym)
        try:
            cycle = nx.find_cycle(graph)
        except nx.NetworkXNoCycle:
            pass
        else:
            raise CyclicTaxonomyError([edge[0] for edge in cycle])
        for synset in self._synsets.values():
            if not synset.hypernyms:
                graph.add_edge(synset.id, VIRTUAL_ROOT)
        self._graph = nx.freeze(graph)

        self._lemma_index = self._build_lemma_index(sense_order or {})
        self._exceptions = {
            normalize_lemma(form): tuple(normalize_lemma(base) for base in bases)
            for form, bases in (exceptions or {}).items()
        }
        self._depths = self._compute_depths()
        self._distances = functools.lru_cache(maxsize=8192)(self._hypernym_distances)
        logger.debug(
            f"Taxonomy built: {len(self._synsets)} synsets, "
            f"{len(self._lemma_index)} lemmas"
        )

    def _build_lemma_index(
        self, sense_order: Mapping[str, Sequence[str]]
    ) -> dict[str, tuple[str, ...]]:
        index: dict[str, list[str]] = {}
        for synset in self._synsets.values():
            for lemma in synset.lemmas:
                ids = index.setdefault(lemma, [])
                if synset.id not in ids:
                    ids.append(synset.id)
        for lemma, ids in index.items():
            order = {synset_id: rank for rank, synset_id in enumerate(sense_order.get(lemma, ()))}
            ids.sort(key=lambda synset_id: order.get(synset_id, len(order)))
        return {lemma: tuple(ids) for lemma, ids in index.items()}

    def _compute_depths(self) -> dict[str, int]:
        depths = {}
        for node in reversed(list(nx.topological_sort(self._graph))):
            hypernyms = list(self._graph.successors(node))
            depths[node] = 1 + max((depths[h] for h in hypernyms), default=0)
        return depths

    def _hypernym_distances(self, synset_id: str) -> dict[str, int]:
        return nx.single_source_shortest_path_length(self._graph, synset_id)

    def _check(self, *synset_ids: str) -> None:
        for synset_id in synset_ids:
            if synset_id not in self._graph:
                raise UnknownSynsetError(synset_id)

    @property
    def graph(self) -> nx.DiGraph:
        """Frozen hypernym graph, virtual root included."""
        return self._graph

    @property
    def synsets(self) -> dict[str, Synset]:
        return dict(self._synsets)

    @property
    def lemma_index(self) -> dict[str, tuple[str, ...]]:
        return dict(self._lemma_index)

    def __len__(self) -> int:
        return len(self._synsets)

    def __contains__(self, synset_id: object) -> bool:
        return synset_id in self._synsets

    def __getitem__(self, synset_id: str) -> Synset:
        try:
            return self._synsets[synset_id]
        except KeyError:
            raise UnknownSynsetError(synset_id) from None

    def depth(self, synset_id: str) -> int:
        """Node count on the longest path from the virtual root down to `synset_id`."""
        self._check(synset_id)
        return self._depths[synset_id]

    def hypernym_closure(self, synset_id: str) -> set[str]:
        """Ancestors of `synset_id`, itself and the virtual root included."""
        self._check(synset_id)
        return set(self._distances(synset_id))

    def wup_similarity(self, a: str, b: str) -> float:
        """Wu-Palmer similarity, the best score over every common hypernym."""
        self._check(a, b)
        distances_a = self._distances(a)
        distances_b = self._distances(b)
        best = 0.0
        for common in distances_a.keys() & distances_b.keys():
            depth = self._depths[common]
            score = (2 * depth) / (
                (depth + distances_a[common]) + (depth + distances_b[common])
            )
            best = max(best, score)
        return best

    def in_closure(self, a: str, b: str) -> bool:
        """Whether either synset is in the other's hypernym closure, reflexively."""
        return b in self.hypernym_closure(a) or a in self.hypernym_closure(b)

    def morphological_forms(self, word: str) -> list[str]:
        """Base forms of `word` known to the taxonomy, the form itself first."""
        form = normalize_lemma(word)
        if form in self._exceptions:
            candidates = [form, *self._exceptions[form]]
        else:
            candidates = [form]
            for suffix, ending in NOUN_SUFFIX_RULES:
                if form.endswith(suffix) and len(form) > len(suffix):
                    candidates.append(form[: -len(suffix)] + ending)
        forms = []
        for candidate in candidates:
            if candidate in self._lemma_index and candidate not in forms:
                forms.append(candidate)
        return forms

    def lookup(self, word: str) -> list[str]:
        """Noun synsets of `word`, in sense order, falling back on base forms."""
        synset_ids = []
        for form in self.morphological_forms(word):
            for synset_id in self._lemma_index[form]:
                if synset_id not in synset_ids:
                    synset_ids.append(synset_id)
        return synset_ids


def wup_similarity(a: str, b: str, taxonomy: Taxonomy) -> float:
    """Wu-Palmer similarity of two synsets of `taxonomy`.

    Raises:
        UnknownSynsetError: If a synset is not part of the taxonomy.
    """
    return taxonomy.wup_similarity(a, b)


def in_closure(a: str, b: str, taxonomy: Taxonomy) -> bool:
    """Whether `a` is a hypernym of `b` or `b` a hypernym of `a`, identity included.

    Raises:
        UnknownSynsetError: If a synset is not part of the taxonomy.
    """
    return taxonomy.in_closure(a, b)


def parse_tsv_taxonomy(path: Union[str, os.PathLike]) -> Taxonomy:
    """Read a taxonomy from TSV rows `synset_id, lemmas, hypernym ids`.

    Lemmas and hypernym ids are comma separated, the hypernym column is empty
    for roots. Blank lines and lines starting with `#` are ignored.

    Raises:
        MissingFileError: If the file does not exist.
        MalformedLineError: If a row does not have two or three columns.
        DanglingEdgeError: If a hypernym id has no row.
        CyclicTaxonomyError: If the rows form a hypernym cycle.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(path)
    synsets = []
    seen = set()
    with path.open(encoding="utf-8") as fd:
        for line_number, line in enumerate(fd, start=1):
            line = line.rstrip("\r\n")
            if not line.strip() or line.startswith(TSV_COMMENT):
                continue
            columns = line.split("\t")
            if len(columns) not in (2, 3):
                raise MalformedLineError(
                    path, line_number, f"expected 2 or 3 columns, got {len(columns)}"
                )
            synset_id = columns[0].strip()
            if not synset_id:
                raise MalformedLineError(path, line_number, "empty synset id")
            if synset_id in seen:
                raise MalformedLineError(path, line_number, f'duplicate synset "{synset_id}"')
            seen.add(synset_id)
            lemmas = tuple(
                normalize_lemma(lemma) for lemma in columns[1].split(",") if lemma.strip()
            )
            hypernyms = ()
            if len(columns) == 3:
                hypernyms = tuple(
                    hypernym.strip() for hypernym in columns[2].split(",") if hypernym.strip()
                )
            synsets.append(Synset(synset_id, lemmas, hypernyms))
    return Taxonomy(synsets)


def dump_tsv_taxonomy(taxonomy: Taxonomy, path: Union[str, os.PathLike]) -> None:
    """Write `taxonomy` in the format read by `parse_tsv_taxonomy`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fd:
        for synset in taxonomy.synsets.values():
            fd.write(
                f"{synset.id}\t{','.join(synset.lemmas)}\t{','.join(synset.hypernyms)}\n"
            )
