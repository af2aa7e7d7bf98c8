# Copyright 2026 qacap contributors
# SPDX-License-Identifier: Apache-2.0

from pathlib import Path
from typing import Mapping, Optional, Sequence

import yaml

from qacap.core.backends import BackendDescriptor, RoleEnum, ScriptedBehavior
from qacap.core.config import RunConfig
from qacap.core.dialogue import Transcript, Turn
from qacap.core.prompts import DEFAULT_FIRST_QUESTION

# synset id, lemmas, hypernym ids
TOY_TAXONOMY_ROWS = [
    ("entity", ["entity"], []),
    ("animal", ["animal"], ["entity"]),
    ("dog", ["dog"], ["animal"]),
    ("cat", ["cat"], ["animal"]),
    ("tree", ["tree"], ["entity"]),
]


def scripted_descriptor(
    role: RoleEnum,
    responses: Sequence[str],
    on_exhausted: str = "repeat_last",
    per_image: Optional[Mapping[str, Sequence[str]]] = None,
) -> BackendDescriptor:
    return BackendDescriptor.for_role(
        role,
        kind="scripted",
        script=ScriptedBehavior(
            responses=tuple(responses),
            on_exhausted=on_exhausted,
            per_image=per_image or {},
        ),
    )


def scripted_run_config(
    output_path: Path,
    questions: Sequence[str] = ("What is in the background?",),
    answers: Sequence[str] = ("a dog on grass",),
    captions: Sequence[str] = ("A dog lies on the grass.",),
    total_questions: int = 10,
    **fields,
) -> RunConfig:
    """Run configuration where every role replays a script."""
    return RunConfig(
        questioner=fields.pop(
            "questioner", scripted_descriptor(RoleEnum.QUESTIONER, questions)
        ),
        answerer=fields.pop("answerer", scripted_descriptor(RoleEnum.ANSWERER, answers)),
        summarizer=fields.pop(
            "summarizer", scripted_descriptor(RoleEnum.SUMMARIZER, captions)
        ),
        total_questions=total_questions,
        output_path=output_path,
        **fields,
    )


def scripted_config_document(
    questions: Sequence[str] = ("What is in the background?",),
    answers: Sequence[str] = ("a dog on grass",),
    captions: Sequence[str] = ("A dog lies on the grass.",),
    **document,
) -> dict:
    """Configuration file content where every role replays a script."""
    return {
        "questioner": {"kind": "scripted", "script": {"responses": list(questions)}},
        "answerer": {"kind": "scripted", "script": {"responses": list(answers)}},
        "summarizer": {"kind": "scripted", "script": {"responses": list(captions)}},
        **document,
    }


def write_config(path: Path, document: dict) -> Path:
    with path.open("w") as fd:
        yaml.dump(document, fd)
    return path


def make_transcript(
    image_ref: str,
    questions: Sequence[str],
    answers: Optional[Sequence[str]] = None,
    caption: Optional[str] = "A caption.",
    questioner_id: str = "scripted:questioner",
) -> Transcript:
    """Completed transcript asking `questions`, the first one included."""
    answers = answers or ["an answer"] * len(questions)
    turns = tuple(
        Turn(index=index, question=question, answer=answer, raw_question=question, raw_answer=answer)
        for index, (question, answer) in enumerate(zip(questions, answers), start=1)
    )
    return Transcript(
        image_ref=image_ref,
        turns=turns,
        caption=caption,
        questioner_id=questioner_id,
        answerer_id="scripted:answerer",
        summarizer_id="scripted:summarizer",
    )


def opening(*questions: str) -> list[str]:
    """Questions of a dialogue opened by the hard-coded question."""
    return [DEFAULT_FIRST_QUESTION, *questions]


def write_tsv_taxonomy(path: Path, rows=TOY_TAXONOMY_ROWS) -> Path:
    with path.open("w") as fd:
        for synset_id, lemmas, hypernyms in rows:
            fd.write(f"{synset_id}\t{','.join(lemmas)}\t{','.join(hypernyms)}\n")
    return path
