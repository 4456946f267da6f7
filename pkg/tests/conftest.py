"""Shared fixtures: bundled resources, a desk project, annotation helpers."""

from __future__ import annotations

from importlib import resources as ilres
from pathlib import Path

import pytest

from framebench import codec, corpus, frames, lexnet, morphology, pipeline
from framebench.project import add_corpus, init_project
from framebench.service import AnnotationService

DATA = ilres.files("framebench.data")
GOLDEN_DIR = Path(__file__).parent / "data"

TABLE1_TOKEN = "fa>akalotuhA"
GOLDEN_SENTENCE = "waDaEa Alwaladu AlkitAba fiy AlHaqiybapi."


@pytest.fixture(scope="session")
def lexicon():
    return morphology.load_lexicon(DATA.joinpath("lexicon"))


@pytest.fixture(scope="session")
def framedb():
    return frames.load_framedb(DATA.joinpath("frames/frames.xml"))


@pytest.fixture(scope="session")
def net():
    return lexnet.load_net(DATA.joinpath("net"))


def make_sentence(translit: str, sentence_id: str = "T-p0-s0") -> corpus.Sentence:
    """Build a tokenized sentence from Buckwalter text."""
    text = codec.from_translit(translit)
    parag_id = sentence_id.rsplit("-", 1)[0]
    return corpus.tokenize(corpus.Sentence(sentence_id, parag_id, (0, len(text)), text))


def analyze(translit: str, lexicon, sentence_id: str = "T-p0-s0") -> pipeline.AnalyzedSentence:
    return pipeline.analyze_sentence(make_sentence(translit, sentence_id), lexicon)


def token_span(asent: pipeline.AnalyzedSentence, i: int, j: int | None = None) -> tuple[int, int]:
    """Char span covering tokens i..j (inclusive) of the sentence."""
    j = i if j is None else j
    return (asent.tokens[i].token.char_span[0], asent.tokens[j].token.char_span[1])


@pytest.fixture()
def desk_project(tmp_path):
    """A fresh project seeded with the bundled desk corpora."""
    root = tmp_path / "project"
    project = init_project(root)
    for name in ("desk_P1.xml", "desk_M1.xml", "desk_E1.xml"):
        src = tmp_path / name
        src.write_bytes(DATA.joinpath(f"corpus/{name}").read_bytes())
        add_corpus(project, src)
    return project


@pytest.fixture()
def desk_service(desk_project):
    return AnnotationService(desk_project)


# Desk-corpus annotation plan: sentence id -> frame, FE assignments.
# Spans are token ranges (i, j inclusive); "seg:k" marks an incorporated
# pronoun realization on segment k of the target token.
DESK_PLAN = {
    "waDaEa.v": [
        ("P1-p0-s0", "Placing", [("Agent", (1, 1)), ("Theme", (2, 2)), ("Source", (3, 4))], []),
        ("P1-p1-s0", "Placing", [("Agent", (1, 1)), ("Theme", (2, 2)), ("Source", (3, 4))], []),
        ("P1-p2-s0", "Placing", [("Agent", (1, 1)), ("Theme", (2, 2)), ("Source", (3, 4))], []),
        ("P1-p3-s0", "Placing", [("Agent", (1, 1)), ("Theme", (2, 2)), ("Source", (3, 4))], []),
        ("P1-p5-s0", "Placing", [("Agent", (1, 1)), ("Theme", (2, 2)), ("Source", (3, 4))], []),
        ("P1-p9-s0", "Placing", [("Agent", (1, 1)), ("Theme", (2, 3)), ("Source", (4, 5))], []),
        ("P1-p8-s0", "Placing", [("Theme", (1, 1)), ("Source", (2, 3))], [("Agent", "CNI")]),
    ],
    "*ahaba.v": [
        ("M1-p0-s0", "Motion", [("Theme", (1, 1)), ("Goal", (2, 3))], []),
        ("M1-p1-s0", "Motion", [("Theme", (1, 1)), ("Goal", (2, 3))], []),
        ("M1-p3-s0", "Motion", [("Theme", (1, 1)), ("Goal", (2, 3))], []),
        ("M1-p9-s0", "Motion", [("Theme", (1, 1)), ("Goal", (2, 3))], []),
        ("M1-p2-s0", "Motion", [("Theme", (1, 1)), ("Source", (2, 3)), ("Goal", (4, 5))], []),
    ],
    ">akala.v": [
        ("E1-p4-s0", "Ingestion", [("Ingestor", "seg:2"), ("Ingestibles", "seg:3")], []),
    ],
}


def annotate_desk_corpus(service: AnnotationService) -> dict[str, list[str]]:
    """Drive the service through the desk annotation plan.

    Every set is created on the target verb, FE-labeled, auto-filled,
    and validated; returns the validated aset ids per lexical unit.
    """
    created: dict[str, list[str]] = {}
    for lu_id, entries in DESK_PLAN.items():
        for sentence_id, frame_name, fes, nulls in entries:
            asent = service.analyzed(sentence_id)
            target = asent.tokens[0].token.char_span
            aset, rev = service.create_aset(sentence_id, target, frame_name, lu_id)
            for fe, where in fes:
                if isinstance(where, str) and where.startswith("seg:"):
                    anchor = f"{asent.tokens[0].token.token_id}#{where[4:]}"
                else:
                    anchor = token_span(asent, *where)
                _, rev = service.patch_label(aset.aset_id, rev, "FE", anchor, fe)
            for fe, itype in nulls:
                _, rev = service.mark_null_instantiated(aset.aset_id, rev, fe, itype)
            _, rev = service.autofill(aset.aset_id, rev)
            problems = service.validate_aset(aset.aset_id)
            assert problems == [], (sentence_id, [str(p) for p in problems])
            created.setdefault(lu_id, []).append(aset.aset_id)
    return created
