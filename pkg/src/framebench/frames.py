"""Frame database: frames, frame elements, lexical units, exemplars.

The database is one XML file.  Each ``frame`` element carries its
``definition``, ``FE`` declarations with coreness, ``lu`` entries
(Arabic lemmas in transliteration or plain English lemmas), and
``exemplar`` blocks: annotated English sentences shown to the annotator
as guidance.  Exemplar labels are validated against the frame's FE
inventory at load time.
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from . import codec
from .errors import DanglingFrame, FormatError

__all__ = [
    "FrameElementDef",
    "LexicalUnit",
    "ExemplarLabel",
    "Exemplar",
    "Frame",
    "FrameDB",
    "load_framedb",
    "suggest_frames",
]

CORENESS = {"core", "peripheral", "extra-thematic"}


@dataclass(frozen=True)
class FrameElementDef:
    name: str
    core: str  # core | peripheral | extra-thematic


@dataclass(frozen=True)
class LexicalUnit:
    lu_id: str
    lemma: str
    pos: str
    frame_name: str


@dataclass(frozen=True)
class ExemplarLabel:
    fe: str
    start: int
    end: int


@dataclass(frozen=True)
class Exemplar:
    text: str
    target: str
    labels: tuple[ExemplarLabel, ...] = ()


@dataclass(frozen=True)
class Frame:
    name: str
    definition: str
    fe_defs: tuple[FrameElementDef, ...]
    lus: tuple[LexicalUnit, ...] = ()
    exemplars: tuple[Exemplar, ...] = ()

    def fe_names(self) -> set[str]:
        return {fe.name for fe in self.fe_defs}

    def core_fes(self) -> list[str]:
        return [fe.name for fe in self.fe_defs if fe.core == "core"]


class FrameDB:
    def __init__(self, frames: list[Frame]):
        self.frames: dict[str, Frame] = {}
        for f in frames:
            if f.name in self.frames:
                raise FormatError("frames", f"duplicate frame {f.name!r}")
            self.frames[f.name] = f
        self.lus: dict[str, LexicalUnit] = {}
        for f in frames:
            for lu in f.lus:
                self.lus[lu.lu_id] = lu

    def lus_for_lemma(self, lemma: str) -> list[LexicalUnit]:
        # Buckwalter codes are case-sensitive; only English keys fold case
        key = codec.normalize_translit(lemma)
        return sorted(
            (lu for lu in self.lus.values() if codec.normalize_translit(lu.lemma) == key),
            key=lambda lu: lu.lu_id,
        )


def load_framedb(path: str | os.PathLike) -> FrameDB:
    path = Path(path)
    try:
        root = ET.fromstring(path.read_text("utf-8"))
    except ET.ParseError as exc:
        raise FormatError(str(path), f"not well-formed: {exc}") from exc
    if root.tag != "frames":
        raise FormatError(str(path), "root element must be 'frames'")

    frames: list[Frame] = []
    for fel in root.findall("frame"):
        name = fel.get("name")
        if not name:
            raise FormatError(str(path), "frame without name")
        definition = (fel.findtext("definition") or "").strip()
        fe_defs = []
        seen = set()
        for fe in fel.findall("FE"):
            fe_name, core = fe.get("name"), fe.get("core", "peripheral")
            if not fe_name or fe_name in seen:
                raise FormatError(name, f"bad or duplicate FE {fe_name!r}")
            if core not in CORENESS:
                raise FormatError(name, f"bad coreness {core!r} on FE {fe_name!r}")
            seen.add(fe_name)
            fe_defs.append(FrameElementDef(fe_name, core))
        lus = []
        for lu in fel.findall("lu"):
            lu_id, lemma, pos = lu.get("id"), lu.get("lemma"), lu.get("pos")
            if not lu_id or not lemma or not pos:
                raise FormatError(name, "lu needs id, lemma, pos")
            # an explicit frame attribute may point elsewhere; checked below
            lus.append(LexicalUnit(lu_id, lemma, pos, lu.get("frame", name)))
        exemplars = []
        for k, ex in enumerate(fel.findall("exemplar")):
            text = ex.findtext("text") or ""
            target = ex.get("target", "")
            where = f"exemplar {k} ({target!r})"
            labels = []
            for lab in ex.findall("label"):
                fe_name = lab.get("FE", "")
                if fe_name not in seen:
                    raise FormatError(name, f"{where} labels unknown FE {fe_name!r}")
                start, end = int(lab.get("start", "0")), int(lab.get("end", "0"))
                if not 0 <= start <= end <= len(text):
                    raise FormatError(name, f"{where} label span out of bounds")
                labels.append(ExemplarLabel(fe_name, start, end))
            exemplars.append(Exemplar(text, target, tuple(labels)))
        frames.append(Frame(name, definition, tuple(fe_defs), tuple(lus), tuple(exemplars)))

    db = FrameDB(frames)
    for lu in db.lus.values():
        if lu.frame_name not in db.frames:
            raise DanglingFrame(lu.lu_id, lu.frame_name)
    return db


def suggest_frames(lemma: str, framedb: FrameDB, net=None) -> list[Frame]:
    """Candidate frames for a target lemma, duplicate-free.

    Direct lexical-unit matches on the Arabic lemma come first (ordered
    by LU id), then frames reached through the lexical-semantic net's
    English links, in their evidence-path ranking.
    """
    out: list[Frame] = []
    seen: set[str] = set()
    for lu in framedb.lus_for_lemma(lemma):
        if lu.frame_name not in seen:
            seen.add(lu.frame_name)
            out.append(framedb.frames[lu.frame_name])
    if net is not None:
        from .lexnet import frame_candidates

        for frame, _path in frame_candidates(lemma, net, framedb):
            if frame.name not in seen:
                seen.add(frame.name)
                out.append(frame)
    return out
