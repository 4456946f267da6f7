"""Wordnet-style lexical-semantic network with upper-ontology links.

Synsets group transliterated Arabic lemmas under a gloss, carry links to
English lemmas, and may point at an upper-ontology concept.  Relations
form a typed graph; the hypernym subgraph must be acyclic, which is
checked at load time.

Frame candidates for a lemma are found by joining the English links of
its senses (then of their hypernyms, up to depth 2) against the English
lemmas of the frame database's lexical units, keyed case-insensitively
as ``lemma.pos``.  Candidates are ranked by evidence path length, direct
links first.
"""

from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from . import codec
from .errors import FormatError

__all__ = [
    "ConceptLink",
    "Synset",
    "SemRelation",
    "LexNet",
    "load_net",
    "frame_candidates",
]

RELATION_KINDS = {"hypernym", "hyponym", "synonym-near", "antonym", "related"}
CONCEPT_RELATIONS = {"equivalent", "subsuming", "instance"}
SYNSET_POS = {"n", "v", "a", "r"}


@dataclass(frozen=True)
class ConceptLink:
    concept: str
    relation: str  # equivalent | subsuming | instance


@dataclass(frozen=True)
class Synset:
    synset_id: str
    pos: str
    lemmas: tuple[str, ...]
    gloss: str
    english_links: tuple[str, ...] = ()
    sumo: ConceptLink | None = None


@dataclass(frozen=True)
class SemRelation:
    source: str
    target: str
    kind: str


class LexNet:
    """Immutable semantic network; queries are pure."""

    def __init__(self, synsets: list[Synset], relations: list[SemRelation]):
        self.synsets = {s.synset_id: s for s in synsets}
        if len(self.synsets) != len(synsets):
            raise FormatError("synsets", "duplicate synset id")
        for rel in relations:
            for end in (rel.source, rel.target):
                if end not in self.synsets:
                    raise FormatError("relations", f"unknown synset {end!r}")
            if rel.kind not in RELATION_KINDS:
                raise FormatError("relations", f"unknown relation kind {rel.kind!r}")
        self.relations = tuple(relations)
        self._by_kind: dict[str, dict[str, list[str]]] = {}
        for rel in relations:
            self._by_kind.setdefault(rel.kind, {}).setdefault(rel.source, []).append(rel.target)
        self._by_lemma: dict[str, list[Synset]] = {}
        for s in synsets:
            for lemma in s.lemmas:
                self._by_lemma.setdefault(codec.normalize_translit(lemma), []).append(s)
        self._check_hypernym_acyclic()

    def _check_hypernym_acyclic(self) -> None:
        edges = self._by_kind.get("hypernym", {})
        state: dict[str, int] = {}  # 1 = on stack, 2 = done

        def visit(node: str, trail: list[str]) -> None:
            state[node] = 1
            for nxt in edges.get(node, ()):
                if state.get(nxt) == 1:
                    cycle = " -> ".join(trail + [node, nxt])
                    raise FormatError("relations", f"hypernym cycle: {cycle}")
                if nxt not in state:
                    visit(nxt, trail + [node])
            state[node] = 2

        for node in edges:
            if node not in state:
                visit(node, [])

    def senses(self, lemma: str) -> list[Synset]:
        """Synsets containing the (normalized) lemma, ordered by id."""
        found = self._by_lemma.get(codec.normalize_translit(lemma), [])
        return sorted(found, key=lambda s: s.synset_id)

    def closure(self, s: Synset, kind: str, max_depth: int) -> list[Synset]:
        """BFS over *kind* relations up to *max_depth*, excluding *s*."""
        if max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        edges = self._by_kind.get(kind, {})
        seen = {s.synset_id}
        out: list[Synset] = []
        queue = deque([(s.synset_id, 0)])
        while queue:
            node, depth = queue.popleft()
            if depth == max_depth:
                continue
            for nxt in edges.get(node, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    out.append(self.synsets[nxt])
                    queue.append((nxt, depth + 1))
        return out


def _load_synsets(path: Path) -> list[Synset]:
    synsets = []
    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        loc = f"{path.name}:{lineno}"
        fields = raw.split("\t")
        if len(fields) != 7:
            raise FormatError(loc, f"expected 7 fields, got {len(fields)}")
        sid, pos, lemmas, gloss, english, concept, crel = (
            "" if f == "-" else f for f in fields
        )
        if not sid or pos not in SYNSET_POS:
            raise FormatError(loc, "bad synset id or pos")
        lemma_list = tuple(x for x in lemmas.split(";") if x)
        if not lemma_list:
            raise FormatError(loc, "synset needs at least one lemma")
        sumo = None
        if concept:
            if crel not in CONCEPT_RELATIONS:
                raise FormatError(loc, f"unknown concept relation {crel!r}")
            sumo = ConceptLink(concept, crel)
        synsets.append(
            Synset(sid, pos, lemma_list, gloss, tuple(x for x in english.split(";") if x), sumo)
        )
    return synsets


def _load_relations(path: Path) -> list[SemRelation]:
    rels = []
    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        fields = raw.split("\t")
        if len(fields) != 3:
            raise FormatError(f"{path.name}:{lineno}", "expected 3 fields")
        rels.append(SemRelation(*fields))
    return rels


def load_net(path: str | os.PathLike) -> LexNet:
    base = Path(path)
    return LexNet(_load_synsets(base / "synsets.tsv"), _load_relations(base / "relations.tsv"))


def frame_candidates(lemma: str, net: LexNet, framedb) -> list[tuple[object, tuple[str, ...]]]:
    """Frames reachable from the lemma's senses, with their evidence path.

    The evidence path lists the synset ids traversed; length 1 means a
    direct English link from a sense of the lemma.  Each frame appears
    once, keeping its shortest path; ties go to the lexicographically
    first path so the ranking is deterministic.
    """
    lu_index: dict[str, list] = {}
    for frame in framedb.frames.values():
        for lu in frame.lus:
            lu_index.setdefault(f"{lu.lemma}.{lu.pos}".lower(), []).append(frame)

    best: dict[str, tuple[int, tuple[str, ...], object]] = {}
    for sense in net.senses(lemma):
        chains: list[tuple[Synset, tuple[str, ...]]] = [(sense, (sense.synset_id,))]
        edges = net._by_kind.get("hypernym", {})
        queue = deque([(sense.synset_id, (sense.synset_id,))])
        seen = {sense.synset_id}
        while queue:
            node_id, path = queue.popleft()
            if len(path) > 2:  # sense plus two hypernym steps
                continue
            for nxt in edges.get(node_id, ()):
                if nxt not in seen:
                    seen.add(nxt)
                    chains.append((net.synsets[nxt], path + (nxt,)))
                    queue.append((nxt, path + (nxt,)))
        for node, path in chains:
            for link in node.english_links:
                for frame in lu_index.get(f"{link}.{node.pos}".lower(), ()):
                    rank = (len(path), path)
                    prev = best.get(frame.name)
                    if prev is None or rank < (prev[0], prev[1]):
                        best[frame.name] = (len(path), path, frame)

    ranked = sorted(best.values(), key=lambda t: (t[0], t[1], t[2].name))
    return [(frame, path) for _, path, frame in ranked]
