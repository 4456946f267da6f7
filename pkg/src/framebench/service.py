"""Annotation service: sentence registry, revisions, persistence.

The service owns all mutation.  Annotation sets are values, so every
edit builds a new set; a per-set revision number provides optimistic
concurrency (a stale revision fails with :class:`StaleRevision` and the
caller re-reads).  Mutations to one lexical unit's files run under a
per-LU lock, so concurrent conflicting edits serialize and exactly one
of two racing patches can win.

Sets that pass validation are promoted from the draft store to the
validated store; only validated sets feed the rule miner.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field

from . import annotation, corpus, pipeline, rules
from .errors import FormatError, StaleRevision
from .frames import Frame
from .project import Project

__all__ = ["AnnotationService", "JobReport"]


@dataclass
class JobReport:
    """Counters for one batch stage run."""

    stage: str
    counts: dict[str, int] = field(default_factory=dict)
    violations: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    def bump(self, key: str, n: int = 1) -> None:
        self.counts[key] = self.counts.get(key, 0) + n


@dataclass
class _AsetRecord:
    aset: annotation.AnnotationSet
    revision: int
    validated: bool = False


class AnnotationService:
    def __init__(self, project: Project):
        self.project = project
        self.lexicon = project.lexicon
        self.net = project.net
        self.framedb = project.framedb
        self._sentences: dict[str, tuple[corpus.SubCorpus, corpus.Paragraph, corpus.Sentence]] = {}
        for sub, parag, sent in project.sentences():
            self._sentences[sent.sentence_id] = (sub, parag, sent)
        self._analyzed: dict[str, pipeline.AnalyzedSentence] = {}
        self._records: dict[str, _AsetRecord] = {}
        self._next_aset = 1
        self._registry_lock = threading.Lock()
        self._lu_locks: dict[str, threading.Lock] = {}
        self._load_stores()

    # -- sentence access ----------------------------------------------------

    def sentence_ids(self) -> list[str]:
        return sorted(self._sentences)

    def get_sentence(self, sentence_id: str) -> corpus.Sentence:
        return self._sentences[sentence_id][2]

    def analyzed(self, sentence_id: str) -> pipeline.AnalyzedSentence:
        if sentence_id not in self._analyzed:
            sent = self.get_sentence(sentence_id)
            self._analyzed[sentence_id] = pipeline.analyze_sentence(sent, self.lexicon)
        return self._analyzed[sentence_id]

    def suggest(self, lemma: str) -> list[Frame]:
        from .frames import suggest_frames

        return suggest_frames(lemma, self.framedb, self.net)

    # -- annotation set lifecycle -------------------------------------------

    def _lu_lock(self, lu_id: str) -> threading.Lock:
        with self._registry_lock:
            return self._lu_locks.setdefault(lu_id, threading.Lock())

    def _load_stores(self) -> None:
        for directory, validated in ((self.project.annotations_dir, True),
                                     (self.project.drafts_dir, False)):
            if not directory.is_dir():
                continue
            for path in sorted(directory.glob("*.xml")):
                try:
                    _lu, sets = annotation.import_annotation(path.read_text("utf-8"))
                except Exception as exc:
                    raise FormatError(str(path), str(exc)) from exc
                for aset in sets:
                    self._records[aset.aset_id] = _AsetRecord(aset, revision=1, validated=validated)
                    n = int(aset.aset_id[1:]) if aset.aset_id[1:].isdigit() else 0
                    self._next_aset = max(self._next_aset, n + 1)

    def get_aset(self, aset_id: str) -> tuple[annotation.AnnotationSet, int]:
        rec = self._records[aset_id]
        return rec.aset, rec.revision

    def asets_for_lu(self, lu_id: str, validated_only: bool = False):
        return [
            rec.aset
            for rec in self._records.values()
            if rec.aset.lu_id == lu_id and (rec.validated or not validated_only)
        ]

    def create_aset(
        self,
        sentence_id: str,
        target_span: tuple[int, int],
        frame_name: str,
        lu_id: str | None = None,
    ) -> tuple[annotation.AnnotationSet, int]:
        asent = self.analyzed(sentence_id)
        with self._registry_lock:
            aset_id = f"a{self._next_aset}"
            self._next_aset += 1
        aset = annotation.new_annotation_set(
            asent, tuple(target_span), frame_name, self.framedb, lu_id=lu_id, aset_id=aset_id
        )
        with self._lu_lock(aset.lu_id):
            self._records[aset_id] = _AsetRecord(aset, revision=1)
            self._persist_lu(aset.lu_id)
        return aset, 1

    def _apply(self, aset_id: str, revision: int, fn) -> tuple[annotation.AnnotationSet, int]:
        rec = self._records[aset_id]
        with self._lu_lock(rec.aset.lu_id):
            if rec.revision != revision:
                raise StaleRevision(aset_id, rec.revision, revision)
            new_aset = fn(rec.aset)
            rec.aset = new_aset
            rec.revision += 1
            rec.validated = False
            self._persist_lu(new_aset.lu_id)
            return rec.aset, rec.revision

    def patch_label(
        self,
        aset_id: str,
        revision: int,
        layer: str,
        anchor,
        value: str,
        prep: str | None = None,
        status: str | None = None,
    ) -> tuple[annotation.AnnotationSet, int]:
        def fn(aset):
            out = annotation.set_label(aset, layer, anchor, value, self.framedb, prep=prep)
            if status is not None:
                from dataclasses import replace

                out = replace(out, status=status)
            return out

        return self._apply(aset_id, revision, fn)

    def mark_null_instantiated(
        self, aset_id: str, revision: int, fe_name: str, itype: str = "INI"
    ) -> tuple[annotation.AnnotationSet, int]:
        return self._apply(
            aset_id,
            revision,
            lambda aset: annotation.set_null_instantiated(aset, fe_name, itype, self.framedb),
        )

    def autofill(self, aset_id: str, revision: int) -> tuple[annotation.AnnotationSet, int]:
        def fn(aset):
            asent = self.analyzed(aset.sentence_ref.sentence_id)
            return annotation.autofill_syntax_layers(aset, asent, self.net)

        return self._apply(aset_id, revision, fn)

    def validate_aset(self, aset_id: str) -> list[annotation.Violation]:
        """Validate; a clean set is promoted to the validated store."""
        rec = self._records[aset_id]
        with self._lu_lock(rec.aset.lu_id):
            problems = annotation.validate(rec.aset, self.framedb)
            if not problems and not rec.validated:
                rec.validated = True
                self._persist_lu(rec.aset.lu_id)
            return problems

    def _persist_lu(self, lu_id: str) -> None:
        """Write the LU's validated and draft files (caller holds the lock)."""
        validated = sorted(
            (r.aset for r in self._records.values() if r.aset.lu_id == lu_id and r.validated),
            key=lambda a: a.aset_id,
        )
        drafts = sorted(
            (r.aset for r in self._records.values() if r.aset.lu_id == lu_id and not r.validated),
            key=lambda a: a.aset_id,
        )
        vpath = self.project.annotations_dir / f"{lu_id}.xml"
        dpath = self.project.drafts_dir / f"{lu_id}.xml"
        vpath.parent.mkdir(parents=True, exist_ok=True)
        dpath.parent.mkdir(parents=True, exist_ok=True)
        if validated:
            vpath.write_text(
                annotation.export_annotation(lu_id, validated, self.framedb), "utf-8"
            )
        elif vpath.exists():
            vpath.unlink()
        if drafts:
            dpath.write_text(
                annotation.export_annotation(lu_id, drafts, self.framedb, check=False), "utf-8"
            )
        elif dpath.exists():
            dpath.unlink()

    # -- mining ---------------------------------------------------------------

    def mine(self, lu_id: str) -> str:
        """Derive, aggregate, and persist the LU's valence rules."""
        with self._lu_lock(lu_id):
            sets = sorted(self.asets_for_lu(lu_id, validated_only=True), key=lambda a: a.aset_id)
            groups = [rules.derive_rules(a, self.framedb) for a in sets]
            xml = rules.export_rules(lu_id, rules.aggregate(lu_id, groups))
            self.project.rules_dir.mkdir(parents=True, exist_ok=True)
            (self.project.rules_dir / f"{lu_id}.xml").write_text(xml, "utf-8")
            return xml

    # -- batch stages -----------------------------------------------------------

    def run_analysis(self, layer: str = "all") -> JobReport:
        """Write the per-sub-corpus dependency export (idempotent)."""
        report = JobReport(stage=f"analyze:{layer}")
        started = time.monotonic()
        by_sub: dict[str, list[str]] = {}
        for sub, _parag, sent in self.project.sentences():
            by_sub.setdefault(sub.sub_cid, []).append(sent.sentence_id)
        self.project.analysis_dir.mkdir(parents=True, exist_ok=True)
        for sub_cid, sentence_ids in sorted(by_sub.items()):
            blocks = []
            for sid in sentence_ids:
                asent = self.analyzed(sid)
                report.bump("sentences")
                report.bump("tokens", len(asent.tokens))
                if asent.graph is not None:
                    report.bump("parsed")
                blocks.append(_analysis_block(asent, with_syntax=layer in ("syntax", "all")))
            path = self.project.analysis_dir / f"{sub_cid}.tsv"
            payload = "\n\n".join(blocks) + "\n"
            if not path.exists() or path.read_text("utf-8") != payload:
                path.write_text(payload, "utf-8")
        report.elapsed = time.monotonic() - started
        return report


def _analysis_block(asent: pipeline.AnalyzedSentence, with_syntax: bool) -> str:
    heads: dict[str, tuple[str, str]] = {}
    if with_syntax and asent.graph is not None:
        for arc in asent.graph.arcs:
            heads[arc.dep] = (arc.head, arc.relation)
    rows = []
    for at in asent.tokens:
        tid = at.token.token_id
        head_id, relation = heads.get(tid, ("-", "-"))
        rows.append(
            "\t".join(
                [
                    tid,
                    at.token.surface,
                    at.best.lemma or "-",
                    at.best.pos,
                    at.best.features.render(),
                    head_id,
                    relation,
                ]
            )
        )
    return "\n".join(rows)
