"""Layered frame-semantic annotation sets and their XML persistence.

An annotation set ties a target span in a sentence to a frame and holds
five label layers: Target, FE (frame elements), GF (grammatical
functions), PT (phrase types), and Sumo (ontology concepts).  The FE,
GF, and PT layers are span-aligned: creating a label at a new span on
one of them materializes empty-valued slots at the same span on the
other two, so the three layers always carry the same span list.

Arguments realized inside the verb's morphology (incorporated subject
or object pronouns) are labeled with a segment reference instead of a
character span; such labels live on the FE and GF layers only and are
rendered as zero-width anchors at the target.  Core frame elements that
are conceptually present but unexpressed are marked null-instantiated
(``itype`` labels) rather than left missing.

Annotation sets are values: every mutation helper returns a new set.
The XML format groups sets per lexical unit, one file per LU, with
selective layer export supported.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from xml.sax.saxutils import escape, quoteattr

from . import codec
from .corpus import SentenceRef
from .errors import (
    BadSpan,
    FormatError,
    OverlapViolation,
    UnknownFE,
    UnknownFrame,
    ValidationFailed,
)
from .frames import FrameDB
from .pipeline import AnalyzedSentence
from .syntax import grammatical_function

__all__ = [
    "LAYERS",
    "NULL_INSTANTIATION_TYPES",
    "Label",
    "AnnotationSet",
    "Violation",
    "new_annotation_set",
    "set_label",
    "set_null_instantiated",
    "autofill_syntax_layers",
    "validate",
    "export_annotation",
    "import_annotation",
]

LAYERS = ("Target", "FE", "GF", "PT", "Sumo")
ALIGNED_LAYERS = ("FE", "GF", "PT")
NULL_INSTANTIATION_TYPES = ("INI", "DNI", "CNI")
VOICES = ("A", "P")
STATUSES = ("auto", "human-verified")


@dataclass(frozen=True)
class Label:
    """One layer label: a char span, a segment reference, or a null mark.

    Exactly one anchor kind is set.  Segment references point at a
    clitic segment (``token_id#index``) and keep a zero-width span at
    the target for display ordering.  ``prep`` carries the preposition
    (Arabic script) for prepositional-phrase PT labels.
    """

    value: str
    start: int = -1
    end: int = -1
    segref: str | None = None
    itype: str | None = None
    prep: str | None = None

    @property
    def is_span(self) -> bool:
        return self.segref is None and self.itype is None

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)

    def sort_key(self):
        if self.is_span:
            return (0, self.start, self.end, self.value)
        if self.segref is not None:
            return (1, self.segref, 0, self.value)
        return (2, self.itype, 0, self.value)


@dataclass(frozen=True)
class AnnotationSet:
    aset_id: str
    lu_id: str
    frame_name: str
    sentence_ref: SentenceRef
    voice: str = "A"
    status: str = "auto"
    layers: dict[str, tuple[Label, ...]] = field(default_factory=dict)

    def labels(self, layer: str) -> tuple[Label, ...]:
        return self.layers.get(layer, ())

    @property
    def target_span(self) -> tuple[int, int]:
        target = self.labels("Target")
        return target[0].span if target else (-1, -1)

    def value_at(self, layer: str, anchor) -> str | None:
        for lab in self.labels(layer):
            if lab.is_span and lab.span == anchor:
                return lab.value
            if lab.segref is not None and lab.segref == anchor:
                return lab.value
        return None


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


def _spans_overlap(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] < b[1] and b[0] < a[1]


def _with_labels(aset: AnnotationSet, layer: str, labels: tuple[Label, ...]) -> AnnotationSet:
    new_layers = dict(aset.layers)
    if labels:
        new_layers[layer] = tuple(sorted(labels, key=Label.sort_key))
    else:
        new_layers.pop(layer, None)
    return replace(aset, layers=new_layers)


def _pos_letter(pos: str) -> str:
    return {"V": "v", "N": "n", "ADJ": "a", "ADV": "r"}.get(pos, "x")


def new_annotation_set(
    asent: AnalyzedSentence,
    target_span: tuple[int, int],
    frame_name: str,
    framedb: FrameDB,
    lu_id: str | None = None,
    aset_id: str = "a1",
) -> AnnotationSet:
    """Create a fresh set with the Target layer filled and the rest empty.

    Voice defaults from the target token's analysis; the lexical unit
    is resolved from the frame's LU list when not given explicitly.
    """
    if frame_name not in framedb.frames:
        raise UnknownFrame(frame_name)
    sent = asent.sentence
    start, end = target_span
    if not (0 <= start < end <= len(sent.text)):
        raise BadSpan(target_span)

    voice = "A"
    target_tok = asent.token_at_span(target_span)
    if target_tok is not None and target_tok.best.features.voice == "passive":
        voice = "P"

    if lu_id is None:
        lemma = target_tok.best.lemma if target_tok else ""
        for lu in framedb.frames[frame_name].lus:
            if codec.normalize_translit(lu.lemma) == codec.normalize_translit(lemma):
                lu_id = lu.lu_id
                break
        else:
            pos = target_tok.best.pos if target_tok else "UNK"
            lu_id = f"{lemma}.{_pos_letter(pos)}"

    ref = SentenceRef(
        sub_cid=sent.parag_id.rsplit("-", 1)[0],
        parag_id=sent.parag_id,
        char_span=sent.char_span,
        sentence_id=sent.sentence_id,
        text=sent.text,
    )
    return AnnotationSet(
        aset_id=aset_id,
        lu_id=lu_id,
        frame_name=frame_name,
        sentence_ref=ref,
        voice=voice,
        status="auto",
        layers={"Target": (Label("Target", start, end),)},
    )


def set_label(
    aset: AnnotationSet,
    layer: str,
    anchor,
    value: str,
    framedb: FrameDB | None = None,
    prep: str | None = None,
) -> AnnotationSet:
    """Insert or replace a label; returns a new annotation set.

    *anchor* is a ``(start, end)`` character span or a segment-reference
    string ``token_id#index``.  FE values are checked against the
    frame's element inventory.  Creating a span on an aligned layer
    (FE/GF/PT) materializes empty slots on its siblings; segment
    references align FE and GF only.
    """
    if layer not in LAYERS:
        raise ValueError(f"unknown layer {layer!r}")
    if layer == "FE" and value and framedb is not None:
        frame = framedb.frames.get(aset.frame_name)
        if frame is None:
            raise UnknownFrame(aset.frame_name)
        if value not in frame.fe_names():
            raise UnknownFE(value, aset.frame_name)

    is_segref = isinstance(anchor, str)
    if is_segref:
        if layer not in ("FE", "GF"):
            raise BadSpan(anchor, "segment references are allowed on FE/GF layers only")
        tstart = aset.target_span[0]
        new_label = Label(value, tstart, tstart, segref=anchor, prep=prep)
    else:
        start, end = anchor
        text_len = len(aset.sentence_ref.text)
        if not (0 <= start <= end <= text_len):
            raise BadSpan(anchor)
        new_label = Label(value, start, end, prep=prep)

    def upsert(target_layer: str, label: Label, only_if_absent: bool) -> None:
        nonlocal out
        labels = list(out.labels(target_layer))
        for k, existing in enumerate(labels):
            same = (
                existing.segref == label.segref
                if label.segref is not None
                else existing.is_span and existing.span == label.span
            )
            if same:
                if not only_if_absent:
                    labels[k] = replace(
                        existing, value=label.value, prep=label.prep or existing.prep
                    )
                out = _with_labels(out, target_layer, tuple(labels))
                return
            if label.segref is None and existing.is_span and _spans_overlap(existing.span, label.span):
                raise OverlapViolation(label.span, existing.span)
        labels.append(label)
        out = _with_labels(out, target_layer, tuple(labels))

    out = aset
    upsert(layer, new_label, only_if_absent=False)
    if layer in ALIGNED_LAYERS:
        siblings = [l for l in ALIGNED_LAYERS if l != layer]
        if is_segref:
            siblings = [l for l in siblings if l != "PT"]
        for sibling in siblings:
            upsert(sibling, replace(new_label, value="", prep=None), only_if_absent=True)
    return out


def set_null_instantiated(
    aset: AnnotationSet, fe_name: str, itype: str = "INI", framedb: FrameDB | None = None
) -> AnnotationSet:
    """Mark a frame element as null-instantiated (no overt realization)."""
    if itype not in NULL_INSTANTIATION_TYPES:
        raise ValueError(f"unknown null-instantiation type {itype!r}")
    if framedb is not None:
        frame = framedb.frames.get(aset.frame_name)
        if frame and fe_name not in frame.fe_names():
            raise UnknownFE(fe_name, aset.frame_name)
    labels = [lab for lab in aset.labels("FE") if not (lab.itype and lab.value == fe_name)]
    labels.append(Label(fe_name, itype=itype))
    return _with_labels(aset, "FE", tuple(labels))


def autofill_syntax_layers(
    aset: AnnotationSet, asent: AnalyzedSentence, net=None
) -> AnnotationSet:
    """Fill empty GF/PT (and Sumo) slots from the syntactic analysis.

    A frame-element span is matched against the parse's constituents by
    exact character span; matched spans receive the constituent's
    grammatical function and phrase type.  Segment-reference labels take
    their function from the parse's clitic argument realizations.
    Values already present (human-entered or earlier auto-fill) are
    never overwritten; unmatched spans stay empty.
    """
    if asent.sentence.sentence_id != aset.sentence_ref.sentence_id:
        raise BadSpan(asent.sentence.sentence_id, "analysis is for a different sentence")
    graph = asent.graph
    out = aset
    for fe_label in aset.labels("FE"):
        if fe_label.itype is not None:
            continue
        if fe_label.segref is not None:
            if graph is None:
                continue
            token_id, _, idx = fe_label.segref.partition("#")
            gf = ""
            for real in graph.segment_realizations:
                if real.token_id == token_id and str(real.segment_index) == idx:
                    gf = {"subject": "Subj", "object": "Obj"}.get(real.relation, "Mod")
                    break
            if gf and not out.value_at("GF", fe_label.segref):
                out = set_label(out, "GF", fe_label.segref, gf)
            continue

        const = asent.constituent_at_span(fe_label.span)
        if const is None or graph is None:
            continue
        if not out.value_at("GF", fe_label.span):
            out = set_label(out, "GF", fe_label.span, grammatical_function(const, graph))
        if not out.value_at("PT", fe_label.span):
            prep = None
            if const.pt.base == "PP" and const.prep_lemma:
                # display form: written letters only, hamza carriers intact
                prep = codec.normalize(
                    codec.from_translit(const.prep_lemma),
                    codec.NormalizationPolicy(strip_diacritics=True, fold_alef_variants=False),
                )
            out = set_label(out, "PT", fe_label.span, const.pt.label, prep=prep)
        if net is not None:
            head_id = const.head_id
            if const.pt.base == "PP":
                # the semantic head of a PP is the preposition's noun
                for dep in graph.children(const.head_id):
                    arc = graph.head_arc(dep)
                    if arc and arc.relation == "prep-object":
                        head_id = dep
                        break
            head = asent.token_by_id(head_id)
            head_span = head.token.char_span
            if out.value_at("Sumo", head_span) is None:
                for sense in net.senses(head.best.lemma):
                    if sense.sumo is not None:
                        out = set_label(out, "Sumo", head_span, sense.sumo.concept)
                        break
    return out


def validate(aset: AnnotationSet, framedb: FrameDB) -> list[Violation]:
    """All invariant violations of the set; empty list iff valid."""
    v: list[Violation] = []
    frame = framedb.frames.get(aset.frame_name)
    if frame is None:
        v.append(Violation("UnknownFrame", f"frame {aset.frame_name!r} not in database"))
    if aset.voice not in VOICES:
        v.append(Violation("BadVoice", f"voice must be one of {VOICES}, got {aset.voice!r}"))
    if aset.status not in STATUSES:
        v.append(Violation("BadStatus", f"status must be one of {STATUSES}, got {aset.status!r}"))

    text_len = len(aset.sentence_ref.text)
    targets = aset.labels("Target")
    if not targets:
        v.append(Violation("EmptyTarget", "no target label"))
    for layer in LAYERS:
        spans = [lab.span for lab in aset.labels(layer) if lab.is_span]
        for s in spans:
            if not (0 <= s[0] <= s[1] <= text_len):
                v.append(Violation("BadSpan", f"{layer} span {s} outside sentence"))
        for i, a in enumerate(spans):
            for b in spans[i + 1 :]:
                if _spans_overlap(a, b):
                    v.append(Violation("Overlap", f"{layer} spans {a} and {b} overlap"))

    fe_spans = {lab.span for lab in aset.labels("FE") if lab.is_span}
    gf_spans = {lab.span for lab in aset.labels("GF") if lab.is_span}
    pt_spans = {lab.span for lab in aset.labels("PT") if lab.is_span}
    if not (fe_spans == gf_spans == pt_spans):
        v.append(
            Violation(
                "SpanAlignment",
                f"FE/GF/PT span lists differ: {sorted(fe_spans)} / {sorted(gf_spans)} / {sorted(pt_spans)}",
            )
        )
    fe_refs = {lab.segref for lab in aset.labels("FE") if lab.segref is not None}
    gf_refs = {lab.segref for lab in aset.labels("GF") if lab.segref is not None}
    if fe_refs != gf_refs:
        v.append(Violation("SpanAlignment", "FE/GF segment references differ"))
    if any(lab.segref is not None for lab in aset.labels("PT")):
        v.append(Violation("SpanAlignment", "segment references not allowed on PT"))

    realized: set[str] = set()
    null_marked: set[str] = set()
    for lab in aset.labels("FE"):
        if lab.itype is not None:
            if lab.itype not in NULL_INSTANTIATION_TYPES:
                v.append(Violation("BadNullInstantiation", f"unknown itype {lab.itype!r}"))
            null_marked.add(lab.value)
            if frame and lab.value not in frame.fe_names():
                v.append(Violation("UnknownFE", f"{lab.value!r} not in frame {aset.frame_name!r}"))
            continue
        if not lab.value:
            v.append(Violation("MissingFE", f"empty FE value at {lab.span}"))
            continue
        if frame and lab.value not in frame.fe_names():
            v.append(Violation("UnknownFE", f"{lab.value!r} not in frame {aset.frame_name!r}"))
        realized.add(lab.value)
        anchor = lab.segref if lab.segref is not None else lab.span
        if not aset.value_at("GF", anchor):
            v.append(Violation("MissingGF", f"FE {lab.value!r} at {anchor} lacks a GF value"))
        if lab.segref is None and not aset.value_at("PT", anchor):
            v.append(Violation("MissingPT", f"FE {lab.value!r} at {anchor} lacks a PT value"))

    if frame:
        for core in frame.core_fes():
            if core not in realized and core not in null_marked:
                v.append(
                    Violation("MissingCoreFE", f"core FE {core!r} neither realized nor null-instantiated")
                )
    return v


# ---------------------------------------------------------------------------
# XML persistence (one file per lexical unit)


def _label_xml(lab: Label) -> str:
    if lab.segref is not None:
        attrs = f"segref={quoteattr(lab.segref)}"
    elif lab.itype is not None:
        attrs = f"itype={quoteattr(lab.itype)}"
    else:
        attrs = f'start="{lab.start}" end="{lab.end}"'
    attrs += f" value={quoteattr(lab.value)}"
    if lab.prep:
        attrs += f" prep={quoteattr(lab.prep)}"
    return f"<label {attrs}/>"


def export_annotation(
    lu_id: str,
    sets: list[AnnotationSet],
    framedb: FrameDB,
    layers: set[str] | None = None,
    check: bool = True,
) -> str:
    """Serialize the LU's annotation sets canonically.

    All sets must validate (raises :class:`ValidationFailed` otherwise);
    the draft store passes ``check=False`` to save work in progress.
    *layers* selects which annotation layers to write; the Target layer
    is always included.
    """
    if check:
        for aset in sets:
            problems = validate(aset, framedb)
            if problems:
                raise ValidationFailed(aset.aset_id, problems)
    frames = {s.frame_name for s in sets}
    if len(frames) > 1:
        raise ValidationFailed(lu_id, [Violation("MixedFrames", str(sorted(frames)))])
    frame_name = next(iter(frames)) if frames else (
        framedb.lus[lu_id].frame_name if lu_id in framedb.lus else ""
    )

    wanted = set(LAYERS) if layers is None else set(layers) | {"Target"}
    lines = [f"<lexunit luID={quoteattr(lu_id)} frame={quoteattr(frame_name)}>"]
    by_sub: dict[str, dict[str, list[AnnotationSet]]] = {}
    for aset in sets:
        ref = aset.sentence_ref
        by_sub.setdefault(ref.sub_cid, {}).setdefault(ref.sentence_id, []).append(aset)
    for sub_cid in sorted(by_sub):
        lines.append(f"<subcorpus name={quoteattr(sub_cid)}>")
        for sent_id in sorted(by_sub[sub_cid]):
            group = sorted(by_sub[sub_cid][sent_id], key=lambda a: a.aset_id)
            ref = group[0].sentence_ref
            lines.append(
                f"<sentence sentID={quoteattr(sent_id)} paragID={quoteattr(ref.parag_id)} "
                f'start="{ref.char_span[0]}" end="{ref.char_span[1]}">'
            )
            lines.append(f"<text>{escape(ref.text)}</text>")
            for aset in group:
                lines.append(
                    f"<annotationSet asetID={quoteattr(aset.aset_id)} "
                    f"voice={quoteattr(aset.voice)} status={quoteattr(aset.status)}>"
                )
                for layer in LAYERS:
                    if layer not in wanted:
                        continue
                    labels = aset.labels(layer)
                    if not labels:
                        continue
                    lines.append(f"<layer name={quoteattr(layer)}>")
                    for lab in sorted(labels, key=Label.sort_key):
                        lines.append(_label_xml(lab))
                    lines.append("</layer>")
                lines.append("</annotationSet>")
            lines.append("</sentence>")
        lines.append("</subcorpus>")
    lines.append("</lexunit>")
    return "\n".join(lines) + "\n"


def import_annotation(document: str | bytes) -> tuple[str, list[AnnotationSet]]:
    """Parse an annotation file back into sets (inverse of export)."""
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise FormatError("annotation", f"not well-formed: {exc}") from exc
    if root.tag != "lexunit":
        raise FormatError("annotation", "root element must be 'lexunit'")
    lu_id = root.get("luID", "")
    frame_name = root.get("frame", "")
    sets: list[AnnotationSet] = []
    for sub in root.findall("subcorpus"):
        sub_cid = sub.get("name", "")
        for sent in sub.findall("sentence"):
            ref = SentenceRef(
                sub_cid=sub_cid,
                parag_id=sent.get("paragID", ""),
                char_span=(int(sent.get("start", "0")), int(sent.get("end", "0"))),
                sentence_id=sent.get("sentID", ""),
                text=sent.findtext("text") or "",
            )
            for asel in sent.findall("annotationSet"):
                layers: dict[str, tuple[Label, ...]] = {}
                for layer_el in asel.findall("layer"):
                    name = layer_el.get("name", "")
                    if name not in LAYERS:
                        raise FormatError("annotation", f"unknown layer {name!r}")
                    labels = []
                    for lab in layer_el.findall("label"):
                        value = lab.get("value", "")
                        prep = lab.get("prep")
                        if lab.get("segref") is not None:
                            labels.append(Label(value, segref=lab.get("segref"), prep=prep))
                        elif lab.get("itype") is not None:
                            labels.append(Label(value, itype=lab.get("itype"), prep=prep))
                        else:
                            labels.append(
                                Label(value, int(lab.get("start", "-1")), int(lab.get("end", "-1")), prep=prep)
                            )
                    layers[name] = tuple(sorted(labels, key=Label.sort_key))
                # zero-width segref anchors are display sugar; restore them
                target = layers.get("Target", ())
                tstart = target[0].start if target else -1
                for name in ("FE", "GF"):
                    if name in layers:
                        layers[name] = tuple(
                            replace(lab, start=tstart, end=tstart) if lab.segref is not None else lab
                            for lab in layers[name]
                        )
                sets.append(
                    AnnotationSet(
                        aset_id=asel.get("asetID", ""),
                        lu_id=lu_id,
                        frame_name=frame_name,
                        sentence_ref=ref,
                        voice=asel.get("voice", "A"),
                        status=asel.get("status", "auto"),
                        layers=layers,
                    )
                )
    return lu_id, sets
