"""Valence patterns and FE/PT/GF mapping rules mined from annotations.

Each validated annotation set yields one rule group: the valence
pattern string (target phrase type followed by the phrase types of the
frame-element realizations in surface order, prepositional phrases
showing their preposition), the clause voice, a verbal-clause flag, and
one mapping rule per realized frame element.  Incorporated-pronoun
realizations are morphology rather than phrases, so they are excluded
from the pattern string but still emitted as rules with the phrase type
``Pro-incorp``.

Aggregation merges groups with identical pattern, voice, flag, and rule
triples, summing their supports; the result is independent of input
order and idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from xml.sax.saxutils import quoteattr

from .annotation import AnnotationSet, validate
from .errors import MissingAlignment, NotValidated
from .frames import FrameDB

__all__ = [
    "ValencePattern",
    "MappingRule",
    "RuleGroup",
    "valence_pattern",
    "derive_rules",
    "aggregate",
    "export_rules",
]


@dataclass(frozen=True)
class ValencePattern:
    elements: tuple[str, ...]  # first element is the target's phrase type

    def render(self) -> str:
        return ".".join(self.elements)


@dataclass(frozen=True)
class MappingRule:
    rule_id: str
    fe: str
    pt: str
    gf: str

    def triple(self) -> tuple[str, str, str]:
        return (self.fe, self.pt, self.gf)


@dataclass(frozen=True)
class RuleGroup:
    group_id: str
    pattern: ValencePattern
    voice: str
    cons: str  # "T" for verbal-clause targets, else "F"
    rules: tuple[MappingRule, ...]
    support: int = 1
    semantic_field: str | None = None

    def merge_key(self):
        return (
            self.pattern.render(),
            self.voice,
            self.cons,
            tuple(r.triple() for r in self.rules),
        )


def _realized_fe_labels(aset: AnnotationSet):
    """FE labels with an overt realization, in surface order."""
    labels = [lab for lab in aset.labels("FE") if lab.itype is None]
    return sorted(labels, key=lambda lab: (lab.start, lab.end, lab.segref or ""))


def _target_pt(aset: AnnotationSet, framedb: FrameDB) -> str:
    # verbal targets head a VP; nominal targets fall back to NP
    lu = framedb.lus.get(aset.lu_id)
    pos = (lu.pos if lu else "v").lower()
    return {"v": "VP", "n": "NP", "a": "AJP"}.get(pos, "VP")


def _pattern_element(aset: AnnotationSet, lab) -> str | None:
    pt_value = aset.value_at("PT", lab.span)
    pt_label = next(
        (l for l in aset.labels("PT") if l.is_span and l.span == lab.span), None
    )
    if not pt_value:
        return None
    base = pt_value.split("-", 1)[0]
    if base == "PP" and pt_label is not None and pt_label.prep:
        return f"PP({pt_label.prep})"
    return pt_value


def valence_pattern(aset: AnnotationSet, framedb: FrameDB) -> ValencePattern:
    """Pattern string of the set's phrasal realizations, in surface order."""
    problems = validate(aset, framedb)
    if problems:
        raise NotValidated(problems)
    elements = [_target_pt(aset, framedb)]
    for lab in _realized_fe_labels(aset):
        if lab.segref is not None:
            continue  # incorporated pronouns are not phrases
        element = _pattern_element(aset, lab)
        if element is None:
            raise MissingAlignment(lab.span, "PT")
        elements.append(element)
    return ValencePattern(tuple(elements))


def derive_rules(aset: AnnotationSet, framedb: FrameDB, group_id: str = "01") -> RuleGroup:
    """One mapping rule per realized frame element, ordinals in surface order."""
    pattern = valence_pattern(aset, framedb)  # also runs validation
    rules = []
    for lab in _realized_fe_labels(aset):
        anchor = lab.segref if lab.segref is not None else lab.span
        gf = aset.value_at("GF", anchor)
        if not gf:
            raise MissingAlignment(anchor, "GF")
        if lab.segref is not None:
            pt = "Pro-incorp"
        else:
            pt = aset.value_at("PT", anchor)
            if not pt:
                raise MissingAlignment(anchor, "PT")
        rules.append(MappingRule(f"{group_id}{len(rules) + 1}", lab.value, pt, gf))

    target_span = aset.target_span
    semantic_field = aset.value_at("Sumo", target_span)
    lu = framedb.lus.get(aset.lu_id)
    cons = "T" if (lu.pos if lu else "v").lower() == "v" else "F"
    return RuleGroup(group_id, pattern, aset.voice, cons, tuple(rules), 1, semantic_field)


def aggregate(lu_id: str, groups: list[RuleGroup]) -> list[RuleGroup]:
    """Merge identical groups, sum supports, reassign deterministic ids.

    Identity is (pattern, voice, cons, rule triples); output is sorted
    by support (descending) then pattern string, so the result does not
    depend on input order and aggregating twice changes nothing.
    """
    merged: dict[tuple, RuleGroup] = {}
    for g in groups:
        key = g.merge_key()
        if key in merged:
            prev = merged[key]
            fields = sorted(f for f in (prev.semantic_field, g.semantic_field) if f)
            merged[key] = replace(
                prev,
                support=prev.support + g.support,
                semantic_field=fields[0] if fields else None,
            )
        else:
            merged[key] = g
    ordered = sorted(merged.values(), key=lambda g: (-g.support, g.pattern.render(), g.voice, g.cons))
    out = []
    for i, g in enumerate(ordered, start=1):
        gid = f"{i:02d}"
        rules = tuple(
            MappingRule(f"{gid}{k + 1}", r.fe, r.pt, r.gf) for k, r in enumerate(g.rules)
        )
        out.append(replace(g, group_id=gid, rules=rules))
    return out


def export_rules(lu_id: str, groups: list[RuleGroup]) -> str:
    """Canonical rules XML: one group element per pattern, rules nested."""
    if not groups:
        return f"<rules luID={quoteattr(lu_id)}/>\n"
    lines = [f"<rules luID={quoteattr(lu_id)}>"]
    for g in groups:
        attrs = (
            f"id={quoteattr(g.group_id)} pattern={quoteattr(g.pattern.render())} "
            f"voice={quoteattr(g.voice)} cons={quoteattr(g.cons)}"
        )
        if g.semantic_field:
            attrs += f" field={quoteattr(g.semantic_field)}"
        lines.append(f"<m {attrs}>")
        for r in g.rules:
            lines.append(
                f"  <rule id={quoteattr(r.rule_id)} FE={quoteattr(r.fe)} "
                f"PT={quoteattr(r.pt)} GF={quoteattr(r.gf)}/>"
            )
        lines.append("</m>")
    lines.append("</rules>")
    return "\n".join(lines) + "\n"
