"""Rule-based dependency analysis and constituent projection.

The parser runs a deterministic rule cascade over morphologically
analyzed tokens: local attachments first (prepositions to their
genitive nouns, attributive adjectives under agreement, adjacent
genitive construct nouns), then the clause grammar (subject before
objects before obliques), then fallback attachment so every parse is a
tree.  Agreement checking is feature-driven; the classical verb-first
word order exempts a singular verb from number agreement with a plural
postverbal subject.

Pro-drop is handled at the morphology boundary: when no overt
nominative subject is found, the verb's incorporated subject-pronoun
segment is recorded as the subject realization; object-pronoun
enclitics are recorded the same way.

Every dependency subtree projects to a constituent whose phrase type
comes from the head's part of speech and whose case suffix comes from
the head's case feature (a prepositional phrase carries its genitive
noun's case and remembers the preposition).  Discontiguous subtrees are
reported and split at the gap.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .corpus import Token
from .errors import NoRoot, NonProjectiveWarning
from .morphology import MorphAnalysis, is_ditransitive

__all__ = [
    "AnalyzedToken",
    "Arc",
    "SegmentRealization",
    "DependencyGraph",
    "PhraseType",
    "Constituent",
    "DEP_RELATIONS",
    "GRAMMATICAL_FUNCTIONS",
    "parse",
    "agreement_check",
    "constituents",
    "grammatical_function",
]

DEP_RELATIONS = frozenset(
    {
        "subject",
        "object",
        "object2",
        "adjective",  # Sifa
        "idafa",
        "prep-object",
        "cognate-accusative",
        "accusative-of-cause",
        "conjunct",
        "marker",
    }
)

GRAMMATICAL_FUNCTIONS = ("Subj", "Obj", "Obj2", "OBL", "Pred", "Mod", "Gen")

NOMINAL_POS = {"N", "PN", "PRON"}

# Glosses treated as animate when disambiguating ditransitive objects.
ANIMATE_GLOSSES = {
    "boy", "girl", "man", "woman", "teacher", "child", "student",
    "boys", "girls", "men", "women", "children", "people", "person",
}


@dataclass(frozen=True)
class AnalyzedToken:
    token: Token
    analyses: tuple[MorphAnalysis, ...]
    best: MorphAnalysis


@dataclass(frozen=True)
class Arc:
    head: str  # token_id
    dep: str  # token_id
    relation: str


@dataclass(frozen=True)
class SegmentRealization:
    """An argument realized by a clitic segment instead of a phrase."""

    relation: str
    token_id: str
    segment_index: int


@dataclass(frozen=True)
class DependencyGraph:
    nodes: tuple[AnalyzedToken, ...]
    arcs: tuple[Arc, ...]
    root_id: str
    segment_realizations: tuple[SegmentRealization, ...] = ()

    def index_of(self, token_id: str) -> int:
        for i, nd in enumerate(self.nodes):
            if nd.token.token_id == token_id:
                return i
        raise KeyError(token_id)

    def node(self, token_id: str) -> AnalyzedToken:
        return self.nodes[self.index_of(token_id)]

    def head_arc(self, token_id: str) -> Arc | None:
        for arc in self.arcs:
            if arc.dep == token_id:
                return arc
        return None

    def children(self, token_id: str) -> list[str]:
        return [arc.dep for arc in self.arcs if arc.head == token_id]

    def assert_tree(self) -> None:
        assert len(self.arcs) == len(self.nodes) - 1
        heads = [a.dep for a in self.arcs]
        assert len(set(heads)) == len(heads), "a node has two heads"
        assert self.root_id not in heads, "root has a head"
        # acyclicity: walking up from every node must reach the root
        up = {a.dep: a.head for a in self.arcs}
        for nd in self.nodes:
            seen = set()
            cur = nd.token.token_id
            while cur in up:
                assert cur not in seen, "cycle"
                seen.add(cur)
                cur = up[cur]
            assert cur == self.root_id


@dataclass(frozen=True)
class PhraseType:
    base: str  # NP | PP | VP | AJP | S
    case: str | None = None

    @property
    def label(self) -> str:
        if self.base in ("VP", "S") or not self.case:
            return self.base
        return f"{self.base}-{self.case}"


@dataclass(frozen=True)
class Constituent:
    token_span: tuple[int, int]  # node indices, inclusive
    char_span: tuple[int, int]  # offsets into the sentence
    pt: PhraseType
    head_id: str
    prep_lemma: str | None = None  # transliterated, PP only


def _feats(node: AnalyzedToken):
    return node.best.features


def agreement_check(
    head: MorphAnalysis,
    dep: MorphAnalysis,
    relation: str,
    dep_follows_head: bool = True,
) -> tuple[bool, list[str]]:
    """Check the agreement features a relation requires.

    Unspecified values (``None``) never count as violations, except for
    the genitive requirement on construct-state dependents.  Returns
    the verdict together with the sorted names of violated features.
    """
    violated: set[str] = set()

    def match(name: str) -> None:
        a, b = getattr(head.features, name), getattr(dep.features, name)
        if a is not None and b is not None and a != b:
            violated.add(name)

    if relation == "adjective":
        for name in ("gender", "number", "case", "definiteness"):
            match(name)
    elif relation == "subject":
        match("gender")
        hn, dn = head.features.number, dep.features.number
        if hn is not None and dn is not None and hn != dn:
            # verb-first clauses keep the verb singular with plural subjects
            if not (dep_follows_head and hn == "sg"):
                violated.add("number")
    elif relation == "idafa":
        if dep.features.case != "gen":
            violated.add("case")
    return (not violated, sorted(violated))


def parse(tokens: list[AnalyzedToken]) -> DependencyGraph:
    """Attach every token into a single-rooted dependency tree."""
    nodes = list(tokens)
    if not nodes:
        raise NoRoot("empty sentence")

    def pos(i: int) -> str:
        return nodes[i].best.pos

    root = next((i for i in range(len(nodes)) if pos(i) == "V"), None)
    if root is None:
        root = next((i for i in range(len(nodes)) if pos(i) in NOMINAL_POS | {"ADJ"}), None)
    if root is None:
        raise NoRoot("no finite verb or nominal predicate")

    ids = [nd.token.token_id for nd in nodes]
    head_of: dict[int, tuple[int, str]] = {}

    def attach(head: int, dep: int, relation: str) -> None:
        head_of[dep] = (head, relation)

    def unattached(i: int) -> bool:
        return i != root and i not in head_of

    # 1. prepositions head the nearest following genitive noun
    for i in range(len(nodes)):
        if pos(i) != "PREP":
            continue
        for j in range(i + 1, len(nodes)):
            if unattached(j) and pos(j) in NOMINAL_POS and _feats(nodes[j]).case in ("gen", None):
                attach(i, j, "prep-object")
                break

    # 2. attributive adjectives under full agreement with a preceding noun
    for j in range(len(nodes)):
        if pos(j) != "ADJ" or not unattached(j):
            continue
        for i in range(j - 1, -1, -1):
            if pos(i) in NOMINAL_POS:
                ok, _ = agreement_check(nodes[i].best, nodes[j].best, "adjective")
                if ok:
                    attach(i, j, "adjective")
                    break

    # 3. genitive construct: adjacent noun + genitive noun
    for j in range(1, len(nodes)):
        if (
            unattached(j)
            and pos(j) in NOMINAL_POS
            and pos(j - 1) in NOMINAL_POS
            and _feats(nodes[j]).case == "gen"
        ):
            attach(j - 1, j, "idafa")

    root_is_verb = pos(root) == "V"

    # 4. subject: nearest agreeing nominative, preferring postverbal
    if root_is_verb:
        candidates = []
        for i in range(len(nodes)):
            if unattached(i) and pos(i) in NOMINAL_POS and _feats(nodes[i]).case == "nom":
                ok, _ = agreement_check(nodes[root].best, nodes[i].best, "subject", i > root)
                if ok:
                    candidates.append(i)
        if candidates:
            subject = min(candidates, key=lambda i: (abs(i - root), i < root))
            attach(root, subject, "subject")

    # 5. accusatives: cognate and causal verbal nouns, then objects
    if root_is_verb:
        acc = []
        verb_root = nodes[root].best.root
        for i in range(len(nodes)):
            if not (unattached(i) and pos(i) in NOMINAL_POS and _feats(nodes[i]).case == "acc"):
                continue
            stem_seg = nodes[i].best
            derivation = _derivation_of(nodes[i])
            if derivation == "verbal-noun" and stem_seg.root and stem_seg.root == verb_root:
                attach(root, i, "cognate-accusative")
            elif derivation == "verbal-noun":
                attach(root, i, "accusative-of-cause")
            else:
                acc.append(i)
        if acc:
            first, rest = acc[0], acc[1:]
            obj, obj2 = first, rest[0] if rest else None
            if is_ditransitive(_category_of(nodes[root])) and obj2 is not None:
                animates = [i for i in (obj, obj2) if _gloss_of(nodes[i]) in ANIMATE_GLOSSES]
                if len(animates) == 1:
                    obj = animates[0]
                    obj2 = first if obj != first else rest[0]
            attach(root, obj, "object")
            if obj2 is not None:
                attach(root, obj2, "object2")
            for extra in acc[2:]:
                if unattached(extra):
                    attach(root, extra, "marker")

    # 6. remaining prepositions become obliques of the root
    for i in range(len(nodes)):
        if unattached(i) and pos(i) == "PREP":
            attach(root, i, "prep-object")

    # 7. everything still loose hangs off the root
    for i in range(len(nodes)):
        if unattached(i):
            attach(root, i, "conjunct" if pos(i) == "CONJ" else "marker")

    arcs = tuple(
        Arc(ids[h], ids[d], rel) for d, (h, rel) in sorted(head_of.items())
    )

    # 8. pro-drop and incorporated objects
    realizations = []
    if root_is_verb:
        has_overt_subject = any(a.relation == "subject" for a in arcs)
        for k, seg in enumerate(nodes[root].best.segments):
            if seg.role == "subj-pronoun" and not has_overt_subject:
                realizations.append(SegmentRealization("subject", ids[root], k))
            elif seg.role == "obj-pronoun":
                realizations.append(SegmentRealization("object", ids[root], k))

    return DependencyGraph(tuple(nodes), arcs, ids[root], tuple(realizations))


def _category_of(node: AnalyzedToken) -> str:
    return node.best.stem_category


def _derivation_of(node: AnalyzedToken) -> str:
    return node.best.derivation


def _gloss_of(node: AnalyzedToken) -> str:
    return node.best.stem_segment.gloss


_PT_BY_POS = {"V": "VP", "PREP": "PP", "ADJ": "AJP"}


def constituents(g: DependencyGraph) -> list[Constituent]:
    """Project every dependency subtree to a constituent."""
    n = len(g.nodes)
    ids = [nd.token.token_id for nd in g.nodes]
    children: dict[int, list[int]] = {i: [] for i in range(n)}
    for arc in g.arcs:
        children[g.index_of(arc.head)].append(g.index_of(arc.dep))

    def subtree(i: int) -> set[int]:
        out = {i}
        stack = [i]
        while stack:
            for c in children[stack.pop()]:
                if c not in out:
                    out.add(c)
                    stack.append(c)
        return out

    out: list[Constituent] = []
    for i in range(n):
        members = subtree(i)
        lo, hi = min(members), max(members)
        if members == set(range(lo, hi + 1)):
            runs = [(lo, hi)]
        else:
            runs = _contiguous_runs(sorted(members))
            spans = [(g.nodes[a].token.char_span[0], g.nodes[b].token.char_span[1]) for a, b in runs]
            warnings.warn(
                f"discontiguous subtree of {ids[i]} split at gaps: {spans}",
                NonProjectiveWarning,
                stacklevel=2,
            )
        for a, b in runs:
            head = i if a <= i <= b else a
            out.append(_make_constituent(g, a, b, head))
    seen: set[tuple] = set()
    unique = []
    for c in out:
        key = (c.token_span, c.head_id)
        if key not in seen:
            seen.add(key)
            unique.append(c)
    unique.sort(key=lambda c: (c.token_span[0], -(c.token_span[1] - c.token_span[0])))
    return unique


def _contiguous_runs(indices: list[int]) -> list[tuple[int, int]]:
    runs = []
    start = prev = indices[0]
    for i in indices[1:]:
        if i != prev + 1:
            runs.append((start, prev))
            start = i
        prev = i
    runs.append((start, prev))
    return runs


def _make_constituent(g: DependencyGraph, a: int, b: int, head: int) -> Constituent:
    node = g.nodes[head]
    pos = node.best.pos
    base = _PT_BY_POS.get(pos, "NP")
    case = None
    prep_lemma = None
    if base == "PP":
        prep_lemma = node.best.lemma
        for dep in g.children(node.token.token_id):
            arc = g.head_arc(dep)
            if arc and arc.relation == "prep-object":
                case = g.node(dep).best.features.case
                break
    elif base != "VP":
        case = node.best.features.case
    char_span = (g.nodes[a].token.char_span[0], g.nodes[b].token.char_span[1])
    return Constituent((a, b), char_span, PhraseType(base, case), node.token.token_id, prep_lemma)


_GF_BY_RELATION = {
    "subject": "Subj",
    "object": "Obj",
    "object2": "Obj2",
    "idafa": "Gen",
    "adjective": "Mod",
}


def grammatical_function(c: Constituent, g: DependencyGraph) -> str:
    """Grammatical function of a constituent relative to its attachment."""
    arc = g.head_arc(c.head_id)
    if arc is None:
        return "Pred"
    if arc.relation == "prep-object":
        return "OBL" if g.node(arc.head).best.pos == "V" else "Mod"
    return _GF_BY_RELATION.get(arc.relation, "Mod")
