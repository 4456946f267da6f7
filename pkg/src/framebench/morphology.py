"""Three-table morphological analysis with clitic segmentation.

The lexicon follows the classic prefix/stem/suffix architecture: three
entry tables plus three compatibility sets (prefix-stem, stem-suffix,
prefix-suffix) that license which categories may combine.  An analysis
splits a token into at most one prefix, one stem, and one suffix entry;
affix entries may expand into several clitic segments (e.g. an
incorporated subject pronoun followed by an object pronoun), declared in
the data as ``+``-joined sub-segments with aligned POS and gloss lists.

Surface matching is diacritic-aware rather than exact:

- lookup keys are diacritic-stripped;
- a diacritic written in the token must agree with the matched entries
  wherever the entries are vocalized (hard conflicts reject a reading);
- the final mark cluster of the token must equal the final cluster of
  the concatenated entries exactly, so a written case vowel only
  matches the suffix that carries it and an unvocalized ending only
  matches the null suffix.

Feature bundles are assembled from category defaults (the category name
encodes the part-of-speech class and lexical flags such as feminine
gender or broken-plural number) overridden by affix contributions.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from pathlib import Path

from . import codec
from .errors import DanglingCategory, FormatError

__all__ = [
    "FeatureBundle",
    "AffixEntry",
    "StemEntry",
    "Segment",
    "MorphAnalysis",
    "Lexicon",
    "load_lexicon",
    "segment",
    "analyze",
    "select_best",
]

POS_TAGS = {"V", "N", "PN", "ADJ", "ADV", "PREP", "CONJ", "PRON", "UNK"}
DERIVATIONS = {"plain", "verbal-noun", "active-participle", "passive-participle"}

GENDERS = {"m", "f"}
NUMBERS = {"sg", "du", "pl"}
PERSONS = {"1", "2", "3"}
TENSES = {"past", "present", "imperative"}
VOICES = {"active", "passive"}
MOODS = {"ind", "subj", "juss"}
CASES = {"nom", "acc", "gen"}
DEFINITENESS = {"def", "indef"}

_FEATURE_DOMAINS = {
    "gender": GENDERS,
    "number": NUMBERS,
    "person": PERSONS,
    "tense": TENSES,
    "voice": VOICES,
    "mood": MOODS,
    "case": CASES,
    "definiteness": DEFINITENESS,
}

_FEATURE_ORDER = ("gender", "number", "person", "tense", "voice", "mood", "case", "definiteness")


@dataclass(frozen=True)
class FeatureBundle:
    """Morpho-syntactic features; ``None`` marks an unspecified value."""

    gender: str | None = None
    number: str | None = None
    person: str | None = None
    tense: str | None = None
    voice: str | None = None
    mood: str | None = None
    case: str | None = None
    definiteness: str | None = None

    def merged(self, overrides: dict[str, str]) -> "FeatureBundle":
        return replace(self, **overrides) if overrides else self

    def render(self) -> str:
        parts = [f"{k}={getattr(self, k)}" for k in _FEATURE_ORDER if getattr(self, k)]
        return "|".join(parts) if parts else "-"


EMPTY_FEATURES = FeatureBundle()

# Category base classes and the default features they contribute.  The
# first "_"-separated token of a category name selects the base; the
# remaining tokens are lexical flags.
_CATEGORY_BASES = {
    "PV": {"tense": "past", "voice": "active", "person": "3", "gender": "m", "number": "sg"},
    "IV": {"tense": "present", "voice": "active", "mood": "ind", "person": "3", "gender": "m", "number": "sg"},
    "N": {"gender": "m", "number": "sg"},
    "VN": {"gender": "m", "number": "sg"},
    "AP": {"gender": "m", "number": "sg"},
    "ADJ": {"gender": "m", "number": "sg"},
    "PREP": {},
    "CONJ": {},
    "PRON": {},
    "P0": {},
    "Pconj": {},
    "Pdet": {"definiteness": "def"},
    "S0": {},
}

_CATEGORY_FLAGS = {
    "f": {"gender": "f"},
    "pl": {"number": "pl"},
    "du": {"number": "du"},
    "pass": {"voice": "passive"},
    "ditr": {},  # ditransitive verb marker, consumed by the syntax rules
}


def category_features(category: str) -> dict[str, str]:
    parts = category.split("_")
    feats = dict(_CATEGORY_BASES.get(parts[0], {}))
    for flag in parts[1:]:
        feats.update(_CATEGORY_FLAGS.get(flag, {}))
    return feats


def is_ditransitive(category: str) -> bool:
    return "ditr" in category.split("_")[1:]


@dataclass(frozen=True)
class AffixEntry:
    """A prefix or suffix entry; ``surface`` may be empty (null affix).

    Multi-clitic affixes store their sub-segments ``+``-joined with the
    POS and gloss sequences aligned one element per sub-segment.
    """

    surface: str
    category: str
    pos_sequence: tuple[str, ...]
    features: tuple[tuple[str, str], ...]
    gloss_sequence: tuple[str, ...]
    index: int = 0

    @property
    def joined_surface(self) -> str:
        return self.surface.replace("+", "")

    @property
    def sub_surfaces(self) -> tuple[str, ...]:
        return tuple(self.surface.split("+")) if self.surface else ()

    @property
    def stripped(self) -> str:
        return codec.strip_translit_marks(self.joined_surface)


@dataclass(frozen=True)
class StemEntry:
    surface: str
    lemma: str
    root: str
    pattern: str
    category: str
    pos: str
    gloss: str
    derivation: str = "plain"
    index: int = 0

    @property
    def stripped(self) -> str:
        return codec.strip_translit_marks(self.surface)


@dataclass(frozen=True)
class Segment:
    surface: str
    pos: str
    gloss: str
    role: str  # proclitic | stem | subj-pronoun | obj-pronoun | enclitic-other


@dataclass(frozen=True)
class MorphAnalysis:
    token_id: str
    segments: tuple[Segment, ...]
    lemma: str
    root: str
    features: FeatureBundle
    score: float
    unknown: bool = False
    stem_category: str = ""
    derivation: str = "plain"
    entry_ids: tuple[int, int, int] = (-1, -1, -1)  # (prefix, stem, suffix) lexicon indices

    @property
    def pos(self) -> str:
        """Part of speech of the stem segment."""
        return self.stem_segment.pos

    def pos_display(self) -> str:
        return "+".join(seg.pos for seg in self.segments)

    def gloss_display(self, sep: str = "/") -> str:
        return sep.join(seg.gloss for seg in self.segments if seg.gloss)

    @property
    def stem_segment(self) -> Segment:
        return next(seg for seg in self.segments if seg.role == "stem")


class Lexicon:
    """Immutable after load; shareable across concurrent analyses."""

    def __init__(
        self,
        prefixes: list[AffixEntry],
        stems: list[StemEntry],
        suffixes: list[AffixEntry],
        compat_ab: set[tuple[str, str]],
        compat_bc: set[tuple[str, str]],
        compat_ac: set[tuple[str, str]],
    ):
        self.prefixes = tuple(prefixes)
        self.stems = tuple(stems)
        self.suffixes = tuple(suffixes)
        self.compat_ab = frozenset(compat_ab)
        self.compat_bc = frozenset(compat_bc)
        self.compat_ac = frozenset(compat_ac)
        self._stems_by_key: dict[str, tuple[StemEntry, ...]] = {}
        for st in self.stems:
            self._stems_by_key.setdefault(st.stripped, [])  # type: ignore[arg-type]
        grouped: dict[str, list[StemEntry]] = {k: [] for k in self._stems_by_key}
        for st in self.stems:
            grouped[st.stripped].append(st)
        self._stems_by_key = {k: tuple(v) for k, v in grouped.items()}
        self._lemma_keys = {codec.normalize_translit(st.lemma) for st in self.stems}

    def stems_for(self, key: str) -> tuple[StemEntry, ...]:
        return self._stems_by_key.get(key, ())

    def knows_lemma(self, lemma_key: str) -> bool:
        return lemma_key in self._lemma_keys


# ---------------------------------------------------------------------------
# Lexicon loading


def _split_fields(line: str, n: int, location: str) -> list[str]:
    fields = line.split("\t")
    if len(fields) != n:
        raise FormatError(location, f"expected {n} tab-separated fields, got {len(fields)}")
    return ["" if f == "-" else f for f in fields]


def _parse_features(text: str, location: str) -> tuple[tuple[str, str], ...]:
    if not text:
        return ()
    pairs = []
    for item in text.split(","):
        if "=" not in item:
            raise FormatError(location, f"bad feature assignment {item!r}")
        k, v = item.split("=", 1)
        if k not in _FEATURE_DOMAINS or v not in _FEATURE_DOMAINS[k]:
            raise FormatError(location, f"unknown feature value {item!r}")
        pairs.append((k, v))
    return tuple(pairs)


def _read_rows(path: Path) -> list[tuple[int, str]]:
    rows = []
    for lineno, raw in enumerate(path.read_text("utf-8").splitlines(), start=1):
        if not raw.strip() or raw.startswith("#"):
            continue
        rows.append((lineno, raw))
    return rows


def _load_affixes(path: Path) -> list[AffixEntry]:
    entries = []
    null_seen: set[str] = set()
    for lineno, raw in _read_rows(path):
        loc = f"{path.name}:{lineno}"
        surface, category, pos_seq, feats, gloss_seq = _split_fields(raw, 5, loc)
        if not category:
            raise FormatError(loc, "missing category")
        pos = tuple(pos_seq.split(";")) if pos_seq else ()
        gloss = tuple(gloss_seq.split(";")) if gloss_seq else ()
        n_sub = len(surface.split("+")) if surface else 0
        if surface and len(pos) != n_sub:
            raise FormatError(loc, "pos_sequence does not align with surface segments")
        if surface and gloss and len(gloss) != n_sub:
            raise FormatError(loc, "gloss does not align with surface segments")
        if not surface:
            if category in null_seen:
                raise FormatError(loc, f"second null affix for category {category!r}")
            null_seen.add(category)
        entries.append(
            AffixEntry(surface, category, pos, _parse_features(feats, loc), gloss, len(entries))
        )
    return entries


def _load_stems(path: Path) -> list[StemEntry]:
    entries = []
    for lineno, raw in _read_rows(path):
        loc = f"{path.name}:{lineno}"
        surface, lemma, root, pattern, category, pos, gloss, derivation = _split_fields(raw, 8, loc)
        if not surface or not lemma:
            raise FormatError(loc, "stem needs surface and lemma")
        if pos not in POS_TAGS:
            raise FormatError(loc, f"unknown POS tag {pos!r}")
        derivation = derivation or "plain"
        if derivation not in DERIVATIONS:
            raise FormatError(loc, f"unknown derivation {derivation!r}")
        root_len = len(codec.strip_translit_marks(root))
        if root and not 2 <= root_len <= 4:
            raise FormatError(loc, f"root {root!r} must have 2-4 consonants")
        entries.append(StemEntry(surface, lemma, root, pattern, category, pos, gloss, derivation, len(entries)))
    if not entries:
        raise FormatError(path.name, "lexicon must have stems")
    return entries


def _load_pairs(path: Path) -> set[tuple[str, str]]:
    pairs = set()
    for lineno, raw in _read_rows(path):
        loc = f"{path.name}:{lineno}"
        a, b = _split_fields(raw, 2, loc)
        if not a or not b:
            raise FormatError(loc, "empty category name")
        pairs.add((a, b))
    return pairs


def load_lexicon(path: str | os.PathLike) -> Lexicon:
    """Load the six-table lexicon from a directory of TSV files."""
    base = Path(path)
    prefixes = _load_affixes(base / "prefixes.tsv")
    stems = _load_stems(base / "stems.tsv")
    suffixes = _load_affixes(base / "suffixes.tsv")
    compat_ab = _load_pairs(base / "compat_ab.tsv")
    compat_bc = _load_pairs(base / "compat_bc.tsv")
    compat_ac = _load_pairs(base / "compat_ac.tsv")

    pref_cats = {e.category for e in prefixes}
    stem_cats = {e.category for e in stems}
    suff_cats = {e.category for e in suffixes}
    for a, b in compat_ab:
        if a not in pref_cats or b not in stem_cats:
            missing = a if a not in pref_cats else b
            raise DanglingCategory(missing, f"compat_ab references unknown category {missing!r}")
    for a, b in compat_bc:
        if a not in stem_cats or b not in suff_cats:
            missing = a if a not in stem_cats else b
            raise DanglingCategory(missing, f"compat_bc references unknown category {missing!r}")
    for a, b in compat_ac:
        if a not in pref_cats or b not in suff_cats:
            missing = a if a not in pref_cats else b
            raise DanglingCategory(missing, f"compat_ac references unknown category {missing!r}")
    for cat in pref_cats:
        if not any(a == cat for a, _ in compat_ab | compat_ac):
            raise DanglingCategory(cat)
    for cat in stem_cats:
        if not any(b == cat for _, b in compat_ab) and not any(a == cat for a, _ in compat_bc):
            raise DanglingCategory(cat)
    for cat in suff_cats:
        if not any(b == cat for _, b in compat_bc | compat_ac):
            raise DanglingCategory(cat)

    return Lexicon(prefixes, stems, suffixes, compat_ab, compat_bc, compat_ac)


# ---------------------------------------------------------------------------
# Matching


def _clusters(s: str) -> list[tuple[str, str]]:
    """Split a Buckwalter string into (base letter, mark cluster) pairs."""
    out: list[tuple[str, str]] = []
    for ch in s:
        if ch in codec.TRANSLIT_MARKS:
            if out:
                out[-1] = (out[-1][0], out[-1][1] + ch)
            else:
                out.append(("", ch))
        else:
            out.append((ch, ""))
    return out


def vocalization_compatible(token: str, entry: str) -> bool:
    """True if the token's written diacritics do not contradict *entry*.

    Non-final positions accept a missing mark on either side; the final
    position requires exact (order-insensitive) mark equality so written
    case endings are only explained by the suffix that carries them.
    """
    tc = _clusters(token)
    ec = _clusters(entry)
    if len(tc) != len(ec):
        return False
    last = len(tc) - 1
    for i, ((tb, tm), (eb, em)) in enumerate(zip(tc, ec)):
        if tb != eb:
            return False
        if i == last:
            if sorted(tm) != sorted(em):
                return False
        elif tm and em and sorted(tm) != sorted(em):
            return False
    return True


def segment(token: str, lex: Lexicon) -> list[tuple[AffixEntry, StemEntry, AffixEntry]]:
    """All (prefix, stem, suffix) splits matching the token by surface.

    Includes null-affix splits; compatibility filtering happens in
    :func:`analyze`.  Order is deterministic: shorter affix material
    first, then lexicon order.
    """
    key = codec.strip_translit_marks(token)
    if not key:
        return []
    splits = []
    for p in lex.prefixes:
        sp = p.stripped
        if not key.startswith(sp):
            continue
        for x in lex.suffixes:
            sx = x.stripped
            if len(sp) + len(sx) >= len(key):
                continue
            if sx and not key.endswith(sx):
                continue
            middle = key[len(sp) : len(key) - len(sx)] if sx else key[len(sp) :]
            for st in lex.stems_for(middle):
                entry = p.joined_surface + st.surface + x.joined_surface
                if vocalization_compatible(token, entry):
                    splits.append((p, st, x))
    splits.sort(key=lambda t: (len(t[0].stripped), len(t[2].stripped), t[0].index, t[1].index, t[2].index))
    return splits


def _affix_segments(entry: AffixEntry, default_role: str) -> list[Segment]:
    segs = []
    for i, sub in enumerate(entry.sub_surfaces):
        pos = entry.pos_sequence[i] if i < len(entry.pos_sequence) else ""
        gloss = entry.gloss_sequence[i] if i < len(entry.gloss_sequence) else ""
        if pos.startswith("Pro(subj"):
            role = "subj-pronoun"
        elif pos.startswith("Pro(obj"):
            role = "obj-pronoun"
        else:
            role = default_role
        segs.append(Segment(sub, pos, gloss, role))
    return segs


def _assemble_features(p: AffixEntry, st: StemEntry, x: AffixEntry) -> FeatureBundle:
    feats = dict(category_features(st.category))
    feats.update(dict(p.features))
    feats.update(dict(x.features))
    bundle = EMPTY_FEATURES.merged(feats)
    if st.pos == "V":
        bundle = replace(bundle, case=None, definiteness=None)
    else:
        bundle = replace(bundle, tense=None, mood=None, voice=None)
    return bundle


def analyze(token: str, lex: Lexicon, token_id: str = "") -> list[MorphAnalysis]:
    """All compatible readings of a token, in deterministic order."""
    readings = []
    for p, st, x in segment(token, lex):
        if (p.category, st.category) not in lex.compat_ab:
            continue
        if (st.category, x.category) not in lex.compat_bc:
            continue
        if (p.category, x.category) not in lex.compat_ac:
            continue
        segments = (
            *_affix_segments(p, "proclitic"),
            Segment(st.surface, st.pos, st.gloss, "stem"),
            *_affix_segments(x, "enclitic-other"),
        )
        score = -float(len(p.stripped) + len(x.stripped))
        readings.append(
            MorphAnalysis(
                token_id=token_id,
                segments=segments,
                lemma=st.lemma,
                root=st.root,
                features=_assemble_features(p, st, x),
                score=score,
                stem_category=st.category,
                derivation=st.derivation,
                entry_ids=(p.index, st.index, x.index),
            )
        )
    return readings


def select_best(
    readings: list[MorphAnalysis],
    context=None,
    *,
    surface: str = "",
    token_id: str = "",
) -> MorphAnalysis:
    """Highest-scoring reading, or an UNK fallback when there is none.

    Ties keep the earliest reading, which follows lexicon order, so the
    choice is stable across runs.  *context* is accepted for future
    position-aware scoring and is currently unused.
    """
    if readings:
        best = readings[0]
        for r in readings[1:]:
            if r.score > best.score:
                best = r
        return best
    return MorphAnalysis(
        token_id=token_id,
        segments=(Segment(surface, "UNK", "", "stem"),),
        lemma=codec.strip_translit_marks(surface),
        root="",
        features=EMPTY_FEATURES,
        score=float("-inf"),
        unknown=True,
    )
