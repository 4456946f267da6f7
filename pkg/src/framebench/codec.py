"""Buckwalter transliteration and Arabic orthography normalization.

The codec is a strict one-to-one mapping between Arabic script and an
ASCII romanization covering the full letter inventory, the hamza
carriers, and the diacritics (short vowels, tanween, shadda, sukun,
superscript alef).  The mapping ships as a versioned data file
(``data/buckwalter.tsv``) so it can be diffed and audited; this module
loads it at import time.

Conversion rules:

- Every Arabic character in the table maps to its ASCII code and back.
- A small pass-through set (whitespace, ASCII digits, and punctuation
  that is not claimed by a transliteration code) is copied unchanged in
  both directions, so mixed text round-trips.
- Anything else raises :class:`UnsupportedCharacter` with the offending
  position.

Arabic input is re-composed to NFC on ingestion so combining hamza
sequences compare equal to their precomposed forms.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from importlib import resources

from .errors import UnsupportedCharacter

__all__ = [
    "NormalizationPolicy",
    "to_translit",
    "from_translit",
    "normalize",
    "normalize_translit",
    "strip_translit_marks",
    "is_arabic_word",
    "BW_TO_AR",
    "AR_TO_BW",
    "PASS_THROUGH",
    "TRANSLIT_MARKS",
]


def _load_table() -> dict[str, str]:
    text = resources.files("framebench.data").joinpath("buckwalter.tsv").read_text("utf-8")
    table: dict[str, str] = {}
    for raw in text.splitlines():
        if not raw or raw.startswith("#"):
            continue
        code, char = raw.split("\t")
        table[code] = char
    return table


BW_TO_AR = _load_table()
AR_TO_BW = {v: k for k, v in BW_TO_AR.items()}

# Characters that are copied verbatim in both directions.  None of them
# may collide with a transliteration code.
PASS_THROUGH = set(" \t\n0123456789.,!?;:()[]\"-/%+=")
assert not PASS_THROUGH & set(BW_TO_AR), "pass-through set collides with codec table"

# ASCII codes that render as combining marks (harakat, tanween, shadda,
# sukun, dagger alef).  Used for diacritic-stripped lookup keys.
TRANSLIT_MARKS = set("FNKaui~o`")

# Unicode combining marks removed by strip_diacritics.
_AR_MARKS = {chr(cp) for cp in range(0x064B, 0x0653)} | {"ٰ"}

_ALEF_VARIANTS_AR = {"أ": "ا", "إ": "ا", "آ": "ا", "ٱ": "ا"}
_ALEF_VARIANTS_BW = {">": "A", "<": "A", "|": "A", "{": "A"}

_ARABIC_LETTER_RANGE = set(AR_TO_BW) | _AR_MARKS


@dataclass(frozen=True)
class NormalizationPolicy:
    """What :func:`normalize` folds away.  Application is idempotent."""

    strip_diacritics: bool = True
    fold_alef_variants: bool = True
    fold_teh_marbuta: bool = False


#: Default policy used to build lexicon lookup keys.
LOOKUP_POLICY = NormalizationPolicy(strip_diacritics=True, fold_alef_variants=True)


def to_translit(text: str) -> str:
    """Convert Arabic script to its Buckwalter transliteration.

    Raises :class:`UnsupportedCharacter` for anything outside the codec
    table and the pass-through set.
    """
    text = unicodedata.normalize("NFC", text)
    out = []
    for i, ch in enumerate(text):
        if ch in AR_TO_BW:
            out.append(AR_TO_BW[ch])
        elif ch in PASS_THROUGH:
            out.append(ch)
        else:
            raise UnsupportedCharacter(ch, i)
    return "".join(out)


def from_translit(t: str) -> str:
    """Convert a Buckwalter string back to Arabic script."""
    out = []
    for i, ch in enumerate(t):
        if ch in BW_TO_AR:
            out.append(BW_TO_AR[ch])
        elif ch in PASS_THROUGH:
            out.append(ch)
        else:
            raise UnsupportedCharacter(ch, i)
    return "".join(out)


def normalize(text: str, policy: NormalizationPolicy = LOOKUP_POLICY) -> str:
    """Normalize Arabic script according to *policy* (idempotent)."""
    text = unicodedata.normalize("NFC", text)
    if policy.strip_diacritics:
        text = "".join(ch for ch in text if ch not in _AR_MARKS)
    if policy.fold_alef_variants:
        text = "".join(_ALEF_VARIANTS_AR.get(ch, ch) for ch in text)
    if policy.fold_teh_marbuta:
        text = text.replace("ة", "ه")
    return text


def strip_translit_marks(t: str) -> str:
    """Drop diacritic codes from a Buckwalter string."""
    return "".join(ch for ch in t if ch not in TRANSLIT_MARKS)


def normalize_translit(t: str, fold_alef: bool = True) -> str:
    """Diacritic-stripped (optionally alef-folded) Buckwalter lookup key."""
    t = strip_translit_marks(t)
    if fold_alef:
        t = "".join(_ALEF_VARIANTS_BW.get(ch, ch) for ch in t)
    return t


def is_arabic_word(text: str) -> bool:
    """True if every character is an Arabic letter or combining mark."""
    return bool(text) and all(ch in _ARABIC_LETTER_RANGE for ch in text)
