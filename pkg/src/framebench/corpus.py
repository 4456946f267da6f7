"""Corpus document model and XML persistence.

A corpus document has a root ``asbc`` element carrying ``corpusID`` and
``subCID`` attributes and one ``text`` child per paragraph, each with a
``paragID`` attribute whose prefix is the sub-corpus id.  The canonical
serialization is UTF-8, attributes in that order, one ``text`` element
per line, so export is byte-stable and diffable.

Sentence splitting and tokenization are pure helpers: the corpus file
stores paragraphs only, while sentence offsets live with the annotation
data.
"""

from __future__ import annotations

import re
import warnings
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field, replace
from xml.sax.saxutils import escape, quoteattr

from . import codec
from .errors import DuplicateId, SchemaViolation, UnknownLemmaWarning

__all__ = [
    "Corpus",
    "SubCorpus",
    "Paragraph",
    "Sentence",
    "Token",
    "SentenceRef",
    "import_corpus",
    "export_corpus",
    "split_sentences",
    "tokenize",
    "concordance",
]

# Sentence-final punctuation: ASCII stop/question/bang, Arabic question
# mark, and the Arabic full stop.
_SENTENCE_FINAL = set(".!؟۔")

_ARABIC_WORD_RE = re.compile(r"[ء-يً-ْٰٱـ]+")


@dataclass(frozen=True)
class Paragraph:
    parag_id: str
    text: str


@dataclass(frozen=True)
class SubCorpus:
    sub_cid: str
    paragraphs: tuple[Paragraph, ...] = ()
    pattern_key: str | None = None


@dataclass(frozen=True)
class Corpus:
    corpus_id: str
    subcorpora: tuple[SubCorpus, ...] = ()


@dataclass(frozen=True)
class Token:
    token_id: str
    surface: str
    char_span: tuple[int, int]  # offsets into the sentence


@dataclass(frozen=True)
class Sentence:
    sentence_id: str
    parag_id: str
    char_span: tuple[int, int]  # offsets into the paragraph
    text: str
    tokens: tuple[Token, ...] = ()


@dataclass(frozen=True, order=True)
class SentenceRef:
    """Pointer to a sentence, carrying enough context to display it."""

    sub_cid: str
    parag_id: str
    char_span: tuple[int, int]
    sentence_id: str
    text: str = field(compare=False, default="")


def import_corpus(document: str | bytes) -> Corpus:
    """Parse a corpus XML document into a single-sub-corpus Corpus."""
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise SchemaViolation("/", f"not well-formed: {exc}") from exc
    if root.tag != "asbc":
        raise SchemaViolation(f"/{root.tag}", "root element must be 'asbc'")
    corpus_id = root.get("corpusID")
    sub_cid = root.get("subCID")
    if not corpus_id:
        raise SchemaViolation("/asbc", "missing corpusID attribute")
    if not sub_cid:
        raise SchemaViolation("/asbc", "missing subCID attribute")
    pattern_key = root.get("pattern")

    paragraphs = []
    seen: set[str] = set()
    for i, child in enumerate(root):
        path = f"/asbc/*[{i}]"
        if child.tag != "text":
            raise SchemaViolation(path, f"unexpected element {child.tag!r}")
        parag_id = child.get("paragID")
        if not parag_id:
            raise SchemaViolation(path, "missing paragID attribute")
        if parag_id in seen:
            raise DuplicateId(parag_id)
        seen.add(parag_id)
        if not parag_id.startswith(sub_cid + "-"):
            raise SchemaViolation(path, f"paragID {parag_id!r} does not extend subCID {sub_cid!r}")
        text = child.text or ""
        if not text:
            raise SchemaViolation(path, f"paragraph {parag_id!r} is empty")
        paragraphs.append(Paragraph(parag_id, text))

    sub = SubCorpus(sub_cid, tuple(paragraphs), pattern_key)
    return Corpus(corpus_id, (sub,))


def export_corpus(c: Corpus) -> str:
    """Canonical XML serialization (inverse of :func:`import_corpus`)."""
    if len(c.subcorpora) != 1:
        raise ValueError("a corpus document holds exactly one sub-corpus")
    sub = c.subcorpora[0]
    attrs = f"corpusID={quoteattr(c.corpus_id)} subCID={quoteattr(sub.sub_cid)}"
    if sub.pattern_key:
        attrs += f" pattern={quoteattr(sub.pattern_key)}"
    if not sub.paragraphs:
        return f"<asbc {attrs}/>\n"
    lines = [f"<asbc {attrs}>"]
    for p in sub.paragraphs:
        lines.append(f"<text paragID={quoteattr(p.parag_id)}>{escape(p.text)}</text>")
    lines.append("</asbc>")
    return "\n".join(lines) + "\n"


def split_sentences(p: Paragraph) -> list[Sentence]:
    """Split a paragraph at sentence-final punctuation.

    Spans tile the paragraph: inter-sentence whitespace is attached to
    the preceding sentence, leading whitespace to the first one.
    """
    text = p.text
    boundaries = []
    i = 0
    n = len(text)
    while i < n:
        if text[i] in _SENTENCE_FINAL:
            while i + 1 < n and text[i + 1] in _SENTENCE_FINAL:
                i += 1
            while i + 1 < n and text[i + 1].isspace():
                i += 1
            boundaries.append(i + 1)
        i += 1
    if not boundaries or boundaries[-1] != n:
        boundaries.append(n)

    sentences = []
    start = 0
    for end in boundaries:
        chunk = text[start:end]
        if chunk.strip():
            sid = f"{p.parag_id}-s{len(sentences)}"
            sentences.append(Sentence(sid, p.parag_id, (start, end), chunk))
            start = end
        # whitespace-only chunk: leave start in place so it joins the next one
    if start < n and sentences:
        # trailing whitespace-only remainder is folded into the last sentence
        last = sentences[-1]
        sentences[-1] = replace(
            last, char_span=(last.char_span[0], n), text=text[last.char_span[0] :]
        )
    return sentences


def tokenize(s: Sentence) -> Sentence:
    """Attach word tokens to a sentence.

    Tokens are maximal runs of Arabic letters and combining marks;
    whitespace, digits, and punctuation are separators, so concatenating
    token surfaces plus the separators reconstructs the sentence.
    """
    tokens = []
    for j, m in enumerate(_ARABIC_WORD_RE.finditer(s.text)):
        tokens.append(Token(f"{s.sentence_id}-t{j}", m.group(), (m.start(), m.end())))
    return replace(s, tokens=tuple(tokens))


def iter_sentences(c: Corpus) -> list[tuple[SubCorpus, Paragraph, Sentence]]:
    """All tokenized sentences of the corpus, in document order."""
    out = []
    for sub in c.subcorpora:
        for p in sub.paragraphs:
            for s in split_sentences(p):
                out.append((sub, p, tokenize(s)))
    return out


def concordance(c: Corpus, lemma: str, lexicon) -> list[SentenceRef]:
    """Sentences containing a token analyzable to *lemma*.

    Matching is on diacritic-stripped, alef-folded lemma keys; *lemma*
    is given in Arabic script.  Emits :class:`UnknownLemmaWarning` when
    the lemma is absent from the lexicon.
    """
    from . import morphology

    key = codec.normalize_translit(codec.to_translit(codec.normalize(lemma)))
    if key not in {codec.normalize_translit(st.lemma) for st in lexicon.stems}:
        warnings.warn(f"lemma {lemma!r} not in lexicon", UnknownLemmaWarning, stacklevel=2)

    refs = []
    for sub, p, s in iter_sentences(c):
        for tok in s.tokens:
            try:
                translit = codec.to_translit(tok.surface)
            except Exception:
                continue
            readings = morphology.analyze(translit, lexicon, token_id=tok.token_id)
            if any(codec.normalize_translit(r.lemma) == key for r in readings):
                refs.append(SentenceRef(sub.sub_cid, p.parag_id, s.char_span, s.sentence_id, s.text))
                break
    refs.sort()
    return refs
