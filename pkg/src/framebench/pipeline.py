"""Sentence-level analysis pipeline: tokenize, analyze, parse, project."""

from __future__ import annotations

from dataclasses import dataclass

from . import codec, corpus, morphology, syntax
from .errors import NoRoot, UnsupportedCharacter

__all__ = ["AnalyzedSentence", "analyze_token", "analyze_sentence"]


@dataclass(frozen=True)
class AnalyzedSentence:
    sentence: corpus.Sentence
    tokens: tuple[syntax.AnalyzedToken, ...]
    graph: syntax.DependencyGraph | None = None
    constituents: tuple[syntax.Constituent, ...] = ()

    def token_by_id(self, token_id: str) -> syntax.AnalyzedToken:
        for t in self.tokens:
            if t.token.token_id == token_id:
                return t
        raise KeyError(token_id)

    def token_at_span(self, span: tuple[int, int]) -> syntax.AnalyzedToken | None:
        for t in self.tokens:
            if t.token.char_span == span:
                return t
        return None

    def constituent_at_span(self, span: tuple[int, int]) -> syntax.Constituent | None:
        for c in self.constituents:
            if c.char_span == span:
                return c
        return None


def analyze_token(token: corpus.Token, lexicon: morphology.Lexicon) -> syntax.AnalyzedToken:
    try:
        translit = codec.to_translit(token.surface)
    except UnsupportedCharacter:
        translit = ""
    readings = morphology.analyze(translit, lexicon, token_id=token.token_id) if translit else []
    best = morphology.select_best(readings, surface=translit, token_id=token.token_id)
    return syntax.AnalyzedToken(token, tuple(readings), best)


def analyze_sentence(
    sentence: corpus.Sentence,
    lexicon: morphology.Lexicon,
    with_parse: bool = True,
) -> AnalyzedSentence:
    """Run the morphological and (optionally) syntactic layers."""
    if not sentence.tokens:
        sentence = corpus.tokenize(sentence)
    analyzed = tuple(analyze_token(t, lexicon) for t in sentence.tokens)
    graph = None
    consts: tuple[syntax.Constituent, ...] = ()
    if with_parse and analyzed:
        try:
            graph = syntax.parse(list(analyzed))
            consts = tuple(syntax.constituents(graph))
        except NoRoot:
            graph = None
    return AnalyzedSentence(sentence, analyzed, graph, consts)
