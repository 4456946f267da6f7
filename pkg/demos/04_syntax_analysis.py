"""Dependency parsing with agreement features, and constituents.

The rule cascade finds the verbal root, attaches the agreeing
nominative as subject, accusatives as objects, prepositions as
obliques, and projects every subtree to a case-bearing constituent.
"""

from importlib import resources

from framebench import codec, corpus, morphology, pipeline, syntax

lexicon = morphology.load_lexicon(resources.files("framebench.data").joinpath("lexicon"))


def show(translit):
    text = codec.from_translit(translit)
    sent = corpus.tokenize(corpus.Sentence("D-p0-s0", "D-p0", (0, len(text)), text))
    asent = pipeline.analyze_sentence(sent, lexicon)
    g = asent.graph
    print(f"\n{text}")
    surface = {t.token.token_id: t.token.surface for t in asent.tokens}
    for arc in g.arcs:
        print(f"  {surface[arc.head]} --{arc.relation}--> {surface[arc.dep]}")
    for real in g.segment_realizations:
        seg = asent.token_by_id(real.token_id).best.segments[real.segment_index]
        print(f"  incorporated {real.relation}: segment '{seg.surface}' ({seg.pos})")
    for c in asent.constituents:
        gf = syntax.grammatical_function(c, g)
        prep = f" prep={c.prep_lemma}" if c.prep_lemma else ""
        print(f"  constituent {c.token_span}: {c.pt.label:<7} GF={gf}{prep}")


show("waDaEa Alwaladu AlkitAba fiy AlHaqiybapi.")   # put: V S O PP
show("*ahaba Al>awlAdu <ilaY Almadrasapi.")         # plural subject, verb stays singular
show("fa>akalotuhA")                                # clitic-only arguments
show("waDaEa Alwaladu AlkitAba Alkabiyra fiy AlHaqiybapi.")  # attributive adjective
