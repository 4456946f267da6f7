"""Corpus documents, sentence splitting, and lemma concordance.

Corpora are XML documents with one sub-corpus per file, grouped by the
syntactic pattern of their sentences; the canonical serialization is
byte-stable under import/export.
"""

from importlib import resources

from framebench import codec, corpus, morphology

data = resources.files("framebench.data")
lexicon = morphology.load_lexicon(data.joinpath("lexicon"))

doc = data.joinpath("corpus/desk_M1.xml").read_text("utf-8")
c = corpus.import_corpus(doc)
sub = c.subcorpora[0]
print(f"corpus {c.corpus_id}/{sub.sub_cid} (pattern {sub.pattern_key}): {len(sub.paragraphs)} paragraphs")
print("byte-stable round trip:", corpus.export_corpus(c) == doc)

print("\nsentences of the first two paragraphs:")
for p in sub.paragraphs[:2]:
    for sent in corpus.split_sentences(p):
        sent = corpus.tokenize(sent)
        print(f"  {sent.sentence_id}: {sent.text.strip()}  [{len(sent.tokens)} tokens]")

lemma = codec.from_translit("*ahaba")
print(f"\nconcordance for lemma {lemma} (matches every inflected form):")
for ref in corpus.concordance(c, lemma, lexicon):
    print(f"  {ref.sentence_id}: {ref.text.strip()}")
