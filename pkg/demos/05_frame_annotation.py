"""The frame-semantic annotation workflow, end to end in memory.

Pick a target, choose a frame from the suggestions, label the frame
elements, auto-fill the grammatical function and phrase type layers
from the parse, validate, and serialize.
"""

from importlib import resources

from framebench import annotation, codec, corpus, frames, lexnet, morphology, pipeline

data = resources.files("framebench.data")
lexicon = morphology.load_lexicon(data.joinpath("lexicon"))
framedb = frames.load_framedb(data.joinpath("frames/frames.xml"))
net = lexnet.load_net(data.joinpath("net"))

text = codec.from_translit("waDaEa Alwaladu AlkitAba fiy AlHaqiybapi.")
sent = corpus.tokenize(corpus.Sentence("P1-p0-s0", "P1-p0", (0, len(text)), text))
asent = pipeline.analyze_sentence(sent, lexicon)
spans = [t.token.char_span for t in asent.tokens]

target = asent.tokens[0]
print(f"target: {target.token.surface} (lemma {target.best.lemma})")
print("suggested frames:", [f.name for f in frames.suggest_frames(target.best.lemma, framedb, net)])
placing = framedb.frames["Placing"]
print("exemplar shown to the annotator:", placing.exemplars[0].text)

aset = annotation.new_annotation_set(asent, spans[0], "Placing", framedb)
aset = annotation.set_label(aset, "FE", spans[1], "Agent", framedb)
aset = annotation.set_label(aset, "FE", spans[2], "Theme", framedb)
aset = annotation.set_label(aset, "FE", (spans[3][0], spans[4][1]), "Source", framedb)
aset = annotation.autofill_syntax_layers(aset, asent, net)

print("\nlayers after auto-fill:")
for layer in annotation.LAYERS:
    for lab in aset.labels(layer):
        anchor = lab.segref if lab.segref else f"{lab.start}..{lab.end}"
        print(f"  {layer:<6} {anchor:<10} {lab.value}" + (f" ({lab.prep})" if lab.prep else ""))

print("\nviolations:", annotation.validate(aset, framedb))
print("\nannotation XML (FE layer only):")
print(annotation.export_annotation("waDaEa.v", [aset], framedb, layers={"FE"}))
