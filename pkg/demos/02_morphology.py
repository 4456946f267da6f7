"""Clitic segmentation and three-table morphological analysis.

The showcase word combines a conjunction proclitic, a perfect verb, an
incorporated subject pronoun, and an object pronoun enclitic in a
single orthographic token.
"""

from importlib import resources

from framebench import codec, morphology

lexicon = morphology.load_lexicon(resources.files("framebench.data").joinpath("lexicon"))

token = "fa>akalotuhA"
print(f"token: {codec.from_translit(token)}  ({token})\n")
for reading in morphology.analyze(token, lexicon):
    print("segments:     ", " -- ".join(s.surface for s in reading.segments))
    print("POS:          ", reading.pos_display())
    print("gloss:        ", reading.gloss_display("--"))
    print("roles:        ", " / ".join(s.role for s in reading.segments))
    print("lemma / root: ", reading.lemma, "/", reading.root)
    print("features:     ", reading.features.render())

print("\nAn unvocalized token can be ambiguous:")
for reading in morphology.analyze("ktb", lexicon):
    print(f"  lemma={reading.lemma:<8} pos={reading.pos:<3} {reading.features.render()}")

print("\nWritten diacritics disambiguate (active vs passive):")
for token in ("waDaEa", "wuDiEa"):
    (reading,) = morphology.analyze(token, lexicon)
    print(f"  {codec.from_translit(token)}  ->  voice={reading.features.voice}")

print("\nA written case vowel is only licensed by the matching suffix:")
for token in ("kitAbu", "AlkitAba", "kitAb"):
    readings = morphology.analyze(token, lexicon)
    print(f"  {token:<10} -> case values {[r.features.case for r in readings]}")
