"""Buckwalter transliteration and normalization walkthrough.

The codec maps Arabic script to a one-to-one ASCII romanization and
back, including all diacritics, so morphological resources can be
stored and diffed as plain ASCII.
"""

from framebench import codec

examples = ["كتاب", "أَكَلَ", "فَأَكَلَتُها", "المَدرَسَةِ"]

print("Arabic -> Buckwalter -> Arabic")
for word in examples:
    translit = codec.to_translit(word)
    back = codec.from_translit(translit)
    print(f"  {word:>12}  ->  {translit:<14} ->  {back}   (round trip: {back == word})")

print("\nNormalization for lookup keys strips diacritics and folds alef variants:")
for word in examples:
    print(f"  {word:>12}  ->  {codec.normalize(word)}")

policy = codec.NormalizationPolicy(fold_teh_marbuta=True)
print(f"\nOptionally fold teh marbuta: مدرسة -> {codec.normalize('مدرسة', policy)}")
print(f"Normalization is idempotent: {codec.normalize(codec.normalize('فَأَكَلَتُها')) == codec.normalize('فَأَكَلَتُها')}")
