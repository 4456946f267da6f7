"""framebench: multi-level Arabic text analysis and frame-semantic annotation.

The toolkit chains a Buckwalter transliteration codec, a three-table
morphological analyzer with clitic segmentation, a rule-based dependency
and constituent analyzer, a wordnet-style lexical-semantic net, a layered
frame-semantic annotator, and a valence-pattern rule miner.  Corpora,
annotations, and mined rules are persisted as XML in a project directory
served by a CLI and a small HTTP API.
"""

__version__ = "0.1.0"

from . import codec, corpus, errors, morphology  # noqa: F401
