"""File-based project store.

A project is one directory::

    corpus/<name>.xml         corpus documents (one sub-corpus each)
    resources/lexicon/*.tsv   morphological lexicon tables
    resources/net/*.tsv       lexical-semantic network
    resources/frames/frames.xml
    analysis/<subCID>.tsv     dependency export, derived by `analyze`
    annotations/<lu_id>.xml   validated annotation sets
    drafts/<lu_id>.xml        work in progress (may fail validation)
    rules/<lu_id>.xml         mined valence rules
    manifest                  key=value lines with resource checksums

The manifest pins every resource and corpus file with a SHA-256 so a
reopened project can detect swapped or corrupted inputs.  Loading
verifies the checksums and fails with :class:`ManifestMismatch`.
"""

from __future__ import annotations

import hashlib
import os
import shutil
from dataclasses import dataclass, field
from importlib import resources as ilres
from pathlib import Path

from . import corpus as corpus_mod
from . import frames as frames_mod
from . import lexnet as lexnet_mod
from . import morphology
from .errors import ManifestMismatch

__all__ = ["Project", "init_project", "load_project", "save_manifest"]

FORMAT_VERSION = "1"

_TRACKED_DIRS = ("corpus", "resources")


@dataclass
class Project:
    root: Path
    manifest: dict[str, str]
    corpora: dict[str, corpus_mod.Corpus] = field(default_factory=dict)
    lexicon: morphology.Lexicon | None = None
    net: lexnet_mod.LexNet | None = None
    framedb: frames_mod.FrameDB | None = None

    @property
    def corpus_dir(self) -> Path:
        return self.root / "corpus"

    @property
    def analysis_dir(self) -> Path:
        return self.root / "analysis"

    @property
    def annotations_dir(self) -> Path:
        return self.root / "annotations"

    @property
    def drafts_dir(self) -> Path:
        return self.root / "drafts"

    @property
    def rules_dir(self) -> Path:
        return self.root / "rules"

    def sentences(self):
        """All tokenized sentences across all corpora, document order."""
        out = []
        for name in sorted(self.corpora):
            out.extend(corpus_mod.iter_sentences(self.corpora[name]))
        return out


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _tracked_files(root: Path) -> list[Path]:
    files = []
    for sub in _TRACKED_DIRS:
        base = root / sub
        if base.is_dir():
            files.extend(p for p in sorted(base.rglob("*")) if p.is_file())
    return files


def save_manifest(root: Path) -> dict[str, str]:
    """Recompute checksums for all tracked files and write the manifest."""
    root = Path(root)
    manifest = {"format.version": FORMAT_VERSION}
    for p in _tracked_files(root):
        rel = p.relative_to(root).as_posix()
        manifest[f"sha256.{rel}"] = _sha256(p)
    lines = [f"{k}={v}" for k, v in sorted(manifest.items())]
    (root / "manifest").write_text("\n".join(lines) + "\n", "utf-8")
    return manifest


def _read_manifest(root: Path) -> dict[str, str]:
    path = root / "manifest"
    if not path.is_file():
        raise ManifestMismatch("manifest", f"no manifest in {root}")
    manifest = {}
    for line in path.read_text("utf-8").splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        manifest[key] = value
    return manifest


def init_project(root: str | os.PathLike, with_sample_corpus: bool = False) -> Project:
    """Create the directory skeleton, seeding bundled resources."""
    root = Path(root)
    for sub in ("corpus", "resources/lexicon", "resources/net", "resources/frames",
                "analysis", "annotations", "drafts", "rules"):
        (root / sub).mkdir(parents=True, exist_ok=True)

    data = ilres.files("framebench.data")
    for rel, dest in (
        ("lexicon", "resources/lexicon"),
        ("net", "resources/net"),
        ("frames", "resources/frames"),
    ):
        for entry in data.joinpath(rel).iterdir():
            target = root / dest / entry.name
            if not target.exists():
                target.write_bytes(entry.read_bytes())
    if with_sample_corpus:
        for entry in data.joinpath("corpus").iterdir():
            target = root / "corpus" / entry.name
            if not target.exists():
                target.write_bytes(entry.read_bytes())

    save_manifest(root)
    return load_project(root)


def add_corpus(project: Project, source: str | os.PathLike) -> str:
    """Canonicalize and copy a corpus document into the project."""
    source = Path(source)
    c = corpus_mod.import_corpus(source.read_text("utf-8"))
    name = f"{c.corpus_id}_{c.subcorpora[0].sub_cid}"
    (project.corpus_dir / f"{name}.xml").write_text(corpus_mod.export_corpus(c), "utf-8")
    project.corpora[name] = c
    project.manifest = save_manifest(project.root)
    return name


def load_project(root: str | os.PathLike, verify: bool = True) -> Project:
    """Open a project directory, verifying the manifest checksums."""
    root = Path(root)
    manifest = _read_manifest(root)
    if verify:
        for key, expected in manifest.items():
            if not key.startswith("sha256."):
                continue
            rel = key[len("sha256.") :]
            path = root / rel
            if not path.is_file():
                raise ManifestMismatch(rel, f"missing resource {rel!r}")
            if _sha256(path) != expected:
                raise ManifestMismatch(rel, f"checksum mismatch for {rel!r}")

    lex_dir = root / "resources/lexicon"
    if not (lex_dir / "stems.tsv").is_file():
        raise ManifestMismatch("resources/lexicon", "lexicon missing")
    project = Project(root=root, manifest=manifest)
    project.lexicon = morphology.load_lexicon(lex_dir)
    project.net = lexnet_mod.load_net(root / "resources/net")
    project.framedb = frames_mod.load_framedb(root / "resources/frames/frames.xml")
    for path in sorted((root / "corpus").glob("*.xml")):
        project.corpora[path.stem] = corpus_mod.import_corpus(path.read_text("utf-8"))
    return project
