"""Command-line interface for the annotation pipeline.

Stages are independently re-runnable and read prior stage outputs from
the project directory:

    framebench --project DIR import corpus.xml
    framebench --project DIR analyze [--layer morph|syntax|all]
    framebench --project DIR concord LEMMA
    framebench --project DIR annotate LU_ID --auto
    framebench --project DIR validate
    framebench --project DIR mine LU_ID
    framebench --project DIR export [--layers FE,GF] [--lu LU_ID]
    framebench --project DIR serve --port 8077

The project directory defaults to the FRAMEBENCH_PROJECT environment
variable.  Exit code 1 signals validation failures, 2 missing
resources.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import annotation, codec, corpus
from .errors import FramebenchError, ManifestMismatch
from .project import add_corpus, init_project, load_project
from .service import AnnotationService

__all__ = ["main"]


def _open_project(args, create: bool = False):
    root = args.project or os.environ.get("FRAMEBENCH_PROJECT")
    if not root:
        print("no project directory: pass --project or set FRAMEBENCH_PROJECT", file=sys.stderr)
        raise SystemExit(2)
    root = Path(root)
    if create and not (root / "manifest").is_file():
        return init_project(root)
    try:
        return load_project(root)
    except (ManifestMismatch, FileNotFoundError, FramebenchError) as exc:
        print(f"cannot open project {root}: {exc}", file=sys.stderr)
        raise SystemExit(2)


def cmd_import(args) -> int:
    project = _open_project(args, create=True)
    for path in args.corpus:
        if not Path(path).is_file():
            print(f"missing corpus file {path}", file=sys.stderr)
            return 2
        name = add_corpus(project, path)
        sub = project.corpora[name].subcorpora[0]
        print(f"imported {name}: {len(sub.paragraphs)} paragraphs")
    return 0


def cmd_analyze(args) -> int:
    project = _open_project(args)
    service = AnnotationService(project)
    report = service.run_analysis(layer=args.layer)
    print(
        f"analyzed {report.counts.get('sentences', 0)} sentences, "
        f"{report.counts.get('tokens', 0)} tokens, "
        f"{report.counts.get('parsed', 0)} parsed ({report.elapsed:.2f}s)"
    )
    return 0


def cmd_concord(args) -> int:
    project = _open_project(args)
    lemma = args.lemma
    if lemma.isascii():
        lemma = codec.from_translit(lemma)
    hits = []
    for name in sorted(project.corpora):
        hits.extend(corpus.concordance(project.corpora[name], lemma, project.lexicon))
    for ref in hits:
        print(f"{ref.sentence_id}\t{ref.text.strip()}")
    print(f"{len(hits)} sentences", file=sys.stderr)
    return 0


def cmd_annotate(args) -> int:
    project = _open_project(args)
    service = AnnotationService(project)
    lu = project.framedb.lus.get(args.lu_id)
    if lu is None:
        print(f"unknown lexical unit {args.lu_id}", file=sys.stderr)
        return 2
    if not args.auto:
        print("only --auto batch prefill is available from the CLI", file=sys.stderr)
        return 2
    lemma_ar = codec.from_translit(lu.lemma)
    created = 0
    for name in sorted(project.corpora):
        for ref in corpus.concordance(project.corpora[name], lemma_ar, project.lexicon):
            asent = service.analyzed(ref.sentence_id)
            target = None
            for at in asent.tokens:
                if any(
                    codec.normalize_translit(r.lemma) == codec.normalize_translit(lu.lemma)
                    for r in at.analyses
                ):
                    target = at.token.char_span
                    break
            if target is None:
                continue
            already = any(
                a.sentence_ref.sentence_id == ref.sentence_id
                for a in service.asets_for_lu(args.lu_id)
            )
            if already:
                continue
            aset, rev = service.create_aset(ref.sentence_id, target, lu.frame_name, args.lu_id)
            service.autofill(aset.aset_id, rev)
            created += 1
    print(f"prefilled {created} draft sets for {args.lu_id}")
    return 0


def cmd_validate(args) -> int:
    project = _open_project(args)
    service = AnnotationService(project)
    failures = 0
    checked = 0
    for path in sorted(project.annotations_dir.glob("*.xml")):
        lu_id, sets = annotation.import_annotation(path.read_text("utf-8"))
        for aset in sets:
            checked += 1
            problems = annotation.validate(aset, project.framedb)
            for p in problems:
                failures += 1
                print(f"{lu_id}/{aset.aset_id}: {p}", file=sys.stderr)
    drafts = sum(1 for _ in project.drafts_dir.glob("*.xml")) if project.drafts_dir.is_dir() else 0
    print(f"validated {checked} annotation sets, {failures} violations ({drafts} draft files pending)")
    return 1 if failures else 0


def cmd_mine(args) -> int:
    project = _open_project(args)
    service = AnnotationService(project)
    try:
        xml = service.mine(args.lu_id)
    except FramebenchError as exc:
        print(f"mining failed: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(xml)
    print(f"wrote {project.rules_dir / (args.lu_id + '.xml')}", file=sys.stderr)
    return 0


def cmd_export(args) -> int:
    project = _open_project(args)
    layers = set(args.layers.split(",")) if args.layers else None
    if layers is not None:
        bad = layers - set(annotation.LAYERS)
        if bad:
            print(f"unknown layers: {sorted(bad)}", file=sys.stderr)
            return 2
    out_dir = project.root / "export"
    out_dir.mkdir(exist_ok=True)
    exported = []
    for path in sorted(project.annotations_dir.glob("*.xml")):
        lu_id, sets = annotation.import_annotation(path.read_text("utf-8"))
        if args.lu and lu_id != args.lu:
            continue
        doc = annotation.export_annotation(lu_id, sets, project.framedb, layers=layers)
        if args.lu:
            sys.stdout.write(doc)
            return 0
        (out_dir / f"{lu_id}.xml").write_text(doc, "utf-8")
        exported.append(lu_id)
    print(f"exported {len(exported)} lexical units to {out_dir}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    project = _open_project(args)
    app = create_app(AnnotationService(project), ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="framebench", description=__doc__)
    parser.add_argument("--project", help="project directory (default: $FRAMEBENCH_PROJECT)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("import", help="import corpus XML into the project")
    p.add_argument("corpus", nargs="+")
    p.set_defaults(fn=cmd_import)

    p = sub.add_parser("analyze", help="run morphological and syntactic analysis")
    p.add_argument("--layer", choices=("morph", "syntax", "all"), default="all")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("concord", help="list sentences containing a lemma")
    p.add_argument("lemma")
    p.set_defaults(fn=cmd_concord)

    p = sub.add_parser("annotate", help="prefill annotation sets for a lexical unit")
    p.add_argument("lu_id")
    p.add_argument("--auto", action="store_true")
    p.set_defaults(fn=cmd_annotate)

    p = sub.add_parser("validate", help="validate stored annotation sets")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("mine", help="mine valence rules for a lexical unit")
    p.add_argument("lu_id")
    p.set_defaults(fn=cmd_mine)

    p = sub.add_parser("export", help="export annotations (optionally selected layers)")
    p.add_argument("--layers", help="comma-separated layer names, e.g. FE,GF")
    p.add_argument("--lu", help="single lexical unit to print on stdout")
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("serve", help="start the annotation HTTP API")
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--host", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except FramebenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
