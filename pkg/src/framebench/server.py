"""HTTP API exposing the annotation pipeline to the browser UI.

All endpoints speak JSON except ``GET /rules/{lu_id}``, which returns
the mined rules XML.  Mutating endpoints carry the annotation set's
revision; a stale revision is answered with 409 and the current server
state, validation problems with 422 and the violation list.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import annotation
from .errors import (
    BadSpan,
    FramebenchError,
    NotValidated,
    OverlapViolation,
    StaleRevision,
    UnknownFE,
    UnknownFrame,
)
from .service import AnnotationService

__all__ = ["create_app"]


class CreateAsetBody(BaseModel):
    sentence_id: str
    target_span: tuple[int, int]
    frame: str
    lu_id: str | None = None


class PatchLabelBody(BaseModel):
    revision: int
    layer: str
    span: tuple[int, int] | None = None
    segref: str | None = None
    itype: str | None = None
    value: str
    prep: str | None = None
    status: str | None = None


class RevisionBody(BaseModel):
    revision: int


def _label_payload(lab: annotation.Label) -> dict:
    out: dict = {"value": lab.value}
    if lab.segref is not None:
        out["segref"] = lab.segref
    elif lab.itype is not None:
        out["itype"] = lab.itype
    else:
        out["start"], out["end"] = lab.start, lab.end
    if lab.prep:
        out["prep"] = lab.prep
    return out


def _aset_payload(aset: annotation.AnnotationSet, revision: int) -> dict:
    return {
        "aset_id": aset.aset_id,
        "lu_id": aset.lu_id,
        "frame": aset.frame_name,
        "sentence_id": aset.sentence_ref.sentence_id,
        "voice": aset.voice,
        "status": aset.status,
        "revision": revision,
        "layers": {
            layer: [_label_payload(lab) for lab in aset.labels(layer)]
            for layer in annotation.LAYERS
            if aset.labels(layer)
        },
    }


def create_app(service: AnnotationService, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="framebench annotation service")
    # localhost single-annotator tool; let a statically served UI call in
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    def sentence_payload(sentence_id: str) -> dict:
        try:
            asent = service.analyzed(sentence_id)
        except KeyError:
            raise HTTPException(404, f"unknown sentence {sentence_id!r}")
        g = asent.graph
        return {
            "sentence_id": sentence_id,
            "text": asent.sentence.text,
            "tokens": [
                {
                    "token_id": at.token.token_id,
                    "surface": at.token.surface,
                    "span": list(at.token.char_span),
                    "lemma": at.best.lemma,
                    "pos": at.best.pos,
                    "pos_display": at.best.pos_display(),
                    "gloss": at.best.gloss_display(),
                    "features": at.best.features.render(),
                    "segments": [
                        {"surface": s.surface, "pos": s.pos, "gloss": s.gloss, "role": s.role}
                        for s in at.best.segments
                    ],
                }
                for at in asent.tokens
            ],
            "arcs": [
                {"head": a.head, "dep": a.dep, "relation": a.relation} for a in (g.arcs if g else ())
            ],
            "root": g.root_id if g else None,
            "realizations": [
                {"relation": r.relation, "token_id": r.token_id, "segment": r.segment_index}
                for r in (g.segment_realizations if g else ())
            ],
            "constituents": [
                {
                    "char_span": list(c.char_span),
                    "pt": c.pt.label,
                    "head": c.head_id,
                    "prep": c.prep_lemma,
                }
                for c in asent.constituents
            ],
        }

    @app.get("/corpora")
    def corpora() -> list[dict]:
        out = []
        for name in sorted(service.project.corpora):
            c = service.project.corpora[name]
            sub = c.subcorpora[0]
            sentence_ids = [
                s.sentence_id
                for s2, _p, s in service.project.sentences()
                if s2.sub_cid == sub.sub_cid
            ]
            out.append(
                {
                    "name": name,
                    "corpus_id": c.corpus_id,
                    "sub_cid": sub.sub_cid,
                    "pattern": sub.pattern_key,
                    "paragraphs": len(sub.paragraphs),
                    "sentences": sentence_ids,
                }
            )
        return out

    @app.get("/sentences/{sentence_id}")
    def get_sentence(sentence_id: str) -> dict:
        return sentence_payload(sentence_id)

    @app.get("/frames")
    def get_frames(lemma: str = "") -> list[dict]:
        suggestions = service.suggest(lemma) if lemma else list(service.framedb.frames.values())
        return [
            {
                "name": f.name,
                "definition": f.definition,
                "fes": [{"name": fe.name, "core": fe.core} for fe in f.fe_defs],
                "lus": [{"id": lu.lu_id, "lemma": lu.lemma, "pos": lu.pos} for lu in f.lus],
                "exemplars": [
                    {
                        "text": ex.text,
                        "target": ex.target,
                        "labels": [
                            {"fe": lab.fe, "start": lab.start, "end": lab.end} for lab in ex.labels
                        ],
                    }
                    for ex in f.exemplars
                ],
            }
            for f in suggestions
        ]

    def _wrap(fn):
        try:
            return fn()
        except KeyError as exc:
            raise HTTPException(404, str(exc))
        except StaleRevision as exc:
            raise HTTPException(409, str(exc))
        except (UnknownFE, UnknownFrame, BadSpan, OverlapViolation, NotValidated) as exc:
            raise HTTPException(422, detail={"violations": [str(exc)]})
        except FramebenchError as exc:
            raise HTTPException(422, detail={"violations": [str(exc)]})

    @app.post("/asets", status_code=201)
    def create_aset(body: CreateAsetBody) -> dict:
        aset, rev = _wrap(
            lambda: service.create_aset(
                body.sentence_id, tuple(body.target_span), body.frame, body.lu_id
            )
        )
        return _aset_payload(aset, rev)

    @app.get("/asets/{aset_id}")
    def get_aset(aset_id: str) -> dict:
        aset, rev = _wrap(lambda: service.get_aset(aset_id))
        return _aset_payload(aset, rev)

    @app.patch("/asets/{aset_id}/labels")
    def patch_labels(aset_id: str, body: PatchLabelBody) -> dict:
        def run():
            if body.itype is not None:
                return service.mark_null_instantiated(aset_id, body.revision, body.value, body.itype)
            anchor = body.segref if body.segref is not None else tuple(body.span or (-1, -1))
            return service.patch_label(
                aset_id, body.revision, body.layer, anchor, body.value,
                prep=body.prep, status=body.status,
            )

        aset, rev = _wrap(run)
        return _aset_payload(aset, rev)

    @app.post("/asets/{aset_id}/autofill")
    def autofill(aset_id: str, body: RevisionBody) -> dict:
        aset, rev = _wrap(lambda: service.autofill(aset_id, body.revision))
        return _aset_payload(aset, rev)

    @app.post("/asets/{aset_id}/validate")
    def validate(aset_id: str) -> dict:
        problems = _wrap(lambda: service.validate_aset(aset_id))
        aset, rev = service.get_aset(aset_id)
        return {
            "aset_id": aset_id,
            "revision": rev,
            "valid": not problems,
            "violations": [{"kind": p.kind, "message": p.message} for p in problems],
        }

    @app.get("/rules/{lu_id}")
    def get_rules(lu_id: str) -> Response:
        xml = _wrap(lambda: service.mine(lu_id))
        return Response(content=xml, media_type="application/xml")

    return app
