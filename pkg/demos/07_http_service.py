"""A scripted client session against the annotation HTTP API.

Boots the service in-process, performs the full annotation flow over
HTTP, provokes a stale-revision conflict, and fetches the mined rules.
"""

import tempfile
from importlib import resources
from pathlib import Path

from fastapi.testclient import TestClient

from framebench.project import add_corpus, init_project
from framebench.server import create_app
from framebench.service import AnnotationService

data = resources.files("framebench.data")
with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    project = init_project(tmp / "proj")
    src = tmp / "desk_P1.xml"
    src.write_bytes(data.joinpath("corpus/desk_P1.xml").read_bytes())
    add_corpus(project, src)
    client = TestClient(create_app(AnnotationService(project)))

    sid = client.get("/corpora").json()[0]["sentences"][0]
    sentence = client.get(f"/sentences/{sid}").json()
    toks = sentence["tokens"]
    print("sentence:", sentence["text"])
    print("suggestions:", [f["name"] for f in client.get("/frames", params={"lemma": toks[0]["lemma"]}).json()])

    aset = client.post(
        "/asets", json={"sentence_id": sid, "target_span": toks[0]["span"], "frame": "Placing"}
    ).json()
    aid, rev = aset["aset_id"], aset["revision"]
    for span, fe in [
        (toks[1]["span"], "Agent"),
        (toks[2]["span"], "Theme"),
        ([toks[3]["span"][0], toks[4]["span"][1]], "Source"),
    ]:
        r = client.patch(
            f"/asets/{aid}/labels",
            json={"revision": rev, "layer": "FE", "span": span, "value": fe},
        )
        rev = r.json()["revision"]
        print(f"labeled {fe}: revision -> {rev}")

    stale = client.patch(
        f"/asets/{aid}/labels",
        json={"revision": 1, "layer": "FE", "span": toks[1]["span"], "value": "Agent"},
    )
    print("stale patch answered with:", stale.status_code)

    rev = client.post(f"/asets/{aid}/autofill", json={"revision": rev}).json()["revision"]
    verdict = client.post(f"/asets/{aid}/validate").json()
    print("validate:", verdict["valid"], verdict["violations"])
    print("\nmined rules:\n" + client.get("/rules/waDaEa.v").text)
