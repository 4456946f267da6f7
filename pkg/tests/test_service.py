"""Project store, CLI stages, HTTP API, and concurrency tests."""

import threading

import pytest
from fastapi.testclient import TestClient

from framebench import annotation
from framebench.cli import main
from framebench.errors import ManifestMismatch, StaleRevision
from framebench.project import init_project, load_project, save_manifest
from framebench.server import create_app
from framebench.service import AnnotationService

from conftest import DATA, annotate_desk_corpus


# -- project store ----------------------------------------------------------


def test_project_save_load_identity(desk_project):
    reloaded = load_project(desk_project.root)
    assert sorted(reloaded.corpora) == sorted(desk_project.corpora)
    for name in desk_project.corpora:
        assert reloaded.corpora[name] == desk_project.corpora[name]
    assert reloaded.manifest == desk_project.manifest


def test_project_detects_corrupted_resource(desk_project):
    victim = desk_project.root / "resources/lexicon/stems.tsv"
    victim.write_text(victim.read_text("utf-8") + "\n# tampered\n", "utf-8")
    with pytest.raises(ManifestMismatch):
        load_project(desk_project.root)


def test_project_detects_missing_resource(desk_project):
    (desk_project.root / "resources/net/relations.tsv").unlink()
    with pytest.raises(ManifestMismatch):
        load_project(desk_project.root)


def test_corrupted_annotation_file_names_the_file(desk_project):
    bad = desk_project.annotations_dir / "x.v.xml"
    bad.write_text("<lexunit luID='x.v' frame='Placing'><oops>", "utf-8")
    with pytest.raises(Exception) as exc:
        AnnotationService(desk_project)
    assert "x.v.xml" in str(exc.value)


# -- CLI ----------------------------------------------------------------------


def _copy_corpora(tmp_path):
    files = []
    for name in ("desk_P1.xml", "desk_M1.xml", "desk_E1.xml"):
        p = tmp_path / name
        p.write_bytes(DATA.joinpath(f"corpus/{name}").read_bytes())
        files.append(str(p))
    return files


def test_cli_requires_project(capsys, monkeypatch):
    monkeypatch.delenv("FRAMEBENCH_PROJECT", raising=False)
    with pytest.raises(SystemExit) as exc:
        main(["analyze"])
    assert exc.value.code == 2


def test_cli_env_var_project(tmp_path, monkeypatch):
    monkeypatch.setenv("FRAMEBENCH_PROJECT", str(tmp_path / "proj"))
    files = _copy_corpora(tmp_path)
    assert main(["import", files[0]]) == 0
    assert (tmp_path / "proj" / "corpus" / "DESK_P1.xml").is_file()


def test_cli_full_stage_flow(tmp_path, capsys):
    root = str(tmp_path / "proj")
    files = _copy_corpora(tmp_path)
    assert main(["--project", root, "import"] + files) == 0
    assert main(["--project", root, "analyze"]) == 0
    out1 = (tmp_path / "proj" / "analysis" / "P1.tsv").read_bytes()
    assert main(["--project", root, "analyze"]) == 0  # idempotent re-run
    assert (tmp_path / "proj" / "analysis" / "P1.tsv").read_bytes() == out1

    assert main(["--project", root, "concord", "*ahaba"]) == 0
    out = capsys.readouterr().out
    assert "M1-p0-s0" in out

    assert main(["--project", root, "annotate", "waDaEa.v", "--auto"]) == 0
    drafts = tmp_path / "proj" / "drafts" / "waDaEa.v.xml"
    assert drafts.is_file()

    assert main(["--project", root, "validate"]) == 0

    # drive the desk plan through the service, then mine via the CLI
    project = load_project(root)
    service = AnnotationService(project)
    annotate_desk_corpus(service)
    assert main(["--project", root, "validate"]) == 0
    assert main(["--project", root, "mine", "waDaEa.v"]) == 0
    mined = capsys.readouterr().out
    assert 'pattern="VP.NP-nom.NP-acc.PP(في)"' in mined
    assert (tmp_path / "proj" / "rules" / "waDaEa.v.xml").is_file()

    assert main(["--project", root, "export", "--layers", "FE", "--lu", "waDaEa.v"]) == 0
    doc = capsys.readouterr().out
    assert '<layer name="FE">' in doc
    assert '<layer name="GF">' not in doc

    assert main(["--project", root, "export"]) == 0
    assert (tmp_path / "proj" / "export" / "waDaEa.v.xml").is_file()


def test_cli_validate_reports_violations(tmp_path, capsys):
    root = tmp_path / "proj"
    files = _copy_corpora(tmp_path)
    assert main(["--project", str(root), "import"] + files) == 0
    # smuggle an invalid set into the validated store
    bad = (
        '<lexunit luID="waDaEa.v" frame="Placing">\n<subcorpus name="P1">\n'
        '<sentence sentID="P1-p0-s0" paragID="P1-p0" start="0" end="41">\n'
        "<text>x y</text>\n"
        '<annotationSet asetID="a1" voice="A" status="auto">\n'
        '<layer name="Target">\n<label start="0" end="1" value="Target"/>\n</layer>\n'
        "</annotationSet>\n</sentence>\n</subcorpus>\n</lexunit>\n"
    )
    (root / "annotations").mkdir(exist_ok=True)
    (root / "annotations" / "waDaEa.v.xml").write_text(bad, "utf-8")
    assert main(["--project", str(root), "validate"]) == 1


def test_cli_missing_corpus_file(tmp_path):
    root = str(tmp_path / "proj")
    assert main(["--project", root, "import", str(tmp_path / "nope.xml")]) == 2


def test_cli_unknown_lu(tmp_path):
    root = str(tmp_path / "proj")
    files = _copy_corpora(tmp_path)
    main(["--project", root, "import"] + files)
    assert main(["--project", root, "annotate", "zz.v", "--auto"]) == 2


# -- HTTP API -----------------------------------------------------------------


@pytest.fixture()
def client(desk_service):
    return TestClient(create_app(desk_service))


def _golden_tokens(client):
    return client.get("/sentences/P1-p0-s0").json()["tokens"]


def test_api_corpora_listing(client):
    payload = client.get("/corpora").json()
    subs = {c["sub_cid"]: c for c in payload}
    assert set(subs) == {"P1", "M1", "E1"}
    assert subs["P1"]["pattern"] == "VP.NP-nom.NP-acc.PP"
    assert len(subs["P1"]["sentences"]) == 10


def test_api_sentence_payload(client):
    data = client.get("/sentences/P1-p0-s0").json()
    assert [t["surface"] for t in data["tokens"]][0].startswith("و")
    assert data["root"] == "P1-p0-s0-t0"
    assert any(a["relation"] == "subject" for a in data["arcs"])
    assert any(c["pt"] == "NP-nom" for c in data["constituents"])


def test_api_sentence_404(client):
    assert client.get("/sentences/nope").status_code == 404


def test_api_frames_suggestions_include_exemplars(client):
    frames = client.get("/frames", params={"lemma": "waDaEa"}).json()
    assert frames[0]["name"] == "Placing"
    assert frames[0]["exemplars"][0]["text"].startswith("The boy put")
    # net-based extension: rajaEa has no LU match for Self_motion but
    # reaches Motion through its hypernym
    via_net = client.get("/frames", params={"lemma": "rajaEa"}).json()
    assert "Motion" in [f["name"] for f in via_net]


def test_api_full_annotation_flow(client):
    toks = _golden_tokens(client)
    r = client.post(
        "/asets",
        json={"sentence_id": "P1-p0-s0", "target_span": toks[0]["span"], "frame": "Placing"},
    )
    assert r.status_code == 201
    aset = r.json()
    aid, rev = aset["aset_id"], aset["revision"]
    assert aset["voice"] == "A"

    for span, fe in [
        (toks[1]["span"], "Agent"),
        (toks[2]["span"], "Theme"),
        ([toks[3]["span"][0], toks[4]["span"][1]], "Source"),
    ]:
        r = client.patch(
            f"/asets/{aid}/labels",
            json={"revision": rev, "layer": "FE", "span": span, "value": fe},
        )
        assert r.status_code == 200, r.text
        new_rev = r.json()["revision"]
        assert new_rev == rev + 1
        rev = new_rev

    r = client.post(f"/asets/{aid}/autofill", json={"revision": rev})
    assert r.status_code == 200
    rev = r.json()["revision"]

    r = client.post(f"/asets/{aid}/validate")
    body = r.json()
    assert body["valid"] and body["violations"] == []

    r = client.get("/rules/waDaEa.v")
    assert r.status_code == 200
    assert r.headers["content-type"].startswith("application/xml")
    from conftest import GOLDEN_DIR

    assert r.text == (GOLDEN_DIR / "golden_rules_waDaEa.xml").read_text("utf-8")


def test_api_stale_revision_409(client):
    toks = _golden_tokens(client)
    r = client.post(
        "/asets",
        json={"sentence_id": "P1-p0-s0", "target_span": toks[0]["span"], "frame": "Placing"},
    )
    aid, rev = r.json()["aset_id"], r.json()["revision"]
    r = client.patch(
        f"/asets/{aid}/labels",
        json={"revision": rev, "layer": "FE", "span": toks[1]["span"], "value": "Agent"},
    )
    assert r.status_code == 200
    stale = client.patch(
        f"/asets/{aid}/labels",
        json={"revision": rev, "layer": "FE", "span": toks[2]["span"], "value": "Theme"},
    )
    assert stale.status_code == 409


def test_api_unknown_fe_422_with_violations(client):
    toks = _golden_tokens(client)
    r = client.post(
        "/asets",
        json={"sentence_id": "P1-p0-s0", "target_span": toks[0]["span"], "frame": "Placing"},
    )
    aid, rev = r.json()["aset_id"], r.json()["revision"]
    r = client.patch(
        f"/asets/{aid}/labels",
        json={"revision": rev, "layer": "FE", "span": toks[1]["span"], "value": "Wizard"},
    )
    assert r.status_code == 422
    assert "violations" in r.json()["detail"]


def test_api_validate_surfaces_violations(client):
    toks = _golden_tokens(client)
    r = client.post(
        "/asets",
        json={"sentence_id": "P1-p0-s0", "target_span": toks[0]["span"], "frame": "Placing"},
    )
    aid = r.json()["aset_id"]
    body = client.post(f"/asets/{aid}/validate").json()
    assert not body["valid"]
    assert any(v["kind"] == "MissingCoreFE" for v in body["violations"])


def test_api_404_unknown_aset(client):
    assert client.get("/asets/a999").status_code == 404
    assert client.post("/asets/a999/validate").status_code == 404


# -- concurrency ---------------------------------------------------------------


def test_concurrent_patches_exactly_one_wins(desk_service):
    asent = desk_service.analyzed("P1-p0-s0")
    target = asent.tokens[0].token.char_span
    aset, rev = desk_service.create_aset("P1-p0-s0", target, "Placing", "waDaEa.v")
    span1 = asent.tokens[1].token.char_span
    span2 = asent.tokens[2].token.char_span

    results = []
    barrier = threading.Barrier(2)

    def worker(span, fe):
        barrier.wait()
        try:
            desk_service.patch_label(aset.aset_id, rev, "FE", span, fe)
            results.append("ok")
        except StaleRevision:
            results.append("stale")

    threads = [
        threading.Thread(target=worker, args=(span1, "Agent")),
        threading.Thread(target=worker, args=(span2, "Theme")),
    ]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert sorted(results) == ["ok", "stale"]
    _, new_rev = desk_service.get_aset(aset.aset_id)
    assert new_rev == rev + 1


def test_revision_increments_by_one_per_success(desk_service):
    asent = desk_service.analyzed("M1-p0-s0")
    target = asent.tokens[0].token.char_span
    aset, rev = desk_service.create_aset("M1-p0-s0", target, "Motion", "*ahaba.v")
    for i, fe in enumerate(["Theme"]):
        _, new_rev = desk_service.patch_label(
            aset.aset_id, rev + i, "FE", asent.tokens[1].token.char_span, fe
        )
        assert new_rev == rev + i + 1


def test_invalid_sets_stay_in_drafts(desk_service):
    asent = desk_service.analyzed("P1-p1-s0")
    target = asent.tokens[0].token.char_span
    aset, rev = desk_service.create_aset("P1-p1-s0", target, "Placing", "waDaEa.v")
    drafts = desk_service.project.drafts_dir / "waDaEa.v.xml"
    validated = desk_service.project.annotations_dir / "waDaEa.v.xml"
    assert drafts.is_file()
    assert not validated.is_file()
    problems = desk_service.validate_aset(aset.aset_id)
    assert problems  # missing core FEs
    assert not validated.is_file()


def test_desk_plan_promotes_to_validated_store(desk_service):
    created = annotate_desk_corpus(desk_service)
    total = sum(len(v) for v in created.values())
    assert total >= 10 and len(created) >= 2
    for lu_id in created:
        path = desk_service.project.annotations_dir / f"{lu_id}.xml"
        assert path.is_file()
        _lu, sets = annotation.import_annotation(path.read_text("utf-8"))
        for aset in sets:
            assert annotation.validate(aset, desk_service.framedb) == []
