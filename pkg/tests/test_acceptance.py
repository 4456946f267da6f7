"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
the criteria execute.
"""

import random
import time
import unicodedata
from contextlib import contextmanager

from framebench import annotation, codec, corpus, morphology, rules
from framebench.cli import main as cli_main
from framebench.errors import OverlapViolation
from framebench.project import add_corpus, init_project
from framebench.rules import MappingRule, RuleGroup, ValencePattern
from framebench.service import AnnotationService

from conftest import (
    DATA,
    DESK_PLAN,
    GOLDEN_DIR,
    GOLDEN_SENTENCE,
    TABLE1_TOKEN,
    analyze,
    annotate_desk_corpus,
    token_span,
)
from oracle_morph import all_formable_tokens, oracle_analyze, random_lexicon


@contextmanager
def criterion(name: str, budget: float | None = None):
    start = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL: {name}", flush=True)
        raise
    elapsed = time.monotonic() - start
    if budget is not None and elapsed > budget:
        print(f"ACCEPTANCE FAIL: {name} ({elapsed:.2f}s exceeds {budget:.0f}s)", flush=True)
        raise AssertionError(f"{name}: {elapsed:.2f}s exceeds the {budget:.0f}s budget")
    print(f"ACCEPTANCE PASS: {name} ({elapsed:.2f}s)", flush=True)


def test_table1_golden(lexicon):
    with criterion("Table 1 golden analysis", budget=1.0):
        readings = morphology.analyze(TABLE1_TOKEN, lexicon, token_id="t0")
        assert len(readings) == 1
        r = readings[0]
        assert [s.surface for s in r.segments] == ["fa", ">akal", "tu", "hA"]
        assert r.pos_display() == "Conj+V+Pro(subj,1sg)+Pro(obj,3sg,f)"
        assert r.gloss_display("/") == "and/Eat/I/them"


def test_fig1_golden_end_to_end(tmp_path):
    with criterion("Fig. 1 golden end-to-end run", budget=5.0):
        # hand-built Placing sentence as a one-paragraph corpus document
        text = codec.from_translit(GOLDEN_SENTENCE)
        doc = corpus.export_corpus(
            corpus.Corpus("GOLD", (corpus.SubCorpus("G1", (corpus.Paragraph("G1-p0", text),)),))
        )
        src = tmp_path / "gold.xml"
        src.write_text(doc, "utf-8")
        project = init_project(tmp_path / "proj")
        add_corpus(project, src)
        service = AnnotationService(project)
        service.run_analysis()  # analyze + parse stages

        sid = "G1-p0-s0"
        asent = service.analyzed(sid)
        aset, rev = service.create_aset(sid, token_span(asent, 0), "Placing", "waDaEa.v")
        for fe, (i, j) in [("Agent", (1, 1)), ("Theme", (2, 2)), ("Source", (3, 4))]:
            _, rev = service.patch_label(aset.aset_id, rev, "FE", token_span(asent, i, j), fe)
        _, rev = service.autofill(aset.aset_id, rev)
        assert service.validate_aset(aset.aset_id) == []
        xml = service.mine("waDaEa.v")

        golden = (GOLDEN_DIR / "golden_rules_waDaEa.xml").read_bytes()
        assert xml.encode("utf-8") == golden
        assert (project.rules_dir / "waDaEa.v.xml").read_bytes() == golden


def test_fig2_corpus_roundtrip_byte_stable():
    with criterion("Fig. 2 corpus import/export byte stability"):
        doc = DATA.joinpath("corpus/edu_5A.xml").read_text("utf-8")
        c = corpus.import_corpus(doc)
        assert c.corpus_id == "EDU"
        assert c.subcorpora[0].sub_cid == "5A"
        assert len(c.subcorpora[0].paragraphs) == 9
        out = corpus.export_corpus(c)
        assert out == doc
        assert corpus.export_corpus(corpus.import_corpus(out)) == out


def test_codec_roundtrip_property_10000():
    with criterion("Buckwalter round-trip bijection on 10,000 random strings", budget=10.0):
        rng = random.Random(20260809)
        alphabet = sorted(codec.BW_TO_AR.values()) + [" ", ".", "0", "7"]
        failures = 0
        for _ in range(10_000):
            s = "".join(rng.choice(alphabet) for _ in range(rng.randint(0, 40)))
            s = unicodedata.normalize("NFC", s)  # canonical ArabicText form
            t = codec.to_translit(s)
            if codec.from_translit(t) != s or codec.to_translit(codec.from_translit(t)) != t:
                failures += 1
        assert failures == 0


def test_morphology_oracle_equivalence():
    with criterion("Morphology analyzer equals brute-force oracle (5 lexicons)", budget=60.0):
        rng = random.Random(42)
        mismatches = 0
        for _ in range(5):
            lex = random_lexicon(rng)
            total_entries = len(lex.prefixes) + len(lex.stems) + len(lex.suffixes)
            assert total_entries <= 50
            for token in all_formable_tokens(lex):
                got = sorted(r.entry_ids for r in morphology.analyze(token, lex))
                if got != oracle_analyze(token, lex):
                    mismatches += 1
        assert mismatches == 0


def test_annotation_invariants_1000_sequences(lexicon, framedb, net):
    with criterion("Annotation alignment invariants over 1,000 random sequences"):
        asent = analyze(GOLDEN_SENTENCE, lexicon, sentence_id="P1-p0-s0")
        fes = ["Agent", "Theme", "Goal", "Source", "Path"]
        gfs = ["Subj", "Obj", "OBL", "Mod"]
        pts = ["NP-nom", "NP-acc", "PP-gen"]
        n = len(asent.tokens)
        rng = random.Random(12345)
        violations = 0
        for _ in range(1_000):
            aset = annotation.new_annotation_set(asent, token_span(asent, 0), "Placing", framedb)
            human = {}
            for _op in range(rng.randint(1, 8)):
                i = rng.randrange(1, n)
                j = rng.randrange(i, n)
                span = token_span(asent, i, j)
                roll = rng.random()
                try:
                    if roll < 0.45:
                        layer, value = "FE", rng.choice(fes)
                    elif roll < 0.65:
                        layer, value = "GF", rng.choice(gfs)
                    elif roll < 0.8:
                        layer, value = "PT", rng.choice(pts)
                    else:
                        aset = annotation.autofill_syntax_layers(aset, asent, net)
                        continue
                    aset = annotation.set_label(aset, layer, span, value, framedb)
                    human[(layer, span)] = value
                except OverlapViolation:
                    continue
                fe_spans = {l.span for l in aset.labels("FE") if l.is_span}
                gf_spans = {l.span for l in aset.labels("GF") if l.is_span}
                pt_spans = {l.span for l in aset.labels("PT") if l.is_span}
                if not (fe_spans == gf_spans == pt_spans):
                    violations += 1
                for (layer, s), value in human.items():
                    if aset.value_at(layer, s) != value:
                        violations += 1
        assert violations == 0


def test_rule_miner_properties():
    with criterion("Rule aggregation idempotence and permutation invariance (100 multisets)"):
        rng = random.Random(777)

        def mk(pattern, voice, cons, triples):
            return RuleGroup(
                "01",
                ValencePattern(tuple(pattern)),
                voice,
                cons,
                tuple(MappingRule(f"01{k+1}", *t) for k, t in enumerate(triples)),
                1,
            )

        pool = [
            mk(["VP", "NP-nom"], "A", "T", [("Agent", "NP-nom", "Subj")]),
            mk(["VP", "NP-nom"], "P", "T", [("Theme", "NP-nom", "Subj")]),
            mk(["VP", "NP-nom", "NP-acc"], "A", "T",
               [("Agent", "NP-nom", "Subj"), ("Theme", "NP-acc", "Obj")]),
            mk(["VP", "NP-nom", "PP(في)"], "A", "T",
               [("Agent", "NP-nom", "Subj"), ("Goal", "PP-gen", "OBL")]),
            mk(["VP"], "A", "F", []),
        ]
        for _ in range(100):
            groups = [rng.choice(pool) for _ in range(rng.randint(1, 25))]
            once = rules.aggregate("x.v", groups)
            assert rules.aggregate("x.v", once) == once  # idempotence
            for _ in range(3):
                shuffled = groups[:]
                rng.shuffle(shuffled)
                assert rules.aggregate("x.v", shuffled) == once  # permutation invariance
            assert sum(g.support for g in once) == len(groups)  # support conservation


def test_desk_corpus_run(tmp_path, capsys):
    with criterion("Desk corpus: 26 sentences, >=10 validated sets, merged supports"):
        root = tmp_path / "proj"
        project = init_project(root)
        for name in ("desk_P1.xml", "desk_M1.xml", "desk_E1.xml"):
            src = tmp_path / name
            src.write_bytes(DATA.joinpath(f"corpus/{name}").read_bytes())
            add_corpus(project, src)
        service = AnnotationService(project)

        report = service.run_analysis()
        assert report.counts["sentences"] >= 20
        assert report.counts["parsed"] == report.counts["sentences"]

        created = annotate_desk_corpus(service)
        total = sum(len(ids) for ids in created.values())
        assert total >= 10
        assert len(created) >= 2

        assert cli_main(["--project", str(root), "validate"]) == 0
        out = capsys.readouterr().out
        assert " 0 violations" in out

        # identical pattern groups merge with summed support
        placing_sets = service.asets_for_lu("waDaEa.v", validated_only=True)
        groups = rules.aggregate(
            "waDaEa.v", [rules.derive_rules(a, service.framedb) for a in placing_sets]
        )
        assert sum(g.support for g in groups) == len(placing_sets) == len(DESK_PLAN["waDaEa.v"])
        active = next(g for g in groups if g.voice == "A" and "NP-acc" in g.pattern.render())
        assert active.support == 6
        passive = next(g for g in groups if g.voice == "P")
        assert passive.support == 1

        motion_groups = rules.aggregate(
            "*ahaba.v",
            [rules.derive_rules(a, service.framedb) for a in
             service.asets_for_lu("*ahaba.v", validated_only=True)],
        )
        goal_only = next(g for g in motion_groups if g.pattern.render() == "VP.NP-nom.PP(إلى)")
        assert goal_only.support == 4
        two_pp = next(g for g in motion_groups if "PP(من)" in g.pattern.render())
        assert two_pp.support == 1
        assert two_pp.pattern.render() == "VP.NP-nom.PP(من).PP(إلى)"

        for lu_id in created:
            xml = service.mine(lu_id)
            assert xml.startswith("<rules")
            assert (project.rules_dir / f"{lu_id}.xml").is_file()
