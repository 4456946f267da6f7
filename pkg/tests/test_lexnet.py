"""Lexical-semantic network tests: senses, closure, frame candidates."""

import pytest

from framebench.errors import FormatError
from framebench.lexnet import LexNet, SemRelation, Synset, frame_candidates


def _syn(sid, lemmas, links=(), pos="v"):
    return Synset(sid, pos, tuple(lemmas), "g", tuple(links))


def test_senses_from_sample_net(net):
    senses = net.senses("*ahaba")
    assert [s.synset_id for s in senses] == ["ar-v-0002"]
    assert "go" in senses[0].english_links
    assert senses[0].sumo is not None and senses[0].sumo.concept == "Translocation"


def test_senses_normalized_lookup(net):
    # diacritics in the query lemma do not matter
    assert net.senses("*ahab") == net.senses("*ahaba")


def test_senses_unknown_lemma(net):
    assert net.senses("qaSiydap") == []


def test_senses_ordered_by_synset_id():
    net = LexNet([_syn("b-2", ["x"]), _syn("a-1", ["x"])], [])
    assert [s.synset_id for s in net.senses("x")] == ["a-1", "b-2"]


def test_closure_depth_zero(net):
    (sense,) = net.senses("*ahaba")
    assert net.closure(sense, "hypernym", 0) == []


def test_closure_chain():
    net = LexNet(
        [_syn("a", ["a"]), _syn("b", ["b"]), _syn("c", ["c"])],
        [SemRelation("a", "b", "hypernym"), SemRelation("b", "c", "hypernym")],
    )
    (a,) = net.senses("a")
    assert [s.synset_id for s in net.closure(a, "hypernym", 2)] == ["b", "c"]
    assert [s.synset_id for s in net.closure(a, "hypernym", 1)] == ["b"]


def test_closure_diamond_deduplicates():
    net = LexNet(
        [_syn(x, [x]) for x in "abcd"],
        [
            SemRelation("a", "b", "hypernym"),
            SemRelation("a", "c", "hypernym"),
            SemRelation("b", "d", "hypernym"),
            SemRelation("c", "d", "hypernym"),
        ],
    )
    (a,) = net.senses("a")
    out = [s.synset_id for s in net.closure(a, "hypernym", 3)]
    assert sorted(out) == ["b", "c", "d"]
    assert len(out) == len(set(out))


def test_hypernym_cycle_rejected_at_load():
    with pytest.raises(FormatError, match="cycle"):
        LexNet(
            [_syn("a", ["a"]), _syn("b", ["b"])],
            [SemRelation("a", "b", "hypernym"), SemRelation("b", "a", "hypernym")],
        )


def test_relation_endpoints_must_exist():
    with pytest.raises(FormatError):
        LexNet([_syn("a", ["a"])], [SemRelation("a", "zz", "hypernym")])


def test_unknown_relation_kind_rejected():
    with pytest.raises(FormatError):
        LexNet([_syn("a", ["a"]), _syn("b", ["b"])], [SemRelation("a", "b", "part-of")])


def test_frame_candidates_direct_link(net, framedb):
    ranked = frame_candidates("waDaEa", net, framedb)
    assert ranked, "expected at least the direct Placing hit"
    frame, path = ranked[0]
    assert frame.name == "Placing"
    assert len(path) == 1  # direct english link


def test_frame_candidates_via_hypernym(net, framedb):
    # the lemma itself has no English LU; its hypernym links to go.v
    ranked = frame_candidates("rajaEa", net, framedb)
    names = [f.name for f, _ in ranked]
    assert "Motion" in names
    frame, path = next((f, p) for f, p in ranked if f.name == "Motion")
    assert len(path) == 2


def test_frame_candidates_empty_when_unlinked(net, framedb):
    assert frame_candidates("qaSiydap", net, framedb) == []


def test_frame_candidates_deduplicates_keeping_shortest(framedb):
    net = LexNet(
        [
            _syn("s1", ["Xlemma"], ["put"]),
            _syn("s2", ["Xlemma"], []),
            _syn("s3", ["other"], ["put"]),
        ],
        [SemRelation("s2", "s3", "hypernym")],
    )
    ranked = frame_candidates("Xlemma", net, framedb)
    placing = [(f, p) for f, p in ranked if f.name == "Placing"]
    assert len(placing) == 1
    assert len(placing[0][1]) == 1  # direct path wins over the hypernym route


def test_direct_candidates_equal_manual_join(net, framedb):
    """Depth-0 oracle: direct english links joined against LU keys."""
    lu_keys = {}
    for frame in framedb.frames.values():
        for lu in frame.lus:
            lu_keys.setdefault(f"{lu.lemma}.{lu.pos}".lower(), set()).add(frame.name)
    for lemma in ("waDaEa", "*ahaba", ">akala", "sAra", "kataba"):
        expected = set()
        for sense in net.senses(lemma):
            for link in sense.english_links:
                expected |= lu_keys.get(f"{link}.{sense.pos}".lower(), set())
        direct = {f.name for f, p in frame_candidates(lemma, net, framedb) if len(p) == 1}
        assert direct == expected, lemma


def test_sample_net_loads_whole(net):
    assert len(net.synsets) >= 40
    kinds = {r.kind for r in net.relations}
    assert "hypernym" in kinds
