import math

import pytest

import gcg_alforge as al


def test_grammars():
    gs = al.grammars()
    assert len(gs) == 96
    en = al.grammar("0101101")
    assert en.base_order == "SVO"
    assert en.category("VT") == "(S\\NP_SUBJ)/NP_OBJ"
    assert al.grammar("0111101").id == "0101101"
    assert en.parses(["NP", "SUBJ", "VT", "NP", "OBJ"])
    assert not en.parses(["NP", "OBJ", "VT", "NP", "SUBJ"])
    with pytest.raises(ValueError):
        en.parses(["NP", "NOUN"])


def test_categories():
    assert al.permute("(S\\NP)/NP") == "(S/NP)\\NP"
    assert al.derives(["NP", "(S\\NP)/NP", "NP"])
    assert al.derives(["NP", "(NP\\NP)/(S/NP)", "NP", "(S\\NP)/NP"], root="NP")
    assert not al.derives(["NP", "(NP\\NP)/(S/NP)", "NP", "(S\\NP)/NP"], root="NP", permute=False)


def test_templates():
    ts = al.enumerate_templates("0000000", max_len=5)
    assert ["NP", "SUBJ", "NP", "OBJ", "VT"] in ts
    assert all(al.heuristic_filter(t) for t in ts)
    assert al.enumerate_templates("0000000", max_len=2) == []
    src = al.enumerate_templates("0101101", max_len=10)
    longs = al.augment_long(src, "0101101", sample=5, seed=1)
    assert len(longs) == 50
    assert all(11 <= len(t) <= 20 for t in longs)
    assert longs == al.augment_long(src, "0101101", sample=5, seed=1)


def test_metrics():
    lp = [[-1.0, -2.0, -0.5], [-3.0, -0.25]]
    assert al.perplexity(lp) == pytest.approx(math.exp(6.75 / 5), rel=1e-12)
    c = al.pearson([1, 2, 3], [1, 3, 2])
    assert c["r"] == pytest.approx(0.5)
    assert c["p_value"] == pytest.approx(1 - 2 / math.pi * math.atan(0.5 / math.sqrt(0.75)))
    with pytest.raises(ValueError):
        al.pearson([1, 1, 1], [1, 2, 3])
    assert al.plausibility("0000000") == pytest.approx(0.54)
    assert al.judge_pairs([([-1.0, -1.0], [-2.0, -1.0]), ([-1.0], [-1.0])]) == 0.5
    ppl = {g.id: 100 - 50 * al.plausibility(g.id) + i % 3 for i, g in enumerate(al.grammars())}
    assert al.ta_score(ppl)["r"] < 0


def test_ngram():
    m = al.NgramModel([["a", "b"], ["a", "c"]], order=1, k=1.0)
    assert m.prob([], "a") == pytest.approx(0.3)
    assert sorted(m.vocabulary) == ["</s>", "a", "b", "c"]
    assert len(m.score(["a", "b"])) == 3


def test_pipeline(tmp_path):
    r = al.run_pipeline(["0101101", "0000000"], tmp_path, seed=2, scale=0.1)
    assert [g["grammar_id"] for g in r["grammars"]] == ["0000000", "0101101"]
    assert (tmp_path / "report.csv").exists()
    for g in r["grammars"]:
        assert g["ppl"]["short_test"] < g["ppl"]["medium_test"]
