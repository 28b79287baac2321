"""Smoke tests for the compiled emoclick extension."""

import math

import pytest

import emoclick


def test_curiosity_gap_boundaries():
    assert emoclick.curiosity_gap(emoclick.VadVector(0.0, 0.0, 1.0)) == 0.0
    assert emoclick.curiosity_gap(emoclick.VadVector(1.0, 1.0, 0.0)) == 2.0
    assert emoclick.curiosity_gap(emoclick.VadVector(0.5, 0.8, 0.3)) == pytest.approx(1.06)


def test_vad_validation():
    with pytest.raises(emoclick.EmoclickError):
        emoclick.VadVector(1.5, 0.0, 0.0)


def test_delta_and_framing():
    post = emoclick.VadVector(0.5, 0.8, 0.3)
    comment = emoclick.VadVector(0.0, 0.0, 1.0)
    delta = emoclick.delta_cg(post, comment)
    assert delta == pytest.approx(1.06)
    assert emoclick.classify_framing(delta) == emoclick.Framing.POSITIVE
    assert emoclick.classify_framing(0.0) == emoclick.Framing.POSITIVE
    assert emoclick.classify_framing(-0.01) == emoclick.Framing.NEGATIVE


def test_vad_drift_placeholder():
    a = emoclick.VadVector(0.0, 0.0, 0.0)
    b = emoclick.VadVector(1.0, 1.0, 1.0)
    assert emoclick.vad_drift(a, b) == pytest.approx(math.sqrt(3.0))


def test_lexicon_and_emotion_mapping(tmp_path):
    path = tmp_path / "lexicon.tsv"
    path.write_text(
        "# taxonomy=tiny-2 version=v1\n"
        "fear\t0.1\t0.8\t0.2\n"
        "joy\t0.9\t0.7\t0.6\n"
    )
    lexicon = emoclick.VadLexicon.load(str(path))
    assert lexicon.taxonomy == "tiny-2"
    assert sorted(lexicon.labels()) == ["fear", "joy"]
    vad = emoclick.map_emotion_to_vad({"joy": 0.5, "fear": 0.5}, lexicon)
    assert vad.valence == pytest.approx(0.5)
    assert vad.arousal == pytest.approx(0.75)
    assert vad.dominance == pytest.approx(0.4)
    top = emoclick.map_emotion_to_vad({"joy": 0.2, "fear": 0.8}, lexicon, mode="top1")
    assert top.valence == pytest.approx(0.1)


def test_cosine_similarity():
    assert emoclick.cosine_similarity([1.0, 0.0], [1.0, 1.0]) == pytest.approx(
        1.0 / math.sqrt(2.0), abs=1e-6
    )
    assert emoclick.cosine_similarity([1.0, 0.0, 0.0], [0.0, 1.0, 0.0]) == pytest.approx(0.0)


def test_hash_embed_determinism():
    a = emoclick.hash_embed(["same text", "same text", "different"], dim=32, seed=3)
    assert a[0] == a[1]
    assert a[0] != a[2]
    assert sum(x * x for x in a[0]) == pytest.approx(1.0, abs=1e-9)


def test_one_to_one_align_matrix():
    pairs = emoclick.one_to_one_align_matrix([[0.9, 0.8, 0.1], [0.85, 0.7, 0.2]])
    assert pairs == [(0, 0, 0.9), (1, 1, 0.7)]


def test_one_to_one_align_from_vectors():
    headlines = emoclick.hash_embed(["cats do funny things", "pasta secrets"], seed=1)
    posts = emoclick.hash_embed(
        ["my cat is funny", "how to cook pasta", "unrelated gardening"], seed=1
    )
    pairs, report = emoclick.one_to_one_align(headlines, posts)
    assert report["pair_count"] == 2
    assert len({p for (_, p, _) in pairs}) == 2
    assert report["min_similarity"] <= report["mean_similarity"] <= report["max_similarity"]


def test_metrics_from_counts_footnote_row():
    row = emoclick.metrics_from_counts(tp=7370, fp=0, tn=0, fn=2630)
    assert row["precision"] == 1.0
    assert row["recall"] == row["accuracy"] == pytest.approx(0.7370)
    assert abs(row["f1"] - 0.8486) <= 5e-5
    degenerate = emoclick.metrics_from_counts(tp=0, fp=0, tn=0, fn=5)
    assert degenerate["degenerate_precision"] is True


def test_style_distribution():
    shares = emoclick.style_distribution(["clickbait"] * 68 + ["neutral"] * 29 + ["humor"] * 3)
    assert shares[0] == ("clickbait", 68.0)
    assert sum(p for (_, p) in shares) == pytest.approx(100.0)
    assert set(emoclick.styles()) == {
        "clickbait", "neutral", "formal", "casual", "inspirational", "humor",
    }
