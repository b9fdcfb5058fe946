import json
import os

import pytest

import plexus

TEST_DATA = os.environ["PLEXUS_TEST_DATA"]
TOY = os.path.join(TEST_DATA, "toy.lex")


@pytest.fixture(scope="module")
def toy():
    return plexus.load_lexicon_file(TOY)


def test_tokenize():
    assert plexus.tokenize("#iPhone7 rocks! don't") == ["#iphone7", "rocks", "don", "t"]


def test_score_and_argmax(toy):
    scores = plexus.score_text("love love, not hate", toy)
    assert list(scores) == list(plexus.EMOTIONS)
    assert scores["joy"] == pytest.approx(1 - 0.2 * 0.2)
    assert scores["anger"] == 0.0
    assert plexus.final_emotion(scores) == "joy"


def test_reported_scores_argmax():
    reported = {"anger": 0.010794, "disgust": 0.001457, "fear": 0.005759, "joy": 0.734579, "sadness": 0.32045}
    assert plexus.final_emotion(reported) == "joy"
    assert plexus.final_emotion({e: 0.0 for e in plexus.EMOTIONS}) == "anger"


def test_analyze_wire_format(toy):
    doc = json.loads(plexus.analyze("I love it", toy))
    assert doc["status"] == "OK"
    assert doc["finalEmotion"] == "joy"
    assert doc["docEmotions"]["joy"] == pytest.approx(0.8)


def test_lexicon_errors():
    with pytest.raises(plexus.PlexusError):
        plexus.load_lexicon("love\tjoy:1.5\n")
    with pytest.raises(plexus.PlexusError):
        plexus.load_lexicon_file("/nonexistent.lex")


def test_query_and_matching():
    assert plexus.build_query("iPhone 7") == '"iPhone 7" lang:en -is:retweet'
    assert plexus.match_topic("the IPHONE 7 beats it", "iPhone 7", "Galaxy S7") == ["A"]
    assert plexus.match_topic("nothing", "iPhone 7", "Galaxy S7") == []
    with pytest.raises(plexus.PlexusError):
        plexus.build_query("   ")


def test_style():
    style = plexus.resolve_style(plexus.default_theme_css(), "node", ["joy", "emotion"])
    assert style["fill-color"] == "#FFD700"
    assert style["icon"] == "emoji-joy"
    css = plexus.normalize_stylesheet("node.joy{size:20px}")
    assert plexus.normalize_stylesheet(css) == css
    with pytest.raises(plexus.StyleError) as err:
        plexus.normalize_stylesheet("node { fill-color }")
    assert (err.value.line, err.value.column) == (1, 19)


def test_headless_run_is_deterministic():
    a = plexus.run_headless("iPhone 7", "Galaxy S7", seed=42)
    b = plexus.run_headless("iPhone 7", "Galaxy S7", seed=42)
    assert a["events"] == b["events"]
    lines = a["events"].split("\n")
    assert [json.loads(l)["seq"] for l in lines] == list(range(len(lines)))
    snap = json.loads(a["snapshot"])
    leaves = [n for n in snap["nodes"] if n["kind"] == "tweet"]
    assert len(snap["nodes"]) == 12 + len(leaves)
    assert a["stats"]["read"] == 200
