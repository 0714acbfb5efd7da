import re
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sentfis import corpus, porter


@pytest.mark.parametrize(
    "word, expected",
    [
        ("caresses", "caress"),
        ("ponies", "poni"),
        ("cats", "cat"),
        ("feed", "feed"),
        ("agreed", "agre"),
        ("plastered", "plaster"),
        ("motoring", "motor"),
        ("sing", "sing"),
        ("hopping", "hop"),
        ("filing", "file"),
        ("happy", "happi"),
        ("relational", "relat"),
        ("generalization", "gener"),
        ("hopefulness", "hope"),
        ("electrical", "electr"),
        ("adjustment", "adjust"),
        ("controll", "control"),
        ("roll", "roll"),
        ("amazing", "amaz"),
        ("delicious", "delici"),
    ],
)
def test_textbook_stems(word, expected):
    assert porter.stem(word) == expected


@pytest.fixture(scope="module")
def nltk_original():
    mod = pytest.importorskip("nltk.stem.porter")
    return mod.PorterStemmer(mode=mod.PorterStemmer.ORIGINAL_ALGORITHM)


def _vocabulary():
    lex = resources.files("sentfis").joinpath("data/vader_lexicon.txt").read_text("utf-8")
    words = {line.split("\t", 1)[0].lower() for line in lex.splitlines()}
    for rec in corpus.load_fixture():
        words.update(re.findall(r"[a-z]+", rec.english_text.lower()))
    return sorted(w for w in words if w.isalpha() and w.isascii())


def test_matches_reference_on_lexicon_and_fixture_vocabulary(nltk_original):
    vocab = _vocabulary()
    assert len(vocab) > 5000
    mismatches = [(w, porter.stem(w), nltk_original.stem(w)) for w in vocab if porter.stem(w) != nltk_original.stem(w)]
    assert mismatches == []


@settings(max_examples=500)
@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=14))
def test_matches_reference_on_random_words(nltk_original, word):
    assert porter.stem(word) == nltk_original.stem(word)


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz0123456789'-", max_size=12))
def test_total_and_never_longer(word):
    assert len(porter.stem(word)) <= len(word)
