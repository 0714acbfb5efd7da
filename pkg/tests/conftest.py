import csv
from importlib import resources
from pathlib import Path

import pytest

from sentfis import corpus
from sentfis.analysis import dominant_group
from sentfis.corpus import ScoredRecord
from sentfis.refine import APPROACHES
from sentfis.scorer import ScoreTriple

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def nltk_vader():
    """NLTK's analyzer fed the bundled lexicon text directly.

    NLTK refuses to open lexicon files outside its data path, so the object
    is assembled by hand the same way its constructor does it.
    """
    vader = pytest.importorskip("nltk.sentiment.vader")
    text = resources.files("sentfis").joinpath("data/vader_lexicon.txt").read_text("utf-8")
    an = vader.SentimentIntensityAnalyzer.__new__(vader.SentimentIntensityAnalyzer)
    an.lexicon_file = text.strip()
    an.lexicon = an.make_lex_dict()
    an.constants = vader.VaderConstants()
    return an


@pytest.fixture(scope="session")
def probe_sentences():
    return [s for s in (DATA / "probe_sentences.txt").read_text("utf-8").splitlines() if s.strip()]


@pytest.fixture(scope="session")
def published_rows():
    """Row-level FIS scores and stars as printed for the 30 table reviews."""
    with open(DATA / "published_scores.csv", newline="") as fh:
        return [
            {
                "row": int(r["row"]),
                "scores": {"A1": float(r["a1"]), "A2": float(r["a2"]), "A3": float(r["a3"])},
                "stars": int(r["stars"]) if r["stars"] else None,
            }
            for r in csv.DictReader(fh)
        ]


@pytest.fixture(scope="session")
def published_scored(published_rows):
    """The 30 fixture reviews carrying the printed FIS scores instead of computed ones."""
    fixture = corpus.load_fixture()[:30]
    out = []
    for rec, row in zip(fixture, published_rows):
        assert rec.stars == row["stars"]
        fis = {a: row["scores"][str(a)] for a in APPROACHES}
        out.append(
            ScoredRecord(
                record=rec,
                base_scores=ScoreTriple(0.0, 0.0, 1.0),  # not used by the analytics
                refined={a: ScoreTriple(0.0, 0.0, 1.0) for a in APPROACHES},
                fis_output=fis,
                group={a: dominant_group(v) for a, v in fis.items()},
            )
        )
    return out
