import csv
import json

import pytest

from sentfis import corpus, sentiment_fis
from sentfis.cli import main

EX1 = "The worst fried chicken... truly useless... instead of fillet, it was just breading powder."


def _run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _write_reviews(path, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "english_text", "stars"])
        w.writerows(rows)
    return path


@pytest.fixture(scope="module")
def typographic_csv(tmp_path_factory):
    # the first 30 fixture reviews with typographic apostrophes, as originally typeset
    path = tmp_path_factory.mktemp("cli") / "reviews.csv"
    recs = corpus.load_fixture()[:30]
    rows = [(r.id, r.english_text.replace("'", "’"), "" if r.stars is None else r.stars) for r in recs]
    return _write_reviews(path, rows)


def test_run_on_bundled_fixture(capsys, tmp_path):
    code, out, _ = _run(capsys, "run")
    assert code == 0
    rep = json.loads(out)
    n = len(corpus.load_fixture())
    assert rep["n_records"] == n
    for a in ("A1", "A2", "A3"):
        assert sum(rep["per_approach"][a]["group_counts"].values()) == n
    for m in rep["transitions"].values():
        assert sum(map(sum, m)) == n


def test_run_is_byte_identical(capsys, tmp_path):
    outs = []
    for k in range(2):
        d = tmp_path / str(k)
        d.mkdir()
        args = ["run", "--out-report", str(d / "r.json"), "--out-records", str(d / "r.jsonl"), "--out-figures-dir", str(d / "fig")]
        assert _run(capsys, *args)[0] == 0
        outs.append([(d / "r.json").read_bytes(), (d / "r.jsonl").read_bytes()] + [p.read_bytes() for p in sorted((d / "fig").iterdir())])
    assert outs[0] == outs[1]


def test_run_on_typographic_reference_reviews(capsys, typographic_csv):
    code, out, _ = _run(capsys, "run", "--input", str(typographic_csv))
    assert code == 0
    counts = json.loads(out)["per_approach"]["A1"]["group_counts"]
    assert (counts["Negative"], counts["Neutral"], counts["Positive"]) == (3, 20, 7)


def test_run_single_approach(capsys):
    code, out, _ = _run(capsys, "run", "--approaches", "A2")
    rep = json.loads(out)
    assert code == 0 and list(rep["per_approach"]) == ["A2"] and rep["transitions"] == {}


def test_run_rejects_unknown_approach(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--approaches", "A4"])
    assert exc.value.code != 0


def test_run_malformed_star_cites_row(capsys, tmp_path):
    path = _write_reviews(tmp_path / "bad.csv", [("a", "good food", 4), ("b", "bad food", "six")])
    code, _, err = _run(capsys, "run", "--input", str(path))
    assert code != 0
    assert "row 3" in err and "six" in err


def test_run_records_outputs(capsys, tmp_path):
    jl, cv = tmp_path / "r.jsonl", tmp_path / "r.csv"
    assert _run(capsys, "run", "--out-records", str(jl), "--out-report", str(tmp_path / "rep.json"))[0] == 0
    assert _run(capsys, "run", "--out-records", str(cv), "--out-report", str(tmp_path / "rep.json"))[0] == 0
    back = corpus.read_jsonl(jl)
    assert len(back) == len(corpus.load_fixture()) and back[0].record.clean_text
    rows = list(csv.DictReader(open(cv, encoding="utf-8")))
    assert rows[0]["fis_A1"] == f"{back[0].fis_output[next(iter(back[0].fis_output))]:.6f}"
    assert all(len(r["fis_A2"].split(".")[1]) == 6 for r in rows)


def test_score_example(capsys):
    code, out, _ = _run(capsys, "score", EX1)
    assert code == 0 and out == "Positive: 0.000\tNeutral: 0.504\tNegative: 0.496\n"


def test_score_empty_text(capsys):
    assert _run(capsys, "score", "")[1] == "Positive: 0.000\tNeutral: 1.000\tNegative: 0.000\n"


def test_score_all_approaches(capsys):
    code, out, _ = _run(capsys, "score", "--all-approaches", EX1)
    lines = out.splitlines()
    assert code == 0 and len(lines) == 3
    assert [l.split("\t")[0] for l in lines] == ["Approach 1", "Approach 2", "Approach 3"]
    assert len({l.split("\t")[2] for l in lines}) == 1
    assert "Negative: 0.704" in lines[1] and "Negative: 0.839" in lines[2]


def test_validate_shipped_rules(capsys):
    code, out, _ = _run(capsys, "validate-rules")
    assert code == 0
    assert "complete: True" in out and "consistent: True" in out and "continuous: True" in out
    assert "rules: 27  combinations: 27" in out


def _mutated_config(tmp_path, mutate):
    d = json.loads(sentiment_fis.shipped_config_path().read_text("utf-8"))
    mutate(d["rules"])
    p = tmp_path / "fis.json"
    p.write_text(json.dumps(d), encoding="utf-8")
    return p


def test_validate_missing_rule(capsys, tmp_path):
    path = _mutated_config(tmp_path, lambda rules: rules.pop(13))
    code, out, _ = _run(capsys, "validate-rules", "--fis-config", str(path))
    assert code != 0 and "complete: False" in out
    assert any(l.startswith("completeness") for l in out.splitlines())


def test_validate_conflicting_duplicate(capsys, tmp_path):
    def dup(rules):
        extra = json.loads(json.dumps(rules[13]))
        extra["then"]["sentiment"] = "positive" if extra["then"]["sentiment"] != "positive" else "negative"
        rules.append(extra)

    code, out, _ = _run(capsys, "validate-rules", "--fis-config", str(_mutated_config(tmp_path, dup)))
    assert code != 0 and "consistent: False" in out
    assert any(l.startswith("consistency") for l in out.splitlines())


def test_validate_unparseable_config(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text("{not json", encoding="utf-8")
    code, _, err = _run(capsys, "validate-rules", "--fis-config", str(p))
    assert code != 0 and err.startswith("error:")


def _single_point_grid():
    p = sentiment_fis.default_config().input_params
    return [f"--grid={n}={getattr(p, n)}" for n in sentiment_fis.PARAM_NAMES]


def test_calibrate_single_point(capsys, tmp_path):
    out_cfg, out_res = tmp_path / "fis.json", tmp_path / "res.json"
    code, out, _ = _run(capsys, "calibrate", *_single_point_grid(), "--out-config", str(out_cfg), "--out-residuals", str(out_res))
    assert code == 0
    assert "candidates: 1" in out and "best (estimated)" in out and "max |residual|" in out
    assert sum(l.startswith(("row1\t", "row9\t")) for l in out.splitlines()) == 6
    assert sentiment_fis.load_config(out_cfg) == sentiment_fis.default_config()
    assert json.loads(out_res.read_text())["estimated"] is True


def test_calibrate_default_grid_stays_within_tolerance(capsys):
    code, out, _ = _run(capsys, "calibrate", "--grid-radius", "0")
    assert code == 0 and "candidates: 1" in out
    worst = float(out.rsplit("max |residual|:", 1)[1])
    assert worst <= 0.01


def test_calibrate_without_anchors(capsys, tmp_path):
    p = tmp_path / "anchors.csv"
    p.write_text("label,pos,neg,neu,approach,expected\n", encoding="utf-8")
    code, _, err = _run(capsys, "calibrate", "--anchors", str(p), *_single_point_grid())
    assert code != 0 and "anchors" in err


def test_calibrate_empty_grid(capsys):
    code, _, err = _run(capsys, "calibrate", "--grid=l1=")
    assert code != 0 and err.startswith("error:")


def test_fixture_dump_round_trips(capsys, tmp_path):
    out = tmp_path / "fx.csv"
    assert _run(capsys, "fixture", "--output", str(out))[0] == 0
    assert corpus.ingest_csv(out) == corpus.load_fixture()
    code, text, _ = _run(capsys, "fixture")
    assert code == 0 and text.splitlines()[0] == "id,persian_text,english_text,items_purchased,stars"


def test_environment_overrides_and_flag_precedence(capsys, tmp_path, monkeypatch):
    lex = tmp_path / "lex.txt"
    lex.write_text("zesty\t2.0\t0.5\n", encoding="utf-8")
    monkeypatch.setenv("SENTFIS_LEXICON", str(lex))
    assert _run(capsys, "score", "--score-on", "raw", "good")[1].startswith("Positive: 0.000")
    assert _run(capsys, "score", "--score-on", "raw", "zesty")[1].startswith("Positive: 1.000")
    bundled = sentiment_fis.shipped_config_path().parent / "vader_lexicon.txt"
    assert _run(capsys, "score", "--score-on", "raw", "--lexicon", str(bundled), "good")[1].startswith("Positive: 1.000")


def test_stopword_override(capsys, tmp_path, monkeypatch):
    sw = tmp_path / "sw.txt"
    sw.write_text("good\n", encoding="utf-8")
    monkeypatch.setenv("SENTFIS_STOPWORDS", str(sw))
    assert _run(capsys, "score", "good")[1] == "Positive: 0.000\tNeutral: 1.000\tNegative: 0.000\n"
    monkeypatch.setenv("SENTFIS_LEXICON", str(tmp_path / "missing.txt"))
    code, _, err = _run(capsys, "score", "good")
    assert code != 0 and "missing.txt" in err
