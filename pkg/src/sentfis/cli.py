"""Command-line entry point: ``sentfis run|score|validate-rules|calibrate|fixture``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import math
import os
import sys
from pathlib import Path
from typing import Sequence

from . import analysis, corpus, fuzzy, preprocess, scorer, sentiment_fis
from .corpus import ReviewRecord, ScoredRecord
from .errors import IngestError, PipelineError, SentfisError
from .refine import APPROACHES, ApproachId, refine
from .sentiment_fis import PARAM_NAMES, SentimentFisConfig

log = logging.getLogger("sentfis")

ENV_LEXICON = "SENTFIS_LEXICON"
ENV_STOPWORDS = "SENTFIS_STOPWORDS"


@dataclasses.dataclass
class RunConfig:
    input: Path | None  # None: bundled fixture
    out_report: Path | None  # None: stdout
    out_records: Path | None
    out_figures_dir: Path | None
    approaches: tuple[ApproachId, ...] = APPROACHES
    score_on: str = "clean"
    lexicon: Path | None = None
    stopwords: Path | None = None
    fis_config: Path | None = None


def score_corpus(
    records: Sequence[ReviewRecord],
    approaches: Sequence[ApproachId],
    fis: SentimentFisConfig,
    lexicon: scorer.SentimentLexicon | None = None,
    clean_cfg: preprocess.CleanConfig | None = None,
    score_on: str = "clean",
) -> list[ScoredRecord]:
    """Clean, score, refine and evaluate every record.

    Base triples are rounded to 3 decimals before refinement, the precision
    the reference analyzer reports.
    """
    lexicon = lexicon or scorer.default_lexicon()
    clean_cfg = clean_cfg or preprocess.CleanConfig()
    out = []
    for rec in records:
        stage = "preprocess"
        try:
            rec = dataclasses.replace(rec, clean_text=preprocess.clean_text(rec.english_text, clean_cfg))
            stage = "score"
            text = rec.clean_text if score_on == "clean" else rec.english_text
            base = scorer.score(text, lexicon).rounded(3)
            stage = "refine"
            refined = {a: refine(base, a) for a in approaches}
            stage = "fis"
            fis_out = {a: sentiment_fis.evaluate(fis, t) for a, t in refined.items()}
        except SentfisError as exc:
            raise PipelineError(stage, rec.id, exc) from exc
        groups = {a: analysis.dominant_group(v) for a, v in fis_out.items()}
        out.append(ScoredRecord(rec, base, refined, fis_out, groups))
    return out


def _resolve(flag: str | None, env: str) -> Path | None:
    value = flag or os.environ.get(env)
    return Path(value) if value else None


def _write_records_csv(records: Sequence[ScoredRecord], path: Path) -> None:
    approaches = sorted({a for r in records for a in r.fis_output}, key=str)
    header = ["id", "stars", "positive", "negative", "neutral"]
    for a in approaches:
        header += [f"fis_{a}", f"group_{a}"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in records:
            b = r.base_scores
            row = [r.record.id, "" if r.record.stars is None else r.record.stars]
            row += [f"{b.positive:.6f}", f"{b.negative:.6f}", f"{b.neutral:.6f}"]
            for a in approaches:
                row += [f"{r.fis_output[a]:.6f}", r.group[a].value]
            w.writerow(row)


def cmd_run(cfg: RunConfig) -> int:
    records = corpus.ingest_csv(cfg.input) if cfg.input else corpus.load_fixture()
    lexicon = scorer.load_lexicon(cfg.lexicon) if cfg.lexicon else scorer.default_lexicon()
    clean_cfg = preprocess.CleanConfig(stopwords=preprocess.load_stopwords(cfg.stopwords))
    fis = sentiment_fis.load_config(cfg.fis_config)
    scored = score_corpus(records, cfg.approaches, fis, lexicon, clean_cfg, cfg.score_on)
    report = analysis.build_report(scored, cfg.approaches)
    text = report.to_json()
    # all writes happen after scoring has finished
    if cfg.out_report:
        cfg.out_report.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    if cfg.out_records:
        if cfg.out_records.suffix.lower() == ".csv":
            _write_records_csv(scored, cfg.out_records)
        else:
            corpus.emit_jsonl(scored, cfg.out_records)
    if cfg.out_figures_dir:
        analysis.write_figure_tables(report, scored, cfg.out_figures_dir)
    log.info("scored %d records with score_on=%s", len(scored), cfg.score_on)
    return 0


def _triple_line(t: scorer.ScoreTriple) -> str:
    return f"Positive: {t.positive:.3f}\tNeutral: {t.neutral:.3f}\tNegative: {t.negative:.3f}"


def cmd_score(args) -> int:
    lex_path = _resolve(args.lexicon, ENV_LEXICON)
    lexicon = scorer.load_lexicon(lex_path) if lex_path else scorer.default_lexicon()
    text = args.text
    if args.score_on == "clean":
        sw = preprocess.load_stopwords(_resolve(args.stopwords, ENV_STOPWORDS))
        text = preprocess.clean_text(text, preprocess.CleanConfig(stopwords=sw))
    base = scorer.score(text, lexicon).rounded(3)
    if not args.all_approaches:
        print(_triple_line(base))
        return 0
    for n, a in enumerate(APPROACHES, 1):
        print(f"Approach {n}\t{_triple_line(refine(base, a))}")
    return 0


def cmd_validate_rules(args) -> int:
    path = args.fis_config or sentiment_fis.shipped_config_path()
    rb = fuzzy.load_rulebase(path)
    rep = fuzzy.validate_rulebase(rb)
    n_combos = math.prod(len(v.labels) for v in rb.inputs)
    print(f"complete: {rep.complete}\nconsistent: {rep.consistent}\ncontinuous: {rep.continuous}")
    print(f"rules: {len(rb.rules)}  combinations: {n_combos}")
    for v in rep.violations:
        print(v)
    return 0 if rep.ok else 1


def _grid_from_args(args) -> dict[str, list[float]]:
    if args.grid_full:
        grid = sentiment_fis.uniform_grid(0.0, 1.0, args.grid_step)
    else:
        center = sentiment_fis.CALIBRATED_BREAKPOINTS
        r = args.grid_radius
        grid = {
            n: sorted(
                {
                    round(getattr(center, n) + k * args.grid_step, 10)
                    for k in range(-r, r + 1)
                    if 0.0 <= getattr(center, n) + k * args.grid_step <= 1.0
                }
            )
            for n in PARAM_NAMES
        }
    for item in args.grid or []:
        name, _, values = item.partition("=")
        if name not in PARAM_NAMES:
            raise SystemExit(f"--grid: unknown parameter {name!r}; expected one of {', '.join(PARAM_NAMES)}")
        grid[name] = [float(v) for v in values.split(",") if v.strip()]
    return grid


def cmd_calibrate(args) -> int:
    anchors = sentiment_fis.load_anchors(args.anchors)
    if not anchors:
        raise SentfisError(f"no anchors in {args.anchors or 'the shipped anchor file'}")
    grid = _grid_from_args(args)
    cfg, rep = sentiment_fis.calibrate(anchors, grid, workers=args.workers, centroid_step=args.centroid_step)
    params = " ".join(f"{n}={getattr(rep.params, n):.6f}" for n in PARAM_NAMES)
    print(f"candidates: {rep.candidates_tried}")
    print(f"best (estimated): {params}")
    print("label\tapproach\texpected\tpredicted\tresidual")
    for r in rep.residuals:
        a = r.anchor
        print(f"{a.label}\t{a.approach}\t{a.expected:.6f}\t{r.predicted:.6f}\t{r.residual:+.6f}")
    print(f"sse: {rep.sse:.6e}\nmax |residual|: {rep.max_abs_residual:.6f}")
    if args.out_config:
        fuzzy.dump_rulebase(cfg.rulebase, args.out_config)
    if args.out_residuals:
        Path(args.out_residuals).write_text(json.dumps(rep.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_fixture(args) -> int:
    fh = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", "persian_text", "english_text", "items_purchased", "stars"])
        for r in corpus.load_fixture():
            w.writerow([r.id, "", r.english_text, "", "" if r.stars is None else r.stars])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def _approaches(value: str) -> tuple[ApproachId, ...]:
    try:
        out = tuple(dict.fromkeys(ApproachId.parse(v.strip()) for v in value.split(",") if v.strip()))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not out:
        raise argparse.ArgumentTypeError("select at least one approach")
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sentfis", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="score a review CSV and write the analysis report")
    run.add_argument("--input", help="review CSV (default: bundled fixture)")
    run.add_argument("--out-report", help="report JSON path (default: stdout)")
    run.add_argument("--out-records", help="per-record output (.jsonl or .csv)")
    run.add_argument("--out-figures-dir", help="directory for plot-ready CSV tables")
    run.add_argument("--approaches", type=_approaches, default=APPROACHES, help="comma list of A1,A2,A3")
    run.add_argument("--score-on", choices=("raw", "clean"), default="clean")
    run.add_argument("--lexicon")
    run.add_argument("--stopwords")
    run.add_argument("--fis-config")

    score = sub.add_parser("score", help="print the sentiment triple for one text")
    score.add_argument("text")
    score.add_argument("--all-approaches", action="store_true")
    score.add_argument("--score-on", choices=("raw", "clean"), default="clean")
    score.add_argument("--lexicon")
    score.add_argument("--stopwords")

    val = sub.add_parser("validate-rules", help="check a FIS config for completeness, consistency, continuity")
    val.add_argument("--fis-config")

    cal = sub.add_parser("calibrate", help="grid-search input breakpoints against anchor scores")
    cal.add_argument("--anchors", help="CSV with pos,neg,neu,approach,expected (default: shipped anchors)")
    cal.add_argument("--grid-step", type=float, default=0.025)
    cal.add_argument("--grid-radius", type=int, default=1, help="steps either side of the default breakpoints")
    cal.add_argument("--grid-full", action="store_true", help="search all of [0, 1] at --grid-step")
    cal.add_argument("--grid", action="append", metavar="NAME=V1,V2,...", help="explicit candidates for one parameter")
    cal.add_argument("--centroid-step", type=float, help="sampled centroid instead of exact")
    cal.add_argument("--workers", type=int, default=1)
    cal.add_argument("--out-config", help="write the best FIS config here")
    cal.add_argument("--out-residuals", help="write the residual report JSON here")

    fx = sub.add_parser("fixture", help="dump the bundled corpus as CSV")
    fx.add_argument("--output")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "run":
            cfg = RunConfig(
                input=Path(args.input) if args.input else None,
                out_report=Path(args.out_report) if args.out_report else None,
                out_records=Path(args.out_records) if args.out_records else None,
                out_figures_dir=Path(args.out_figures_dir) if args.out_figures_dir else None,
                approaches=args.approaches,
                score_on=args.score_on,
                lexicon=_resolve(args.lexicon, ENV_LEXICON),
                stopwords=_resolve(args.stopwords, ENV_STOPWORDS),
                fis_config=Path(args.fis_config) if args.fis_config else None,
            )
            return cmd_run(cfg)
        if args.command == "score":
            return cmd_score(args)
        if args.command == "validate-rules":
            return cmd_validate_rules(args)
        if args.command == "calibrate":
            return cmd_calibrate(args)
        return cmd_fixture(args)
    except IngestError as exc:
        print(f"error: ingest: {exc}", file=sys.stderr)
        return 2
    except SentfisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
