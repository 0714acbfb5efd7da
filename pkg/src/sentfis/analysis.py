"""Dominant-group classification and the batch statistics built on it."""

from __future__ import annotations

import csv
import enum
import json
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Sequence

from .errors import DomainError, InsufficientData, MissingApproach, UndefinedCorrelation, WriteFailure
from .preprocess import word_count
from .refine import ApproachId

if TYPE_CHECKING:
    from .corpus import ScoredRecord

REPORT_SCHEMA_VERSION = 1
NEGATIVE_BELOW = 0.4
POSITIVE_FROM = 0.6
STAR_COLUMNS = ("1", "2", "3", "4", "5", "missing")


class SentimentGroup(str, enum.Enum):
    NEGATIVE = "Negative"
    NEUTRAL = "Neutral"
    POSITIVE = "Positive"

    @property
    def rank(self) -> int:
        return _GROUP_ORDER.index(self)

    def __lt__(self, other):
        if not isinstance(other, SentimentGroup):
            return NotImplemented
        return self.rank < other.rank

    def __le__(self, other):
        if not isinstance(other, SentimentGroup):
            return NotImplemented
        return self.rank <= other.rank

    def __gt__(self, other):
        if not isinstance(other, SentimentGroup):
            return NotImplemented
        return self.rank > other.rank

    def __ge__(self, other):
        if not isinstance(other, SentimentGroup):
            return NotImplemented
        return self.rank >= other.rank

    def __str__(self) -> str:
        return self.value


GROUPS = (SentimentGroup.NEGATIVE, SentimentGroup.NEUTRAL, SentimentGroup.POSITIVE)
_GROUP_ORDER = GROUPS


def dominant_group(fis_score: float) -> SentimentGroup:
    """[0, 0.4) negative, [0.4, 0.6) neutral, [0.6, 1] positive."""
    if not (isinstance(fis_score, (int, float)) and 0.0 <= fis_score <= 1.0):
        raise DomainError(f"FIS score {fis_score!r} outside [0, 1]")
    if fis_score < NEGATIVE_BELOW:
        return SentimentGroup.NEGATIVE
    if fis_score < POSITIVE_FROM:
        return SentimentGroup.NEUTRAL
    return SentimentGroup.POSITIVE


def _group_of(rec: "ScoredRecord", approach: ApproachId) -> SentimentGroup:
    if approach in rec.group:
        return rec.group[approach]
    if approach in rec.fis_output:
        return dominant_group(rec.fis_output[approach])
    raise MissingApproach(approach, rec.record.id)


def _star_key(stars: int | None) -> str:
    return "missing" if stars is None else str(stars)


@dataclass
class Crosstab:
    group_counts: dict[SentimentGroup, int]
    cells: dict[SentimentGroup, dict[str, int]]  # star column -> count, "missing" included

    def to_dict(self) -> dict:
        return {
            "group_counts": {g.value: self.group_counts[g] for g in GROUPS},
            "star_crosstab": {g.value: dict(self.cells[g]) for g in GROUPS},
        }


def group_star_crosstab(records: Iterable["ScoredRecord"], approach: ApproachId | str) -> Crosstab:
    approach = ApproachId.parse(approach)
    counts = {g: 0 for g in GROUPS}
    cells = {g: {k: 0 for k in STAR_COLUMNS} for g in GROUPS}
    for rec in records:
        g = _group_of(rec, approach)
        counts[g] += 1
        cells[g][_star_key(rec.record.stars)] += 1
    return Crosstab(counts, cells)


def missing_star_distribution(records: Iterable["ScoredRecord"], approach: ApproachId | str) -> dict[SentimentGroup, int]:
    approach = ApproachId.parse(approach)
    out = {g: 0 for g in GROUPS}
    for rec in records:
        g = _group_of(rec, approach)
        if rec.record.stars is None:
            out[g] += 1
    return out


def transition_matrix(
    records: Iterable["ScoredRecord"], src: ApproachId | str, dst: ApproachId | str
) -> list[list[int]]:
    """3x3 counts; rows are the ``src`` group, columns the ``dst`` group, both in group order."""
    src, dst = ApproachId.parse(src), ApproachId.parse(dst)
    m = [[0] * 3 for _ in GROUPS]
    for rec in records:
        m[_group_of(rec, src).rank][_group_of(rec, dst).rank] += 1
    return m


@dataclass(frozen=True)
class Correlation:
    pearson_r: float
    n: int


def star_wordcount_correlation(records: Iterable["ScoredRecord"]) -> Correlation:
    """Pearson r between raw English word count and star rating, rated records only."""
    pairs = [
        (word_count(r.record.english_text), r.record.stars)
        for r in records
        if r.record.stars is not None
    ]
    if len(pairs) < 2:
        raise InsufficientData(f"need at least 2 rated records, got {len(pairs)}")
    xs, ys = zip(*pairs)
    if len(set(xs)) == 1 or len(set(ys)) == 1:
        raise UndefinedCorrelation("word count or star rating has zero variance")
    r = statistics.correlation(xs, ys)
    return Correlation(max(-1.0, min(1.0, r)), len(pairs))


# -- report -----------------------------------------------------------------


@dataclass
class AnalysisReport:
    per_approach: dict[ApproachId, dict]
    transitions: dict[tuple[ApproachId, ApproachId], list[list[int]]]
    correlation: Correlation | None
    correlation_status: str  # "ok" | "insufficient_data" | "undefined"
    n_records: int

    def to_dict(self) -> dict:
        return {
            "schema_version": REPORT_SCHEMA_VERSION,
            "n_records": self.n_records,
            "groups": [g.value for g in GROUPS],
            "per_approach": {str(a): v for a, v in sorted(self.per_approach.items(), key=lambda kv: str(kv[0]))},
            "transitions": {
                f"{a}->{b}": m for (a, b), m in sorted(self.transitions.items(), key=lambda kv: (str(kv[0][0]), str(kv[0][1])))
            },
            "correlation": {
                "status": self.correlation_status,
                "pearson_r": None if self.correlation is None else round(self.correlation.pearson_r, 6),
                "n": None if self.correlation is None else self.correlation.n,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def build_report(records: Sequence["ScoredRecord"], approaches: Iterable[ApproachId | str]) -> AnalysisReport:
    approaches = [ApproachId.parse(a) for a in approaches]
    per = {}
    for a in approaches:
        ct = group_star_crosstab(records, a)
        per[a] = {
            **ct.to_dict(),
            "missing_star_counts": {g.value: n for g, n in missing_star_distribution(records, a).items()},
        }
    transitions = {}
    if ApproachId.A1 in approaches:
        for b in approaches:
            if b is not ApproachId.A1:
                transitions[(ApproachId.A1, b)] = transition_matrix(records, ApproachId.A1, b)
    try:
        corr, status = star_wordcount_correlation(records), "ok"
    except InsufficientData:
        corr, status = None, "insufficient_data"
    except UndefinedCorrelation:
        corr, status = None, "undefined"
    return AnalysisReport(per, transitions, corr, status, len(records))


def write_figure_tables(report: AnalysisReport, records: Sequence["ScoredRecord"], out_dir: str | Path) -> list[Path]:
    """Plot-ready CSVs: star crosstab per approach, missing-star groups,
    transition matrices and (word_count, star) pairs."""
    out = Path(out_dir)
    written = []
    try:
        out.mkdir(parents=True, exist_ok=True)

        def write(name, header, rows):
            path = out / name
            with open(path, "w", newline="", encoding="utf-8") as fh:
                w = csv.writer(fh, lineterminator="\n")
                w.writerow(header)
                w.writerows(rows)
            written.append(path)

        for a in sorted(report.per_approach, key=str):
            tab = report.per_approach[a]["star_crosstab"]
            write(
                f"figure4_{a}.csv",
                ["group", "star", "count"],
                [(g.value, s, tab[g.value][s]) for g in GROUPS for s in STAR_COLUMNS],
            )
        write(
            "figure5.csv",
            ["approach", "group", "count"],
            [
                (str(a), g.value, report.per_approach[a]["missing_star_counts"][g.value])
                for a in sorted(report.per_approach, key=str)
                for g in GROUPS
            ],
        )
        for (a, b), m in report.transitions.items():
            write(
                f"figure6_{a}_{b}.csv",
                [f"{a}\\{b}", *(g.value for g in GROUPS)],
                [(g.value, *m[g.rank]) for g in GROUPS],
            )
        write(
            "figure7.csv",
            ["word_count", "star"],
            [(word_count(r.record.english_text), r.record.stars) for r in records if r.record.stars is not None],
        )
    except OSError as exc:
        raise WriteFailure(f"cannot write figure tables to {out}: {exc}") from exc
    return written
