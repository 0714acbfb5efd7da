"""Review records, CSV ingestion, JSONL emission and the bundled fixture."""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .analysis import SentimentGroup
from .errors import (
    BadItemCount,
    BadStar,
    DuplicateId,
    EmptyText,
    FileUnreadable,
    IngestError,
    MissingColumn,
    WriteFailure,
)
from .refine import ApproachId
from .scorer import ScoreTriple

log = logging.getLogger(__name__)

DEFAULT_COLUMNS = {
    "id": "id",
    "persian_text": "persian_text",
    "english_text": "english_text",
    "items_purchased": "items_purchased",
    "stars": "stars",
}
STAR_VALUES = range(1, 6)


@dataclass(frozen=True)
class ReviewRecord:
    id: str
    english_text: str
    stars: int | None = None  # None means the rating was not recorded
    persian_text: str | None = None
    items_purchased: int | None = None
    clean_text: str | None = None

    def __post_init__(self):
        if not self.english_text.strip():
            raise EmptyText(None)
        if self.stars is not None and (isinstance(self.stars, bool) or self.stars not in STAR_VALUES):
            raise BadStar(None, self.stars)


@dataclass(frozen=True)
class ScoredRecord:
    record: ReviewRecord
    base_scores: ScoreTriple
    refined: dict[ApproachId, ScoreTriple] = field(default_factory=dict)
    fis_output: dict[ApproachId, float] = field(default_factory=dict)
    group: dict[ApproachId, SentimentGroup] = field(default_factory=dict)

    def __post_init__(self):
        for a in self.refined:
            if a not in self.fis_output or a not in self.group:
                raise ValueError(f"approach {a} refined but not evaluated")


def _parse_star(cell: str, row: int) -> int | None:
    cell = cell.strip()
    if not cell or cell.upper() in ("NAN", "NA"):
        return None
    try:
        value = int(cell)
    except ValueError:
        raise BadStar(row, cell) from None
    if value not in STAR_VALUES:
        raise BadStar(row, cell)
    return value


def _parse_items(cell: str, row: int) -> int | None:
    cell = cell.strip()
    if not cell:
        return None
    try:
        value = int(cell)
    except ValueError:
        raise BadItemCount(row, cell) from None
    if value < 0:
        raise BadItemCount(row, cell)
    return value


def ingest_csv(path: str | Path, columns: Mapping[str, str] | None = None) -> list[ReviewRecord]:
    """Read reviews from a UTF-8 CSV with a header row.

    ``columns`` maps field names to header names; unmapped optional fields
    fall back to the defaults and may be absent from the file. Every bad row is
    reported: if any are found an IngestError carries the good records and
    the row-numbered problems (row 2 is the first data row).
    """
    cols = {**DEFAULT_COLUMNS, **(columns or {})}
    try:
        with open(path, newline="", encoding="utf-8-sig") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for required in ("id", "english_text"):
                if cols[required] not in header:
                    raise MissingColumn(cols[required])
            records, problems, seen = [], [], set()
            for row_no, row in enumerate(reader, start=2):
                try:
                    rec = _record_from_row(row, cols, row_no)
                    if rec.id in seen:
                        raise DuplicateId(row_no, rec.id)
                    seen.add(rec.id)
                    records.append(rec)
                except (EmptyText, BadStar, BadItemCount, DuplicateId) as exc:
                    problems.append(exc)
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    except csv.Error as exc:
        raise FileUnreadable(f"{path}: malformed CSV: {exc}") from exc
    if problems:
        for p in problems:
            log.warning("%s", p)
        raise IngestError(records, problems)
    return records


def _record_from_row(row: Mapping[str, str | None], cols: Mapping[str, str], row_no: int) -> ReviewRecord:
    def cell(name):
        return row.get(cols[name]) or ""

    text = cell("english_text")
    if not text.strip():
        raise EmptyText(row_no)
    persian = cell("persian_text") or None
    return ReviewRecord(
        id=cell("id").strip() or f"row{row_no}",
        english_text=text,
        stars=_parse_star(cell("stars"), row_no),
        persian_text=persian,
        items_purchased=_parse_items(cell("items_purchased"), row_no),
    )


def load_fixture() -> list[ReviewRecord]:
    """The bundled 32-review desk corpus.

    Thirty restaurant reviews with their star ratings, followed by two extra
    reviews without ratings.
    """
    raw = json.loads(resources.files("sentfis").joinpath("data/fixture.json").read_text("utf-8"))
    return [ReviewRecord(id=r["id"], english_text=r["english_text"], stars=r["stars"]) for r in raw]


# -- JSONL ------------------------------------------------------------------


def _triple(t: ScoreTriple) -> dict:
    return {"positive": t.positive, "negative": t.negative, "neutral": t.neutral}


def scored_to_dict(rec: ScoredRecord) -> dict:
    r = rec.record
    approaches = sorted(rec.fis_output, key=str)
    return {
        "id": r.id,
        "english_text": r.english_text,
        "persian_text": r.persian_text,
        "clean_text": r.clean_text,
        "items_purchased": r.items_purchased,
        "stars": r.stars,
        "base_scores": _triple(rec.base_scores),
        "refined": {str(a): _triple(rec.refined[a]) for a in approaches if a in rec.refined},
        "fis_output": {str(a): rec.fis_output[a] for a in approaches},
        "group": {str(a): rec.group[a].value for a in approaches if a in rec.group},
    }


def scored_from_dict(d: Mapping) -> ScoredRecord:
    rec = ReviewRecord(
        id=d["id"],
        english_text=d["english_text"],
        stars=d["stars"],
        persian_text=d.get("persian_text"),
        items_purchased=d.get("items_purchased"),
        clean_text=d.get("clean_text"),
    )

    def triple(t):
        return ScoreTriple(t["positive"], t["negative"], t["neutral"])

    return ScoredRecord(
        record=rec,
        base_scores=triple(d["base_scores"]),
        refined={ApproachId.parse(k): triple(v) for k, v in d.get("refined", {}).items()},
        fis_output={ApproachId.parse(k): float(v) for k, v in d.get("fis_output", {}).items()},
        group={ApproachId.parse(k): SentimentGroup(v) for k, v in d.get("group", {}).items()},
    )


def emit_jsonl(records: Iterable[ScoredRecord], path: str | Path) -> None:
    """One JSON object per line; floats keep full repr precision."""
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for rec in records:
                fh.write(json.dumps(scored_to_dict(rec), ensure_ascii=False, sort_keys=True))
                fh.write("\n")
    except OSError as exc:
        raise WriteFailure(f"cannot write {path}: {exc}") from exc


def read_jsonl(path: str | Path) -> list[ScoredRecord]:
    try:
        # split on "\n" only: str.splitlines also breaks on U+0085/U+2028 inside strings
        lines = Path(path).read_text(encoding="utf-8").split("\n")
    except OSError as exc:
        raise FileUnreadable(f"cannot read {path}: {exc}") from exc
    return [scored_from_dict(json.loads(line)) for line in lines if line.strip()]
