"""The three-input sentiment FIS: positive/negative/neutral scores in, one score out.

All three inputs share one low/medium/high partition. The output has
negative/neutral/positive terms that mirror each other about 0.5, which makes
the system antisymmetric under swapping the positive and negative inputs.
"""

from __future__ import annotations

import csv
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import fuzzy
from .errors import ConfigError, EmptyGrid
from .fuzzy import FuzzyRule, LinguisticVariable, RuleBase, Trapezoid, Triangle
from .refine import APPROACHES, ApproachId, refine
from .scorer import ScoreTriple

INPUTS = ("positive", "negative", "neutral")
OUTPUT = "sentiment"
PARAM_NAMES = ("l1", "l2", "m_lo", "m_peak", "m_hi", "h1", "h2")

OUTPUT_TERMS = (
    ("negative", Trapezoid(0.0, 0.0, 0.3, 0.5)),
    ("neutral", Triangle(0.3, 0.5, 0.7)),
    ("positive", Trapezoid(0.5, 0.7, 1.0, 1.0)),
)

_LEVELS = ("low", "medium", "high")

# (positive, negative, neutral) -> output label, in the canonical rule order
# (positive slowest, neutral fastest).
_CONSEQUENTS = (
    "neutral", "neutral", "neutral",
    "negative", "negative", "negative",
    "negative", "negative", "negative",
    "positive", "positive", "positive",
    "neutral", "neutral", "neutral",
    "negative", "negative", "negative",
    "positive", "positive", "positive",
    "positive", "positive", "positive",
    "neutral", "neutral", "neutral",
)  # fmt: skip


def sentiment_rules() -> tuple[FuzzyRule, ...]:
    combos = itertools.product(_LEVELS, repeat=3)
    return tuple(
        FuzzyRule(tuple(zip(INPUTS, combo)), (OUTPUT, label))
        for combo, label in zip(combos, _CONSEQUENTS)
    )


@dataclass(frozen=True)
class InputBreakpoints:
    """low = Trap(0, 0, l1, l2), medium = Tri(m_lo, m_peak, m_hi), high = Trap(h1, h2, 1, 1)."""

    l1: float = 0.2
    l2: float = 0.4
    m_lo: float = 0.2
    m_peak: float = 0.5
    m_hi: float = 0.8
    h1: float = 0.6
    h2: float = 0.8

    def __post_init__(self):
        for name in PARAM_NAMES:
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name}={v} outside [0, 1]")
        if not (self.l1 <= self.l2 and self.m_lo <= self.m_peak <= self.m_hi and self.h1 <= self.h2):
            raise ConfigError(f"unordered breakpoints {self.as_tuple()}")

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, n) for n in PARAM_NAMES)

    def terms(self) -> tuple[tuple[str, fuzzy.MembershipFunction], ...]:
        return (
            ("low", Trapezoid(0.0, 0.0, self.l1, self.l2)),
            ("medium", Triangle(self.m_lo, self.m_peak, self.m_hi)),
            ("high", Trapezoid(self.h1, self.h2, 1.0, 1.0)),
        )


# Estimated by calibrate() over a 0.025 grid against the shipped anchors
# (max residual 0.0017). The symmetric textbook partition is InputBreakpoints().
CALIBRATED_BREAKPOINTS = InputBreakpoints(
    l1=0.225, l2=0.5, m_lo=0.3, m_peak=0.5, m_hi=0.8, h1=0.55, h2=0.675
)


@dataclass(frozen=True)
class SentimentFisConfig:
    input_params: InputBreakpoints = field(default_factory=InputBreakpoints)
    output_terms: tuple = OUTPUT_TERMS
    rules: tuple[FuzzyRule, ...] = field(default_factory=sentiment_rules)
    centroid_step: float | None = None  # None: exact centroid

    @cached_property
    def rulebase(self) -> RuleBase:
        terms = self.input_params.terms()
        inputs = tuple(LinguisticVariable(name, (0.0, 1.0), terms) for name in INPUTS)
        output = LinguisticVariable(OUTPUT, (0.0, 1.0), self.output_terms)
        return RuleBase(inputs, output, self.rules)

    def check(self) -> None:
        """Raise ConfigError unless every input partition covers [0, 1]."""
        # the inputs share one partition, so one check covers all three
        var = self.rulebase.inputs[0]
        if not fuzzy.coverage_check(var):
            raise ConfigError(f"input partition has gaps in [0, 1]: {self.input_params}")

    @classmethod
    def from_rulebase(cls, rb: RuleBase, centroid_step: float | None = None) -> "SentimentFisConfig":
        if tuple(v.name for v in rb.inputs) != INPUTS or rb.output.name != OUTPUT:
            raise ConfigError(f"expected inputs {INPUTS} and output {OUTPUT!r}")
        first = rb.inputs[0].terms
        if any(v.terms != first for v in rb.inputs) or tuple(k for k, _ in first) != _LEVELS:
            raise ConfigError("inputs must share one low/medium/high partition")
        (_, low), (_, med), (_, high) = first
        if not (isinstance(low, Trapezoid) and isinstance(med, Triangle) and isinstance(high, Trapezoid)):
            raise ConfigError("expected trapezoid/triangle/trapezoid input terms")
        params = InputBreakpoints(low.c, low.d, med.a, med.b, med.c, high.a, high.b)
        return cls(params, rb.output.terms, rb.rules, centroid_step)


def default_config() -> SentimentFisConfig:
    return SentimentFisConfig(CALIBRATED_BREAKPOINTS)


def shipped_config_path() -> Path:
    return Path(str(resources.files("sentfis").joinpath("data/sentiment_fis.json")))


def load_config(path: str | Path | None = None, centroid_step: float | None = None) -> SentimentFisConfig:
    rb = fuzzy.load_rulebase(path or shipped_config_path())
    return SentimentFisConfig.from_rulebase(rb, centroid_step)


def evaluate(cfg: SentimentFisConfig, scores: ScoreTriple) -> float:
    agg = fuzzy.infer(
        cfg.rulebase,
        {"positive": scores.positive, "negative": scores.negative, "neutral": scores.neutral},
    )
    return fuzzy.defuzz_centroid(agg, cfg.centroid_step)


def evaluate_all(cfg: SentimentFisConfig, base: ScoreTriple) -> dict[ApproachId, float]:
    return {a: evaluate(cfg, refine(base, a)) for a in APPROACHES}


# -- calibration ------------------------------------------------------------


@dataclass(frozen=True)
class Anchor:
    base: ScoreTriple
    approach: ApproachId
    expected: float
    label: str = ""


@dataclass(frozen=True)
class AnchorResidual:
    anchor: Anchor
    predicted: float

    @property
    def residual(self) -> float:
        return self.predicted - self.anchor.expected


@dataclass(frozen=True)
class CalibrationReport:
    params: InputBreakpoints
    residuals: tuple[AnchorResidual, ...]
    candidates_tried: int
    sse: float

    @property
    def max_abs_residual(self) -> float:
        return max(abs(r.residual) for r in self.residuals)

    def to_dict(self) -> dict:
        return {
            "params": {n: getattr(self.params, n) for n in PARAM_NAMES},
            "estimated": True,
            "candidates_tried": self.candidates_tried,
            "sse": self.sse,
            "max_abs_residual": self.max_abs_residual,
            "anchors": [
                {
                    "label": r.anchor.label,
                    "base": r.anchor.base.as_dict(),
                    "approach": str(r.anchor.approach),
                    "expected": r.anchor.expected,
                    "predicted": r.predicted,
                    "residual": r.residual,
                }
                for r in self.residuals
            ],
        }


def load_anchors(path: str | Path | None = None) -> list[Anchor]:
    """Read anchors from CSV with columns label,pos,neg,neu,approach,expected."""
    if path is None:
        text = resources.files("sentfis").joinpath("data/anchors.csv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    out = []
    for row in csv.DictReader(text.splitlines()):
        base = ScoreTriple(float(row["pos"]), float(row["neg"]), float(row["neu"]))
        out.append(Anchor(base, ApproachId.parse(row["approach"]), float(row["expected"]), row.get("label", "")))
    return out


def _candidates(grid: Mapping[str, Sequence[float]]) -> list[tuple[float, ...]]:
    missing = [n for n in PARAM_NAMES if not grid.get(n)]
    if missing:
        raise EmptyGrid(f"no candidate values for {', '.join(missing)}")
    axes = [sorted(set(float(v) for v in grid[n])) for n in PARAM_NAMES]
    out = []
    for l1, l2, mlo, mpk, mhi, h1, h2 in itertools.product(*axes):
        if l1 <= l2 and mlo <= mpk <= mhi and h1 <= h2:
            out.append((l1, l2, mlo, mpk, mhi, h1, h2))
    if not out:
        raise EmptyGrid("grid has no ordered parameter vectors")
    return out


def _best_in_chunk(args) -> tuple[float, tuple[float, ...]] | None:
    """Lowest (sse, params) among valid candidates of one sorted chunk.

    Coverage is the expensive check, so it only runs on candidates that would
    replace the running best.
    """
    chunk, prepared, step = args
    best = None
    for params in chunk:
        cfg = SentimentFisConfig(InputBreakpoints(*params), centroid_step=step)
        try:
            sse = math.fsum((evaluate(cfg, tri) - expected) ** 2 for tri, expected in prepared)
        except fuzzy.ZeroArea:
            continue  # only possible when the partition has a gap
        if best is not None and sse >= best[0]:
            continue
        try:
            cfg.check()
        except ConfigError:
            continue
        best = (sse, params)
    return best


def calibrate(
    anchors: Sequence[Anchor],
    grid: Mapping[str, Sequence[float]],
    workers: int = 1,
    centroid_step: float | None = None,
) -> tuple[SentimentFisConfig, CalibrationReport]:
    """Exhaustive grid search for input breakpoints minimizing squared error on anchors.

    Candidates with a coverage gap are skipped. Ties go to the lexicographically
    smallest parameter vector, so the result does not depend on ``workers``.
    """
    if not anchors:
        raise ValueError("calibration needs at least one anchor")
    cands = _candidates(grid)
    prepared = [(refine(a.base, a.approach), a.expected) for a in anchors]
    if workers > 1:
        size = max(1, len(cands) // (workers * 8))
        chunks = [(cands[i : i + size], prepared, centroid_step) for i in range(0, len(cands), size)]
        with ProcessPoolExecutor(workers) as pool:
            results = [r for r in pool.map(_best_in_chunk, chunks) if r is not None]
    else:
        results = [r for r in [_best_in_chunk((cands, prepared, centroid_step))] if r is not None]
    if not results:
        raise EmptyGrid("every grid candidate leaves a coverage gap")
    sse, best = min(results)
    params = InputBreakpoints(*best)
    cfg = SentimentFisConfig(params, centroid_step=centroid_step)
    residuals = tuple(AnchorResidual(a, evaluate(cfg, tri)) for a, (tri, _) in zip(anchors, prepared))
    return cfg, CalibrationReport(params, residuals, len(cands), sse)


def uniform_grid(lo: float = 0.0, hi: float = 1.0, step: float = 0.05) -> dict[str, list[float]]:
    n = round((hi - lo) / step)
    values = [round(lo + k * step, 10) for k in range(n + 1)]
    return {name: values for name in PARAM_NAMES}
