"""Mamdani fuzzy inference with exact piecewise-linear aggregation.

Membership functions are trapezoids and triangles. Rules are AND-only
(min t-norm), consequents are clipped at the firing strength and merged with
max, and the crisp output is the area centroid. Because every membership
function is piecewise linear, clipping and max-aggregation are carried out on
breakpoints computed in closed form and the centroid is integrated exactly,
segment by segment. A sampled-grid centroid is also available to mimic
toolkits that discretize the output universe.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence, Union

from .errors import ConfigError, MissingInput, OutOfUniverse, ZeroArea

# -- membership functions ---------------------------------------------------


@dataclass(frozen=True)
class Trapezoid:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise ConfigError(f"trapezoid needs a <= b <= c <= d, got {self.params}")

    @property
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c, self.d)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.d)

    def vertices(self) -> list[tuple[float, float]]:
        return [(self.a, 0.0), (self.b, 1.0), (self.c, 1.0), (self.d, 0.0)]

    def __call__(self, x: float) -> float:
        if self.b <= x <= self.c:
            return 1.0
        if self.a < x < self.b:
            return (x - self.a) / (self.b - self.a)
        if self.c < x < self.d:
            return (self.d - x) / (self.d - self.c)
        return 0.0


@dataclass(frozen=True)
class Triangle:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c):
            raise ConfigError(f"triangle needs a <= b <= c, got {self.params}")

    @property
    def params(self) -> tuple[float, ...]:
        return (self.a, self.b, self.c)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.c)

    def vertices(self) -> list[tuple[float, float]]:
        return [(self.a, 0.0), (self.b, 1.0), (self.c, 0.0)]

    def __call__(self, x: float) -> float:
        if x == self.b:
            return 1.0
        if self.a < x < self.b:
            return (x - self.a) / (self.b - self.a)
        if self.b < x < self.c:
            return (self.c - x) / (self.c - self.b)
        return 0.0


MembershipFunction = Union[Trapezoid, Triangle]


def membership(mf: MembershipFunction, x: float) -> float:
    return mf(x)


# -- piecewise-linear functions ---------------------------------------------

Segment = tuple[float, float, float, float]  # x0, y0, x1, y1 with x1 > x0


def _mf_segments(mf: MembershipFunction, lo: float, hi: float) -> list[Segment]:
    pts = [(lo, 0.0), *mf.vertices(), (hi, 0.0)]
    return [
        (x0, y0, x1, y1)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:])
        if x1 > x0
    ]


def _clip(segments: Iterable[Segment], h: float) -> list[Segment]:
    out = []
    for x0, y0, x1, y1 in segments:
        if (y0 - h) * (y1 - h) < 0:
            xc = x0 + (h - y0) / (y1 - y0) * (x1 - x0)
            out.append((x0, min(y0, h), xc, h))
            out.append((xc, h, x1, min(y1, h)))
        else:
            out.append((x0, min(y0, h), x1, min(y1, h)))
    return out


def _envelope(functions: Sequence[list[Segment]]) -> list[Segment]:
    """Pointwise max of piecewise-linear functions sharing one domain."""
    if len(functions) == 1:
        return list(functions[0])
    cuts = sorted({x for f in functions for s in f for x in (s[0], s[2])})
    cursors = [0] * len(functions)
    out: list[Segment] = []
    for p, q in zip(cuts, cuts[1:]):
        lines = []
        for k, f in enumerate(functions):
            j = cursors[k]
            while f[j][2] <= p:
                j += 1
            cursors[k] = j
            x0, y0, x1, y1 = f[j]
            # interpolate by fraction: an explicit slope overflows on subnormal-width segments
            w = x1 - x0
            lines.append((y0 + (y1 - y0) * ((p - x0) / w), y0 + (y1 - y0) * ((q - x0) / w)))
        ts = {0.0, 1.0}
        for (a0, a1), (b0, b1) in itertools.combinations(lines, 2):
            d0, d1 = a0 - b0, a1 - b1
            if d0 * d1 < 0:
                ts.add(d0 / (d0 - d1))
        ts = sorted(ts)
        w = q - p
        vals = [max(l0 + (l1 - l0) * t for l0, l1 in lines) for t in ts]
        for (t0, v0), (t1, v1) in zip(zip(ts, vals), zip(ts[1:], vals[1:])):
            x0 = p + w * t0
            x1 = p + w * t1 if t1 < 1.0 else q
            if x1 > x0:
                out.append((x0, v0, x1, v1))
    return out


@dataclass(frozen=True)
class AggregatedOutput:
    """Aggregated consequent as contiguous linear segments over ``universe``."""

    universe: tuple[float, float]
    segments: tuple[Segment, ...]
    activations: tuple["RuleActivation", ...] = ()

    def __call__(self, x: float) -> float:
        best = 0.0
        for x0, y0, x1, y1 in self.segments:
            if x0 <= x <= x1:
                best = max(best, y0 + (y1 - y0) * ((x - x0) / (x1 - x0)))
            elif x0 > x:
                break
        return best

    def area(self) -> float:
        return math.fsum((x1 - x0) * (y0 + y1) / 2 for x0, y0, x1, y1 in self.segments)

    def moment(self) -> float:
        return math.fsum(
            (x1 - x0) * (x0 * (2 * y0 + y1) + x1 * (y0 + 2 * y1)) / 6
            for x0, y0, x1, y1 in self.segments
        )

    def support(self) -> tuple[float, float] | None:
        xs = [x for x0, y0, x1, y1 in self.segments if y0 > 0 or y1 > 0 for x in (x0, x1)]
        return (min(xs), max(xs)) if xs else None


def clipped(mf: MembershipFunction, height: float, universe: tuple[float, float]) -> AggregatedOutput:
    """A single consequent clipped at ``height``."""
    lo, hi = universe
    return AggregatedOutput(universe, tuple(_clip(_mf_segments(mf, lo, hi), height)))


def aggregate(parts: Sequence[tuple[MembershipFunction, float]], universe: tuple[float, float]) -> AggregatedOutput:
    """Max-merge of consequents, each clipped (min) at its strength."""
    lo, hi = universe
    fns = [_clip(_mf_segments(mf, lo, hi), h) for mf, h in parts]
    if not fns:
        return AggregatedOutput(universe, ((lo, 0.0, hi, 0.0),))
    return AggregatedOutput(universe, tuple(_envelope(fns)))


def defuzz_centroid(agg: AggregatedOutput, step: float | None = None) -> float:
    """Centroid of the aggregate.

    With ``step`` the aggregate is first sampled on a uniform grid over the
    universe and the centroid of the sampled polyline is returned.
    """
    if step is not None:
        agg = sample(agg, step)
    area = agg.area()
    if area < 1e-12:
        raise ZeroArea("aggregated output has zero area (no rule fired)")
    lo, hi = agg.universe
    return min(max(agg.moment() / area, lo), hi)


def sample(agg: AggregatedOutput, step: float) -> AggregatedOutput:
    lo, hi = agg.universe
    if step <= 0:
        raise ValueError("grid step must be positive")
    n = max(1, round((hi - lo) / step))
    xs = [lo + (hi - lo) * k / n for k in range(n + 1)]
    ys = [agg(x) for x in xs]
    segs = tuple((xs[k], ys[k], xs[k + 1], ys[k + 1]) for k in range(n))
    return AggregatedOutput(agg.universe, segs, agg.activations)


# -- variables, rules, inference ---------------------------------------------


@dataclass(frozen=True)
class LinguisticVariable:
    name: str
    universe: tuple[float, float]
    terms: tuple[tuple[str, MembershipFunction], ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(float(v) for v in self.universe))
        object.__setattr__(self, "terms", tuple((str(k), mf) for k, mf in self.terms))
        lo, hi = self.universe
        if not lo < hi:
            raise ConfigError(f"{self.name}: empty universe {self.universe}")
        labels = self.labels
        if len(set(labels)) != len(labels):
            raise ConfigError(f"{self.name}: duplicate term labels {labels}")
        for label, mf in self.terms:
            a, b = mf.support
            if a < lo or b > hi:
                raise ConfigError(f"{self.name}.{label}: support {mf.support} leaves universe {self.universe}")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(k for k, _ in self.terms)

    def term(self, label: str) -> MembershipFunction:
        for k, mf in self.terms:
            if k == label:
                return mf
        raise KeyError(f"{self.name} has no term {label!r}")

    def rank(self, label: str) -> int:
        return self.labels.index(label)

    def fuzzify(self, x: float) -> dict[str, float]:
        return {k: mf(x) for k, mf in self.terms}

    def contains(self, x: float) -> bool:
        lo, hi = self.universe
        return lo <= x <= hi


@dataclass(frozen=True)
class FuzzyRule:
    antecedents: tuple[tuple[str, str], ...]
    consequent: tuple[str, str]

    def __post_init__(self):
        object.__setattr__(self, "antecedents", tuple(tuple(a) for a in self.antecedents))
        object.__setattr__(self, "consequent", tuple(self.consequent))
        names = [v for v, _ in self.antecedents]
        if len(set(names)) != len(names):
            raise ConfigError(f"variable repeated in rule antecedent: {names}")


@dataclass(frozen=True)
class RuleActivation:
    rule_index: int
    firing_strength: float


@dataclass(frozen=True)
class RuleBase:
    inputs: tuple[LinguisticVariable, ...]
    output: LinguisticVariable
    rules: tuple[FuzzyRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "rules", tuple(self.rules))
        by_name = {v.name: v for v in self.inputs}
        if len(by_name) != len(self.inputs):
            raise ConfigError("duplicate input variable names")
        for n, rule in enumerate(self.rules, 1):
            for var, label in rule.antecedents:
                if var not in by_name:
                    raise ConfigError(f"rule {n}: unknown input variable {var!r}")
                if label not in by_name[var].labels:
                    raise ConfigError(f"rule {n}: {var!r} has no term {label!r}")
            var, label = rule.consequent
            if var != self.output.name or label not in self.output.labels:
                raise ConfigError(f"rule {n}: bad consequent {var}={label}")

    def variable(self, name: str) -> LinguisticVariable:
        for v in self.inputs:
            if v.name == name:
                return v
        raise KeyError(name)


def fire(rb: RuleBase, inputs: Mapping[str, float]) -> list[RuleActivation]:
    degrees = {}
    for var in rb.inputs:
        if var.name not in inputs:
            raise MissingInput(var.name)
        x = inputs[var.name]
        if not (isinstance(x, (int, float)) and math.isfinite(x) and var.contains(x)):
            raise OutOfUniverse(var.name, x)
        degrees[var.name] = var.fuzzify(x)
    return [
        RuleActivation(i, min((degrees[v][t] for v, t in rule.antecedents), default=1.0))
        for i, rule in enumerate(rb.rules)
    ]


def infer(rb: RuleBase, inputs: Mapping[str, float]) -> AggregatedOutput:
    activations = fire(rb, inputs)
    # clipping one term at several heights and taking the max equals one clip
    # at the largest height
    strength: dict[str, float] = {}
    for act in activations:
        label = rb.rules[act.rule_index].consequent[1]
        strength[label] = max(strength.get(label, 0.0), act.firing_strength)
    parts = [(rb.output.term(label), h) for label, h in strength.items() if h > 0.0]
    agg = aggregate(parts, rb.output.universe)
    return AggregatedOutput(agg.universe, agg.segments, tuple(activations))


# -- rule-base validation ---------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str  # completeness | consistency | continuity
    message: str
    antecedent: tuple[str, ...] = ()
    rules: tuple[int, ...] = ()  # 1-based

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass
class ValidationReport:
    complete: bool
    consistent: bool
    continuous: bool
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.complete and self.consistent and self.continuous


def _coverage(rb: RuleBase) -> dict[tuple[str, ...], list[int]]:
    """Map each full input-label combination to the rules (0-based) covering it."""
    names = [v.name for v in rb.inputs]
    covered: dict[tuple[str, ...], list[int]] = {
        combo: [] for combo in itertools.product(*(v.labels for v in rb.inputs))
    }
    for i, rule in enumerate(rb.rules):
        fixed = dict(rule.antecedents)
        choices = [[fixed[n]] if n in fixed else list(rb.variable(n).labels) for n in names]
        for combo in itertools.product(*choices):
            covered[combo].append(i)
    return covered


def validate_rulebase(rb: RuleBase) -> ValidationReport:
    """Check completeness, consistency and continuity of an AND rule base.

    Continuity: two combinations that differ in one input by one adjacent term
    must map to output terms at most one step apart in the output's term order.
    """
    covered = _coverage(rb)
    out = rb.output
    violations: list[Violation] = []

    def fmt(combo):
        return "(" + ", ".join(combo) + ")"

    complete = consistent = continuous = True
    for combo, idx in covered.items():
        if len(idx) != 1:
            complete = False
            what = "no rule covers" if not idx else "more than one rule covers"
            violations.append(
                Violation("completeness", f"{what} {fmt(combo)}", combo, tuple(i + 1 for i in idx))
            )
        labels = {rb.rules[i].consequent[1] for i in idx}
        if len(labels) > 1:
            consistent = False
            violations.append(
                Violation(
                    "consistency",
                    f"rules {', '.join(str(i + 1) for i in idx)} share antecedent {fmt(combo)} "
                    f"but conclude {sorted(labels)}",
                    combo,
                    tuple(i + 1 for i in idx),
                )
            )

    seen = set()
    for combo, idx in covered.items():
        for pos, var in enumerate(rb.inputs):
            r = var.rank(combo[pos])
            if r + 1 >= len(var.labels):
                continue
            nb = combo[:pos] + (var.labels[r + 1],) + combo[pos + 1 :]
            for i in idx:
                for j in covered[nb]:
                    ri = out.rank(rb.rules[i].consequent[1])
                    rj = out.rank(rb.rules[j].consequent[1])
                    if abs(ri - rj) > 1 and (i, j) not in seen:
                        seen.add((i, j))
                        continuous = False
                        violations.append(
                            Violation(
                                "continuity",
                                f"rule {i + 1} {fmt(combo)} -> {rb.rules[i].consequent[1]} vs "
                                f"rule {j + 1} {fmt(nb)} -> {rb.rules[j].consequent[1]}: "
                                f"adjacent antecedents, consequents {abs(ri - rj)} steps apart",
                                combo,
                                (i + 1, j + 1),
                            )
                        )
    return ValidationReport(complete, consistent, continuous, violations)


def coverage_check(var: LinguisticVariable, step: float = 1e-3) -> bool:
    """True when some term has positive membership at every grid point of the universe."""
    lo, hi = var.universe
    n = max(1, math.ceil((hi - lo) / step))
    for k in range(n + 1):
        x = lo + (hi - lo) * k / n
        if max((mf(x) for _, mf in var.terms), default=0.0) <= 0.0:
            return False
    return True


# -- declarative config -----------------------------------------------------

_SHAPES = {"trapezoid": Trapezoid, "triangle": Triangle}


def _mf_from_dict(d: Mapping) -> MembershipFunction:
    try:
        cls = _SHAPES[d["shape"]]
        return cls(*(float(v) for v in d["params"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad membership function definition {dict(d)!r}") from exc


def _mf_to_dict(mf: MembershipFunction) -> dict:
    shape = "trapezoid" if isinstance(mf, Trapezoid) else "triangle"
    return {"shape": shape, "params": list(mf.params)}


def _var_from_dict(d: Mapping) -> LinguisticVariable:
    try:
        terms = tuple((t["label"], _mf_from_dict(t)) for t in d["terms"])
        return LinguisticVariable(d["name"], tuple(d["universe"]), terms)
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad variable definition: {exc}") from exc


def _var_to_dict(v: LinguisticVariable) -> dict:
    return {
        "name": v.name,
        "universe": list(v.universe),
        "terms": [{"label": k, **_mf_to_dict(mf)} for k, mf in v.terms],
    }


def rulebase_from_dict(d: Mapping) -> RuleBase:
    try:
        inputs = tuple(_var_from_dict(v) for v in d["inputs"])
        output = _var_from_dict(d["output"])
        rules = []
        for r in d["rules"]:
            ((ovar, olabel),) = r["then"].items()
            rules.append(FuzzyRule(tuple(r["if"].items()), (ovar, olabel)))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ConfigError(f"malformed rule-base config: {exc}") from exc
    return RuleBase(inputs, output, tuple(rules))


def rulebase_to_dict(rb: RuleBase) -> dict:
    return {
        "inputs": [_var_to_dict(v) for v in rb.inputs],
        "output": _var_to_dict(rb.output),
        "rules": [
            {"if": dict(r.antecedents), "then": {r.consequent[0]: r.consequent[1]}}
            for r in rb.rules
        ],
    }


def load_rulebase(path: str | Path) -> RuleBase:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    return rulebase_from_dict(data)


def dump_rulebase(rb: RuleBase, path: str | Path) -> None:
    Path(path).write_text(json.dumps(rulebase_to_dict(rb), indent=2) + "\n", encoding="utf-8")
