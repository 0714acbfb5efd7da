"""Lexicon-and-rules sentiment intensity scoring.

Reproduces the VADER heuristics in the variant distributed with NLTK:
booster/dampener words, negation within a three-token window, ALL-CAPS
emphasis, exclamation/question-mark emphasis, "but" clause reweighting and
"least" negation. The output is a (positive, negative, neutral) triple of
proportions summing to one.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import DomainError, EmptyLexicon, FileUnreadable

log = logging.getLogger(__name__)

# -- heuristic constants (published reference values) ----------------------

B_INCR = 0.293  # booster increment
B_DECR = -0.293  # dampener increment
C_INCR = 0.733  # ALL-CAPS emphasis
N_SCALAR = -0.74  # negation flips and dampens
BOOSTER_DECAY = (1.0, 0.95, 0.9)  # weight of a booster 1, 2, 3 tokens back
NEVER_SO_BOOST = (1.5, 1.25)  # "never so X" at distance 2, 3
BUT_BEFORE = 0.5
BUT_AFTER = 1.5
EXCLAMATION_STEP = 0.292
EXCLAMATION_CAP = 4
QUESTION_STEP = 0.18
QUESTION_CAP = 0.96
NORMALIZE_ALPHA = 15

PUNCTUATION = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~"
PUNC_LIST = (
    ".", "!", "?", ",", ";", ":", "-", "'", '"',
    "!!", "!!!", "??", "???", "?!?", "!?!", "?!?!", "!?!?",
)

NEGATORS = frozenset({
    "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
    "ain't", "aren't", "can't", "couldn't", "daren't", "didn't", "doesn't",
    "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
    "don't", "hadn't", "hasn't", "haven't", "isn't", "mightn't", "mustn't",
    "neednt", "needn't", "never", "none", "nope", "nor", "not", "nothing",
    "nowhere", "oughtnt", "shant", "shouldnt", "uhuh", "wasnt", "werent",
    "oughtn't", "shan't", "shouldn't", "uh-uh", "wasn't", "weren't", "without",
    "wont", "wouldnt", "won't", "wouldn't", "rarely", "seldom", "despite",
})

_BOOSTERS_UP = (
    "absolutely amazingly awfully completely considerably decidedly deeply "
    "effing enormously entirely especially exceptionally extremely fabulously "
    "flipping flippin fricking frickin frigging friggin fully fucking greatly "
    "hella highly hugely incredibly intensely majorly more most particularly "
    "purely quite really remarkably so substantially thoroughly totally "
    "tremendously uber unbelievably unusually utterly very"
).split()
_BOOSTERS_DOWN = [
    "almost", "barely", "hardly", "just enough", "kind of", "kinda", "kindof",
    "kind-of", "less", "little", "marginally", "occasionally", "partly",
    "scarcely", "slightly", "somewhat", "sort of", "sorta", "sortof", "sort-of",
]
BOOSTERS = {w: B_INCR for w in _BOOSTERS_UP} | {w: B_DECR for w in _BOOSTERS_DOWN}

IDIOMS = {
    "the shit": 3,
    "the bomb": 3,
    "bad ass": 1.5,
    "yeah right": -2,
    "cut the mustard": 2,
    "kiss of death": -1.5,
    "hand to mouth": -2,
}


@dataclass(frozen=True)
class ScoreTriple:
    positive: float
    negative: float
    neutral: float

    def __post_init__(self):
        for name in ("positive", "negative", "neutral"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise DomainError(f"{name} score {v!r} outside [0, 1]")

    def rounded(self, digits: int = 3) -> "ScoreTriple":
        return ScoreTriple(
            round(self.positive, digits), round(self.negative, digits), round(self.neutral, digits)
        )

    def as_dict(self) -> dict[str, float]:
        return {"positive": self.positive, "negative": self.negative, "neutral": self.neutral}


@dataclass(frozen=True)
class SentimentLexicon:
    entries: Mapping[str, float]
    boosters: Mapping[str, float] = field(default_factory=lambda: MappingProxyType(dict(BOOSTERS)))
    negators: frozenset[str] = NEGATORS
    idioms: Mapping[str, float] = field(default_factory=lambda: MappingProxyType(dict(IDIOMS)))
    diagnostics: tuple[str, ...] = ()

    def valence(self, token: str) -> float | None:
        return self.entries.get(token.lower())

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.entries


def parse_lexicon(text: str, source: str = "<lexicon>") -> SentimentLexicon:
    entries: dict[str, float] = {}
    folded: dict[str, float] = {}
    problems = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.rstrip("\r\n").split("\t")
        if len(parts) < 2:
            problems.append(f"{source}:{lineno}: expected token<TAB>valence")
            continue
        token, raw = parts[0].strip(), parts[1].strip()
        try:
            value = float(raw)
        except ValueError:
            problems.append(f"{source}:{lineno}: non-numeric valence {raw!r}")
            continue
        if not token or not (-4.0 <= value <= 4.0):
            problems.append(f"{source}:{lineno}: valence {value} outside [-4, 4] or empty token")
            continue
        if token == token.lower():
            entries[token] = value  # later duplicates win
        else:
            folded[token.lower()] = value
    for token, value in folded.items():
        # mixed-case keys only fill gaps left by lowercase ones
        entries.setdefault(token, value)
    for p in problems:
        log.warning(p)
    if not entries:
        raise EmptyLexicon(f"{source}: no usable lexicon entries")
    return SentimentLexicon(entries=MappingProxyType(entries), diagnostics=tuple(problems))


def load_lexicon(path: str | Path | None = None) -> SentimentLexicon:
    """Load a tab-separated ``token valence [...]`` file (bundled VADER lexicon by default)."""
    try:
        if path is None:
            text = resources.files("sentfis").joinpath("data/vader_lexicon.txt").read_text("utf-8")
            source = "vader_lexicon.txt"
        else:
            text = Path(path).read_text(encoding="utf-8")
            source = str(path)
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"cannot read lexicon {path}: {exc}") from exc
    return parse_lexicon(text, source)


_default_lexicon: SentimentLexicon | None = None


def default_lexicon() -> SentimentLexicon:
    global _default_lexicon
    if _default_lexicon is None:
        _default_lexicon = load_lexicon()
    return _default_lexicon


# -- tokenization -----------------------------------------------------------

_STRIP = str.maketrans("", "", PUNCTUATION)


def tokenize(text: str) -> list[str]:
    """Whitespace tokens with one leading or trailing punctuation run removed.

    A token is only stripped when the remainder is a word that also appears in
    the punctuation-free text; single-character tokens are dropped. Emoticons
    and contractions survive intact.
    """
    words_only = {w for w in text.translate(_STRIP).split() if len(w) > 1}
    out = []
    for tok in text.split():
        if len(tok) <= 1:
            continue
        for p in PUNC_LIST:
            if tok.endswith(p) and tok[: -len(p)] in words_only:
                tok = tok[: -len(p)]
                break
            if tok.startswith(p) and tok[len(p):] in words_only:
                tok = tok[len(p):]
                break
        out.append(tok)
    return out


def _cap_differential(tokens: list[str]) -> bool:
    caps = sum(1 for t in tokens if t.isupper())
    return 0 < len(tokens) - caps < len(tokens)


# -- valence rules ----------------------------------------------------------


def _is_negated(word: str, lex: SentimentLexicon) -> bool:
    w = word.lower()
    return w in lex.negators or "n't" in w


def _booster_scalar(word: str, valence: float, cap_diff: bool, lex: SentimentLexicon) -> float:
    w = word.lower()
    if w not in lex.boosters:
        return 0.0
    scalar = lex.boosters[w]
    if valence < 0:
        scalar = -scalar
    if word.isupper() and cap_diff:
        scalar = scalar + C_INCR if valence > 0 else scalar - C_INCR
    return scalar


def _never_check(valence: float, toks: list[str], dist: int, i: int, lex) -> float:
    if dist == 0:
        if _is_negated(toks[i - 1], lex):
            valence *= N_SCALAR
    elif dist == 1:
        if toks[i - 2] == "never" and toks[i - 1] in ("so", "this"):
            valence *= NEVER_SO_BOOST[0]
        elif _is_negated(toks[i - 2], lex):
            valence *= N_SCALAR
    else:
        if (toks[i - 3] == "never" and toks[i - 2] in ("so", "this")) or toks[i - 1] in ("so", "this"):
            valence *= NEVER_SO_BOOST[1]
        elif _is_negated(toks[i - 3], lex):
            valence *= N_SCALAR
    return valence


def _idiom_check(valence: float, toks: list[str], i: int, lex: SentimentLexicon) -> float:
    one_zero = f"{toks[i - 1]} {toks[i]}"
    two_one_zero = f"{toks[i - 2]} {toks[i - 1]} {toks[i]}"
    two_one = f"{toks[i - 2]} {toks[i - 1]}"
    three_two_one = f"{toks[i - 3]} {toks[i - 2]} {toks[i - 1]}"
    three_two = f"{toks[i - 3]} {toks[i - 2]}"
    for seq in (one_zero, two_one_zero, two_one, three_two_one, three_two):
        if seq in lex.idioms:
            valence = lex.idioms[seq]
            break
    if len(toks) - 1 > i:
        zero_one = f"{toks[i]} {toks[i + 1]}"
        if zero_one in lex.idioms:
            valence = lex.idioms[zero_one]
    if len(toks) - 1 > i + 1:
        zero_one_two = f"{toks[i]} {toks[i + 1]} {toks[i + 2]}"
        if zero_one_two in lex.idioms:
            valence = lex.idioms[zero_one_two]
    if three_two in lex.boosters or two_one in lex.boosters:
        valence += B_DECR
    return valence


def _least_check(valence: float, toks: list[str], i: int, lex: SentimentLexicon) -> float:
    if i > 0 and toks[i - 1].lower() == "least" and toks[i - 1] not in lex:
        if i == 1 or toks[i - 2].lower() not in ("at", "very"):
            valence *= N_SCALAR
    return valence


def _token_valence(toks: list[str], i: int, cap_diff: bool, lex: SentimentLexicon) -> float:
    item = toks[i]
    valence = lex.valence(item)
    if valence is None:
        return 0.0
    if item.isupper() and cap_diff:
        valence = valence + C_INCR if valence > 0 else valence - C_INCR
    for dist in range(3):
        if i > dist and toks[i - dist - 1] not in lex:
            s = _booster_scalar(toks[i - dist - 1], valence, cap_diff, lex)
            valence += s * BOOSTER_DECAY[dist]
            valence = _never_check(valence, toks, dist, i, lex)
            if dist == 2:
                valence = _idiom_check(valence, toks, i, lex)
    return _least_check(valence, toks, i, lex)


def _but_reweight(toks: list[str], sentiments: list[float]) -> list[float]:
    lowered = [t.lower() for t in toks]
    if "but" not in lowered:
        return sentiments
    bi = lowered.index("but")
    return [
        s * BUT_BEFORE if k < bi else s * BUT_AFTER if k > bi else s
        for k, s in enumerate(sentiments)
    ]


def _punctuation_emphasis(text: str) -> float:
    ep = min(text.count("!"), EXCLAMATION_CAP) * EXCLAMATION_STEP
    qm = text.count("?")
    if qm > 3:
        qa = QUESTION_CAP
    elif qm > 1:
        qa = qm * QUESTION_STEP
    else:
        qa = 0.0
    return ep + qa


def token_sentiments(text: str, lex: SentimentLexicon) -> list[float]:
    toks = tokenize(text)
    cap_diff = _cap_differential(toks)
    # a repeated token is always scored at its first position (reference quirk)
    first: dict[str, int] = {}
    for idx, tok in enumerate(toks):
        first.setdefault(tok, idx)
    sentiments = []
    for tok in toks:
        i = first[tok]
        low = tok.lower()
        if low in lex.boosters or (low == "kind" and i < len(toks) - 1 and toks[i + 1].lower() == "of"):
            sentiments.append(0.0)
            continue
        sentiments.append(_token_valence(toks, i, cap_diff, lex))
    return _but_reweight(toks, sentiments)


def _polarity(text: str, lex: SentimentLexicon) -> tuple[float, float, float, float]:
    sentiments = token_sentiments(text, lex)
    if not sentiments:
        return 0.0, 0.0, 1.0, 0.0
    emphasis = _punctuation_emphasis(text)
    total_valence = sum(sentiments)
    if total_valence > 0:
        total_valence += emphasis
    elif total_valence < 0:
        total_valence -= emphasis
    compound = total_valence / math.sqrt(total_valence * total_valence + NORMALIZE_ALPHA)

    pos_sum = sum(s + 1 for s in sentiments if s > 0)
    neg_sum = sum(1 - s for s in sentiments if s < 0)  # absolute value
    neu_count = sum(1 for s in sentiments if s == 0)
    if pos_sum > neg_sum:
        pos_sum += emphasis
    elif pos_sum < neg_sum:
        neg_sum += emphasis
    total = pos_sum + neg_sum + neu_count
    return pos_sum / total, neg_sum / total, neu_count / total, compound


def score(text: str, lex: SentimentLexicon | None = None) -> ScoreTriple:
    """(positive, negative, neutral) proportions; ``(0, 0, 1)`` for unscorable input."""
    pos, neg, neu, _ = _polarity(text, lex or default_lexicon())
    return ScoreTriple(pos, neg, neu)


def compound(text: str, lex: SentimentLexicon | None = None) -> float:
    """Normalized summed valence in (-1, 1). Diagnostic only."""
    return _polarity(text, lex or default_lexicon())[3]
