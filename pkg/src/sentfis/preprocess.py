"""English review cleaning: lowercase, strip markup and noise, drop stopwords, stem."""

from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import porter
from .errors import FileUnreadable

# Fixed execution order; a config may disable steps but never reorder them.
STEPS = (
    "lowercase",
    "brackets",
    "urls",
    "html",
    "punctuation",
    "newlines",
    "digit_words",
    "stopwords",
    "stem",
)

_BRACKETS = re.compile(r"\[[^\]]*\]")
_URLS = re.compile(r"(?:[a-z][a-z0-9+.\-]*://|www\.)\S+", re.IGNORECASE)
_HTML = re.compile(r"<[^>]*>")
_PUNCT = re.compile(f"[{re.escape(string.punctuation)}]")
_NEWLINES = re.compile(r"[\r\n]+")


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Read a stopword file: one token per line, ``#`` starts a comment.

    With no path, the bundled English list is used.
    """
    try:
        if path is None:
            text = resources.files("sentfis").joinpath("data/stopwords_en.txt").read_text("utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise FileUnreadable(f"cannot read stopword file {path}: {exc}") from exc
    words = set()
    for line in text.splitlines():
        token = line.split("#", 1)[0].strip().lower()
        if token:
            words.add(token)
    return frozenset(words)


@dataclass(frozen=True)
class CleanConfig:
    stopwords: frozenset[str] = field(default_factory=load_stopwords)
    stemmer: str = "porter"
    steps: frozenset[str] = frozenset(STEPS)

    def __post_init__(self):
        if self.stemmer not in ("porter", "none"):
            raise ValueError(f"unknown stemmer {self.stemmer!r}")
        unknown = set(self.steps) - set(STEPS)
        if unknown:
            raise ValueError(f"unknown cleaning steps: {sorted(unknown)}")


def clean_text(raw: str, cfg: CleanConfig | None = None) -> str:
    cfg = cfg or CleanConfig()
    on = cfg.steps
    text = raw
    if "lowercase" in on:
        text = text.lower()
    if "brackets" in on:
        text = _BRACKETS.sub("", text)
    if "urls" in on:
        text = _URLS.sub("", text)
    if "html" in on:
        text = _HTML.sub("", text)
    if "punctuation" in on:
        text = _PUNCT.sub("", text)
    if "newlines" in on:
        text = _NEWLINES.sub(" ", text)
    tokens = text.split()
    if "digit_words" in on:
        tokens = [t for t in tokens if not any(ch.isdigit() for ch in t)]
    if "stopwords" in on:
        tokens = [t for t in tokens if t not in cfg.stopwords]
    if "stem" in on and cfg.stemmer == "porter":
        tokens = [porter.stem(t) for t in tokens]
    # stemming can empty a token ("s" -> "")
    return " ".join(t for t in tokens if t)


def word_count(english_text: str) -> int:
    """Whitespace token count of the raw (uncleaned) text."""
    return len(english_text.split())
