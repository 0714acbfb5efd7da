"""Root-transform refinement of positive/negative scores."""

from __future__ import annotations

import enum
import math

from .errors import DomainError
from .scorer import ScoreTriple


class ApproachId(str, enum.Enum):
    A1 = "A1"  # unchanged
    A2 = "A2"  # square root
    A3 = "A3"  # fourth root

    def __str__(self) -> str:
        return self.value

    @classmethod
    def parse(cls, value: "str | ApproachId") -> "ApproachId":
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"unknown approach {value!r}; expected one of A1, A2, A3") from None


APPROACHES = (ApproachId.A1, ApproachId.A2, ApproachId.A3)


def _root(x: float, approach: ApproachId) -> float:
    if approach is ApproachId.A1:
        return x
    if approach is ApproachId.A2:
        return math.sqrt(x)
    return math.sqrt(math.sqrt(x))


def refine(base: ScoreTriple, approach: ApproachId | str) -> ScoreTriple:
    """Amplify positive and negative components; neutral passes through untouched.

    The refined components may sum to more than one.
    """
    approach = ApproachId.parse(approach)
    for name in ("positive", "negative", "neutral"):
        v = getattr(base, name)
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"{name}={v!r} outside [0, 1]")
    return ScoreTriple(_root(base.positive, approach), _root(base.negative, approach), base.neutral)
