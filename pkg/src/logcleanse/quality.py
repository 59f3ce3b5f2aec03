"""Entry quality: Q = U * (n*N) * (s*S) * (r*R)."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .entry import Term
from .errors import EmptyEntry

# Size reduction that general-purpose compression reaches on any textual
# entry, so a textual entry is never scored below it.
TEXTUAL_REDUCTION = 0.75


class State(str, Enum):
    RAW = "raw"
    ANONYMIZED = "anonymized"
    ENCODED = "encoded"
    ERROR = "error"

    @classmethod
    def _missing_(cls, value):
        if value == "constantified":
            return cls.ANONYMIZED
        return None


@dataclass(frozen=True)
class QualityScore:
    usefulness: int
    nonsensitivity: float
    semantic: float
    reduction: float
    coefficients: tuple[float, float, float]
    q: float

    def as_dict(self) -> dict:
        return {
            "U": self.usefulness,
            "N": self.nonsensitivity,
            "S": self.semantic,
            "R": self.reduction,
            "coefficients": list(self.coefficients),
            "Q": self.q,
        }


def nonsensitivity(terms: list[Term]) -> float:
    if not terms:
        raise EmptyEntry("no terms")
    return sum(not t.sensitive for t in terms) / len(terms)


def semantic(terms: list[Term]) -> float:
    if not terms:
        raise EmptyEntry("no terms")
    return sum(t.semantic for t in terms) / len(terms)


def reduction(entry_state: State | str, original_length: int, current_length: int) -> float:
    if State(entry_state) is not State.ENCODED:
        return TEXTUAL_REDUCTION
    return min(1.0, max(0.0, 1.0 - current_length / original_length))


def score(U: int, N: float, S: float, R: float, coeffs: tuple[float, float, float] = (1.0, 1.0, 1.0)) -> QualityScore:
    n, s, r = coeffs
    U = int(bool(U))
    return QualityScore(U, N, S, R, tuple(coeffs), U * (n * N) * (s * S) * (r * R))


def score_terms(
    terms: list[Term],
    entry_state: State | str,
    original_length: int,
    current_length: int,
    coeffs: tuple[float, float, float] = (1.0, 1.0, 1.0),
    usefulness: int = 1,
) -> QualityScore:
    return score(
        usefulness,
        nonsensitivity(terms),
        semantic(terms),
        reduction(entry_state, original_length, current_length),
        coeffs,
    )
