"""Expert aesthetic scoring: the eleven fixed criteria and RAVF.

Scores live on the seven-point integer scale -3..3. The rounded average
value of fairness (RAVF) rounds half away from zero; aggregation over
raters averages per criterion first and rounds once (recorded in the
output).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import (
    EmptySet,
    MissingCriterion,
    MixedSubjects,
    NonIntegerScore,
    ScoreOutOfRange,
    UnknownCriterion,
)

CRITERIA: tuple[str, ...] = (
    "conciseness-integrity",
    "expressiveness",
    "proportional consistency",
    "compositional balance",
    "structural organization",
    "imagery",
    "efficiency",
    "dynamism",
    "scale",
    "plasticity",
    "harmony",
)

SCORE_MIN, SCORE_MAX = -3, 3
ROUNDING_RULE = "half away from zero"
AGGREGATION_RULE = "average per criterion, then round once"


@dataclass(frozen=True)
class ScoreSheet:
    """One rater's scores for one subject curve; exactly eleven entries."""

    scores: Mapping[str, int]
    rater: str = "anonymous"
    subject: str = ""


def validate_sheet(raw: Mapping, rater: str = "anonymous", subject: str = "") -> ScoreSheet:
    """Validate a criterion->score map, reporting every violation at once."""
    missing = [c for c in CRITERIA if c not in raw]
    unknown = [c for c in raw if c not in CRITERIA]
    non_int = []
    out_of_range = []
    for name, value in raw.items():
        if name not in CRITERIA:
            continue
        if isinstance(value, bool) or not isinstance(value, int):
            if isinstance(value, float) and value.is_integer():
                value = int(value)
            else:
                non_int.append(f"{name}={value!r}")
                continue
        if not SCORE_MIN <= value <= SCORE_MAX:
            out_of_range.append(f"{name}={value}")
    problems = []
    if missing:
        problems.append(f"missing criteria: {missing}")
    if unknown:
        problems.append(f"unknown criteria: {unknown}")
    if non_int:
        problems.append(f"non-integer scores: {non_int}")
    if out_of_range:
        problems.append(f"scores outside [{SCORE_MIN}, {SCORE_MAX}]: {out_of_range}")
    if problems:
        message = "; ".join(problems)
        if missing:
            raise MissingCriterion(message)
        if unknown:
            raise UnknownCriterion(message)
        if non_int:
            raise NonIntegerScore(message)
        raise ScoreOutOfRange(message)
    clean = {c: int(raw[c]) for c in CRITERIA}
    return ScoreSheet(scores=clean, rater=rater, subject=subject)


def _round_half_away(value: Fraction) -> int:
    half = Fraction(1, 2)
    if value >= 0:
        return int((value + half).__floor__())
    return int((value - half).__ceil__())


def ravf(sheet: ScoreSheet) -> int:
    """Rounded average value of fairness: mean of the eleven scores,
    rounded half away from zero."""
    total = sum(sheet.scores[c] for c in CRITERIA)
    return _round_half_away(Fraction(total, len(CRITERIA)))


@dataclass(frozen=True)
class AggregateScore:
    per_criterion_mean: dict[str, float]
    ravf: int
    raters: int
    rounding: str = ROUNDING_RULE
    aggregation: str = AGGREGATION_RULE


def aggregate(sheets: Sequence[ScoreSheet]) -> AggregateScore:
    """Per-criterion means over raters for one subject, and the RAVF of
    the mean vector."""
    if not sheets:
        raise EmptySet("no score sheets supplied")
    subjects = {s.subject for s in sheets}
    if len(subjects) > 1:
        raise MixedSubjects(f"sheets refer to different subjects: {sorted(subjects)}")
    m = len(sheets)
    means = {c: Fraction(sum(s.scores[c] for s in sheets), m) for c in CRITERIA}
    overall = sum(means.values(), Fraction(0)) / len(CRITERIA)
    return AggregateScore(
        per_criterion_mean={c: float(v) for c, v in means.items()},
        ravf=_round_half_away(overall),
        raters=m,
    )
