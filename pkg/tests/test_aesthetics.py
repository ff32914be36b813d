"""Score sheet validation, RAVF, and aggregation."""

import numpy as np
import pytest

from fairkit import aesthetics
from fairkit.errors import (
    EmptySet,
    MissingCriterion,
    MixedSubjects,
    NonIntegerScore,
    ScoreOutOfRange,
    UnknownCriterion,
)


def full_sheet(value=0, **overrides):
    scores = {c: value for c in aesthetics.CRITERIA}
    scores.update(overrides)
    return scores


def test_eleven_criteria_fixed():
    assert len(aesthetics.CRITERIA) == 11
    assert aesthetics.CRITERIA[0] == "conciseness-integrity"
    assert aesthetics.CRITERIA[-1] == "harmony"


def test_validate_accepts_full_sheet():
    sheet = aesthetics.validate_sheet(full_sheet(1), rater="r1", subject="c1")
    assert sheet.rater == "r1" and sheet.subject == "c1"
    assert all(sheet.scores[c] == 1 for c in aesthetics.CRITERIA)


def test_validate_missing_criterion_named():
    scores = full_sheet(0)
    del scores["plasticity"]
    with pytest.raises(MissingCriterion, match="plasticity"):
        aesthetics.validate_sheet(scores)


def test_validate_unknown_criterion():
    with pytest.raises(UnknownCriterion, match="sparkle"):
        aesthetics.validate_sheet({**full_sheet(0), "sparkle": 1})


def test_validate_out_of_range_and_non_integer():
    with pytest.raises(ScoreOutOfRange):
        aesthetics.validate_sheet(full_sheet(0, harmony=4))
    with pytest.raises(NonIntegerScore):
        aesthetics.validate_sheet(full_sheet(0, harmony=0.5))


def test_ravf_examples():
    assert aesthetics.ravf(aesthetics.validate_sheet(full_sheet(0))) == 0
    assert aesthetics.ravf(aesthetics.validate_sheet(full_sheet(1))) == 1
    six_three_five_neg = {c: (3 if i < 6 else -3) for i, c in enumerate(aesthetics.CRITERIA)}
    assert aesthetics.ravf(aesthetics.validate_sheet(six_three_five_neg)) == 0


def test_ravf_sign_flip_antisymmetry():
    rng = np.random.default_rng(101)
    for _ in range(200):
        scores = {c: int(v) for c, v in zip(aesthetics.CRITERIA, rng.integers(-3, 4, size=11))}
        sheet = aesthetics.validate_sheet(scores)
        flipped = aesthetics.validate_sheet({c: -v for c, v in scores.items()})
        assert aesthetics.ravf(flipped) == -aesthetics.ravf(sheet)


def test_ravf_bounded_and_monotone():
    rng = np.random.default_rng(7)
    for _ in range(100):
        scores = {c: int(v) for c, v in zip(aesthetics.CRITERIA, rng.integers(-3, 4, size=11))}
        base = aesthetics.ravf(aesthetics.validate_sheet(scores))
        assert -3 <= base <= 3
        name = aesthetics.CRITERIA[int(rng.integers(0, 11))]
        if scores[name] < 3:
            bumped = dict(scores)
            bumped[name] += 1
            assert aesthetics.ravf(aesthetics.validate_sheet(bumped)) >= base


def test_aggregate_single_sheet_equals_ravf():
    sheet = aesthetics.validate_sheet(full_sheet(2), subject="x")
    agg = aesthetics.aggregate([sheet])
    assert agg.ravf == aesthetics.ravf(sheet)
    assert agg.raters == 1


def test_aggregate_two_sheets():
    zero = aesthetics.validate_sheet(full_sheet(0), subject="x")
    two = aesthetics.validate_sheet(full_sheet(2), subject="x")
    agg = aesthetics.aggregate([zero, two])
    assert agg.ravf == 1
    assert all(abs(v - 1.0) < 1e-15 for v in agg.per_criterion_mean.values())


def test_aggregate_rejects_mixed_and_empty():
    a = aesthetics.validate_sheet(full_sheet(0), subject="x")
    b = aesthetics.validate_sheet(full_sheet(0), subject="y")
    with pytest.raises(MixedSubjects):
        aesthetics.aggregate([a, b])
    with pytest.raises(EmptySet):
        aesthetics.aggregate([])


def test_rounding_half_away_from_zero():
    # mean of exactly +-0.5 must round away from zero
    from fractions import Fraction

    assert aesthetics._round_half_away(Fraction(1, 2)) == 1
    assert aesthetics._round_half_away(Fraction(-1, 2)) == -1
    assert aesthetics._round_half_away(Fraction(5, 11)) == 0
    assert aesthetics._round_half_away(Fraction(6, 11)) == 1
