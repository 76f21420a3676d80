from __future__ import annotations

import random

import pytest

from conftest import PUBLISHED_SCORES
from mazij.evalharness.aggregate import (
    DEFAULT_SUITE_SET,
    aggregate,
    compare,
    display,
    load_reference_scores,
    reference_rows,
)

SUITES = list(DEFAULT_SUITE_SET)


def row(values):
    return dict(zip(SUITES, values))

# published leaderboard rows (percent, per suite in canonical order)
ADAPTED = row([77.14, 86.43, 90.22, 60.26, 78.84, 86.50, 81.88])
GPT51 = row([78.09, 79.22, 88.12, 60.14, 83.30, 81.98, 74.22])
BASELINE = row([72.83, 77.78, 83.49, 58.47, 63.30, 86.34, 73.16])
AVG_LEADER = row([75.32, 76.82, 89.68, 58.85, 73.96, 77.65, 78.72])
MADINAH_LEADER = row([69.94, 78.00, 89.83, 56.61, 67.86, 75.98, 79.00])


@pytest.mark.parametrize("scores,expected", [
    (ADAPTED, "80.18"),
    (GPT51, "77.87"),
    (BASELINE, "73.62"),
])
def test_published_averages_reproduced(scores, expected):
    assert display(aggregate(scores)) == expected


def test_missing_suite_is_an_error():
    partial = dict(ADAPTED)
    del partial["AlGhafa"]
    with pytest.raises(ValueError, match="AlGhafa"):
        aggregate(partial)


def test_aggregate_permutation_invariant():
    rng = random.Random(3)
    items = list(ADAPTED.items())
    for _ in range(5):
        rng.shuffle(items)
        assert aggregate(dict(items)) == aggregate(ADAPTED)


def test_margin_vs_average_leader_is_4_32():
    table = compare(ADAPTED, AVG_LEADER, "average-leader")
    assert f"{table.average_margin:+.2f}" == "+4.32"


def test_margin_vs_gpt51_is_2_31():
    table = compare(ADAPTED, GPT51, "GPT-5.1")
    assert f"{table.average_margin:+.2f}" == "+2.31"


def test_madinahqa_margin_vs_category_leader_is_8_43():
    table = compare(ADAPTED, MADINAH_LEADER, "MadinahQA-leader")
    assert f"{table.per_suite['MadinahQA']:+.2f}" == "+8.43"


def test_identical_maps_give_zero_margins():
    table = compare(ADAPTED, ADAPTED)
    assert all(f"{m:.2f}" == "0.00" for m in table.per_suite.values())
    assert f"{table.average_margin:.2f}" == "0.00"


def test_compare_requires_overlap():
    with pytest.raises(ValueError, match="overlap"):
        compare({"AlGhafa": 80.0}, {"ALRAGE": 70.0})


def test_partial_overlap_uses_mean_of_margins():
    ours = {"AlGhafa": 81.88, "ALRAGE": 86.50}
    ref = {"AlGhafa": 80.36, "AraTrust": 91.40}
    table = compare(ours, ref)
    assert list(table.per_suite) == ["AlGhafa"]
    assert table.average_margin == pytest.approx(81.88 - 80.36)


def test_published_scores_file_matches_frozen_rows():
    by_model = load_reference_scores(PUBLISHED_SCORES)
    assert by_model["Arabic-DeepSeek-R1"] == ADAPTED
    assert by_model["GPT-5.1"] == GPT51
    assert by_model["DeepSeek-R1-baseline"] == BASELINE
    assert by_model["D2IL-Arabic-Qwen2.5-72B-Instruct-v0.1"] == AVG_LEADER
    assert by_model["AIC-1"] == MADINAH_LEADER
    rows = reference_rows(by_model)
    assert len(rows) == 7 * len(by_model)


def test_display_rounds_at_two_decimals_only():
    # accuracy is stored unrounded; display formats it
    value = 100 * 561.27 / 700  # 80.181428...
    assert display(value) == "80.18"
    assert value != 80.18
