import csv
import io
import json

import numpy as np
import pytest

from onionpeel.datagen import GenSpec, DEFAULT_SPEC
from onionpeel.detector import DetectionConfig, OutlierReport
from onionpeel.errors import InvalidParameterError
from onionpeel.evaluation import (
    Merit,
    DEFAULT_SCENARIOS,
    common_outliers,
    grade,
    recall,
    run_experiment,
)


def report(ids, k=None):
    k = len(ids) if k is None else k
    return OutlierReport(tuple(ids), (), (), DetectionConfig(k=k))


def test_common_outliers():
    a = report(range(15))
    assert common_outliers(a, a) == 15
    assert common_outliers(a, report(range(100, 115))) == 0
    b = report(list(range(12)) + [50, 51, 52])
    assert common_outliers(a, b) == common_outliers(b, a) == 12
    assert 100 * common_outliers(a, b) / 15 == 80.0
    with pytest.raises(InvalidParameterError):
        common_outliers(a, report(range(3)))


def test_recall():
    assert recall(report(range(20)), range(15)) == 1.0
    assert recall(report(range(5)), {10, 11}) == 0.0
    assert recall(report(list(range(12)) + [90, 91, 92]), range(15)) == 0.8
    with pytest.raises(InvalidParameterError):
        recall(report([1]), set())


def test_recall_monotone_in_detected_set():
    truth = set(range(0, 30, 2))
    small = report(range(10), k=20)
    big = report(range(20), k=20)
    assert recall(small, truth) <= recall(big, truth)


@pytest.mark.parametrize(
    "acc, merit",
    [(80, Merit.GOOD), (75, Merit.AVERAGE), (60, Merit.BAD), (100, Merit.GOOD),
     (75.0001, Merit.GOOD), (74.9999, Merit.BAD), (0, Merit.BAD), (76, Merit.GOOD), (1, Merit.BAD)],
)
def test_grade_bands(acc, merit):
    assert grade(acc).grade is merit


@pytest.mark.parametrize("acc", [-1, 100.5])
def test_grade_range(acc):
    with pytest.raises(InvalidParameterError):
        grade(acc)


def test_experiment_shape_and_determinism():
    matrix, summary = run_experiment(DEFAULT_SPEC, DEFAULT_SCENARIOS, range(10))
    assert len(matrix) == 30
    assert len(summary.grid) == 3 and all(len(r) == 10 for r in summary.grid)
    assert summary.planted
    assert len(summary.grades) == 3
    _, again = run_experiment(DEFAULT_SPEC, DEFAULT_SCENARIOS, range(10), max_workers=4)
    assert again.to_json() == summary.to_json()


def test_single_cell_grid():
    spec = GenSpec(n=300, variances=(1.0, 100.0), contamination=0.02, seed=0)
    matrix, summary = run_experiment(spec, [DetectionConfig(k=6, metric="mahalanobis")], [5])
    assert len(matrix) == 1
    assert summary.grid == [[recall(matrix.report(0, 0), matrix.truths[0])]]
    assert summary.scenarios == ["mahalanobis"]
    assert summary.cross_common == [[0]]


def test_unlabeled_mode_reports_agreement_only():
    spec = GenSpec(n=400, variances=(1.0, 100.0), contamination=0.0)
    matrix, summary = run_experiment(spec, DEFAULT_SCENARIOS, [1, 2])
    assert not summary.planted
    assert summary.grades is None
    d = summary.to_dict()
    assert d["mode"] == "unlabeled"
    assert "recall" not in d
    assert set(d["pairwise_common"]) == {
        "euclidean|standardized", "euclidean|mahalanobis", "standardized|mahalanobis"
    }
    for counts in d["pairwise_common"].values():
        assert all(0 <= c <= 15 for c in counts)
    a, b = matrix.report(0, 1), matrix.report(2, 1)
    assert d["pairwise_common"]["euclidean|mahalanobis"][1] == common_outliers(a, b)


def test_summary_outputs():
    spec = GenSpec(n=300, variances=(1.0, 100.0), contamination=0.02)
    _, summary = run_experiment(spec, DEFAULT_SCENARIOS[:2], [0, 1, 2])
    rows = list(csv.reader(io.StringIO(summary.to_csv())))
    assert rows[0][:4] == ["scenario", "seed 0", "seed 1", "seed 2"]
    assert [r[0] for r in rows[1:]] == ["euclidean", "standardized"]
    doc = json.loads(summary.to_json())
    assert doc["mode"] == "planted"
    assert len(doc["recall"]) == 2
    text = summary.to_text().splitlines()
    assert len(text) == 5


def test_experiment_validation():
    with pytest.raises(InvalidParameterError):
        run_experiment(DEFAULT_SPEC, DEFAULT_SCENARIOS, [])
    with pytest.raises(InvalidParameterError):
        run_experiment(DEFAULT_SPEC, [DetectionConfig(k=3), DetectionConfig(k=4)], [0])


def test_mahalanobis_beats_raw_euclidean_on_planted_data():
    _, summary = run_experiment(DEFAULT_SPEC, DEFAULT_SCENARIOS, range(10))
    euc, _, mah = summary.mean_recall
    assert mah > euc
    assert summary.grades[2].grade is Merit.GOOD
    assert np.all(np.asarray(summary.recall) <= 1.0)
