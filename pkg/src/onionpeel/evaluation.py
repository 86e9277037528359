"""Repeated seeded runs, common-outlier counts, recall and merit grades."""
from __future__ import annotations

import csv
import enum
import io
import itertools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from onionpeel.datagen import GenSpec, generate
from onionpeel.detector import DetectionConfig, OutlierReport, detect
from onionpeel.errors import InvalidParameterError
from onionpeel.metrics import MetricKind

__all__ = [
    "Merit",
    "MeritGrade",
    "Scenario",
    "DEFAULT_SCENARIOS",
    "RunMatrix",
    "ExperimentSummary",
    "common_outliers",
    "recall",
    "grade",
    "run_experiment",
]

MERIT_THRESHOLD = 75.0


class Merit(str, enum.Enum):
    GOOD = "Good"
    AVERAGE = "Average"
    BAD = "Bad"


@dataclass(frozen=True)
class MeritGrade:
    accuracy_percent: float
    grade: Merit


@dataclass(frozen=True)
class Scenario:
    name: str
    config: DetectionConfig


DEFAULT_SCENARIOS = (
    Scenario("euclidean", DetectionConfig(k=15)),
    Scenario("standardized", DetectionConfig(k=15, standardize_first=True)),
    Scenario("mahalanobis", DetectionConfig(k=15, metric=MetricKind.MAHALANOBIS)),
)


def common_outliers(a: OutlierReport, b: OutlierReport) -> int:
    if a.config.k != b.config.k:
        raise InvalidParameterError(f"reports have different k ({a.config.k} vs {b.config.k})")
    return len(set(a.outlier_ids) & set(b.outlier_ids))


def recall(report: OutlierReport, truth) -> float:
    truth = set(truth)
    if not truth:
        raise InvalidParameterError("recall needs a non-empty truth set")
    return len(set(report.outlier_ids) & truth) / len(truth)


def grade(accuracy_percent: float) -> MeritGrade:
    """Merit band: above 75 is Good, exactly 75 Average, below 75 Bad."""
    a = float(accuracy_percent)
    if not (0.0 <= a <= 100.0):
        raise InvalidParameterError(f"accuracy must lie in [0, 100], got {a}")
    if a > MERIT_THRESHOLD:
        g = Merit.GOOD
    elif a == MERIT_THRESHOLD:
        g = Merit.AVERAGE
    else:
        g = Merit.BAD
    return MeritGrade(a, g)


@dataclass
class RunMatrix:
    """One report per (scenario, seed), in scenario-major order."""

    scenarios: list[Scenario]
    seeds: list[int]
    reports: dict[tuple[int, int], OutlierReport]
    truths: list[frozenset[int]] = field(default_factory=list)

    def report(self, scenario: int, seed_index: int) -> OutlierReport:
        return self.reports[(scenario, seed_index)]

    def __len__(self) -> int:
        return len(self.reports)


@dataclass
class ExperimentSummary:
    """Scenario x seed grids.

    ``cross_common[s][j]`` counts how many of scenario ``s``'s outliers on seed
    ``j`` were also reported by at least one other scenario on that seed;
    ``pairwise`` gives the intersection size for every scenario pair. With
    planted outliers, ``truth_common`` and ``recall`` compare against the
    truth, and each scenario gets a merit grade from its mean recall.
    """

    scenarios: list[str]
    seeds: list[int]
    k: int
    planted: bool
    cross_common: list[list[int]]
    pairwise: dict[str, list[int]]
    truth_common: list[list[int]] | None = None
    recall: list[list[float]] | None = None
    mean_recall: list[float] | None = None
    grades: list[MeritGrade] | None = None

    @property
    def grid(self) -> list[list[float]]:
        """The headline grid: recall when planted, cross-scenario counts otherwise."""
        return self.recall if self.planted else self.cross_common

    def to_dict(self) -> dict:
        d = {
            "mode": "planted" if self.planted else "unlabeled",
            "scenarios": self.scenarios,
            "seeds": self.seeds,
            "k": self.k,
            "common_with_other_scenarios": self.cross_common,
            "pairwise_common": self.pairwise,
        }
        if self.planted:
            d["common_with_truth"] = self.truth_common
            d["recall"] = self.recall
            d["mean_recall"] = self.mean_recall
            d["grades"] = [
                {"accuracy_percent": g.accuracy_percent, "grade": g.grade.value}
                for g in self.grades
            ]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def _rows(self):
        header = ["scenario"] + [f"seed {s}" for s in self.seeds]
        if self.planted:
            header += ["mean recall", "accuracy %", "merit"]
        rows = []
        for i, name in enumerate(self.scenarios):
            if self.planted:
                cells = [str(c) for c in self.truth_common[i]]
                g = self.grades[i]
                cells += [f"{self.mean_recall[i]:.4f}", f"{g.accuracy_percent:.2f}", g.grade.value]
            else:
                cells = [str(c) for c in self.cross_common[i]]
            rows.append([name] + cells)
        return header, rows

    def to_csv(self) -> str:
        header, rows = self._rows()
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()

    def to_text(self) -> str:
        header, rows = self._rows()
        widths = [max(len(r[c]) for r in [header] + rows) for c in range(len(header))]
        fmt = lambda r: "  ".join(  # noqa: E731
            cell.ljust(w) if c == 0 else cell.rjust(w)
            for c, (cell, w) in enumerate(zip(r, widths))
        )
        title = (
            f"common outliers with planted truth (k={self.k})"
            if self.planted
            else f"outliers shared with another scenario (k={self.k})"
        )
        lines = [title, fmt(header), "  ".join("-" * w for w in widths)]
        lines += [fmt(r) for r in rows]
        return "\n".join(lines) + "\n"


def _as_scenarios(configs) -> list[Scenario]:
    out = []
    for c in configs:
        if isinstance(c, Scenario):
            out.append(c)
        elif isinstance(c, DetectionConfig):
            out.append(Scenario(_default_name(c), c))
        else:
            name, cfg = c
            out.append(Scenario(str(name), cfg))
    return out


def _default_name(cfg: DetectionConfig) -> str:
    parts = [cfg.metric.value]
    if cfg.standardize_first:
        parts.insert(0, "standardized")
    if cfg.scoring.value != "sum":
        parts.append(cfg.scoring.value)
    if cfg.removal.value != "point":
        parts.append(cfg.removal.value)
    return "-".join(parts)


def run_experiment(spec: GenSpec, configs=DEFAULT_SCENARIOS, seeds=range(10), max_workers=None):
    """Run every scenario on a fresh dataset for every seed.

    The GenSpec seed is replaced by each entry of ``seeds``. Cells are
    independent; with ``max_workers`` > 1 they run on a thread pool, and the
    results are still keyed by (scenario index, seed index).

    Returns:
        (RunMatrix, ExperimentSummary)
    """
    scenarios = _as_scenarios(configs)
    seeds = [int(s) for s in seeds]
    if not seeds:
        raise InvalidParameterError("run_experiment needs at least one seed")
    if not scenarios:
        raise InvalidParameterError("run_experiment needs at least one scenario")
    ks = {s.config.k for s in scenarios}
    if len(ks) != 1:
        raise InvalidParameterError(f"all scenarios must share k, got {sorted(ks)}")

    datasets = [generate(spec.with_seed(s)) for s in seeds]
    cells = list(itertools.product(range(len(scenarios)), range(len(seeds))))

    def run(cell):
        si, j = cell
        return cell, detect(datasets[j].points, scenarios[si].config)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as pool:
            results = dict(pool.map(run, cells))
    else:
        results = dict(map(run, cells))
    reports = {cell: results[cell] for cell in cells}

    matrix = RunMatrix(scenarios, seeds, reports, [d.truth_outlier_ids for d in datasets])
    return matrix, summarize(matrix)


def summarize(matrix: RunMatrix) -> ExperimentSummary:
    S, J = len(matrix.scenarios), len(matrix.seeds)
    k = matrix.scenarios[0].config.k
    idsets = [[set(matrix.report(s, j).outlier_ids) for j in range(J)] for s in range(S)]

    cross = []
    for s in range(S):
        row = []
        for j in range(J):
            others = set().union(*(idsets[t][j] for t in range(S) if t != s))
            row.append(len(idsets[s][j] & others))
        cross.append(row)
    pairwise = {
        f"{matrix.scenarios[a].name}|{matrix.scenarios[b].name}": [
            common_outliers(matrix.report(a, j), matrix.report(b, j)) for j in range(J)
        ]
        for a, b in itertools.combinations(range(S), 2)
    }

    planted = bool(matrix.truths) and all(matrix.truths)
    summary = ExperimentSummary(
        [sc.name for sc in matrix.scenarios], list(matrix.seeds), k, planted, cross, pairwise
    )
    if planted:
        summary.truth_common = [
            [len(idsets[s][j] & matrix.truths[j]) for j in range(J)] for s in range(S)
        ]
        summary.recall = [
            [recall(matrix.report(s, j), matrix.truths[j]) for j in range(J)] for s in range(S)
        ]
        summary.mean_recall = [float(np.mean(r)) for r in summary.recall]
        summary.grades = [grade(min(100.0, 100.0 * m)) for m in summary.mean_recall]
    return summary
