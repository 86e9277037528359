"""
Repeating the comparison over ten seeds
========================================
"""

from onionpeel import DEFAULT_SCENARIOS, DEFAULT_SPEC, grade, run_experiment

matrix, summary = run_experiment(DEFAULT_SPEC, DEFAULT_SCENARIOS, range(10))
print(summary.to_text())

print(summary.mean_recall)
print([g.grade.name for g in summary.grades])

# how many of the 15 detections each pair of scenarios agrees on, per seed
for pair, counts in summary.to_dict()["pairwise_common"].items():
    print(pair, counts)

grade(80), grade(75), grade(60)

print(summary.to_csv())
