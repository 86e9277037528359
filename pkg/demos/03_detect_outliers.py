"""
Finding the top-k outliers by peeling hulls
============================================
"""

from onionpeel import DEFAULT_SPEC, DetectionConfig, detect, generate, recall

data = generate(DEFAULT_SPEC)                # 1500 points, 15 planted outliers
print(sorted(data.truth_outlier_ids))

for metric in ["euclidean", "std-euclidean", "mahalanobis"]:
    report = detect(data.points, DetectionConfig(k=15, metric=metric))
    print(metric, "recall", recall(report, data.truth_outlier_ids))

report = detect(data.points, DetectionConfig(k=15, metric="mahalanobis"))
print(report.outlier_ids[:5])                # ranked, most extreme first
print([round(v, 1) for v in report.volumes[:5]])   # hull area after each removal

# distance to the centre instead of the sum of distances to everyone
fast = detect(data.points, DetectionConfig(k=15, metric="mahalanobis", scoring="center"))
print(len(set(fast.outlier_ids) & set(report.outlier_ids)), "ids shared")

# strip whole hulls instead of single points
layered = detect(data.points, DetectionConfig(k=15, removal="hull"))
print(layered.outlier_ids[:5])

print(report.to_json()[:200])
