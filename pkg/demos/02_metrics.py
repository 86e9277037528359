"""
Three ways to measure distance on stretched data
=================================================
"""

import numpy as np
from onionpeel import (DEFAULT_SPEC, Variances2, estimate_covariance, euclidean,
                       generate, mahalanobis, standardize, standardized_euclidean)

data = generate(DEFAULT_SPEC)
pts = data.points
print(pts.shape, pts.std(axis=0, ddof=1))    # y spread is ten times x spread

cov = estimate_covariance(pts)
print(cov.matrix())
print(cov.inverse_matrix())

a, b = pts[0], pts[1]
var = Variances2(*np.diag(cov.matrix()))
euclidean(a, b)
standardized_euclidean(a, b, var)
mahalanobis(a, b, cov)

# a step of 1 along x is "far", the same step along y is not
origin = cov.mean
for step in [(1, 0), (0, 1), (0, 10)]:
    q = origin + np.array(step)
    print(step, round(euclidean(origin, q), 2), round(mahalanobis(origin, q, cov), 2))

z = standardize(pts)                         # unit variance per axis, no recentering
print(z.std(axis=0, ddof=1))
