"""
Convex hull and convex layers of a small point cloud
=====================================================
"""

import numpy as np
from onionpeel import convex_hull, onion_peel, orientation

# orientation of three points is the sign of a cross product
print(orientation((0, 0), (1, 0), (0, 1)))   # counter-clockwise
print(orientation((0, 0), (1, 0), (2, 0)))   # collinear

rng = np.random.default_rng(0)
pts = rng.normal(size=(200, 2))

hull = convex_hull(pts)
print(len(hull), "hull vertices, area", round(hull.area, 3))
print(pts[list(hull.vertex_ids)][:3])        # ring runs counter-clockwise

# points on an edge are not vertices
square = [(0, 0), (1, 0), (2, 0), (2, 2), (0, 2)]
print(convex_hull(square).vertex_ids)        # (1, 0) is dropped

# peel layer after layer until nothing convex is left
layers = onion_peel(pts)
print(len(layers.layers), "layers")
print([round(a, 2) for a in layers.areas[:5]])   # areas shrink inward
depth = layers.depths(len(pts))
print("deepest point:", pts[depth.argmax()])
