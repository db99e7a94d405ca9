"""
Persistent local homology around a point
========================================

Sample two crossing segments, put a small circle around a point on one of
them, and look at the degree-0 persistence diagram of the distance to the
cloud restricted to that circle.  Each dot with a near-zero birth is a
place where the circle crosses the data.
"""

import numpy as np

from mlsa import PointCloud, generate_crossing, plh_diagram, plh_features

# a plus-shaped cloud: two chords of the disk of radius 0.4
cloud = generate_crossing("plus", 2000, seed=0)
print(len(cloud), "points in", cloud.dim, "dimensions")

###############################################################################
# At the crossing, a circle of radius 0.3 meets four branches.

d0 = plh_diagram(cloud, [0.0, 0.0], 0.3, k=0)
print("dots at the crossing:\n", np.round(d0.dots, 4))

###############################################################################
# Halfway along a branch the same circle only meets the line twice.

d0 = plh_diagram(cloud, [0.2, 0.0], 0.15, k=0)
print("dots on a branch:\n", np.round(d0.dots, 4))

###############################################################################
# Features are the top persistences per radius, capped at the radius so
# that essential classes stay finite.

feats = plh_features(cloud, [0.0, 0.0], [0.1, 0.2, 0.3], [(0, 6)])
print("18 PLH features at the crossing:\n", np.round(feats.reshape(3, 6), 3))

###############################################################################
# Moving the data a little moves the diagram a little.

noisy = PointCloud(cloud.points + np.random.default_rng(1).normal(scale=0.005, size=(2000, 2)))
print("features after jitter:\n",
      np.round(plh_features(noisy, [0.0, 0.0], [0.1, 0.2, 0.3], [(0, 6)]).reshape(3, 6), 3))
