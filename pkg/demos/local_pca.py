"""
Local PCA at several scales
===========================

The eigenvalues of the neighbourhood covariance say how many directions the
data spreads in near a point.  On a line one eigenvalue dominates; at a
crossing both are comparable.
"""

import numpy as np

from mlsa import generate_crossing, local_pca, mlpca_features

cloud = generate_crossing("plus", 2000, seed=0)

for z in ([0.25, 0.0], [0.0, 0.0]):
    for R in (0.1, 0.2, 0.3):
        res = local_pca(cloud, z, R)
        print(f"z={z} R={R}: {res.n:4d} neighbours, eigenvalues {np.round(res.eigenvalues, 5)}")

###############################################################################
# The feature vector stacks, per radius, the eigenvalues then the
# eigenvector entries (sign-fixed so the largest entry of each is positive).

f = mlpca_features(cloud, [0.25, 0.0], [0.1, 0.2, 0.3])
print(len(f), "MLPCA features:", np.round(f, 4))
