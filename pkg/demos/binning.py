"""
Standardizing and binning features
==================================

Columns are standardized with training statistics, then optionally mapped
to ten bins of equal standard-normal mass.  Each value is replaced by its
bin's representative, the normal quantile at the bin's probability midpoint.
"""

import numpy as np

from mlsa import BinningSpec, FeatureMatrix, discretize, standardize

rng = np.random.default_rng(0)
values = rng.gamma(2.0, size=(5000, 2)) * [1.0, 50.0]
m = FeatureMatrix("generic", ("a", "b"), values, np.where(rng.random(5000) < 0.5, 1, -1),
                  {"a": slice(0, 1), "b": slice(1, 2)})

z, scaler = standardize(m)
print("means after standardizing:", np.round(z.values.mean(axis=0), 6))

spec = BinningSpec()
print("bin boundaries:", np.round(spec.boundaries, 4))
print("representatives:", np.round(spec.representatives, 4))

binned = discretize(z, spec)
counts = np.bincount(spec.bin_index(binned.values[:, 0]), minlength=11)[1:]
print("occupancy of column a (skewed, so not uniform):", counts)

x = rng.standard_normal(10_000)
print("occupancy on normal samples:", np.bincount(spec.bin_index(x), minlength=11)[1:])
