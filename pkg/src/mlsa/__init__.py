"""Multi-scale local shape features for point clouds.

Local PCA spectra and persistent local homology at several radii, the
preprocessing that turns them into feature matrices, and a linear SVM to
compare feature sets.
"""

from .data import generate_crossing, generate_sides, load_labeled_xyz, split
from .diagrams import bottleneck, top_k_persistences, wasserstein
from .features import BinningSpec, FeatureMatrix, assemble, discretize, standardize
from .geometry import Ball, PointCloud, dist_to_cloud, hausdorff, range_query
from .learn import LinearModel, Metrics, evaluate, train_svm
from .mlpca import LocalPCAResult, local_pca, mlpca_features
from .persistence import (FilteredComplex, PersistenceDiagram, persistence_deg0,
                          persistence_deg1, restrict_to_cap)
from .plh import SphereComplex, build_sphere_complex, plh_diagram, plh_features

__version__ = "0.1.0"
