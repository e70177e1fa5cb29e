"""Gaussian-mixture benchmark with cluster-constant labels.

Recipe, for N samples in R^r and ``clusters`` = K components:

1. assign each sample to a uniformly random cluster, redrawing the whole
   assignment until every cluster is non-empty;
2. mean_j = (Z_j * K) e_j with Z_j uniform on {1, ..., K};
3. std_j = U_j * sigma_max with U_j uniform on [0, 1];
4. x_i ~ N(mean_j, std_j^2 I_r) for i in cluster j;
5. theta_g ~ N(0, I_r) and y_i = mean_j . theta_g for every i in cluster j.
"""

from dataclasses import asdict, dataclass

import numpy as np

from . import _rng
from .errors import InvalidArgument

PARTITION_LAW = "multinomial-uniform-rejection"
MAX_PARTITION_DRAWS = 1000


@dataclass(frozen=True)
class GmmSpec:
    N: int = 2000
    r: int = 2400
    clusters: int = 8
    sigma_max: float = 0.04
    seed: int = 0

    def validate(self):
        if self.N < 1 or self.r < 1 or self.clusters < 1:
            raise InvalidArgument("N, r and the cluster count must be positive")
        if self.clusters > min(self.N, self.r):
            raise InvalidArgument(
                f"cluster count {self.clusters} exceeds min(N, r) = {min(self.N, self.r)}"
            )
        if not self.sigma_max >= 0:
            raise InvalidArgument("sigma_max must be non-negative")


@dataclass
class GeneratedDataset:
    features: np.ndarray
    labels: np.ndarray
    cluster_assignment: np.ndarray
    means: np.ndarray
    stds: np.ndarray
    theta_g: np.ndarray
    spec: GmmSpec

    def metadata(self):
        return {
            "spec": asdict(self.spec),
            "partition_law": PARTITION_LAW,
            "cluster_sizes": np.bincount(self.cluster_assignment, minlength=self.spec.clusters).tolist(),
            "mean_scales": self.means.max(axis=1).tolist(),
            "stds": self.stds.tolist(),
        }


def _partition(N, K, rng):
    for _ in range(MAX_PARTITION_DRAWS):
        assignment = rng.integers(0, K, size=N)
        if np.bincount(assignment, minlength=K).min() > 0:
            return assignment
    raise InvalidArgument(f"could not draw a partition of {N} samples into {K} non-empty clusters")


def gmm_generate(spec: GmmSpec) -> GeneratedDataset:
    spec.validate()
    N, r, K = spec.N, spec.r, spec.clusters
    rng = _rng.generator(spec.seed)

    assignment = _partition(N, K, rng)
    Z = rng.integers(1, K + 1, size=K)
    means = np.zeros((K, r))
    means[np.arange(K), np.arange(K)] = Z * K
    stds = rng.uniform(0.0, 1.0, size=K) * spec.sigma_max

    features = means[assignment] + stds[assignment, None] * rng.standard_normal((N, r))
    theta_g = rng.standard_normal(r)
    cluster_labels = means @ theta_g
    labels = cluster_labels[assignment]
    return GeneratedDataset(features, labels, assignment, means, stds, theta_g, spec)
