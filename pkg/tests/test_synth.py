import numpy as np
import pytest

from skmm.errors import InvalidArgument
from skmm.moments import intrinsic_dimension, numerical_rank, second_moment
from skmm.synth import GmmSpec, gmm_generate


def test_benchmark_config_shapes():
    ds = gmm_generate(GmmSpec())
    assert ds.features.shape == (2000, 2400)
    assert ds.labels.shape == (2000,)
    assert ds.means.shape == (8, 2400) and ds.stds.shape == (8,) and ds.theta_g.shape == (2400,)


def test_noiseless_rows_are_cluster_means():
    ds = gmm_generate(GmmSpec(N=500, r=30, clusters=8, sigma_max=0.0, seed=2))
    assert len(np.unique(ds.features, axis=0)) <= 8
    assert numerical_rank(ds.features) <= 8
    assert intrinsic_dimension(second_moment(ds.features), 500) <= 8


def test_cluster_sizes_over_seeds():
    for seed in range(100):
        ds = gmm_generate(GmmSpec(N=50, r=10, clusters=8, sigma_max=0.04, seed=seed))
        sizes = np.bincount(ds.cluster_assignment, minlength=8)
        assert sizes.sum() == 50 and sizes.min() >= 1


def test_labels_constant_within_clusters():
    ds = gmm_generate(GmmSpec(N=300, r=40, clusters=5, sigma_max=0.1, seed=3))
    for j in range(5):
        labels = ds.labels[ds.cluster_assignment == j]
        assert (labels == labels[0]).all()
        assert labels[0] == ds.means[j] @ ds.theta_g


def test_means_on_canonical_axes():
    K = 8
    ds = gmm_generate(GmmSpec(N=100, r=20, clusters=K, seed=4))
    for j in range(K):
        assert np.flatnonzero(ds.means[j]).tolist() == [j]
        z = ds.means[j, j] / K
        assert z == int(z) and 1 <= z <= K
    assert ((ds.stds >= 0) & (ds.stds <= 0.04)).all()


def test_noise_scale_per_cluster():
    ds = gmm_generate(GmmSpec(N=4000, r=200, clusters=4, sigma_max=0.5, seed=5))
    for j in range(4):
        resid = ds.features[ds.cluster_assignment == j] - ds.means[j]
        assert resid.std() == pytest.approx(ds.stds[j], rel=0.02)


def test_deterministic():
    a = gmm_generate(GmmSpec(N=200, r=50, seed=9))
    b = gmm_generate(GmmSpec(N=200, r=50, seed=9))
    assert a.features.tobytes() == b.features.tobytes()
    assert a.labels.tobytes() == b.labels.tobytes()
    c = gmm_generate(GmmSpec(N=200, r=50, seed=10))
    assert not np.array_equal(a.features, c.features)


@pytest.mark.parametrize(
    "spec",
    [GmmSpec(N=5, r=50, clusters=8), GmmSpec(N=50, r=5, clusters=8), GmmSpec(N=50, r=50, sigma_max=-1.0), GmmSpec(N=0)],
)
def test_invalid_specs(spec):
    with pytest.raises(InvalidArgument):
        gmm_generate(spec)


def test_partition_retry_cap():
    # 20 samples into 20 non-empty clusters essentially never happens by chance
    with pytest.raises(InvalidArgument):
        gmm_generate(GmmSpec(N=20, r=20, clusters=20, seed=0))


def test_metadata():
    ds = gmm_generate(GmmSpec(N=100, r=20, seed=1))
    meta = ds.metadata()
    assert meta["partition_law"] == "multinomial-uniform-rejection"
    assert sum(meta["cluster_sizes"]) == 100
    assert meta["spec"]["seed"] == 1
