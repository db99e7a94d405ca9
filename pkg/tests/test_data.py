import numpy as np
import pytest
from scipy.stats import binom, chisquare

from mlsa.data import (CROSSING_SHAPES, LabeledCloud, LabeledCloudSet, crossing_segments,
                       generate_crossing, generate_sides, load_labeled_xyz, save_labeled_xyz,
                       split)
from mlsa.geometry import PointCloud
from mlsa.plh import plh_diagram


def seg_residual(p, segs):
    out = np.full(len(p), np.inf)
    for a, b in segs:
        ab = b - a
        t = np.clip(((p - a) @ ab) / (ab @ ab), 0, 1)
        out = np.minimum(out, np.linalg.norm(p - (a + t[:, None] * ab), axis=1))
    return out


def arc_coordinate(p, segs):
    """Position along the concatenated segments (for points known to lie on them)."""
    starts, total = [], 0.0
    for a, b in segs:
        starts.append(total)
        total += np.linalg.norm(b - a)
    coord = np.empty(len(p))
    for i, x in enumerate(p):
        j = int(np.argmin([seg_residual(x[None], [s])[0] for s in segs]))
        a, b = segs[j]
        coord[i] = starts[j] + np.linalg.norm(x - a)
    return coord, total


@pytest.mark.parametrize("shape", sorted(CROSSING_SHAPES))
def test_crossing_points_on_segments(shape):
    c = generate_crossing(shape, 500, seed=1)
    assert len(c) == 500
    assert np.all(seg_residual(c.points, crossing_segments(shape)) <= 1e-12)
    assert np.all(np.linalg.norm(c.points, axis=1) <= 0.4 + 1e-15)


@pytest.mark.parametrize("shape", sorted(CROSSING_SHAPES))
def test_crossing_deterministic(shape):
    a, b = generate_crossing(shape, 50, 7), generate_crossing(shape, 50, 7)
    assert np.array_equal(a.points, b.points)
    assert not np.array_equal(a.points, generate_crossing(shape, 50, 8).points)


def test_unknown_shape():
    with pytest.raises(ValueError, match="unknown crossing shape"):
        generate_crossing("star", 10, 0)


def test_plus_axis_balance():
    # binomial(200, 1/2) band of 3 sigma around 100
    sigma = np.sqrt(200 * 0.25)
    for seed in range(20):
        p = generate_crossing("plus", 200, seed).points
        on_x = np.sum(np.abs(p[:, 1]) < 1e-15)
        assert abs(on_x - 100) <= 3 * sigma
    assert binom.cdf(100 + 3 * sigma, 200, 0.5) - binom.cdf(100 - 3 * sigma - 1, 200, 0.5) > 0.99


@pytest.mark.parametrize("shape", sorted(CROSSING_SHAPES))
def test_arc_length_uniformity(shape):
    segs = crossing_segments(shape)
    p = generate_crossing(shape, 10_000, seed=3).points
    coord, total = arc_coordinate(p, segs)
    counts = np.histogram(coord, bins=10, range=(0, total))[0]
    assert chisquare(counts).pvalue > 0.01


def _near_zero_births(cloud, R=0.3, tol=0.01):
    d = plh_diagram(cloud, [0.0, 0.0], R, 0)
    return int(np.sum(d.dots[:, 0] < tol))


def test_local_homology_rank_at_crossing():
    assert _near_zero_births(generate_crossing("triple", 4000, 0)) == 6
    assert _near_zero_births(generate_crossing("y", 4000, 0)) == 3
    assert _near_zero_births(generate_crossing("plus", 4000, 0)) == 4
    assert _near_zero_births(generate_crossing("x", 4000, 0)) == 4


def test_sides_geometry():
    cloud, mask = generate_sides("both", 200, 200, seed=0)
    amb = cloud.points[~mask]
    assert np.sum(amb[:, 0] < 0) == 100 and np.sum(amb[:, 0] > 0) == 100
    assert mask.sum() == 200 and np.all(cloud.points[mask, 0] == 0)
    cloud, mask = generate_sides("one", 200, 200, seed=0)
    assert np.sum(cloud.points[:, 0] < 0) == 0
    seg = cloud.points[mask]
    assert np.all((seg[:, 1] >= 0) & (seg[:, 1] <= 1))
    with pytest.raises(ValueError):
        generate_sides("left", 10, 10, 0)


def test_sides_degree1_birth():
    earlier = 0
    for seed in range(10):
        births = {}
        for which in ("one", "both"):
            cloud, mask = generate_sides(which, 400, 4000, seed)
            z = np.array([0.0, 0.5])
            births[which] = plh_diagram(cloud, z, 0.2, 1).dots[0, 0]
        earlier += births["both"] < births["one"]
    assert earlier >= 9


def _write(path, rows):
    path.write_text("# x y z label subset\n" + "\n".join(" ".join(map(str, r)) for r in rows) + "\n")


def test_load_labeled_xyz(tmp_path):
    rows = [(0.1, 0.2, 0.3, 0, 1), (0.2, 0.2, 0.3, 0, 1), (0.5, 0.2, 0.1, 1, 1),
            (0.1, 0.9, 0.3, 0, 2), (0.4, 0.4, 0.4, 1, 2), (0.6, 0.7, 0.8, 1, 2)]
    _write(tmp_path / "a.xyz", rows)
    sets = load_labeled_xyz(tmp_path / "a.xyz")
    assert 2 <= len(sets) <= 4
    assert sum(len(c.cloud) for c in sets.clouds) == 6
    assert sets.subset_ids == {1, 2}


def test_load_labeled_xyz_errors(tmp_path):
    (tmp_path / "bad.xyz").write_text("0.1 0.2 0.3 1 1\n0.1 0.2 not-a-number 1 1\n")
    with pytest.raises(ValueError, match=":2:"):
        load_labeled_xyz(tmp_path / "bad.xyz")
    _write(tmp_path / "lab.xyz", [(0.1, 0.2, 0.3, 7, 1)])
    with pytest.raises(ValueError, match="unknown label"):
        load_labeled_xyz(tmp_path / "lab.xyz")


def test_labeled_xyz_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    sets = LabeledCloudSet(tuple(LabeledCloud(PointCloud(rng.random((5, 3)) / 7), lab, sub)
                                 for sub in (1, 2, 3) for lab in (0, 1)))
    save_labeled_xyz(tmp_path / "r.xyz", sets)
    back = load_labeled_xyz(tmp_path / "r.xyz")
    for a, b in zip(sets.clouds, back.clouds):
        assert (a.label, a.subset) == (b.label, b.subset)
        assert np.array_equal(a.cloud.points, b.cloud.points)


def _lidar_like():
    rng = np.random.default_rng(1)
    return LabeledCloudSet(tuple(LabeledCloud(PointCloud(rng.random((4, 3))), lab, sub)
                                 for sub in range(1, 11) for lab in (0, 1)))


def test_split_protocol():
    train, test = split(_lidar_like(), [1, 2, 4, 6, 8], [3, 5, 7, 9, 10])
    for part, ids in ((train, {1, 2, 4, 6, 8}), (test, {3, 5, 7, 9, 10})):
        assert part.subset_ids == ids
        for lab in (0, 1):
            assert sum(c.label == lab for c in part.clouds) == 5


@pytest.mark.parametrize("tr,te", [([1, 2], [2, 3]), ([1, 2], []), ([1, 11], [3])])
def test_split_errors(tr, te):
    with pytest.raises(ValueError):
        split(_lidar_like(), tr, te)
