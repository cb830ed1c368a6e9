import numpy as np
import pytest

from robustprod.core.exceptions import DimensionMismatchError, EmptyInputError
from robustprod.enums.enums import OutlierLabel
from robustprod.schemas.cloud import PointCloud
from robustprod.services.classify import build_boundaries, classify_outliers, dominates_some


def cloud_of(points, prefix="n", dims=None):
    points = np.asarray(points, dtype=float)
    dims = dims or [f"d{j}" for j in range(points.shape[1])]
    return PointCloud(points=points, ids=[f"{prefix}{i}" for i in range(len(points))], dims=dims)


def weakly_dominates(a, b):
    return all(x >= y for x, y in zip(a, b)) and any(x > y for x, y in zip(a, b))


def oracle_labels(non_outliers, outliers):
    upper = [s for s in non_outliers if not any(weakly_dominates(t, s) for t in non_outliers)]
    lower = [s for s in non_outliers if not any(weakly_dominates(s, t) for t in non_outliers)]
    labels = []
    for o in outliers:
        if any(weakly_dominates(o, u) for u in upper):
            labels.append(OutlierLabel.large)
        elif any(weakly_dominates(low, o) for low in lower):
            labels.append(OutlierLabel.small)
        else:
            labels.append(OutlierLabel.neither)
    return upper, lower, labels


def test_weak_dominance():
    points = np.array([[1.0, 1.0], [2.0, 1.0], [0.0, 3.0]])
    targets = np.array([[1.0, 1.0]])

    assert dominates_some(points, targets).tolist() == [False, True, False]


def test_dominance_in_small_chunks_matches(rng):
    points = rng.normal(size=(50, 3))
    targets = rng.normal(size=(20, 3))

    np.testing.assert_array_equal(
        dominates_some(points, targets, chunk_size=7), dominates_some(points, targets)
    )


def test_chain_frontiers():
    boundary = build_boundaries(cloud_of([[1, 1], [2, 2]]))

    assert boundary.upper_ids == ["n1"]
    assert boundary.lower_ids == ["n0"]


def test_antichain_on_both_frontiers():
    boundary = build_boundaries(cloud_of([[1, 2], [2, 1]]))

    assert boundary.upper_ids == ["n0", "n1"]
    assert boundary.lower_ids == ["n0", "n1"]


def test_frontiers_match_brute_force(rng):
    points = rng.normal(size=(100, 5))

    boundary = build_boundaries(cloud_of(points))
    upper, lower, _ = oracle_labels(points.tolist(), [])

    np.testing.assert_array_equal(boundary.upper, np.array(upper))
    np.testing.assert_array_equal(boundary.lower, np.array(lower))


def test_global_dominance_labels():
    inside = cloud_of([[0, 0], [1, 1], [0.5, 2], [2, 0.5]])
    outside = cloud_of([[5, 5], [-3, -3], [-3, 5]], prefix="o")

    result = classify_outliers(outside, build_boundaries(inside))

    assert result.labels == {
        "o0": OutlierLabel.large,
        "o1": OutlierLabel.small,
        "o2": OutlierLabel.neither,
    }
    assert result.counts() == {"small": 1, "large": 1, "neither": 1}


def test_outlier_on_frontier_is_neither():
    inside = cloud_of([[0, 0], [1, 1]])
    outside = cloud_of([[1, 1], [0, 0]], prefix="o")

    result = classify_outliers(outside, build_boundaries(inside))

    assert set(result.labels.values()) == {OutlierLabel.neither}


def test_labels_match_oracle(rng):
    for _ in range(30):
        n = int(rng.integers(1, 120))
        p = int(rng.integers(1, 6))
        inside = rng.normal(size=(n, p))
        outside = rng.normal(scale=2.0, size=(int(rng.integers(1, 40)), p))

        result = classify_outliers(cloud_of(outside, "o"), build_boundaries(cloud_of(inside)))
        _, _, expected = oracle_labels(inside.tolist(), outside.tolist())

        assert [result.labels[f"o{i}"] for i in range(len(outside))] == expected
        assert result.total == len(outside)


def test_dominated_additions_do_not_change_labels(rng):
    corners = np.array([[10.0, 10.0, 10.0], [-10.0, -10.0, -10.0]])
    inside = np.vstack([rng.normal(size=(60, 3)), corners])
    outside = rng.normal(scale=8.0, size=(40, 3))
    interior = rng.uniform(-3, 3, size=(10, 3))

    base = classify_outliers(cloud_of(outside, "o"), build_boundaries(cloud_of(inside)))
    grown = classify_outliers(
        cloud_of(outside, "o"), build_boundaries(cloud_of(np.vstack([inside, interior])))
    )

    assert base.labels == grown.labels


def test_common_shift_preserves_labels(rng):
    inside = rng.normal(size=(80, 4))
    outside = rng.normal(scale=2.0, size=(30, 4))
    shift = np.array([0.5, -1.0, 2.0, 0.25])

    base = classify_outliers(cloud_of(outside, "o"), build_boundaries(cloud_of(inside)))
    moved = classify_outliers(
        cloud_of(outside + shift, "o"), build_boundaries(cloud_of(inside + shift))
    )

    assert base.labels == moved.labels


def test_empty_non_outliers():
    with pytest.raises(EmptyInputError):
        build_boundaries(cloud_of(np.zeros((0, 2))))


def test_dimension_mismatch():
    boundary = build_boundaries(cloud_of([[0, 0]], dims=["output", "labour"]))

    with pytest.raises(DimensionMismatchError):
        classify_outliers(cloud_of([[1, 1]], "o", dims=["output", "capital"]), boundary)
