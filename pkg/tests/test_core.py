import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import HOTELS, P, brute_dynamic, brute_global, brute_quadrant, brute_skyline
from skydiag.core import (Dataset, DimensionError, Point, build_dsg, direct_dominance, dominance_matrix,
                          dominates, dynamic_skyline, global_skyline, map_to_query, orthants,
                          quadrant_skyline, skyline, skyline_layers)

points_2d = st.lists(st.tuples(st.integers(0, 12), st.integers(0, 12)), min_size=0, max_size=25)
points_3d = st.lists(st.tuples(*[st.integers(0, 6)] * 3), min_size=1, max_size=20)


def test_dominates_basic():
    assert dominates((1, 2), (2, 2))
    assert not dominates((2, 2), (2, 2))
    assert not dominates((1, 3), (2, 2))
    assert dominates((3, 2), (2, 2), direction=(-1, 1))
    with pytest.raises(DimensionError):
        dominates((1, 2), (1, 2, 3))


def test_duplicates_both_in_skyline():
    assert skyline([Point(0, (1, 1)), Point(1, (1, 1)), Point(2, (2, 2))]) == (0, 1)


def test_empty_inputs():
    empty = Dataset.from_points([])
    assert skyline(empty) == ()
    assert quadrant_skyline(empty, (0, 0)) == ()
    assert global_skyline(empty, (0, 0)) == ()
    assert dynamic_skyline(empty, (0, 0)) == ()
    assert skyline_layers(empty) == []


def test_dataset_validation():
    with pytest.raises(DimensionError):
        Dataset(np.array([1, 2, 3]))
    with pytest.raises(ValueError):
        Dataset(np.array([[1.5, 2.0]]))
    with pytest.raises(ValueError):
        Dataset(np.array([[5, 2]]), domain=(4, 4))
    ds = Dataset.from_points([(1, 2), (3, 4)])
    assert ds.points[1] == Point(1, (3, 4))
    assert ds == Dataset(np.array([[1, 2], [3, 4]]))
    with pytest.raises(ValueError):
        ds.coords[0, 0] = 9


def test_running_example_queries(hotels):
    q = (10, 80)
    assert quadrant_skyline(hotels, q) == P(3, 8, 10)
    assert global_skyline(hotels, q) == P(3, 6, 8, 10, 11)
    assert dynamic_skyline(hotels, q) == P(6, 11)
    per_orthant = {s: quadrant_skyline(hotels, q, s) for s in orthants(2)}
    assert per_orthant == {(1, 1): P(3, 8, 10), (1, -1): P(11), (-1, 1): P(6), (-1, -1): ()}


def test_running_example_mapping(hotels):
    mapped = {p.id: p.coords for p in map_to_query(hotels, (10, 80))}
    # p6 = (8, 110) folds to (12, 110); p11 = (14, 70) folds to (14, 90)
    assert mapped[5] == (12, 110)
    assert mapped[10] == (14, 90)
    assert skyline([Point(i, c) for i, c in mapped.items()]) == P(6, 11)


def test_running_example_layers_and_graph(hotels):
    layers = skyline_layers(hotels)
    assert layers[0] == P(1, 6, 11)
    assert sorted(i for layer in layers for i in layer) == list(range(11))
    dsg = build_dsg(hotels)
    assert set(P(3, 5)) <= set(dsg.edges[5])
    assert P(4)[0] not in dsg.edges[5]  # reached only through p5
    assert dsg.edges[0] == ()


def test_orthants_first_is_positive():
    assert orthants(3)[0] == (1, 1, 1)
    assert len(set(orthants(3))) == 8


@given(points_2d)
def test_skyline_matches_brute_force(pts):
    coords = np.array(pts, dtype=np.int64).reshape(len(pts), 2)
    assert skyline(Dataset(coords)) == brute_skyline(coords, np.arange(len(pts)))


@given(points_3d)
def test_skyline_nd_matches_brute_force(pts):
    coords = np.array(pts)
    assert skyline(Dataset(coords)) == brute_skyline(coords, np.arange(len(pts)))


@given(points_2d, st.permutations(range(25)))
def test_skyline_permutation_invariant(pts, perm):
    perm = [i for i in perm if i < len(pts)]
    shuffled = [Point(i, pts[i]) for i in perm]
    assert skyline(shuffled) == skyline(Dataset.from_points(pts))


@given(points_2d, st.tuples(st.integers(-1, 13), st.integers(-1, 13)))
def test_query_semantics_match_brute_force(pts, q):
    coords = np.array(pts, dtype=np.int64).reshape(len(pts), 2)
    ds = Dataset(coords)
    assert quadrant_skyline(ds, q) == brute_quadrant(coords, q)
    assert global_skyline(ds, q) == brute_global(coords, q)
    assert dynamic_skyline(ds, q) == brute_dynamic(coords, q)


@given(points_2d)
def test_layers_partition_dataset(pts):
    layers = skyline_layers(Dataset.from_points(pts))
    flat = [i for layer in layers for i in layer]
    assert sorted(flat) == list(range(len(pts)))
    # nothing in a layer is dominated by anything in the same or a later layer
    for k, layer in enumerate(layers):
        later = [i for l2 in layers[k:] for i in l2]
        for i in layer:
            assert not any(dominates(pts[j], pts[i]) for j in later)


@given(points_3d)
def test_direct_dominance_is_transitive_reduction(pts):
    coords = np.array(pts)
    dom = dominance_matrix(coords)
    red = direct_dominance(coords)
    assert not (red & ~dom).any()
    closure = red.copy()
    for _ in range(len(pts)):
        closure = closure | ((closure.astype(int) @ red.astype(int)) > 0)
    assert np.array_equal(closure, dom)
