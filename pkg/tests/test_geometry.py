import math
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from pointerbasis.geometry import (
    DEFAULT_GEOMETRY,
    GeometryError,
    QubitGeometry,
    SubstrateContext,
    distance_set,
    donor_positions,
)


def brute_distances(points, tol=1e-9):
    ds = sorted([0.0] + [math.dist(p, q) for p, q in combinations(points, 2)])
    out = []
    for d in ds:
        if not out or d - out[-1] > tol:
            out.append(d)
    return out


def test_qubit_one_sites():
    sites = donor_positions(QubitGeometry(r1=(0, 0, 0), d1=(10, 0, 0)))
    np.testing.assert_allclose(sites[0], [-5, 0, 0])
    np.testing.assert_allclose(sites[1], [5, 0, 0])


def test_default_geometry_matches_figure_parameters():
    g = DEFAULT_GEOMETRY
    assert np.linalg.norm(g.d1) == pytest.approx(10)
    assert np.linalg.norm(g.d2) == pytest.approx(10)
    assert np.linalg.norm(np.subtract(g.r2, g.r1)) == pytest.approx(20)
    cos = np.dot(g.d1, g.d2) / 100
    assert math.degrees(math.acos(cos)) == pytest.approx(45)


def test_default_distance_set_by_hand():
    h = 5 / math.sqrt(2)  # half of d2 along x and y
    pts = [(-5, 0, 0), (5, 0, 0), (20 - h, -h, 0), (20 + h, h, 0)]
    expected = brute_distances(pts)
    got = distance_set(DEFAULT_GEOMETRY)
    np.testing.assert_allclose(got, expected, atol=1e-12)
    # |d1| = |d2| merges the two intra-qubit distances: 0 plus five distinct values
    assert len(got) == 6
    np.testing.assert_allclose(
        got, [0, 10, 11.997248969, 18.869711635, 21.753696346, 28.753724894], atol=1e-8
    )


def test_collinear_distance_set():
    g = QubitGeometry(r2=(20, 0, 0), d1=(10, 0, 0), d2=(10, 0, 0))
    assert distance_set(g) == (0.0, 10.0, 20.0, 30.0)


def test_single_qubit_distance_set():
    assert distance_set(DEFAULT_GEOMETRY, qubits=(1,)) == (0.0, 10.0)


def test_mirrored_symmetric_geometry():
    g = QubitGeometry(r2=(20, 0, 0), d1=(0, 10, 0), d2=(0, 10, 0))
    m = QubitGeometry(r2=(20, 0, 0), d1=(0, 10, 0), d2=(0, -10, 0))
    assert distance_set(g) == pytest.approx(distance_set(m))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(r2=(0, 0, 0), d2=(10, 0, 0)),
        dict(d1=(0, 0, 0)),
        dict(r2=(8, 0, 0)),
        dict(r1=(0, 0)),
        dict(d2=(float("nan"), 0, 0)),
    ],
)
def test_invalid_geometry_rejected(kwargs):
    with pytest.raises(GeometryError):
        QubitGeometry(**kwargs)


def test_substrate_context():
    assert SubstrateContext(0.0).tau == 0
    with pytest.raises(GeometryError):
        SubstrateContext(-0.1)


vec = st.tuples(*[st.floats(-5, 5)] * 3)


@settings(max_examples=50, deadline=None)
@given(shift=vec, seed=st.integers(0, 2**32 - 1))
def test_distance_set_rigid_motion_invariant(shift, seed):
    rot = Rotation.random(random_state=seed)
    g = DEFAULT_GEOMETRY
    moved = QubitGeometry(
        r1=rot.apply(g.r1) + shift,
        r2=rot.apply(g.r2) + shift,
        d1=rot.apply(g.d1),
        d2=rot.apply(g.d2),
    )
    np.testing.assert_allclose(distance_set(moved), distance_set(g), atol=1e-9)


def test_distance_set_label_swap():
    g = DEFAULT_GEOMETRY
    swapped = QubitGeometry(r1=g.r2, r2=g.r1, d1=g.d2, d2=g.d1)
    assert distance_set(swapped) == pytest.approx(distance_set(g))
