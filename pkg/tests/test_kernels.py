import importlib

import numpy as np
import pytest

from pedreach import _kernels_py
from conftest import halfspace_oracle, random_zonotope

try:
    _ckernels = importlib.import_module("pedreach._ckernels")
except ImportError:
    _ckernels = None

BACKENDS = [pytest.param(_kernels_py, id="python")]
BACKENDS.append(
    pytest.param(_ckernels, id="cython", marks=pytest.mark.skipif(_ckernels is None, reason="extension not built"))
)


@pytest.fixture(params=BACKENDS)
def kern(request):
    return request.param


def test_unit_square_vertices(kern):
    v = kern.zonotope_vertices_2d([0, 0], np.eye(2))
    assert sorted(map(tuple, v)) == [(-1, -1), (-1, 1), (1, -1), (1, 1)]


def test_point_and_segment(kern):
    assert kern.zonotope_vertices_2d([3, 4], np.zeros((2, 0))).tolist() == [[3, 4]]
    seg = kern.zonotope_vertices_2d([0, 0], [[2], [0]])
    assert sorted(map(tuple, seg)) == [(-2, 0), (2, 0)]
    inside = kern.points_in_zonotope_2d([0, 0], [[2], [0]], [[1, 0], [1, 1e-3], [2.5, 0]])
    assert inside.tolist() == [True, False, False]


def test_seam_generators_are_added_not_cancelled(kern):
    # atan2(+tiny, -x) rounds to pi; such generators must still add up
    G = np.array([[-1.5, 1e-3, 4.7e-2, 0.0], [4.163e-17, 0.0, -5.2e-16, 0.6]])
    H = kern.canonical_generators_2d(G, 1e-14)
    assert H.shape == (2, 2)
    assert np.allclose(np.sort(np.abs(H).sum(axis=1)), [0.6, 1.5 + 1e-3 + 4.7e-2])
    assert kern.points_in_zonotope_2d([0, 0], G, [[1.54, 0.59]]).all()


def test_backends_agree(rng):
    if _ckernels is None:
        pytest.skip("extension not built")
    for _ in range(200):
        Z = random_zonotope(rng, n_gen=int(rng.integers(0, 9)))
        G = Z.generators.copy()
        if G.shape[1] > 2:
            G[:, 1] = -3 * G[:, 0]
        pts = rng.normal(size=(300, 2)) * 3
        assert np.allclose(
            _kernels_py.zonotope_vertices_2d(Z.center, G), _ckernels.zonotope_vertices_2d(Z.center, G)
        )
        assert np.array_equal(
            _kernels_py.points_in_zonotope_2d(Z.center, G, pts), _ckernels.points_in_zonotope_2d(Z.center, G, pts)
        )
        v = _kernels_py.zonotope_vertices_2d(Z.center, G)
        assert np.array_equal(
            _kernels_py.points_in_convex_polygon(v, pts), _ckernels.points_in_convex_polygon(v, pts)
        )


def test_membership_matches_bruteforce(kern, rng):
    for _ in range(100):
        Z = random_zonotope(rng)
        pts = rng.normal(size=(500, 2)) * 3
        assert np.array_equal(kern.points_in_zonotope_2d(Z.center, Z.generators, pts), halfspace_oracle(Z, pts))


def test_vertex_count_bound(kern, rng):
    for n in range(1, 10):
        Z = random_zonotope(rng, n_gen=n)
        assert len(kern.zonotope_vertices_2d(Z.center, Z.generators)) <= 2 * n + 1
