import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from csgmeasure.mds import class_map_csv, classical_mds


def pairwise(Y):
    return np.sqrt(((Y[:, None] - Y[None]) ** 2).sum(axis=2))


def test_identity_gives_unit_equilateral_triangle():
    cmap = classical_mds(np.eye(3), ["a", "b", "c"])
    D = pairwise(cmap.coordinates)
    iu = np.triu_indices(3, 1)
    np.testing.assert_allclose(D[iu], 1.0, atol=1e-6)
    assert cmap.stress == pytest.approx(0.0, abs=1e-12)


def test_complete_adjacency_collapses_to_origin():
    cmap = classical_mds(np.ones((4, 4)))
    np.testing.assert_allclose(cmap.coordinates, 0.0, atol=1e-12)
    assert cmap.stress == 0.0


def test_two_classes_lie_on_first_axis():
    cmap = classical_mds(np.array([[1.0, 0.2], [0.2, 1.0]]))
    Y = cmap.coordinates
    np.testing.assert_allclose(Y[:, 1], 0.0, atol=1e-12)
    assert abs(Y[0, 0] - Y[1, 0]) == pytest.approx(0.8)


def test_planar_configuration_is_recovered_exactly():
    # 1 - W taken from four points of a unit-scale square
    pts = np.array([[0, 0], [0.6, 0], [0.6, 0.3], [0, 0.3]])
    W = 1.0 - pairwise(pts)
    cmap = classical_mds(W)
    np.testing.assert_allclose(pairwise(cmap.coordinates), pairwise(pts), atol=1e-12)
    assert cmap.stress < 1e-20


def test_sign_convention_and_centering():
    rng = np.random.default_rng(0)
    W = rng.uniform(size=(6, 6))
    W = (W + W.T) / 2
    np.fill_diagonal(W, 1.0)
    Y = classical_mds(W).coordinates
    np.testing.assert_allclose(Y.mean(axis=0), 0.0, atol=1e-12)
    for axis in range(2):
        col = Y[:, axis]
        assert col[np.argmax(np.abs(col))] > 0


def test_stress_matches_definition():
    rng = np.random.default_rng(5)
    W = rng.uniform(size=(7, 7))
    W = np.minimum(W, W.T)
    np.fill_diagonal(W, 1.0)
    cmap = classical_mds(W)
    D = 1.0 - W
    fitted = pairwise(cmap.coordinates)
    num = den = 0.0
    for i in range(7):
        for j in range(i + 1, 7):
            num += (fitted[i, j] - D[i, j]) ** 2
            den += D[i, j] ** 2
    assert cmap.stress == pytest.approx(num / den, rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8).flatmap(
    lambda K: arrays(np.float64, (K, K), elements=st.floats(0, 1))), st.randoms())
def test_relabeling_permutes_the_map(raw, rnd):
    K = len(raw)
    W = np.minimum(raw, raw.T)
    np.fill_diagonal(W, 1.0)
    # the planar map is only unique when the second and third eigenvalues differ
    J = np.eye(K) - 1.0 / K
    lam = np.sort(np.linalg.eigvalsh(-0.5 * J @ (1 - W) ** 2 @ J))[::-1]
    assume(lam[1] - lam[2] > 1e-3)
    perm = list(range(K))
    rnd.shuffle(perm)
    a = classical_mds(W)
    b = classical_mds(W[np.ix_(perm, perm)])
    # distances in the map are unaffected by the order of the classes
    np.testing.assert_allclose(pairwise(b.coordinates), pairwise(a.coordinates)[np.ix_(perm, perm)],
                               atol=1e-6)
    assert b.stress == pytest.approx(a.stress, abs=1e-9)


def test_csv_layout():
    text = class_map_csv(classical_mds(np.eye(3), ["x", "y,z", "w"]))
    lines = text.splitlines()
    assert lines[0].startswith("# stress=")
    assert lines[1] == "class,x,y"
    assert len(lines) == 2 + 3
    assert lines[3].startswith('"y,z",')
