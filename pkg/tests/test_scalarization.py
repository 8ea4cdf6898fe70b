import math

import hypothesis.extra.numpy as hnp
import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import given

from mmopt.core import ConfigurationError, make_stream
from mmopt.scalarization import (
    generate_weights,
    make_scalarizer,
    neighbor_indices,
    neighborhoods,
    pbi,
    simplex_lattice,
    tchebycheff,
    update_ideal,
)


def _as_set(W):
    return {tuple(np.round(w, 12)) for w in W}


def test_two_objective_weights():
    assert _as_set(generate_weights(2, 3)) == {(1.0, 0.0), (0.5, 0.5), (0.0, 1.0)}
    W = generate_weights(2, 75)
    assert len(W) == 75
    np.testing.assert_allclose(np.diff(np.sort(W[:, 0])), 1 / 74)


def test_six_objective_lattice_plus_fill():
    W = generate_weights(6, 75)
    assert W.shape == (75, 6)
    assert len(_as_set(W)) == 75
    lattice = _as_set(simplex_lattice(6, 3))
    assert len(lattice) == math.comb(8, 5) == 56
    assert lattice <= _as_set(W)
    assert np.all(W >= 0)
    np.testing.assert_allclose(W.sum(axis=1), 1.0, atol=1e-12)
    np.testing.assert_array_equal(W, generate_weights(6, 75))


@pytest.mark.parametrize("M, lam", [(3, 1), (3, 2), (3, 91), (6, 300), (4, 10)])
def test_weights_on_simplex(M, lam):
    W = generate_weights(M, lam)
    assert W.shape == (lam, M)
    assert len(_as_set(W)) == lam
    np.testing.assert_allclose(W.sum(axis=1), 1.0, atol=1e-12)


def test_weights_reject_bad_count():
    with pytest.raises(ConfigurationError):
        generate_weights(2, 0)


def test_tchebycheff_examples():
    assert tchebycheff(np.array([0.5, 0.5]), np.array([2.0, 4.0]), np.zeros(2)) == 2.0
    assert tchebycheff(np.array([0.3, 0.7]), np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0
    assert tchebycheff(np.array([1.0, 0.0]), np.array([3.0, 100.0]), np.zeros(2)) == 3.0


def test_pbi_examples():
    w = np.array([1.0, 1.0]) / math.sqrt(2)
    assert pbi(w, np.array([1.0, 0.0]), np.zeros(2)) == pytest.approx(6 / math.sqrt(2), abs=1e-12)
    assert pbi(w, np.array([3.0, 3.0]), np.zeros(2)) == pytest.approx(math.sqrt(18), abs=1e-12)
    assert pbi(np.array([0.2, 0.8]), np.array([1.0, 2.0]), np.array([1.0, 2.0])) == 0.0


vec3 = hnp.arrays(np.float64, 3, elements=st.floats(0, 10))
simplex3 = vec3.filter(lambda v: v.sum() > 1e-3).map(lambda v: v / v.sum())


@given(simplex3, vec3, vec3, st.permutations(range(3)))
def test_scalarizers_nonnegative_and_permutation_invariant(w, f_off, z, perm):
    f = z + f_off
    assert tchebycheff(w, f, z) >= 0 and pbi(w, f, z) >= 0
    perm = list(perm)
    assert tchebycheff(w[perm], f[perm], z[perm]) == tchebycheff(w, f, z)


@given(simplex3, hnp.arrays(np.float64, (6, 3), elements=st.floats(0, 10)), vec3)
def test_ranking_translation_invariant(w, F, shift):
    z = F.min(axis=0)
    for g in (tchebycheff, pbi):
        before = g(w, F, z)
        after = g(w, F + shift, z + shift)
        np.testing.assert_allclose(after, before, rtol=1e-9, atol=1e-9)


def test_update_ideal():
    np.testing.assert_array_equal(update_ideal(np.array([1.0, 2.0]), np.array([0.0, 3.0])), [0.0, 2.0])
    z = np.array([1.0, 2.0])
    np.testing.assert_array_equal(update_ideal(z, np.array([5.0, 5.0])), z)
    rng = np.random.default_rng(3)
    for f in rng.random((100, 2)):
        new = update_ideal(z, f)
        assert np.all(new <= z)
        z = new


def test_neighbors():
    W = generate_weights(2, 5)
    assert sorted(neighbor_indices(W, 2, 2).tolist()) == [1, 3]
    assert sorted(neighbor_indices(W, 0, 4).tolist()) == [1, 2, 3, 4]
    lam = 75
    T = lam // 10
    assert T == 7
    B = neighborhoods(generate_weights(2, lam), T)
    assert B.shape == (75, 7)
    np.testing.assert_array_equal(B, neighborhoods(generate_weights(2, lam), T))
    assert all(i not in row for i, row in enumerate(B))


def test_neighbor_ties_prefer_lower_index():
    W = generate_weights(2, 5)
    # weight 2 is equidistant from 1 and 3
    assert neighbor_indices(W, 2, 1).tolist() == [1]


@pytest.mark.parametrize("name", ["tch", "pbi"])
def test_stacked_weights_match_row_by_row(name):
    g = make_scalarizer(name)
    rng = make_stream(3)
    W = generate_weights(3, 10)
    F = rng.random((10, 3))
    z = np.zeros(3)
    np.testing.assert_allclose(g(W, F, z), [g(w, f, z) for w, f in zip(W, F)], rtol=1e-15)
    np.testing.assert_allclose(g(W, F[0], z), [g(w, F[0], z) for w in W], rtol=1e-15)
