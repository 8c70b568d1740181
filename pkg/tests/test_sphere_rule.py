import math

import numpy as np
import pytest

from cubature5.moments import sphere_surface_area, surface_monomial_integral
from cubature5.sphere_rule import mysovskikh_nodes, mysovskikh_rule, mysovskikh_weights
from cubature5.verify import graded_monomials


def test_first_simplex_node_n4():
    a, _ = mysovskikh_nodes(4)
    np.testing.assert_allclose(a[0], [1, 0, 0, 0], atol=1e-15)


@pytest.mark.parametrize("n", range(4, 13))
def test_nodes_on_unit_sphere(n):
    a, b = mysovskikh_nodes(n)
    assert a.shape == (n + 1, n)
    assert b.shape == (n * (n + 1) // 2, n)
    np.testing.assert_allclose(np.linalg.norm(a, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(np.linalg.norm(b, axis=1), 1.0, atol=1e-12)


@pytest.mark.parametrize("n", range(4, 9))
def test_simplex_geometry(n):
    # regular simplex: centroid at the origin, pairwise inner products -1/n
    a, _ = mysovskikh_nodes(n)
    np.testing.assert_allclose(a.sum(axis=0), 0.0, atol=1e-14)
    gram = a @ a.T
    off = gram[~np.eye(n + 1, dtype=bool)]
    np.testing.assert_allclose(off, -1.0 / n, atol=1e-14)


def test_b_nodes_lexicographic_pairs():
    n = 5
    a, b = mysovskikh_nodes(n)
    scale = math.sqrt(n / (2 * (n - 1)))
    np.testing.assert_allclose(b[0], scale * (a[0] + a[1]))
    np.testing.assert_allclose(b[n], scale * (a[1] + a[2]))
    np.testing.assert_allclose(b[-1], scale * (a[n - 1] + a[n]))


def test_weights_at_seven_and_eight():
    A, B = mysovskikh_weights(7)
    assert A == 0.0
    assert B > 0
    A8, _ = mysovskikh_weights(8)
    assert A8 < 0
    assert mysovskikh_rule(8).has_negative_weights
    assert not mysovskikh_rule(6).has_negative_weights


@pytest.mark.parametrize("n", range(4, 13))
def test_constant_reproduced(n):
    A, B = mysovskikh_weights(n)
    V = sphere_surface_area(n)
    assert abs(2 * (n + 1) * A + n * (n + 1) * B - V) <= 1e-12 * V


def test_constant_n4_explicit():
    A, B = mysovskikh_weights(4)
    assert 2 * 5 * A + 4 * 5 * B == pytest.approx(2 * math.pi**2, rel=1e-14)


@pytest.mark.parametrize("n", range(4, 11))
def test_degree_five_on_sphere(n):
    rule = mysovskikh_rule(n)
    V = rule.V
    for alpha in graded_monomials(n, 5):
        def f(x, alpha=alpha):
            out = np.ones(len(x))
            for j, e in enumerate(alpha):
                for _ in range(e):
                    out = out * x[:, j]
            return out

        approx = rule.integrate(f)
        exact = surface_monomial_integral(n, alpha)
        assert abs(approx - exact) <= 1e-10 * V, alpha
        if sum(alpha) % 2:
            assert approx == 0.0


def test_not_degree_six():
    rule = mysovskikh_rule(5)
    approx = rule.integrate(lambda x: x[:, 0] ** 6)
    assert abs(approx - surface_monomial_integral(5, (6,))) > 1e-6


def test_rejects_small_dimension():
    for n in (2, 3):
        with pytest.raises(ValueError):
            mysovskikh_nodes(n)
        with pytest.raises(ValueError):
            mysovskikh_weights(n)
