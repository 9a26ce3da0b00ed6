import numpy as np
import pytest
import scipy.linalg

from entropic_ricci.calculus import (
    divergence,
    edge_field,
    gamma,
    gamma2,
    gamma_bilinear,
    gradient,
    heat_apply,
    heat_kernel,
    heat_operator,
    laplacian,
)
from entropic_ricci.errors import NegativeTime
from entropic_ricci.forms import inner_pi, inner_pi_edge

from conftest import srw

K2 = srw("hypercube", 1)


def test_gradient_examples(chain, rng):
    assert np.all(gradient(chain, np.full(chain.n, 3.2)) == 0)
    f, g = rng.standard_normal((2, chain.n))
    np.testing.assert_allclose(gradient(chain, 2 * f + g), 2 * gradient(chain, f) + gradient(chain, g), atol=1e-14)
    G = gradient(chain, f)
    np.testing.assert_array_equal(G, -G.T)


def test_gradient_k2():
    G = gradient(K2, [0.0, 1.0])
    assert G[0, 1] == 1 and G[1, 0] == -1


def test_divergence_examples(chain, rng):
    assert np.all(divergence(chain, np.zeros((chain.n, chain.n))) == 0)
    S = rng.standard_normal((chain.n, chain.n))
    np.testing.assert_allclose(divergence(chain, S + S.T), 0, atol=1e-14)
    V = edge_field(chain, rng.standard_normal((chain.n, chain.n)))
    assert abs(np.dot(divergence(chain, V), chain.pi)) < 1e-14
    np.testing.assert_allclose(divergence(K2, gradient(K2, [0.0, 1.0])), [1, -1])


def test_laplacian_examples(chain, rng):
    np.testing.assert_allclose(laplacian(chain, np.ones(chain.n)), 0, atol=1e-15)
    np.testing.assert_allclose(laplacian(K2, [0.0, 1.0]), [1, -1])
    f, g = rng.standard_normal((2, chain.n))
    np.testing.assert_allclose(divergence(chain, gradient(chain, f)), laplacian(chain, f), atol=1e-12)
    assert inner_pi(chain, laplacian(chain, f), g) == pytest.approx(inner_pi(chain, f, laplacian(chain, g)), abs=1e-12)


def test_laplacian_hamming_weight_q2():
    c = srw("hypercube", 2)
    weight = np.array([bin(v).count("1") for v in range(4)], dtype=float)
    np.testing.assert_allclose(laplacian(c, weight), 1 - weight, atol=1e-15)


def test_summation_by_parts(chain, rng):
    for _ in range(20):
        f, g = rng.standard_normal((2, chain.n))
        lhs = inner_pi(chain, laplacian(chain, f), g)
        rhs = -inner_pi_edge(chain, gradient(chain, f), gradient(chain, g))
        assert abs(lhs - rhs) < 1e-10


def test_gamma_examples(chain, rng):
    np.testing.assert_allclose(gamma(chain, np.full(chain.n, 1.7)), 0, atol=1e-15)
    np.testing.assert_array_equal(gamma(K2, [0.0, 1.0]), [1, 1])
    f = rng.standard_normal(chain.n)
    assert np.all(gamma(chain, f) >= 0)
    np.testing.assert_allclose(gamma_bilinear(chain, f, f), gamma(chain, f), atol=1e-14)
    np.testing.assert_allclose(gamma_bilinear(chain, f, np.ones(chain.n)), 0, atol=1e-14)


def test_gamma_bilinear_k2():
    np.testing.assert_array_equal(gamma_bilinear(K2, [0.0, 1.0], [0.0, -1.0]), [-1, -1])


@pytest.mark.parametrize("family,n", [("hypercube", 3), ("cycle", 6), ("path", 5), ("complete", 4)])
def test_gamma_of_distance_function(family, n):
    from entropic_ricci.chain import distance_matrix

    c = srw(family, n)
    d = distance_matrix(c)
    for x0 in range(c.n):
        assert gamma(c, d[x0].astype(float)).max() <= 1 + 1e-15


def test_gamma2_k2():
    np.testing.assert_allclose(gamma2(K2, [0.0, 1.0]), [2, 2])
    np.testing.assert_allclose(gamma2(K2, [5.0, 5.0]), [0, 0])


def test_heat_k2_closed_form():
    for t in (0.0, 0.1, 1.0, 3.7):
        e = np.exp(-2 * t)
        np.testing.assert_allclose(heat_apply(K2, [0.0, 1.0], t), [0.5 - e / 2, 0.5 + e / 2], atol=1e-15)


def test_heat_matches_expm(chain, rng):
    f = rng.standard_normal(chain.n)
    K = chain.Q - np.eye(chain.n)
    for t in (0.3, 2.0):
        np.testing.assert_allclose(heat_apply(chain, f, t), scipy.linalg.expm(t * K) @ f, atol=1e-12)
        np.testing.assert_allclose(heat_operator(chain, t), scipy.linalg.expm(t * K), atol=1e-12)


def test_heat_basic_properties(chain, rng):
    f, g = rng.standard_normal((2, chain.n))
    np.testing.assert_array_equal(heat_apply(chain, f, 0), f)
    np.testing.assert_allclose(heat_apply(chain, np.ones(chain.n), 4.0), 1, atol=1e-13)
    np.testing.assert_allclose(heat_apply(chain, heat_apply(chain, f, 0.4), 1.1), heat_apply(chain, f, 1.5), atol=1e-9)
    assert inner_pi(chain, heat_apply(chain, f, 0.7), g) == pytest.approx(
        inner_pi(chain, f, heat_apply(chain, g, 0.7)), abs=1e-12)
    rho = rng.uniform(0, 2, chain.n)
    for t in (0.1, 1.0, 10.0):
        pt = heat_apply(chain, rho, t)
        assert abs(np.dot(pt, chain.pi) - np.dot(rho, chain.pi)) < 1e-10
        assert pt.min() >= -1e-12


def test_heat_negative_time(chain):
    with pytest.raises(NegativeTime):
        heat_apply(chain, np.zeros(chain.n), -1)
    with pytest.raises(NegativeTime):
        heat_kernel(chain, -0.1)


def test_heat_kernel_properties(chain, rng):
    np.testing.assert_allclose(heat_kernel(chain, 0), np.diag(1 / chain.pi))
    g = rng.standard_normal(chain.n)
    for t in (0.05, 1.0, 6.0):
        p = heat_kernel(chain, t)
        assert np.max(np.abs(p - p.T)) < 1e-10
        assert p.min() >= -1e-12
        np.testing.assert_allclose(p @ chain.pi, 1, atol=1e-12)
        np.testing.assert_allclose(p @ (g * chain.pi), heat_apply(chain, g, t), atol=1e-12)


@pytest.mark.parametrize("family,n", [("hypercube", 3), ("cycle", 6), ("path", 4)])
def test_heat_kernel_long_time(family, n):
    # only the constant mode survives: p_t -> 1 (bipartite graphs included, time is continuous)
    c = srw(family, n)
    np.testing.assert_allclose(heat_kernel(c, 200.0), 1.0, atol=1e-10)
