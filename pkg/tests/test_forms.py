import math

import numpy as np
import pytest

from entropic_ricci.calculus import gradient, laplacian
from entropic_ricci.errors import NonpositiveDensity, NotNormalized
from entropic_ricci.forms import (
    delta_hat_rho,
    entropy,
    form_A,
    form_B,
    form_matrices,
    inner_pi,
    inner_pi_edge,
    localized_density,
    normalize,
    rho_hat,
)
from entropic_ricci.means import MeanKind, theta

from conftest import srw

K2 = srw("hypercube", 1)
LOG, ARITH = MeanKind.LOGARITHMIC, MeanKind.ARITHMETIC


def test_inner_pi_examples(chain, rng):
    one = np.ones(chain.n)
    assert inner_pi(chain, one, one) == pytest.approx(1, abs=1e-15)
    assert inner_pi(K2, [0, 1], [0, 1]) == 0.5
    f, g = rng.standard_normal((2, chain.n))
    assert inner_pi(chain, f, g) == inner_pi(chain, g, f)


def test_inner_pi_edge_examples(chain, rng):
    assert inner_pi_edge(chain, np.zeros((chain.n, chain.n)), np.ones((chain.n, chain.n))) == 0
    G = gradient(K2, [0.0, 1.0])
    assert inner_pi_edge(K2, G, G) == 0.5
    f = rng.standard_normal(chain.n)
    assert inner_pi_edge(chain, gradient(chain, f), gradient(chain, f)) >= 0


def test_rho_hat_examples(chain, rng):
    for kind in MeanKind:
        R = rho_hat(chain, np.ones(chain.n), kind)
        np.testing.assert_allclose(R[chain.support], 1)
    rho = rng.uniform(0.1, 2, chain.n)
    R = rho_hat(chain, rho)
    np.testing.assert_array_equal(R, R.T)


@pytest.mark.parametrize("eps", [0.0, 0.25, 1 / 3, 2.0])
def test_rho_hat_localized(eps):
    c = srw("hypercube", 3)
    x = 5
    R = rho_hat(c, localized_density(c, x, eps))
    for y in c.neighbors(x):
        assert R[x, y] == R[y, x] == theta(LOG, 1.0, eps)


def test_rho_hat_zero_entry():
    c = srw("path", 3)
    R = rho_hat(c, [1.0, 0.0, 2.0])
    assert R[0, 1] == R[1, 0] == R[1, 2] == 0


def test_delta_hat_examples(chain, rng):
    np.testing.assert_allclose(delta_hat_rho(chain, np.ones(chain.n)), 0, atol=1e-15)
    rho = rng.uniform(0.2, 3, chain.n)
    lap = laplacian(chain, rho)
    D = delta_hat_rho(chain, rho, ARITH)
    expected = np.where(chain.support, (lap[:, None] + lap[None, :]) / 2, 0)
    np.testing.assert_allclose(D, expected, atol=1e-15)
    Dl = delta_hat_rho(chain, rho, LOG)
    np.testing.assert_allclose(Dl, Dl.T, atol=1e-14)
    with pytest.raises(NonpositiveDensity):
        delta_hat_rho(chain, np.r_[0.0, np.ones(chain.n - 1)])


def test_delta_hat_chain_rule(chain, rng):
    # d/ds rho_hat(rho + s Delta rho) at s = 0, by central differences
    rho = rng.uniform(0.3, 3, chain.n)
    lap = laplacian(chain, rho)
    h = 1e-6
    fd = (rho_hat(chain, rho + h * lap) - rho_hat(chain, rho - h * lap)) / (2 * h)
    np.testing.assert_allclose(delta_hat_rho(chain, rho), fd, atol=1e-6)


def test_bochner_consistency(chain, rng):
    rho = rng.uniform(0.3, 3, chain.n)
    f = rng.standard_normal(chain.n)
    lap = laplacian(chain, rho)
    h = 1e-5
    d_hat = (rho_hat(chain, rho + h * lap) - rho_hat(chain, rho - h * lap)) / (2 * h)
    G = gradient(chain, f)
    first = 0.5 * inner_pi_edge(chain, d_hat * G, G)
    second = inner_pi_edge(chain, rho_hat(chain, rho) * G, gradient(chain, laplacian(chain, f)))
    assert form_B(chain, rho, f) == pytest.approx(first - second, abs=1e-8)


def test_form_A_examples(chain, rng):
    f = rng.standard_normal(chain.n)
    rho = rng.uniform(0.1, 2, chain.n)
    assert form_A(chain, rho, np.full(chain.n, 2.0)) == 0
    assert form_A(K2, np.ones(2), [0.0, 1.0]) == 0.5
    assert form_A(chain, np.ones(chain.n), f) == inner_pi_edge(chain, gradient(chain, f), gradient(chain, f))
    assert form_A(chain, 2 * rho, f) == pytest.approx(2 * form_A(chain, rho, f), rel=1e-12)


def test_form_B_examples(chain, rng):
    rho = rng.uniform(0.1, 2, chain.n)
    f = rng.standard_normal(chain.n)
    assert form_B(chain, rho, np.full(chain.n, -1.0)) == 0
    assert form_B(K2, np.ones(2), [0.0, 1.0]) == pytest.approx(1.0, abs=1e-15)
    for kind in MeanKind:
        assert form_B(chain, 2 * rho, f, kind) == pytest.approx(2 * form_B(chain, rho, f, kind), rel=1e-10, abs=1e-13)
    with pytest.raises(NonpositiveDensity):
        form_B(chain, np.zeros(chain.n), f)


def test_form_matrices_match_formulas(chain, rng):
    for kind in MeanKind:
        rho = rng.uniform(0.05, 3, chain.n)
        MA, MB = form_matrices(chain, rho, kind)
        np.testing.assert_allclose(MA @ np.ones(chain.n), 0, atol=1e-14)
        np.testing.assert_allclose(MB @ np.ones(chain.n), 0, atol=1e-13)
        for _ in range(5):
            f = rng.standard_normal(chain.n)
            assert f @ MA @ f == pytest.approx(form_A(chain, rho, f, kind), rel=1e-12, abs=1e-14)
            assert f @ MB @ f == pytest.approx(form_B(chain, rho, f, kind), rel=1e-10, abs=1e-13)


def test_entropy_examples(chain):
    assert entropy(chain, np.ones(chain.n)) == 0
    x = chain.n - 1
    point = np.zeros(chain.n)
    point[x] = 1 / chain.pi[x]
    assert entropy(chain, point) == pytest.approx(math.log(1 / chain.pi[x]), rel=1e-14)
    assert entropy(K2, [1.5, 0.5]) == pytest.approx(0.75 * math.log(1.5) + 0.25 * math.log(0.5), abs=1e-15)
    assert entropy(K2, [1.5, 0.5]) == pytest.approx(0.13081203594113694, abs=1e-12)
    with pytest.raises(NotNormalized):
        entropy(chain, 2 * np.ones(chain.n))


def test_entropy_nonnegative(chain, rng):
    for _ in range(50):
        rho = normalize(chain, rng.exponential(size=chain.n))
        assert entropy(chain, rho) >= -1e-15
