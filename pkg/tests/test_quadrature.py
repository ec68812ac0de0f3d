import numpy as np
import pytest
from numpy.testing import assert_allclose

from spintomo import group_param as gp
from spintomo.errors import NumericalError
from spintomo.quadrature import (
    QuadratureRule,
    integrate,
    integrate_values,
    monte_carlo_rule_s3,
    product_rule_s2,
    product_rule_s3,
)
from spintomo.wigner import wigner_D_matrix, wigner_D_matrix_from_quaternion


@pytest.mark.parametrize("L", [1, 2, 5, 9])
def test_weights_normalized(L):
    for rule in (product_rule_s2(L), product_rule_s3(L)):
        assert rule.weights.sum() == pytest.approx(1.0, abs=1e-14)
        assert integrate(rule, lambda x: 1.0) == pytest.approx(1.0, abs=1e-14)


def test_sizes_and_orders():
    s2, s3 = product_rule_s2(4), product_rule_s3(4)
    assert len(s2) == 4 * 8 and s2.order == 7
    assert len(s3) == 4 * 8 * 8 and s3.order == 3
    assert s2.nodes.shape == (32, 2) and s3.nodes.shape == (256, 4)
    assert_allclose(np.linalg.norm(s3.nodes, axis=1), 1.0, atol=1e-15)


def test_rules_are_immutable():
    rule = product_rule_s2(3)
    with pytest.raises(ValueError):
        rule.nodes[0, 0] = 1.0
    with pytest.raises(ValueError):
        rule.weights[0] = 1.0


def test_invalid_construction():
    with pytest.raises(ValueError):
        product_rule_s2(0)
    with pytest.raises(ValueError):
        product_rule_s3(0)
    with pytest.raises(ValueError):
        monte_carlo_rule_s3(0, np.random.default_rng(0))
    with pytest.raises(ValueError):
        QuadratureRule("S4", np.zeros((1, 2)), np.ones(1), 0)
    with pytest.raises(ValueError):
        QuadratureRule("S2", np.zeros((2, 2)), np.array([1.0, -1.0]), 0)


@pytest.mark.parametrize("L", [3, 6])
def test_s2_spherical_harmonics(L):
    rule = product_rule_s2(L)
    phi, theta = rule.nodes[:, 0], rule.nodes[:, 1]
    for k in range(0, 2 * L):
        col = wigner_D_matrix(k, (phi, theta, 0 * phi))[:, :, k]
        avg = integrate_values(rule, col)
        expected = np.zeros(2 * k + 1)
        if k == 0:
            expected[0] = 1
        assert_allclose(avg, expected, atol=1e-12)


def test_s2_degree_limit_is_sharp():
    # cos(theta)^(2L) is the first even power a rule of order 2L-1 misses
    L = 3
    rule = product_rule_s2(L)
    exact = 1 / (2 * L + 1)
    assert integrate(rule, lambda x: np.cos(x[:, 1]) ** (2 * L - 2)) == pytest.approx(1 / (2 * L - 1))
    assert abs(integrate(rule, lambda x: np.cos(x[:, 1]) ** (2 * L)) - exact) > 1e-4


def test_s2_moments():
    rule = product_rule_s2(5)
    n = rule.directions
    assert_allclose(integrate_values(rule, n), 0, atol=1e-15)
    assert_allclose(integrate_values(rule, n[:, :, None] * n[:, None, :]), np.eye(3) / 3, atol=1e-15)


@pytest.mark.parametrize("j", [0.5, 1, 1.5])
def test_s3_orthogonality(j):
    """Peter-Weyl relations, including mixed integer/half-integer pairs."""
    L = int(4 * j + 2)
    rule = product_rule_s3(L)
    spins = [s / 2 for s in range(0, int(2 * j) + 1)]
    mats = {s: wigner_D_matrix_from_quaternion(s, rule.nodes) for s in spins}
    for j1 in spins:
        for j2 in spins:
            gram = integrate_values(rule, np.einsum("nab,ncd->nabcd", mats[j1], np.conj(mats[j2])))
            if j1 == j2:
                d = int(2 * j1 + 1)
                expected = np.einsum("ac,bd->abcd", np.eye(d), np.eye(d)) / d
            else:
                expected = np.zeros(gram.shape)
            assert_allclose(gram, expected, atol=1e-13, err_msg=f"{j1}, {j2}")


def test_s3_odd_functions_vanish():
    rule = product_rule_s3(4)
    assert_allclose(integrate_values(rule, rule.nodes), 0, atol=1e-15)


def test_s3_haar_moments():
    rule = product_rule_s3(4)
    assert_allclose(integrate_values(rule, rule.nodes[:, :, None] * rule.nodes[:, None, :]), np.eye(4) / 4,
                    atol=1e-15)


def test_s3_left_invariance(rng):
    rule = product_rule_s3(5)
    g = gp.haar_sample(rng)
    # a degree-4 polynomial in the quaternion entries (spin <= 2)
    f = lambda q: q[:, 0] ** 4 + q[:, 1] * q[:, 2] * q[:, 3] ** 2  # noqa: E731
    shifted = integrate(rule, lambda q: f(gp.quat_mul(g, q)))
    assert shifted == pytest.approx(integrate(rule, f), abs=1e-14)


def test_monte_carlo(rng):
    rule = monte_carlo_rule_s3(100_000, rng)
    assert rule.order is None
    second = integrate_values(rule, rule.nodes[:, :, None] * rule.nodes[:, None, :])
    assert_allclose(second, np.eye(4) / 4, atol=5e-3)


def test_batch_integrand_shapes():
    rule = product_rule_s2(3)
    out = integrate(rule, lambda x: np.ones((len(x), 2, 3)))
    assert out.shape == (2, 3)
    assert_allclose(out, 1.0)


def test_integrate_values_checks():
    rule = product_rule_s2(2)
    with pytest.raises(ValueError):
        integrate_values(rule, np.ones(len(rule) + 1))
    bad = np.ones(len(rule))
    bad[0] = np.nan
    with pytest.raises(NumericalError):
        integrate_values(rule, bad)


def test_pairwise_accuracy():
    rule = monte_carlo_rule_s3(1_000_000, np.random.default_rng(1))
    assert integrate_values(rule, np.full(len(rule), 0.1)) == pytest.approx(0.1, abs=1e-15)


def test_s3_spin_one_element_vanishes():
    rule = product_rule_s3(3)
    assert abs(integrate(rule, lambda q: wigner_D_matrix_from_quaternion(1, q)[:, 1, 1])) < 1e-12
    assert integrate(rule, lambda q: q[:, 0] ** 2) == pytest.approx(0.25, abs=1e-12)


def test_monte_carlo_a0_squared():
    rule = monte_carlo_rule_s3(100_000, np.random.default_rng(2))
    assert integrate(rule, lambda q: q[:, 0] ** 2) == pytest.approx(0.25, abs=0.01)


def test_linearity(rng):
    rule = product_rule_s2(6)
    c1, c2 = rng.standard_normal(2)
    f = lambda x: np.sin(x[:, 0]) * np.cos(x[:, 1]) ** 3  # noqa: E731
    g = lambda x: np.exp(np.cos(x[:, 1]))  # noqa: E731
    combined = integrate(rule, lambda x: c1 * f(x) + c2 * g(x))
    assert combined == pytest.approx(c1 * integrate(rule, f) + c2 * integrate(rule, g), abs=1e-14)


def test_refinement_agrees_within_order():
    # degree-5 polynomial on the sphere: L = 3 is already exact
    f = lambda x: (np.sin(x[:, 1]) * np.cos(x[:, 0])) ** 2 * np.cos(x[:, 1]) ** 2 + np.cos(x[:, 1]) ** 5  # noqa: E731
    coarse = integrate(product_rule_s2(3), f)
    fine = integrate(product_rule_s2(30), f)
    assert coarse == pytest.approx(fine, abs=1e-14)
    assert coarse == pytest.approx(1 / 15, abs=1e-14)
