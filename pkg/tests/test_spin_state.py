import numpy as np
import pytest
from numpy.testing import assert_allclose

from spintomo.errors import InvalidStateError
from spintomo.spin_state import (
    PAULI,
    basis_state,
    density_from_stokes,
    hs_distance,
    maximally_mixed,
    purity_direct,
    quaternion_coefficients_of_qubit,
    qubit_from_quaternion_coefficients,
    random_density,
    spin_of,
    stokes_from_density,
    validate_density,
)


def test_stokes_example():
    rho = density_from_stokes([0, 0.5, 0.2])
    assert_allclose(rho, [[0.6, -0.25j], [0.25j, 0.4]])
    assert purity_direct(rho) == pytest.approx(0.645, abs=1e-15)


def test_stokes_round_trip(rng):
    for _ in range(20):
        s = rng.standard_normal(3)
        s *= rng.uniform() / np.linalg.norm(s)
        assert_allclose(stokes_from_density(density_from_stokes(s)), s, atol=1e-15)


def test_stokes_outside_ball_rejected():
    with pytest.raises(InvalidStateError):
        density_from_stokes([1, 1, 0])


def test_pure_qubit_boundary_accepted():
    rho = validate_density(density_from_stokes([0, 0, 1]))
    assert purity_direct(rho) == pytest.approx(1.0)


def test_qubit_purity_formula(rng):
    s = 0.9 * rng.uniform(-1, 1, 3) / np.sqrt(3)
    assert purity_direct(density_from_stokes(s)) == pytest.approx(0.5 * (1 + s @ s), abs=1e-15)


def test_quaternion_coefficients():
    s = np.array([0.1, -0.3, 0.6])
    c = quaternion_coefficients_of_qubit(density_from_stokes(s))
    assert_allclose(c, [0.5, *(-0.5j * s)], atol=1e-15)
    assert_allclose(qubit_from_quaternion_coefficients(c), density_from_stokes(s), atol=1e-15)


def test_quaternion_basis_is_i_sigma():
    from spintomo.group_param import BASIS_MATRICES

    for e, p in zip(BASIS_MATRICES[1:], PAULI):
        assert_allclose(e, 1j * p)


@pytest.mark.parametrize("j", [0.5, 1, 1.5, 2, 3])
def test_random_density_is_valid(j, rng):
    rho = random_density(j, rng)
    validate_density(rho)
    assert spin_of(rho) == j
    assert purity_direct(rho) <= 1.0 + 1e-12
    assert purity_direct(rho) >= 1 / rho.shape[0] - 1e-12


def test_random_density_rejects_bad_spin(rng):
    with pytest.raises(InvalidStateError):
        random_density(0.3, rng)


@pytest.mark.parametrize(
    "rho",
    [
        np.array([[0.5, 0.1], [0.2, 0.5]]),
        np.array([[0.6, 0], [0, 0.6]]),
        np.array([[1.2, 0], [0, -0.2]]),
        np.ones((2, 3)) / 2,
        np.array([[np.nan, 0], [0, 1]]),
    ],
    ids=["non-hermitian", "trace", "negative", "shape", "nan"],
)
def test_validate_rejects(rho):
    with pytest.raises(InvalidStateError):
        validate_density(rho)


def test_maximally_mixed_and_basis_state():
    assert purity_direct(maximally_mixed(1)) == pytest.approx(1 / 3)
    assert_allclose(basis_state(1, 0), np.diag([0, 1, 0]))
    assert_allclose(basis_state(1.5, -1.5), np.diag([0, 0, 0, 1]))
    with pytest.raises(InvalidStateError):
        basis_state(1, 2)


def test_hs_distance():
    a, b = density_from_stokes([0, 0, 1]), density_from_stokes([0, 0, -1])
    assert hs_distance(a, b) == pytest.approx(np.sqrt(2))
    assert hs_distance(a, a) == 0.0
    with pytest.raises(InvalidStateError):
        hs_distance(a, maximally_mixed(1))


def test_stokes_eigenvalues(rng):
    for _ in range(50):
        s = rng.standard_normal(3)
        s *= rng.uniform() ** (1 / 3) / np.linalg.norm(s)
        r = np.linalg.norm(s)
        lam = np.linalg.eigvalsh(validate_density(density_from_stokes(s)))
        assert_allclose(lam, [(1 - r) / 2, (1 + r) / 2], atol=1e-10)


def test_examples_in_e_basis():
    assert_allclose(quaternion_coefficients_of_qubit(np.eye(2) / 2), [0.5, 0, 0, 0])
    assert_allclose(quaternion_coefficients_of_qubit(density_from_stokes([0, 0, 1])), [0.5, 0, 0, -0.5j])


def test_many_random_qubits_valid():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        rho = validate_density(random_density(0.5, rng))
        assert abs(np.trace(rho) - 1) < 1e-12


def test_pauli_quaternion_isomorphism():
    """i sigma_a i sigma_b is the image of e_b e_a (the matrix map reverses products).

    Equivalently, e_k -> -i sigma_k is an algebra isomorphism.
    """
    from spintomo.group_param import BASIS_MATRICES, quat_mul, su2_from_quaternion

    units = np.eye(4)
    for a in range(1, 4):
        for b in range(1, 4):
            lhs = (1j * PAULI[a - 1]) @ (1j * PAULI[b - 1])
            assert_allclose(lhs, su2_from_quaternion(quat_mul(units[b], units[a])), atol=1e-15)
            prod = quat_mul(units[a], units[b])
            image = prod[0] * np.eye(2) + sum(c * (-1j * p) for c, p in zip(prod[1:], PAULI))
            assert_allclose((-1j * PAULI[a - 1]) @ (-1j * PAULI[b - 1]), image, atol=1e-15)
    assert_allclose(BASIS_MATRICES[0], np.eye(2))
