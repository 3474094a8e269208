import numpy as np
import pytest

from src.lib.error_handler import DomainError, InfeasibilityError, InputError
from src.services.precond import (
    AR1Preconditioner,
    SpatialPreconditioner,
    ar1_inverse,
    beta_upper_limit,
    build_ar1,
    build_precond,
    check_beta_condition,
    estimate_beta,
    fixed_preconditioner,
    identity_preconditioner,
    inv_spd,
    spectral_bounds,
    sqrt_spd,
    tanh_scaled_preconditioner,
    uniform_ball,
)


@pytest.fixture
def spd_matrix():
    rng = np.random.default_rng(7)
    B = rng.normal(size=(4, 4))
    return B @ B.T + 0.5 * np.eye(4)


def test_sqrt_spd_squares_back(spd_matrix):
    root = sqrt_spd(spd_matrix)
    assert np.allclose(root, root.T)
    assert np.allclose(root @ root, spd_matrix, atol=1e-10)
    assert np.all(np.linalg.eigvalsh(root) > 0)


def test_sqrt_spd_eigenvalues_are_square_roots(spd_matrix):
    root = sqrt_spd(spd_matrix)
    assert np.allclose(
        np.sort(np.linalg.eigvalsh(root)), np.sqrt(np.sort(np.linalg.eigvalsh(spd_matrix))), atol=1e-10
    )
    diagonal = np.diag([0.25, 4.0, 9.0])
    assert np.allclose(sqrt_spd(diagonal), np.diag([0.5, 2.0, 3.0]), atol=1e-12)


def test_condition_ratio_is_one_only_for_scaled_identity(spd_matrix):
    assert spectral_bounds(3.5 * np.eye(3))[2] == pytest.approx(1.0)
    for matrix in (build_ar1(0.5, 3).H, spd_matrix, np.diag([1.0, 1.0 + 1e-6])):
        kappa_star = spectral_bounds(matrix)[2]
        assert 0.0 < kappa_star < 1.0


def test_inv_spd(spd_matrix):
    assert np.allclose(inv_spd(spd_matrix) @ spd_matrix, np.eye(4), atol=1e-10)


def test_spectral_bounds(spd_matrix):
    m_H, M_H, kappa_star = spectral_bounds(spd_matrix)
    eigvals = np.linalg.eigvalsh(spd_matrix)
    assert m_H == pytest.approx(eigvals[0])
    assert M_H == pytest.approx(eigvals[-1])
    assert kappa_star == pytest.approx(eigvals[0] / eigvals[-1])


def test_non_spd_matrices_are_rejected():
    with pytest.raises(DomainError):
        sqrt_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(DomainError):
        inv_spd(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(DomainError):
        spectral_bounds(np.ones((2, 3)))


def test_ar1_structure_and_bounds():
    H = build_ar1(0.5, 3)
    assert isinstance(H, AR1Preconditioner)
    expected = np.array([[1.0, 0.5, 0.25], [0.5, 1.0, 0.5], [0.25, 0.5, 1.0]])
    assert np.allclose(H.H, expected)
    eigvals = np.linalg.eigvalsh(expected)
    assert H.m_H == pytest.approx(eigvals[0])
    assert H.M_H == pytest.approx(eigvals[-1])
    assert H.identifier == "ar1:0.5"
    assert H.is_constant and H.beta == 0.0
    assert np.allclose(H.sqrt_at(np.zeros(3)) @ H.sqrt_at(np.zeros(3)), expected)


@pytest.mark.parametrize("rho", [-0.7, 0.0, 0.3, 0.9])
def test_ar1_inverse_matches_numeric_inverse(rho):
    for p in (1, 2, 5):
        assert np.allclose(ar1_inverse(rho, p), inv_spd(build_ar1(rho, p).H), atol=1e-9)


def test_ar1_rejects_unit_coefficient():
    with pytest.raises(DomainError):
        build_ar1(1.0, 3)
    with pytest.raises(DomainError):
        build_ar1(-1.2, 3)


def test_identity():
    H = identity_preconditioner(3)
    assert np.array_equal(H.at(np.ones(3)), np.eye(3))
    assert H.m_H == H.M_H == H.kappa_star == 1.0


def test_fixed_preconditioner_from_matrix(spd_matrix):
    H = fixed_preconditioner(spd_matrix, identifier="file:H.txt")
    assert np.allclose(H.H_inv, np.linalg.inv(spd_matrix))
    assert H.dimension == 4


def test_tanh_preconditioner_bounds():
    H = tanh_scaled_preconditioner(2, 0.2)
    assert isinstance(H, SpatialPreconditioner)
    assert not H.is_constant
    assert H.m_H == pytest.approx(0.8)
    assert H.M_H == pytest.approx(1.2)
    assert H.beta == pytest.approx(0.4 / 0.8)
    assert np.allclose(H.at(np.zeros(2)), np.eye(2))
    x = np.array([3.0, -1.0])
    assert np.allclose(H.sqrt_at(x) @ H.sqrt_at(x), H.at(x))


def test_tanh_preconditioner_rejects_eps():
    with pytest.raises(DomainError):
        tanh_scaled_preconditioner(2, 1.0)


def test_estimate_beta_stays_below_declared():
    H = tanh_scaled_preconditioner(2, 0.2)
    estimate = estimate_beta(H, n_pairs=2000, radius=5.0, seed=3)
    assert 0.0 < estimate <= H.beta + 1e-12
    assert estimate > 0.5 * H.beta
    assert estimate_beta(build_ar1(0.5, 2), n_pairs=10, radius=1.0) == 0.0


def test_estimate_beta_is_seeded():
    H = tanh_scaled_preconditioner(2, 0.1)
    assert estimate_beta(H, 50, 2.0, seed=11) == estimate_beta(H, 50, 2.0, seed=11)
    with pytest.raises(InputError):
        estimate_beta(H, 0, 2.0)


def test_uniform_ball_stays_inside():
    rng = np.random.default_rng(0)
    points = uniform_ball(rng, 5000, 3, 2.0)
    norms = np.linalg.norm(points, axis=1)
    assert points.shape == (5000, 3)
    assert np.all(norms <= 2.0)
    # radius^p is uniform: median radius is 2 * 0.5^(1/3)
    assert np.median(norms) == pytest.approx(2.0 * 0.5 ** (1 / 3), rel=0.05)


def test_beta_condition():
    limit = beta_upper_limit(0.75, 1.0, 0.95, 1.05)
    q = (0.95 * 0.75 / 1.05) ** 2
    assert limit == pytest.approx(q / (1 - q))
    check_beta_condition(0.75, 1.0, 0.95, 1.05, 0.5 * limit)
    with pytest.raises(InfeasibilityError) as exc:
        check_beta_condition(0.75, 1.0, 0.95, 1.05, limit)
    assert exc.value.condition == "beta-condition"
    assert exc.value.exit_code == 4
    assert beta_upper_limit(1.0, 1.0, 1.0, 1.0) == float("inf")


def test_build_precond_identifiers(tmp_path):
    assert build_precond("identity", 2).identifier == "identity"
    assert build_precond("ar1:0.5", 3).rho == 0.5
    assert build_precond("tanh:0.1", 2).beta == pytest.approx(0.2 / 0.9)
    path = tmp_path / "H.txt"
    path.write_text("2\n2 0.5\n0.5 1\n")
    H = build_precond(f"file:{path}", 2)
    assert np.allclose(H.H, [[2.0, 0.5], [0.5, 1.0]])
    assert H.identifier == f"file:{path}"


def test_build_precond_errors(tmp_path):
    with pytest.raises(InputError):
        build_precond("cholesky", 2)
    with pytest.raises(InputError):
        build_precond("ar1:abc", 2)
    path = tmp_path / "H.txt"
    path.write_text("2\n2 0.5\n0.5 1\n")
    with pytest.raises(InputError):
        build_precond(f"file:{path}", 3)
