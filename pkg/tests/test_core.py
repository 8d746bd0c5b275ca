import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mrcool import core
from mrcool.core import (
    DensityMatrix,
    DomainError,
    Space,
    TruncationError,
    TruncationPolicy,
    matrix_exponential,
    min_n_max_for_thermal,
    partial_trace_qubit,
    tensor_embed,
    thermal_density_matrix,
    thermal_occupation,
)

OMEGA_100MHZ = 2 * np.pi * 100e6


class TestThermalOccupation:
    def test_paper_values(self):
        assert thermal_occupation(0.020, OMEGA_100MHZ) == pytest.approx(3.69, abs=0.01)
        assert thermal_occupation(0.040, OMEGA_100MHZ) == pytest.approx(7.84, abs=0.01)

    def test_zero_temperature(self):
        assert thermal_occupation(0.0, OMEGA_100MHZ) == 0.0

    def test_deep_quantum_regime_underflows_to_zero(self):
        assert thermal_occupation(1e-12, OMEGA_100MHZ) == 0.0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            thermal_occupation(-0.01, OMEGA_100MHZ)
        with pytest.raises(DomainError):
            thermal_occupation(0.02, 0.0)
        with pytest.raises(DomainError):
            thermal_occupation(0.02, -1.0)


class TestTruncation:
    def test_min_n_max_matches_geometric_tail(self):
        # smallest N with (nbar/(1+nbar))**(N+1) < 1e-12
        assert min_n_max_for_thermal(7.84, 1e-12) == 230
        assert min_n_max_for_thermal(0.0, 1e-12) == 0

    @given(st.floats(min_value=0.01, max_value=30.0), st.sampled_from([1e-6, 1e-9, 1e-12]))
    @settings(max_examples=60, deadline=None)
    def test_min_n_max_is_minimal(self, nbar, tol):
        n = min_n_max_for_thermal(nbar, tol)
        r = nbar / (1.0 + nbar)
        assert r ** (n + 1) < tol
        if n > 0:
            assert r**n >= tol

    def test_policy_validation(self):
        with pytest.raises(DomainError):
            TruncationPolicy(n_max=-1)
        with pytest.raises(DomainError):
            TruncationPolicy(n_max=10, tail_tolerance=2.0)


class TestThermalDensityMatrix:
    def test_zero_occupation_is_ground_state(self):
        rho = thermal_density_matrix(0.0, TruncationPolicy(n_max=5))
        expected = np.zeros((6, 6))
        expected[0, 0] = 1.0
        np.testing.assert_allclose(rho.data, expected)

    def test_ground_population_is_geometric(self):
        rho = thermal_density_matrix(3.69, TruncationPolicy(n_max=130))
        assert rho.data[0, 0].real == pytest.approx(1 / 4.69, abs=2e-5)

    def test_truncation_error_reports_minimum(self):
        with pytest.raises(TruncationError) as exc:
            thermal_density_matrix(7.84, TruncationPolicy(n_max=100))
        assert exc.value.min_n_max == 230

    @given(st.floats(min_value=0.0, max_value=12.0))
    @settings(max_examples=40, deadline=None)
    def test_valid_state_with_mean_near_nbar(self, nbar):
        policy = TruncationPolicy(n_max=core.default_n_max(nbar))
        rho = thermal_density_matrix(nbar, policy)
        assert abs(np.trace(rho.data) - 1.0) < 1e-14
        pops = rho.populations()
        mean = float(np.arange(len(pops)) @ pops)
        assert abs(mean - nbar) < policy.tail_tolerance * (policy.n_max + 1) + 1e-9


class TestMatrixExponential:
    def test_zero_hamiltonian(self):
        np.testing.assert_allclose(matrix_exponential(np.zeros((4, 4)), 3.7), np.eye(4))

    def test_pauli_rotation(self):
        u = matrix_exponential(core.SIGMA_X, np.pi / 2)
        np.testing.assert_allclose(u, -1j * core.SIGMA_X, atol=1e-14)

    def test_group_property(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
        h = 0.5 * (a + a.conj().T)
        u1 = matrix_exponential(h, 0.7)
        u2 = matrix_exponential(h, 1.9)
        u12 = matrix_exponential(h, 2.6)
        assert np.max(np.abs(u1 @ u2 - u12)) < 1e-10

    def test_unitary_and_commutes_with_h(self):
        rng = np.random.default_rng(8)
        a = rng.normal(size=(30, 30)) + 1j * rng.normal(size=(30, 30))
        h = 0.5 * (a + a.conj().T)
        u = matrix_exponential(h, 2.3)
        assert core.is_unitary(u)
        assert np.max(np.abs(u @ h - h @ u)) < 1e-10

    def test_rejects_non_hermitian(self):
        with pytest.raises(DomainError):
            matrix_exponential(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


class TestTensorEmbed:
    def test_identity(self):
        out = tensor_embed(np.eye(2), np.eye(5))
        np.testing.assert_allclose(out, np.eye(10))

    def test_sigma_z_sign_convention_on_ground(self):
        # basis |g,0>, |g,1>, ..., |e,0>, ...: sigma_z|g,n> = -|g,n>
        op = tensor_embed(core.SIGMA_TILDE_Z, np.eye(3))
        vec = np.zeros(6)
        vec[1] = 1.0  # |g,1>
        np.testing.assert_allclose(op @ vec, -vec)

    def test_kron_trace_identity(self):
        rng = np.random.default_rng(5)
        q = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        m = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
        assert np.trace(tensor_embed(q, m)) == pytest.approx(np.trace(q) * np.trace(m))

    def test_dimension_errors(self):
        with pytest.raises(DomainError):
            tensor_embed(np.eye(3), np.eye(4))
        with pytest.raises(DomainError):
            tensor_embed(np.eye(2), np.ones((3, 4)))


def _random_joint_density(rng, m):
    a = rng.normal(size=(2 * m, 2 * m)) + 1j * rng.normal(size=(2 * m, 2 * m))
    rho = a @ a.conj().T
    return DensityMatrix(rho / np.trace(rho).real, Space.JOINT)


class TestPartialTrace:
    def test_product_state(self):
        rho_m = thermal_density_matrix(1.0, TruncationPolicy(n_max=40))
        joint = np.zeros((82, 82), dtype=complex)
        joint[:41, :41] = rho_m.data
        reduced = partial_trace_qubit(DensityMatrix(joint, Space.JOINT))
        np.testing.assert_allclose(reduced.data, rho_m.data, atol=1e-14)

    def test_maximally_mixed(self):
        joint = DensityMatrix(np.eye(12) / 12.0, Space.JOINT)
        np.testing.assert_allclose(partial_trace_qubit(joint).data, np.eye(6) / 6.0)

    def test_occupation_consistency(self):
        rng = np.random.default_rng(17)
        m = 9
        rho = _random_joint_density(rng, m)
        n_joint = tensor_embed(np.eye(2), core.number(m))
        direct = np.trace(rho.data @ n_joint).real
        reduced = partial_trace_qubit(rho)
        via_trace = float(np.arange(m) @ reduced.data.diagonal().real)
        assert abs(direct - via_trace) < 1e-12

    def test_rejects_mr_state(self):
        rho = thermal_density_matrix(0.5, TruncationPolicy(n_max=30))
        with pytest.raises(DomainError):
            partial_trace_qubit(rho)


class TestDensityMatrixInvariants:
    def test_trace_enforced(self):
        with pytest.raises(DomainError):
            DensityMatrix(np.eye(4, dtype=complex), Space.MR)

    def test_hermiticity_enforced(self):
        bad = np.diag([0.5, 0.5]).astype(complex)
        bad[0, 1] = 0.3
        with pytest.raises(DomainError):
            DensityMatrix(bad, Space.MR)

    def test_positivity_enforced(self):
        bad = np.diag([1.2, -0.2]).astype(complex)
        with pytest.raises(DomainError):
            DensityMatrix(bad, Space.MR)

    def test_data_is_frozen(self):
        rho = thermal_density_matrix(0.5, TruncationPolicy(n_max=30))
        with pytest.raises(ValueError):
            rho.data[0, 0] = 0.0
