import numpy as np
import pytest

from mrcool.core import (
    DensityMatrix,
    DomainError,
    Space,
    TruncationPolicy,
    default_n_max,
    matrix_exponential,
    number,
    tensor_embed,
    thermal_density_matrix,
    thermal_occupation,
)
from mrcool.jc import SystemParams, build_jc_hamiltonian
from mrcool.opensys import (
    ConfigurationError,
    DissipationParams,
    IntegratorConfig,
    NumericalFailure,
    check_step_size,
    damped_protocol_run,
    default_config,
    embed_ground,
    lindblad_evolve,
    lindblad_evolve_unnormalized,
    max_stable_dt,
)
from mrcool.protocol import (
    OutcomePolicy,
    ScheduleKind,
    generate_schedule,
    postselected_run,
)

OMEGA_100MHZ = 2 * np.pi * 100e6


def small_setup(nbar=2.0, delta=1.0, g=0.04):
    n_max = default_n_max(nbar)
    params = SystemParams(delta=delta, g=g, n_max=n_max)
    rho0 = thermal_density_matrix(nbar, TruncationPolicy(n_max=n_max))
    return params, rho0


def fig2_setup():
    nbar0 = thermal_occupation(0.040, OMEGA_100MHZ)
    n_max = default_n_max(nbar0)
    params = SystemParams(delta=1.0, g=0.04, n_max=n_max)
    rho0 = thermal_density_matrix(nbar0, TruncationPolicy(n_max=n_max))
    return nbar0, params, rho0


class TestConfig:
    def test_dissipation_validation(self):
        with pytest.raises(DomainError):
            DissipationParams(gamma_m=-1e-5, nbar_bath=1.0)
        with pytest.raises(DomainError):
            DissipationParams(gamma_m=1e-5, nbar_bath=-0.1)

    def test_integrator_validation(self):
        with pytest.raises(DomainError):
            IntegratorConfig(dt=0.0)
        with pytest.raises(DomainError):
            IntegratorConfig(dt=0.05, method="euler")

    def test_step_size_bound(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=250)
        limit = max_stable_dt(params)
        assert limit == pytest.approx(0.05 / max(1.0, np.sqrt(0.04**2 * 250)))
        check_step_size(IntegratorConfig(dt=limit), params)
        with pytest.raises(ConfigurationError):
            check_step_size(IntegratorConfig(dt=2 * limit), params)

    def test_default_config_respects_bound(self):
        params = SystemParams(delta=1.4, g=0.05, n_max=300)
        cfg = default_config(params)
        check_step_size(cfg, params)


class TestLindbladEvolve:
    def test_zero_duration_is_identity(self):
        params, rho0 = small_setup(nbar=0.5)
        joint = DensityMatrix(embed_ground(rho0), Space.JOINT)
        out = lindblad_evolve(
            joint, build_jc_hamiltonian(params), DissipationParams(1e-3, 0.5), 0.0, IntegratorConfig()
        )
        np.testing.assert_allclose(out.data, joint.data, atol=1e-15)

    def test_unitary_limit_matches_oracle(self):
        params, rho0 = small_setup(nbar=1.2, delta=1.05, g=0.03)
        h = build_jc_hamiltonian(params)
        joint = embed_ground(rho0)
        raw = lindblad_evolve_unnormalized(
            joint, h, DissipationParams(0.0, 0.0), 8.0, IntegratorConfig(dt=0.02)
        )
        u = matrix_exponential(h, 8.0)
        exact = u @ joint @ u.conj().T
        assert np.max(np.abs(raw - exact)) < 1e-6

    def test_damped_oscillator_reaches_bath_occupation(self):
        # qubit decoupled, free oscillator: relaxation toward nbar_bath at rate
        # gamma_m from any Fock state
        m = 31
        h_free = tensor_embed(np.eye(2), number(m))
        joint = np.zeros((2 * m, 2 * m), dtype=complex)
        joint[5, 5] = 1.0
        diss = DissipationParams(gamma_m=0.1, nbar_bath=2.0)
        raw = lindblad_evolve_unnormalized(joint, h_free, diss, 80.0, IntegratorConfig(dt=0.05))
        nvec = np.tile(np.arange(m), 2)
        nbar = float(np.real(nvec @ np.diag(raw)))
        expected = 2.0 + 3.0 * np.exp(-0.1 * 80.0)
        assert nbar == pytest.approx(expected, abs=5e-3)
        assert abs(nbar - 2.0) / 2.0 < 0.01
        assert abs(np.trace(raw).real - 1.0) < 1e-12

    def test_trace_drift_budget(self):
        nbar0, params, rho0 = fig2_setup()
        h = build_jc_hamiltonian(params)
        diss = DissipationParams(gamma_m=1e-5, nbar_bath=nbar0)
        raw = lindblad_evolve_unnormalized(embed_ground(rho0), h, diss, 8.0, default_config(params))
        assert abs(np.trace(raw).real - 1.0) < 1e-8

    def test_unstable_step_raises_numerical_failure(self):
        rng = np.random.default_rng(0)
        params = SystemParams(delta=1.0, g=0.04, n_max=30)
        d = 2 * params.n_levels
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = a @ a.conj().T
        rho /= np.trace(rho).real
        joint = DensityMatrix(rho, Space.JOINT)
        with pytest.raises(NumericalFailure):
            lindblad_evolve(
                joint,
                build_jc_hamiltonian(params),
                DissipationParams(0.0, 0.0),
                5.0,
                IntegratorConfig(dt=0.5),
            )

    def test_wrapper_enforces_joint_space_and_step_bound(self):
        params, rho0 = small_setup(nbar=0.5)
        with pytest.raises(DomainError):
            lindblad_evolve(
                rho0, build_jc_hamiltonian(params), DissipationParams(0.0, 0.0), 1.0, IntegratorConfig()
            )
        joint = DensityMatrix(embed_ground(rho0), Space.JOINT)
        with pytest.raises(ConfigurationError):
            lindblad_evolve(
                joint,
                build_jc_hamiltonian(params),
                DissipationParams(0.0, 0.0),
                1.0,
                IntegratorConfig(dt=1.0),
                params=params,
            )


class TestDampedProtocolRun:
    def test_closed_limit_matches_postselected(self):
        params, rho0 = small_setup(nbar=2.0)
        sched = generate_schedule(ScheduleKind.UTIM, 8.0, 5, seed=6)
        closed = postselected_run(rho0, sched, params)
        damped = damped_protocol_run(rho0, sched, params, DissipationParams(0.0, 0.0))
        np.testing.assert_allclose(damped.nbar, closed.nbar, atol=1e-6)
        np.testing.assert_allclose(damped.survival, closed.survival, atol=1e-6)
        np.testing.assert_allclose(damped.fidelity, closed.fidelity, atol=1e-6)

    def test_strong_damping_degrades_cooling(self):
        # quality factor 100x worse: heating must visibly spoil the protocol
        nbar0, params, rho0 = fig2_setup()
        sched = generate_schedule(ScheduleKind.UTIM, 8.0, 10, seed=2026)
        closed = postselected_run(rho0, sched, params)
        damped = damped_protocol_run(
            rho0, sched, params, DissipationParams(gamma_m=1e-2, nbar_bath=nbar0)
        )
        assert damped.nbar[-1] >= 2 * closed.nbar[-1]

    def test_policies_draw_outcomes(self):
        params, rho0 = small_setup(nbar=2.0)
        sched = generate_schedule(ScheduleKind.ETIM, 8.0, 4)
        diss = DissipationParams(gamma_m=1e-4, nbar_bath=2.0)
        rec = damped_protocol_run(rho0, sched, params, diss, policy=OutcomePolicy.RESET, seed=5)
        assert rec.outcomes is not None and len(rec.outcomes) == 4
        assert len(rec.nbar) == 5
        again = damped_protocol_run(rho0, sched, params, diss, policy=OutcomePolicy.RESET, seed=5)
        assert rec.outcomes == again.outcomes
        np.testing.assert_array_equal(rec.nbar, again.nbar)

    def test_discard_policy_stops_at_excited_outcome(self):
        params, rho0 = small_setup(nbar=2.0)
        sched = generate_schedule(ScheduleKind.ETIM, 8.0, 15)
        diss = DissipationParams(gamma_m=0.0, nbar_bath=0.0)
        for index in range(6):
            rec = damped_protocol_run(
                rho0, sched, params, diss, policy=OutcomePolicy.DISCARD, seed=8, index=index
            )
            if rec.outcomes.endswith("e"):
                assert len(rec.nbar) == len(rec.outcomes)
            else:
                assert rec.outcomes == "g" * 15


@pytest.mark.slow
class TestStepSizeConvergence:
    def test_halving_dt_on_robustness_run(self):
        nbar0, params, rho0 = fig2_setup()
        sched = generate_schedule(ScheduleKind.UTIM, 8.0, 10, seed=2026)
        diss = DissipationParams(gamma_m=1e-5, nbar_bath=nbar0)
        base = default_config(params)
        rec1 = damped_protocol_run(rho0, sched, params, diss, cfg=base)
        rec2 = damped_protocol_run(
            rho0, sched, params, diss, cfg=IntegratorConfig(dt=base.dt / 2)
        )
        assert abs(rec1.nbar[-1] - rec2.nbar[-1]) < 1e-6
