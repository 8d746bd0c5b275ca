import numpy as np
import pytest

from mrcool.core import (
    DensityMatrix,
    DomainError,
    Space,
    TruncationPolicy,
    default_n_max,
    matrix_exponential,
    thermal_density_matrix,
    thermal_occupation,
)
from mrcool.jc import SystemParams, build_jc_hamiltonian, kraus_pair, excited_kraus_pair
from mrcool.protocol import (
    MeasurementSchedule,
    OutcomePolicy,
    RunMode,
    ScheduleKind,
    decay_envelope,
    generate_schedule,
    observables,
    postselected_run,
    sample_trajectory,
    survival_ensemble,
)

OMEGA_100MHZ = 2 * np.pi * 100e6


def fig1_setup():
    nbar0 = thermal_occupation(0.020, OMEGA_100MHZ)
    n_max = default_n_max(nbar0)
    params = SystemParams(delta=1.0, g=0.04, n_max=n_max)
    rho0 = thermal_density_matrix(nbar0, TruncationPolicy(n_max=n_max))
    return nbar0, params, rho0


def joint_protocol_oracle(rho0, schedule, params):
    """Brute-force reference: evolve the joint state with the dense matrix
    exponential and project the qubit onto ground after each interval."""
    h = build_jc_hamiltonian(params)
    m = params.n_levels
    joint = np.zeros((2 * m, 2 * m), dtype=complex)
    joint[:m, :m] = rho0.data
    nvec = np.arange(m)
    survival = [1.0]
    nbar = [float(np.real(nvec @ np.diag(joint[:m, :m])))]
    fidelity = [float(joint[0, 0].real)]
    for tau_j in schedule.intervals:
        u = matrix_exponential(h, tau_j)
        joint = u @ joint @ u.conj().T
        block = joint[:m, :m]
        p_g = float(np.trace(block).real)
        survival.append(survival[-1] * p_g)
        rho_m = block / p_g
        joint = np.zeros_like(joint)
        joint[:m, :m] = rho_m
        nbar.append(float(np.real(nvec @ np.diag(rho_m))))
        fidelity.append(float(rho_m[0, 0].real))
    return np.array(nbar), np.array(survival), np.array(fidelity)


class TestSchedules:
    def test_etim_intervals(self):
        sched = generate_schedule(ScheduleKind.ETIM, 10.0, 3, seed=123)
        np.testing.assert_allclose(sched.intervals, [10.0, 10.0, 10.0])
        np.testing.assert_allclose(sched.times, [10.0, 20.0, 30.0])

    def test_etim_ignores_seed(self):
        a = generate_schedule(ScheduleKind.ETIM, 10.0, 5, seed=1)
        b = generate_schedule(ScheduleKind.ETIM, 10.0, 5, seed=2)
        np.testing.assert_array_equal(a.jitter, b.jitter)

    def test_utim_interval_bounds(self):
        sched = generate_schedule(ScheduleKind.UTIM, 8.0, 100, seed=1)
        assert np.all(sched.intervals > 0)
        assert np.all(sched.intervals < 16.0)
        assert np.all(np.abs(sched.jitter) < 4.0)

    def test_utim_determinism_and_seed_sensitivity(self):
        a = generate_schedule(ScheduleKind.UTIM, 8.0, 50, seed=7)
        b = generate_schedule(ScheduleKind.UTIM, 8.0, 50, seed=7)
        c = generate_schedule(ScheduleKind.UTIM, 8.0, 50, seed=8)
        np.testing.assert_array_equal(a.jitter, b.jitter)
        assert np.any(a.jitter != c.jitter)

    def test_validation(self):
        with pytest.raises(DomainError):
            MeasurementSchedule(ScheduleKind.ETIM, 10.0, 2, np.array([0.0, 0.1]), 0)
        with pytest.raises(DomainError):
            MeasurementSchedule(ScheduleKind.UTIM, 10.0, 2, np.array([0.0, 6.0]), 0)
        with pytest.raises(DomainError):
            generate_schedule(ScheduleKind.ETIM, -1.0, 2)
        with pytest.raises(DomainError):
            generate_schedule(ScheduleKind.ETIM, 10.0, 0)


class TestObservables:
    def test_ground_state(self):
        rho = thermal_density_matrix(0.0, TruncationPolicy(n_max=5))
        assert observables(rho) == (0.0, 1.0)

    def test_thermal(self):
        rho = thermal_density_matrix(3.69, TruncationPolicy(n_max=130))
        nbar, fid = observables(rho)
        assert nbar == pytest.approx(3.69, abs=1e-6)
        assert fid == pytest.approx(1 / 4.69, abs=2e-5)

    def test_fock_state(self):
        data = np.zeros((8, 8), dtype=complex)
        data[5, 5] = 1.0
        nbar, fid = observables(DensityMatrix(data, Space.MR))
        assert (nbar, fid) == (5.0, 0.0)

    def test_rejects_joint(self):
        rho = DensityMatrix(np.eye(12) / 12.0, Space.JOINT)
        with pytest.raises(DomainError):
            observables(rho)


class TestPostselectedRun:
    def test_ground_state_is_fixed_point(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=30)
        rho0 = thermal_density_matrix(0.0, TruncationPolicy(n_max=30))
        rec = postselected_run(rho0, generate_schedule(ScheduleKind.ETIM, 10.0, 20), params)
        np.testing.assert_allclose(rec.nbar, 0.0, atol=1e-14)
        np.testing.assert_allclose(rec.survival, 1.0, atol=1e-14)
        np.testing.assert_allclose(rec.fidelity, 1.0, atol=1e-14)

    def test_equal_interval_cooling_curve(self):
        nbar0, params, rho0 = fig1_setup()
        rec = postselected_run(rho0, generate_schedule(ScheduleKind.ETIM, 10.0, 60), params)
        # frozen regression values (joint-space oracle agrees to ~1e-14)
        assert rec.nbar[0] == pytest.approx(nbar0, abs=1e-9)
        assert rec.nbar[1] == pytest.approx(1.7972306509491263, rel=1e-12)
        assert rec.nbar[5] == pytest.approx(0.49503242707782724, rel=1e-12)
        assert rec.nbar[60] == pytest.approx(3.122214646010874e-4, rel=1e-12)
        assert rec.survival[60] == pytest.approx(0.21335204986646877, rel=1e-12)
        assert rec.fidelity[60] == pytest.approx(0.9999546168363391, rel=1e-12)
        # large-N survival converges to the initial ground population
        assert rec.survival[60] == pytest.approx(rho0.data[0, 0].real, abs=1e-4)

    def test_large_n_limit_reaches_ground_state(self):
        # under equal intervals the slow band near n = 62 leaves ~2e-6 excess
        # at N = 200, so the concrete 1e-6 bound needs a random schedule; the
        # equal-interval series still converges monotonically
        nbar0, params, rho0 = fig1_setup()
        etim = postselected_run(rho0, generate_schedule(ScheduleKind.ETIM, 10.0, 200), params)
        assert np.all(np.diff(etim.fidelity) >= -1e-15)
        assert etim.nbar[200] < 2e-4
        utim = postselected_run(rho0, generate_schedule(ScheduleKind.UTIM, 10.0, 200, seed=1), params)
        assert utim.fidelity[200] > 1 - 1e-6
        assert utim.nbar[200] < 1e-12

    def test_survival_non_increasing_and_record_invariants(self):
        nbar0, params, rho0 = fig1_setup()
        rec = postselected_run(rho0, generate_schedule(ScheduleKind.UTIM, 10.0, 40, seed=3), params)
        assert np.all(np.diff(rec.survival) <= 0)
        assert np.all(rec.nbar >= 0)
        assert np.all((rec.fidelity >= 0) & (rec.fidelity <= 1))
        assert rec.mode is RunMode.POSTSELECTED

    def test_nbar_monotone_when_amplitudes_decrease_with_level(self):
        # tau small enough that |lambda_n| decreases over the whole range
        nbar0, params, rho0 = fig1_setup()
        rec = postselected_run(rho0, generate_schedule(ScheduleKind.ETIM, 3.0, 30), params)
        assert np.all(np.diff(rec.nbar) <= 1e-14)

    def test_matches_joint_space_oracle(self):
        params = SystemParams(delta=1.07, g=0.035, n_max=90)
        rho0 = thermal_density_matrix(2.5, TruncationPolicy(n_max=90))
        sched = generate_schedule(ScheduleKind.UTIM, 10.0, 15, seed=5)
        rec = postselected_run(rho0, sched, params)
        nbar, survival, fidelity = joint_protocol_oracle(rho0, sched, params)
        np.testing.assert_allclose(rec.nbar, nbar, atol=1e-12)
        np.testing.assert_allclose(rec.survival, survival, atol=1e-12)
        np.testing.assert_allclose(rec.fidelity, fidelity, atol=1e-12)

    def test_nondiagonal_state_matches_oracle(self):
        params = SystemParams(delta=1.07, g=0.035, n_max=40)
        rng = np.random.default_rng(11)
        a = rng.normal(size=(41, 41)) + 1j * rng.normal(size=(41, 41))
        rho = a @ a.conj().T
        rho0 = DensityMatrix(rho / np.trace(rho).real, Space.MR)
        sched = generate_schedule(ScheduleKind.UTIM, 9.0, 10, seed=2)
        rec = postselected_run(rho0, sched, params)
        nbar, survival, fidelity = joint_protocol_oracle(rho0, sched, params)
        np.testing.assert_allclose(rec.nbar, nbar, atol=1e-12)
        np.testing.assert_allclose(rec.survival, survival, atol=1e-12)

    def test_survival_identity_with_envelope(self):
        # P_g(N) equals sum_n |lambda_bar_n|^(2N) p_n(0): two independent routes
        nbar0, params, rho0 = fig1_setup()
        for kind, seed in ((ScheduleKind.ETIM, 0), (ScheduleKind.UTIM, 9)):
            sched = generate_schedule(kind, 10.0, 25, seed=seed)
            rec = postselected_run(rho0, sched, params)
            _, lam_bar = decay_envelope(params, sched)
            pops = rho0.populations()
            direct = float(np.sum(lam_bar ** (2 * sched.count) * pops))
            assert rec.survival[-1] == pytest.approx(direct, abs=1e-12)

    def test_underflow_truncates_run(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=30)
        data = np.zeros((31, 31), dtype=complex)
        data[5, 5] = 1.0  # no ground-state support: survival decays geometrically
        rho0 = DensityMatrix(data, Space.MR)
        rec = postselected_run(rho0, generate_schedule(ScheduleKind.ETIM, 10.0, 2000), params)
        assert rec.truncated
        assert len(rec.nbar) < 2001
        assert rec.survival[-1] >= 1e-300

    def test_dimension_mismatch(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=30)
        rho0 = thermal_density_matrix(0.0, TruncationPolicy(n_max=10))
        with pytest.raises(DomainError):
            postselected_run(rho0, generate_schedule(ScheduleKind.ETIM, 10.0, 5), params)


class TestTrajectories:
    def test_ground_state_never_excites(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=20)
        rho0 = thermal_density_matrix(0.0, TruncationPolicy(n_max=20))
        rec = sample_trajectory(
            rho0, generate_schedule(ScheduleKind.ETIM, 10.0, 30), params, OutcomePolicy.DISCARD, seed=4
        )
        assert rec.outcomes == "g" * 30
        np.testing.assert_allclose(rec.survival, 1.0, atol=1e-12)

    def test_seed_determinism(self):
        nbar0, params, rho0 = fig1_setup()
        sched = generate_schedule(ScheduleKind.ETIM, 10.0, 25)
        a = sample_trajectory(rho0, sched, params, OutcomePolicy.RESET, seed=12, index=3)
        b = sample_trajectory(rho0, sched, params, OutcomePolicy.RESET, seed=12, index=3)
        c = sample_trajectory(rho0, sched, params, OutcomePolicy.RESET, seed=12, index=4)
        assert a.outcomes == b.outcomes
        np.testing.assert_array_equal(a.nbar, b.nbar)
        assert a.outcomes != c.outcomes

    def test_discard_stops_recording_at_excited_outcome(self):
        nbar0, params, rho0 = fig1_setup()
        sched = generate_schedule(ScheduleKind.ETIM, 10.0, 40)
        for k in range(12):
            rec = sample_trajectory(rho0, sched, params, OutcomePolicy.DISCARD, seed=1, index=k)
            if rec.outcomes.endswith("e"):
                assert len(rec.nbar) == len(rec.outcomes)
                assert "e" not in rec.outcomes[:-1]
            else:
                assert rec.outcomes == "g" * 40
                assert len(rec.nbar) == 41

    def test_ensemble_matches_per_trajectory_sampler(self):
        nbar0, params, rho0 = fig1_setup()
        sched = generate_schedule(ScheduleKind.ETIM, 10.0, 20)
        frac = survival_ensemble(rho0, sched, params, 100, seed=99)
        alive = np.zeros(21)
        alive[0] = 100
        for k in range(100):
            rec = sample_trajectory(rho0, sched, params, OutcomePolicy.DISCARD, seed=99, index=k)
            n_ground = rec.outcomes.count("g")
            if rec.outcomes.endswith("e"):
                alive[1 : n_ground + 1] += 1
            else:
                alive[1:] += 1
        np.testing.assert_array_equal(frac, alive / 100)

    def test_ensemble_estimates_survival_probability(self):
        nbar0, params, rho0 = fig1_setup()
        sched = generate_schedule(ScheduleKind.ETIM, 10.0, 20)
        frac = survival_ensemble(rho0, sched, params, 2000, seed=5)
        rec = postselected_run(rho0, sched, params)
        p = rec.survival[20]
        se = np.sqrt(p * (1 - p) / 2000)
        assert abs(frac[20] - p) <= 3 * se

    def test_track_policy_reproduces_unconditional_channel(self):
        n_max = 25
        params = SystemParams(delta=1.0, g=0.05, n_max=n_max)
        rho0 = thermal_density_matrix(1.2, TruncationPolicy(n_max=n_max, tail_tolerance=1e-6))
        tau, steps = 9.0, 6
        sched = generate_schedule(ScheduleKind.ETIM, tau, steps)
        m_g, m_e = kraus_pair(params, tau)
        k_ee, k_eg = excited_kraus_pair(params, tau)
        rho_g = rho0.data.copy()
        rho_e = np.zeros_like(rho_g)
        for _ in range(steps):
            rho_g, rho_e = (
                m_g @ rho_g @ m_g.conj().T + k_eg @ rho_e @ k_eg.conj().T,
                m_e @ rho_g @ m_e.conj().T + k_ee @ rho_e @ k_ee.conj().T,
            )
        exact_nbar = float(np.arange(n_max + 1) @ np.diag(rho_g + rho_e).real)
        n_traj = 3000
        finals = np.array([
            sample_trajectory(rho0, sched, params, OutcomePolicy.TRACK, seed=7, index=k).nbar[-1]
            for k in range(n_traj)
        ])
        sem = finals.std() / np.sqrt(n_traj)
        assert abs(finals.mean() - exact_nbar) <= 4 * sem

    def test_reset_policy_continues_after_excited_outcome(self):
        n_max = 25
        params = SystemParams(delta=1.0, g=0.05, n_max=n_max)
        rho0 = thermal_density_matrix(1.2, TruncationPolicy(n_max=n_max, tail_tolerance=1e-6))
        sched = generate_schedule(ScheduleKind.ETIM, 9.0, 6)
        rec = sample_trajectory(rho0, sched, params, OutcomePolicy.RESET, seed=3, index=0)
        assert len(rec.outcomes) == 6
        assert len(rec.nbar) == 7
        assert np.all(rec.nbar >= 0)


class TestDecayEnvelope:
    def test_single_interval(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=50)
        lam_max, lam_bar = decay_envelope(params, [8.0])
        from mrcool.jc import effective_eigenvalues

        mags = np.abs(effective_eigenvalues(params, 8.0).lam)
        np.testing.assert_allclose(lam_max, mags, atol=1e-15)
        np.testing.assert_allclose(lam_bar, mags, atol=1e-15)

    def test_equal_intervals_stall_near_resonant_levels(self):
        # cos(0.32 sqrt(n)) has roots near n = 96 k^2: those levels barely decay
        params = SystemParams(delta=1.0, g=0.04, n_max=120)
        lam_max, _ = decay_envelope(params, [8.0])
        assert lam_max[96] > 0.9999
        assert lam_max[60] < 0.85

    def test_random_intervals_beat_the_maximum(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=100)
        sched = generate_schedule(ScheduleKind.UTIM, 8.0, 30, seed=2)
        lam_max, lam_bar = decay_envelope(params, sched)
        assert np.all(lam_bar[1:] <= lam_max[1:] + 1e-15)
        varying = lam_bar[1:] < lam_max[1:] - 1e-12
        assert varying.mean() > 0.95

    def test_empty_intervals_rejected(self):
        params = SystemParams(delta=1.0, g=0.04, n_max=10)
        with pytest.raises(DomainError):
            decay_envelope(params, [])
