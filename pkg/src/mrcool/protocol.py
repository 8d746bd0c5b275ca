"""Repeated-measurement cooling protocol: schedules, runs, and observables.

Between measurements the joint system evolves freely; a projective qubit
measurement then either keeps the ground branch (diagonal operator, never
moves population upward) or sheds one phonon into the excited branch.  The
deterministic post-selected run conditions on the all-ground record; the
trajectory sampler draws outcomes by the Born rule and applies one of three
policies after an excited outcome.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .core import DensityMatrix, DomainError, Space
from .jc import SystemParams, effective_eigenvalues, excited_kraus_pair, kraus_pair

SURVIVAL_FLOOR = 1e-300

# Second Philox key word for schedule jitter, keeping it off the trajectory
# streams which use the trajectory index there.
_SCHEDULE_STREAM = np.uint64(0xFFFFFFFFFFFFFFFF)


class ScheduleKind(Enum):
    ETIM = "etim"
    UTIM = "utim"


class RunMode(Enum):
    POSTSELECTED = "postselected"
    TRAJECTORY = "trajectory"


class OutcomePolicy(Enum):
    """What happens to a trajectory after an excited measurement outcome."""

    DISCARD = "discard"
    RESET = "reset"
    TRACK = "track"


@dataclass(frozen=True)
class MeasurementSchedule:
    """Measurement times t_j = j*tau + jitter[j-1] for j = 1..count.

    ETIM schedules have zero jitter; UTIM jitter is uniform on the open
    interval (-tau/2, tau/2), which bounds every realized interval inside
    (0, 2*tau).
    """

    kind: ScheduleKind
    tau: float
    count: int
    jitter: np.ndarray
    seed: int

    def __post_init__(self):
        if self.tau <= 0:
            raise DomainError("tau must be positive")
        if self.count < 1:
            raise DomainError("count must be at least 1")
        jit = np.array(self.jitter, dtype=float)
        if jit.shape != (self.count,):
            raise DomainError("jitter must have one entry per measurement")
        if self.kind is ScheduleKind.ETIM and jit.any():
            raise DomainError("ETIM schedules must have zero jitter")
        if np.any(np.abs(jit) >= self.tau / 2):
            raise DomainError("jitter must lie inside (-tau/2, tau/2)")
        jit.setflags(write=False)
        object.__setattr__(self, "jitter", jit)

    @property
    def intervals(self) -> np.ndarray:
        """Realized intervals tau_j = tau + jitter_j - jitter_{j-1}."""
        prev = np.concatenate(([0.0], self.jitter[:-1]))
        return self.tau + self.jitter - prev

    @property
    def times(self) -> np.ndarray:
        return self.tau * np.arange(1, self.count + 1) + self.jitter


def _stream(seed: int, word: np.uint64) -> np.random.Generator:
    key = np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), word], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def trajectory_stream(master_seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for one trajectory, independent per index."""
    return _stream(master_seed, np.uint64(index))


def generate_schedule(
    kind: ScheduleKind, tau: float, count: int, seed: int = 0
) -> MeasurementSchedule:
    """Build a measurement schedule; a deterministic function of the seed.

    ETIM ignores the seed.  UTIM jitter comes from a counter-based generator,
    redrawing the measure-zero boundary hits so the open-interval contract
    holds exactly.
    """
    if tau <= 0:
        raise DomainError("tau must be positive")
    if count < 1:
        raise DomainError("count must be at least 1")
    if kind is ScheduleKind.ETIM:
        jitter = np.zeros(count)
    else:
        gen = _stream(seed, _SCHEDULE_STREAM)
        jitter = gen.uniform(-tau / 2, tau / 2, count)
        bad = np.abs(jitter) >= tau / 2
        while bad.any():
            jitter[bad] = gen.uniform(-tau / 2, tau / 2, int(bad.sum()))
            bad = np.abs(jitter) >= tau / 2
    return MeasurementSchedule(kind=kind, tau=tau, count=count, jitter=jitter, seed=seed)


@dataclass(frozen=True)
class CoolingRecord:
    """Per-measurement time series; index 0 is the pre-measurement state.

    In postselected mode `survival` is the cumulative all-ground probability.
    In trajectory mode it is the cumulative probability of the realized
    outcome string, and `outcomes` holds one character per performed
    measurement; a discarded trajectory stops recording states at the excited
    outcome, so len(outcomes) == len(nbar) there and len(nbar) - 1 otherwise.
    """

    nbar: np.ndarray
    survival: np.ndarray
    fidelity: np.ndarray
    schedule: MeasurementSchedule
    mode: RunMode
    outcomes: str | None = None
    truncated: bool = False

    @property
    def steps(self) -> int:
        return len(self.nbar) - 1


def observables(rho: DensityMatrix) -> tuple[float, float]:
    """Mean phonon number and ground-state population of an MR state."""
    if rho.space is not Space.MR:
        raise DomainError("observables expects an MR-only density matrix")
    n = np.arange(rho.dim)
    nbar = float(np.real(n @ rho.data.diagonal()))
    fidelity = float(np.real(rho.data[0, 0]))
    return nbar, fidelity


def _check_mr_state(rho0: DensityMatrix, params: SystemParams):
    if rho0.space is not Space.MR:
        raise DomainError("protocol runs start from an MR-only state")
    if rho0.dim != params.n_levels:
        raise DomainError(
            f"state dimension {rho0.dim} does not match n_max + 1 = {params.n_levels}"
        )


def postselected_run(
    rho0: DensityMatrix, schedule: MeasurementSchedule, params: SystemParams
) -> CoolingRecord:
    """Deterministic evolution conditioned on every outcome being ground.

    Each step applies the diagonal ground-branch operator and renormalizes;
    the survival probability accumulates the step norms.  Diagonal inputs
    take an O(n_max) per-step path.  If the cumulative survival underflows
    the run stops early with the `truncated` flag set.
    """
    _check_mr_state(rho0, params)
    weights: dict[float, np.ndarray] = {}
    lams: dict[float, np.ndarray] = {}
    for tau_j in schedule.intervals:
        if tau_j not in lams:
            lam = effective_eigenvalues(params, tau_j).lam
            lams[tau_j] = lam
            weights[tau_j] = np.abs(lam) ** 2

    nvec = np.arange(params.n_levels)
    diagonal = rho0.is_diagonal()
    pops = rho0.populations() if diagonal else None
    rho = None if diagonal else rho0.data.copy()

    nbar = [float(nvec @ pops) if diagonal else float(np.real(nvec @ rho.diagonal()))]
    fidelity = [float(pops[0]) if diagonal else float(np.real(rho[0, 0]))]
    survival = [1.0]
    truncated = False

    for tau_j in schedule.intervals:
        if diagonal:
            pops = pops * weights[tau_j]
            norm = float(pops.sum())
        else:
            lam = lams[tau_j]
            rho = rho * np.outer(lam, lam.conj())
            norm = float(np.real(np.trace(rho)))
        total = survival[-1] * norm
        if total < SURVIVAL_FLOOR:
            truncated = True
            break
        if diagonal:
            pops /= norm
            nbar.append(float(nvec @ pops))
            fidelity.append(float(pops[0]))
        else:
            rho /= norm
            nbar.append(float(np.real(nvec @ rho.diagonal())))
            fidelity.append(float(np.real(rho[0, 0])))
        survival.append(total)

    return CoolingRecord(
        nbar=np.array(nbar),
        survival=np.array(survival),
        fidelity=np.array(fidelity),
        schedule=schedule,
        mode=RunMode.POSTSELECTED,
        truncated=truncated,
    )


class _TrajectoryState:
    """MR state plus which qubit level the protocol is currently tracking."""

    def __init__(self, rho0: DensityMatrix, params: SystemParams):
        self.diagonal = rho0.is_diagonal()
        self.pops = rho0.populations() if self.diagonal else None
        self.rho = None if self.diagonal else rho0.data.copy()
        self.branch = "g"
        self.nvec = np.arange(params.n_levels)

    def probability(self, op_sq: np.ndarray, op: np.ndarray) -> float:
        if self.diagonal:
            return float(op_sq @ self.pops)
        out = op @ self.rho @ op.conj().T
        return float(np.real(np.trace(out)))

    def apply(self, op: np.ndarray, norm: float):
        if self.diagonal:
            w = np.abs(op) ** 2
            if np.count_nonzero(op - np.diag(np.diag(op))):
                # single off-diagonal band: move populations along it
                new = np.zeros_like(self.pops)
                rows, cols = np.nonzero(op)
                new[rows] += w[rows, cols] * self.pops[cols]
                self.pops = new / norm
            else:
                self.pops = np.diag(w) * self.pops / norm
        else:
            self.rho = op @ self.rho @ op.conj().T / norm

    def observe(self) -> tuple[float, float]:
        if self.diagonal:
            return float(self.nvec @ self.pops), float(self.pops[0])
        return (
            float(np.real(self.nvec @ self.rho.diagonal())),
            float(np.real(self.rho[0, 0])),
        )


def sample_trajectory(
    rho0: DensityMatrix,
    schedule: MeasurementSchedule,
    params: SystemParams,
    policy: OutcomePolicy,
    seed: int,
    index: int = 0,
) -> CoolingRecord:
    """One Born-rule trajectory of the measurement record.

    Outcomes are drawn from stream (seed, index), so ensembles over indices
    are reproducible and order-independent.  The policy governs the excited
    branch: DISCARD aborts, RESET re-prepares the qubit in ground, TRACK keeps
    following the excited branch with its own operator pair.
    """
    _check_mr_state(rho0, params)
    gen = trajectory_stream(seed, index)

    pair_cache: dict[float, tuple] = {}

    def pairs(tau_j):
        if tau_j not in pair_cache:
            m_g, m_e = kraus_pair(params, tau_j)
            k_ee, k_eg = excited_kraus_pair(params, tau_j)
            pair_cache[tau_j] = (
                m_g,
                m_e,
                k_ee,
                k_eg,
                np.abs(np.diag(m_g)) ** 2,
                (np.abs(m_e) ** 2).sum(axis=0),
                np.abs(np.diag(k_ee)) ** 2,
                (np.abs(k_eg) ** 2).sum(axis=0),
            )
        return pair_cache[tau_j]

    state = _TrajectoryState(rho0, params)
    n0, f0 = state.observe()
    nbar = [n0]
    fidelity = [f0]
    survival = [1.0]
    outcomes = []

    for tau_j in schedule.intervals:
        m_g, m_e, k_ee, k_eg, wg, we, vee, veg = pairs(tau_j)
        if state.branch == "g":
            p_ground = state.probability(wg, m_g)
            op_g, op_e = m_g, m_e
        else:
            p_ground = state.probability(veg, k_eg)
            op_g, op_e = k_eg, k_ee
        p_ground = min(max(p_ground, 0.0), 1.0)
        ground = gen.random() < p_ground
        outcomes.append("g" if ground else "e")
        if ground:
            state.apply(op_g, p_ground)
            state.branch = "g"
            survival.append(survival[-1] * p_ground)
        else:
            if policy is OutcomePolicy.DISCARD:
                survival_arr = np.array(survival)
                return CoolingRecord(
                    nbar=np.array(nbar),
                    survival=survival_arr,
                    fidelity=np.array(fidelity),
                    schedule=schedule,
                    mode=RunMode.TRAJECTORY,
                    outcomes="".join(outcomes),
                )
            state.apply(op_e, 1.0 - p_ground)
            survival.append(survival[-1] * (1.0 - p_ground))
            state.branch = "g" if policy is OutcomePolicy.RESET else "e"
        n_j, f_j = state.observe()
        nbar.append(n_j)
        fidelity.append(f_j)

    return CoolingRecord(
        nbar=np.array(nbar),
        survival=np.array(survival),
        fidelity=np.array(fidelity),
        schedule=schedule,
        mode=RunMode.TRAJECTORY,
        outcomes="".join(outcomes),
    )


def survival_ensemble(
    rho0: DensityMatrix,
    schedule: MeasurementSchedule,
    params: SystemParams,
    n_trajectories: int,
    seed: int,
) -> np.ndarray:
    """All-ground fraction after each measurement over a trajectory ensemble.

    Vectorizes the discard-policy sampler across trajectories for diagonal
    initial states, reproducing exactly the outcome draws that
    sample_trajectory(seed=seed, index=k) would make.
    """
    _check_mr_state(rho0, params)
    if n_trajectories < 1:
        raise DomainError("need at least one trajectory")
    if not rho0.is_diagonal():
        counts = np.zeros(schedule.count + 1)
        counts[0] = n_trajectories
        for k in range(n_trajectories):
            rec = sample_trajectory(rho0, schedule, params, OutcomePolicy.DISCARD, seed, k)
            n_ground = rec.outcomes.count("g")
            if rec.outcomes.endswith("e"):
                counts[1 : n_ground + 1] += 1
            else:
                counts[1:] += 1
        return counts / n_trajectories

    weights: dict[float, np.ndarray] = {}
    for tau_j in schedule.intervals:
        if tau_j not in weights:
            weights[tau_j] = np.abs(effective_eigenvalues(params, tau_j).lam) ** 2

    uniforms = np.empty((n_trajectories, schedule.count))
    for k in range(n_trajectories):
        uniforms[k] = trajectory_stream(seed, k).random(schedule.count)

    pops = np.tile(rho0.populations(), (n_trajectories, 1))
    alive = np.ones(n_trajectories, dtype=bool)
    fractions = np.empty(schedule.count + 1)
    fractions[0] = 1.0
    for j, tau_j in enumerate(schedule.intervals):
        w = weights[tau_j]
        p_ground = pops[alive] @ w
        ground = uniforms[alive, j] < p_ground
        idx = np.flatnonzero(alive)
        pops[idx[ground]] = pops[idx[ground]] * w / p_ground[ground, None]
        alive[idx[~ground]] = False
        fractions[j + 1] = alive.sum() / n_trajectories
    return fractions


def decay_envelope(
    params: SystemParams, intervals
) -> tuple[np.ndarray, np.ndarray]:
    """Per-level maximum and geometric mean of the survival amplitudes.

    Levels whose maximum stays near one survive the whole schedule; under
    random intervals the geometric mean drops strictly below the maximum
    wherever the amplitude actually varies, which is why random schedules
    do not stall.
    """
    if isinstance(intervals, MeasurementSchedule):
        intervals = intervals.intervals
    taus = np.atleast_1d(np.asarray(intervals, dtype=float))
    if taus.size == 0:
        raise DomainError("decay_envelope needs at least one interval")
    mags = np.stack([np.abs(effective_eigenvalues(params, t).lam) for t in taus])
    lam_max = mags.max(axis=0)
    with np.errstate(divide="ignore"):
        logs = np.log(mags)
    lam_bar = np.exp(logs.mean(axis=0))
    lam_bar[np.isneginf(logs).any(axis=0)] = 0.0
    return lam_max, lam_bar
