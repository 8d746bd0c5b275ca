"""Lindblad evolution of the joint state between measurements.

Quantifies how much resonator damping degrades the measurement protocol: the
joint state evolves under the rotating-wave Hamiltonian plus thermal-bath
dissipators for each interval, then the qubit is projected and re-prepared.
Integration is fixed-step classical RK4 (no adaptivity: segment durations are
short, spectra known, and reproducibility matters more than step economy).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import kernels
from .core import DensityMatrix, DomainError, Space
from .jc import SystemParams, build_jc_hamiltonian
from .protocol import (
    CoolingRecord,
    MeasurementSchedule,
    OutcomePolicy,
    RunMode,
    trajectory_stream,
)

TRACE_DRIFT_TOL = 1e-8  # per 100 time units
POSITIVITY_FLOOR = -1e-6


class ConfigurationError(ValueError):
    """Integrator configuration violates its stability contract."""


class NumericalFailure(RuntimeError):
    """Integration left the physical state space beyond tolerance."""


@dataclass(frozen=True)
class DissipationParams:
    """Bath rates in units of the resonator frequency.

    gamma_m is the resonator energy decay rate (omega_m / Q_m), nbar_bath the
    bath occupation; the qubit rates default to zero because resonator
    relaxation is the effect under study.
    """

    gamma_m: float
    nbar_bath: float
    gamma_q_relax: float = 0.0
    gamma_q_phi: float = 0.0

    def __post_init__(self):
        for name in ("gamma_m", "nbar_bath", "gamma_q_relax", "gamma_q_phi"):
            if getattr(self, name) < 0:
                raise DomainError(f"{name} must be non-negative")

    @property
    def all_zero(self) -> bool:
        return (
            self.gamma_m == 0.0
            and self.gamma_q_relax == 0.0
            and self.gamma_q_phi == 0.0
        )


@dataclass(frozen=True)
class IntegratorConfig:
    dt: float = 0.05
    method: str = "rk4"

    def __post_init__(self):
        if self.dt <= 0:
            raise DomainError("dt must be positive")
        if self.method != "rk4":
            raise DomainError("only the fixed rk4 step is supported")


def _stiffest_dissipative_rate(diss: DissipationParams, n_max: int) -> float:
    # fastest decay coefficient in the generator: top-level ladder terms plus
    # the qubit channels
    ladder = diss.gamma_m * (2.0 * diss.nbar_bath + 1.0) * n_max
    return ladder + diss.gamma_q_relax + diss.gamma_q_phi


def max_stable_dt(params: SystemParams, diss: DissipationParams | None = None) -> float:
    """Largest step resolving the qubit splitting and the top Rabi frequency.

    Strong damping adds real stiffness of order gamma*(2 nbar + 1)*n_max; the
    step must also keep that inside the explicit-RK4 stability region.
    """
    omega_top = np.sqrt(0.25 * (params.delta - 1.0) ** 2 + params.g**2 * params.n_max)
    limit = 0.05 / max(1.0, params.delta, omega_top)
    if diss is not None:
        rate = _stiffest_dissipative_rate(diss, params.n_max)
        if rate > 0:
            limit = min(limit, 1.0 / rate)
    return limit


def default_config(params: SystemParams, diss: DissipationParams | None = None) -> IntegratorConfig:
    return IntegratorConfig(dt=max_stable_dt(params, diss))


def check_step_size(cfg: IntegratorConfig, params: SystemParams, diss: DissipationParams | None = None):
    limit = max_stable_dt(params, diss)
    if cfg.dt > limit * (1.0 + 1e-12):
        raise ConfigurationError(
            f"dt = {cfg.dt:g} exceeds the stability bound {limit:g} "
            "(0.05 / max(1, delta, top Rabi frequency), tightened by the "
            "dissipative stiffness when damping is strong)"
        )


def _csr_parts(h: np.ndarray):
    h_csr = sp.csr_matrix(h)
    return (
        h_csr.data.astype(complex),
        h_csr.indices.astype(np.int64),
        h_csr.indptr.astype(np.int64),
    )


def lindblad_evolve_unnormalized(
    rho: np.ndarray,
    h: np.ndarray,
    diss: DissipationParams,
    duration: float,
    cfg: IntegratorConfig,
) -> np.ndarray:
    """Raw integrator output: no trace renormalization, no validity checks.

    Exposed so callers can measure trace drift directly; most code wants
    :func:`lindblad_evolve`.
    """
    if duration < 0:
        raise DomainError("duration must be non-negative")
    d = rho.shape[0]
    if h.shape != (d, d):
        raise DomainError("Hamiltonian and state dimensions differ")
    if d % 2 != 0:
        raise DomainError("expected a joint qubit x MR state (even dimension)")
    if duration == 0:
        return np.array(rho, dtype=complex)
    m = d // 2
    n_steps = max(1, int(np.ceil(duration / cfg.dt)))
    dt = duration / n_steps
    h_data, h_indices, h_indptr = _csr_parts(h)
    return kernels.rk4_evolve(
        np.asarray(rho, dtype=complex),
        h_data,
        h_indices,
        h_indptr,
        m,
        diss.gamma_m * (diss.nbar_bath + 1.0),
        diss.gamma_m * diss.nbar_bath,
        diss.gamma_q_relax,
        diss.gamma_q_phi,
        dt,
        n_steps,
    )


def _check_evolution(raw: np.ndarray, duration: float, cfg: IntegratorConfig, trace0: float):
    drift = abs(np.trace(raw).real - trace0)
    budget = TRACE_DRIFT_TOL * max(1.0, duration / 100.0)
    if drift > budget:
        raise NumericalFailure(
            f"trace drift {drift:.3e} exceeds {budget:.3e} over duration "
            f"{duration:g} at dt {cfg.dt:g}"
        )
    min_eig = float(np.linalg.eigvalsh(raw)[0])
    if min_eig < POSITIVITY_FLOOR * trace0:
        raise NumericalFailure(
            f"smallest eigenvalue {min_eig:.3e} below {POSITIVITY_FLOOR:g}: "
            f"integration unstable (duration {duration:g}, dt {cfg.dt:g})"
        )


def lindblad_evolve(
    rho: DensityMatrix,
    h: np.ndarray,
    diss: DissipationParams,
    duration: float,
    cfg: IntegratorConfig,
    params: SystemParams | None = None,
) -> DensityMatrix:
    """Evolve a joint state under the master equation for the given duration.

    Hermiticity is enforced by per-step symmetrization inside the kernel;
    trace drift and positivity are checked on the result and the trace is
    then renormalized exactly.  Passing `params` additionally enforces the
    step-size stability bound.
    """
    if rho.space is not Space.JOINT:
        raise DomainError("lindblad_evolve expects a joint-space state")
    if params is not None:
        check_step_size(cfg, params)
    raw = lindblad_evolve_unnormalized(rho.data, h, diss, duration, cfg)
    _check_evolution(raw, duration, cfg, 1.0)
    raw /= np.trace(raw).real
    return DensityMatrix(raw, Space.JOINT, psd_tol=-POSITIVITY_FLOOR)


def embed_ground(rho_m: DensityMatrix) -> np.ndarray:
    """Joint array for qubit ground x given MR state."""
    m = rho_m.dim
    joint = np.zeros((2 * m, 2 * m), dtype=complex)
    joint[:m, :m] = rho_m.data
    return joint


def damped_protocol_run(
    rho_m0: DensityMatrix,
    schedule: MeasurementSchedule,
    params: SystemParams,
    diss: DissipationParams,
    policy: OutcomePolicy | None = None,
    cfg: IntegratorConfig | None = None,
    seed: int = 0,
    index: int = 0,
) -> CoolingRecord:
    """Measurement protocol with Lindblad evolution between measurements.

    policy=None conditions deterministically on the all-ground record, like
    postselected_run; otherwise outcomes are drawn by the Born rule and the
    excited branch follows the policy.  The qubit is re-prepared consistently
    with each outcome (projection leaves it pure), so the recorded
    observables always describe the MR factor alone.
    """
    if rho_m0.space is not Space.MR:
        raise DomainError("damped_protocol_run starts from an MR-only state")
    if rho_m0.dim != params.n_levels:
        raise DomainError(
            f"state dimension {rho_m0.dim} does not match n_max + 1 = {params.n_levels}"
        )
    if cfg is None:
        cfg = default_config(params, diss)
    check_step_size(cfg, params, diss)

    h = build_jc_hamiltonian(params)
    m = params.n_levels
    nvec = np.arange(m)
    gen = trajectory_stream(seed, index) if policy is not None else None

    joint = embed_ground(rho_m0)
    qubit_level = 0  # current pure qubit preparation: 0 = ground block

    def mr_block(arr, level):
        s = slice(level * m, (level + 1) * m)
        return arr[s, s]

    nbar0, fid0 = _mr_observables(mr_block(joint, 0), nvec)
    nbar = [nbar0]
    fidelity = [fid0]
    survival = [1.0]
    outcomes = []

    for tau_j in schedule.intervals:
        raw = lindblad_evolve_unnormalized(joint, h, diss, tau_j, cfg)
        _check_evolution(raw, tau_j, cfg, 1.0)
        p_ground = float(np.trace(mr_block(raw, 0)).real)
        p_ground = min(max(p_ground, 0.0), 1.0)
        if policy is None:
            take_ground = True
        else:
            take_ground = gen.random() < p_ground
        outcomes.append("g" if take_ground else "e")
        if take_ground:
            rho_m = np.array(mr_block(raw, 0)) / p_ground
            survival.append(survival[-1] * p_ground)
            qubit_level = 0
        else:
            if policy is OutcomePolicy.DISCARD:
                return CoolingRecord(
                    nbar=np.array(nbar),
                    survival=np.array(survival),
                    fidelity=np.array(fidelity),
                    schedule=schedule,
                    mode=RunMode.TRAJECTORY,
                    outcomes="".join(outcomes),
                )
            rho_m = np.array(mr_block(raw, 1)) / (1.0 - p_ground)
            survival.append(survival[-1] * (1.0 - p_ground))
            qubit_level = 0 if policy is OutcomePolicy.RESET else 1
        joint = np.zeros_like(joint)
        s = slice(qubit_level * m, (qubit_level + 1) * m)
        joint[s, s] = rho_m
        n_j, f_j = _mr_observables(rho_m, nvec)
        nbar.append(n_j)
        fidelity.append(f_j)

    mode = RunMode.POSTSELECTED if policy is None else RunMode.TRAJECTORY
    return CoolingRecord(
        nbar=np.array(nbar),
        survival=np.array(survival),
        fidelity=np.array(fidelity),
        schedule=schedule,
        mode=mode,
        outcomes="".join(outcomes) if policy is not None else None,
    )


def _mr_observables(block: np.ndarray, nvec: np.ndarray) -> tuple[float, float]:
    diag = block.diagonal().real
    return float(nvec @ diag), float(diag[0])
