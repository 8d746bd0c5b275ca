"""Qubit/resonator model: Hamiltonians, dressed spectrum, measurement operators.

The rotating-wave Hamiltonian conserves a^dag a + |e><e|, so it splits into a
one-dimensional block on |0,g> and 2x2 blocks on {|n,g>, |n-1,e>}.  Everything
here follows from diagonalizing those blocks: the dressed level structure, and
the closed-form Kraus operators of a projective qubit measurement after free
evolution for an interval tau.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    SIGMA_TILDE_MINUS,
    SIGMA_TILDE_PLUS,
    SIGMA_TILDE_Z,
    SIGMA_X,
    SIGMA_Z,
    DomainError,
    destroy,
    number,
    tensor_embed,
)


class RWAWarning(UserWarning):
    """Coupling large enough that the rotating-wave approximation degrades."""


@dataclass(frozen=True)
class SystemParams:
    """Model constants in units of the resonator frequency.

    delta: qubit splitting; g: qubit-resonator coupling; n_max: Fock cutoff.
    The qubit bias is fixed to zero.
    """

    delta: float
    g: float
    n_max: int

    def __post_init__(self):
        if self.delta <= 0:
            raise DomainError("delta must be positive")
        if self.g < 0:
            raise DomainError("g must be non-negative")
        if self.n_max < 1:
            raise DomainError("n_max must be at least 1")
        if self.g > 0.1 * self.delta:
            warnings.warn(
                f"g/delta = {self.g / self.delta:.3f} > 0.1: rotating-wave "
                "results are unreliable at this coupling",
                RWAWarning,
                stacklevel=2,
            )

    @property
    def n_levels(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class DressedSpectrum:
    """Per-block diagonalization data, indexed by n (entry 0 is unused).

    theta[n] is the mixing angle of the {|n,g>, |n-1,e>} block in (0, pi/2),
    omega_rabi[n] the half-splitting, eps_plus/eps_minus[n] the eigenvalues
    (n - 1/2) +- omega_rabi[n].
    """

    theta: np.ndarray
    omega_rabi: np.ndarray
    eps_plus: np.ndarray
    eps_minus: np.ndarray


@dataclass(frozen=True)
class EffectiveEvolution:
    """Ground-branch evolution over one interval, diagonal in the Fock basis.

    lam[n] is the amplitude for |n> to survive a ground-outcome measurement
    after evolving for tau; off_branch[n] = |<n-1,e|U(tau)|n,g>| is the weight
    lost to the excited branch.  |lam[n]|^2 + off_branch[n]^2 = 1.
    """

    tau: float
    lam: np.ndarray
    off_branch: np.ndarray


# Column map from the qubit energy basis (|g>, |e>) to the persistent-current
# basis (|up>, |down>): |g> = (|down> - |up>)/sqrt(2), |e> = (|down> + |up>)/sqrt(2).
# The signs are fixed by energy ordering: |g> must be the -delta/2 eigenstate
# of (delta/2) sigma_x so that <0,g|H|0,g> = -delta/2 in both models.
ENERGY_TO_CURRENT = np.array([[-1, 1], [1, 1]], dtype=complex) / np.sqrt(2.0)
ENERGY_TO_CURRENT.setflags(write=False)


def build_full_hamiltonian(params: SystemParams) -> np.ndarray:
    """Non-RWA Hamiltonian in the persistent-current basis.

    H = (delta/2) sigma_x + a^dag a - g (a + a^dag) sigma_z, with sigma_x and
    sigma_z acting on (|up>, |down>).
    """
    dim = params.n_levels
    a = destroy(dim)
    x = a + a.conj().T
    eye_q = np.eye(2, dtype=complex)
    h = (
        0.5 * params.delta * tensor_embed(SIGMA_X, np.eye(dim))
        + tensor_embed(eye_q, number(dim))
        - params.g * tensor_embed(SIGMA_Z, x)
    )
    return h


def full_hamiltonian_energy_basis(params: SystemParams) -> np.ndarray:
    """Non-RWA Hamiltonian rotated into the qubit energy basis (|g>, |e>)."""
    w = tensor_embed(ENERGY_TO_CURRENT, np.eye(params.n_levels))
    return w.conj().T @ build_full_hamiltonian(params) @ w


def build_jc_hamiltonian(params: SystemParams) -> np.ndarray:
    """Rotating-wave Hamiltonian in the qubit energy basis.

    H = a^dag a + (delta/2) sigma_z + g (a sigma_+ + a^dag sigma_-), exchanging
    single quanta between the qubit and the resonator.
    """
    dim = params.n_levels
    a = destroy(dim)
    h = (
        tensor_embed(np.eye(2, dtype=complex), number(dim))
        + 0.5 * params.delta * tensor_embed(SIGMA_TILDE_Z, np.eye(dim))
        + params.g * (tensor_embed(SIGMA_TILDE_PLUS, a) + tensor_embed(SIGMA_TILDE_MINUS, a.conj().T))
    )
    return h


def dressed_spectrum(params: SystemParams) -> DressedSpectrum:
    """Diagonalize every 2x2 excitation block in closed form.

    The angle branch is fixed so sin(2 theta_n) = g sqrt(n)/omega_rabi_n >= 0
    and cos(2 theta_n) = (delta - 1)/(2 omega_rabi_n), continuous through
    resonance.
    """
    detuning = params.delta - 1.0
    if params.g == 0.0 and detuning == 0.0:
        raise DomainError(
            "dressed blocks are degenerate at g = 0, delta = 1: mixing angle undefined"
        )
    n = np.arange(params.n_max + 1, dtype=float)
    with np.errstate(invalid="ignore"):
        omega = np.sqrt(0.25 * detuning**2 + params.g**2 * n)
    two_theta = np.arctan2(params.g * np.sqrt(n[1:]), 0.5 * detuning)
    theta = np.full(params.n_max + 1, np.nan)
    theta[1:] = 0.5 * two_theta
    omega[0] = np.nan
    eps_plus = (n - 0.5) + omega
    eps_minus = (n - 0.5) - omega
    return DressedSpectrum(theta=theta, omega_rabi=omega, eps_plus=eps_plus, eps_minus=eps_minus)


def effective_eigenvalues(params: SystemParams, tau: float) -> EffectiveEvolution:
    """Eigenvalues of the ground-branch evolution operator over one interval.

    lam[0] = exp(i delta tau / 2); for n >= 1,
    lam[n] = exp(-i (n - 1/2) tau) (cos(W_n tau) + i sin(W_n tau) cos 2theta_n)
    with W_n the block half-splitting, so
    |lam[n]|^2 = 1 - sin^2(W_n tau) sin^2(2 theta_n).
    """
    if tau <= 0:
        raise DomainError("tau must be positive")
    spec = dressed_spectrum(params)
    n = np.arange(1, params.n_max + 1, dtype=float)
    wt = spec.omega_rabi[1:] * tau
    c2t = np.cos(2.0 * spec.theta[1:])
    s2t = np.sin(2.0 * spec.theta[1:])
    lam = np.empty(params.n_max + 1, dtype=complex)
    lam[0] = np.exp(0.5j * params.delta * tau)
    lam[1:] = np.exp(-1j * (n - 0.5) * tau) * (np.cos(wt) + 1j * np.sin(wt) * c2t)
    off = np.zeros(params.n_max + 1)
    off[1:] = np.abs(np.sin(wt) * s2t)
    return EffectiveEvolution(tau=tau, lam=lam, off_branch=off)


def kraus_pair(params: SystemParams, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Measurement operators on the MR for outcomes g and e, qubit starting in g.

    M_g is diagonal with the effective eigenvalues; M_e lowers the phonon
    number by one, with amplitudes fixed by the same block exponential:
    M_e[n-1, n] = -i exp(-i (n - 1/2) tau) sin(W_n tau) sin(2 theta_n).
    Together they satisfy M_g^dag M_g + M_e^dag M_e = I.
    """
    ev = effective_eigenvalues(params, tau)
    spec = dressed_spectrum(params)
    m_g = np.diag(ev.lam)
    m_e = np.zeros((params.n_levels, params.n_levels), dtype=complex)
    n = np.arange(1, params.n_max + 1, dtype=float)
    amp = (
        -1j
        * np.exp(-1j * (n - 0.5) * tau)
        * np.sin(spec.omega_rabi[1:] * tau)
        * np.sin(2.0 * spec.theta[1:])
    )
    m_e[np.arange(params.n_max), np.arange(1, params.n_max + 1)] = amp
    return m_g, m_e


def excited_kraus_pair(params: SystemParams, tau: float) -> tuple[np.ndarray, np.ndarray]:
    """Measurement operators for a qubit starting in e: outcomes e and g.

    K_ee is diagonal (block n = m + 1 for MR level m); K_eg raises the phonon
    number by one as the quantum returns to the resonator.  At the truncation
    edge the partner block lies outside the space, so completeness holds for
    levels below n_max only; the protocol's guard band keeps population away
    from that edge.
    """
    if tau <= 0:
        raise DomainError("tau must be positive")
    detuning = params.delta - 1.0
    if params.g == 0.0 and detuning == 0.0:
        raise DomainError(
            "dressed blocks are degenerate at g = 0, delta = 1: mixing angle undefined"
        )
    # Blocks n = 1 .. n_max + 1 seen from the excited branch.
    n = np.arange(1, params.n_max + 2, dtype=float)
    omega = np.sqrt(0.25 * detuning**2 + params.g**2 * n)
    two_theta = np.arctan2(params.g * np.sqrt(n), 0.5 * detuning)
    wt = omega * tau
    phase = np.exp(-1j * (n - 0.5) * tau)
    k_ee = np.diag(phase * (np.cos(wt) - 1j * np.sin(wt) * np.cos(two_theta)))
    k_eg = np.zeros((params.n_levels, params.n_levels), dtype=complex)
    amp = -1j * phase[: params.n_max] * np.sin(wt[: params.n_max]) * np.sin(two_theta[: params.n_max])
    k_eg[np.arange(1, params.n_max + 1), np.arange(params.n_max)] = amp
    return k_ee, k_eg
