"""Dense numerical kernel for truncated qubit/oscillator Hilbert spaces.

Operators are plain complex numpy arrays in natural units: hbar = 1, all
energies and frequencies in units of the resonator frequency omega_m, times in
units of 1/omega_m.  The only dimensionful entry point is
:func:`thermal_occupation`, which takes kelvin and rad/s.

Joint-space operators use the Kronecker convention "qubit factor leftmost",
so the basis is ordered |g,0>, |g,1>, ..., |g,N>, |e,0>, ..., |e,N>.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

HBAR = 1.054571817e-34  # J s
KB = 1.380649e-23  # J / K

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class DomainError(ValueError):
    """Input outside an operation's stated domain."""


class TruncationError(ValueError):
    """Requested truncation cannot hold the state's tail below tolerance."""

    def __init__(self, message: str, min_n_max: int):
        super().__init__(message)
        self.min_n_max = min_n_max


class Space(Enum):
    MR = "mr"
    JOINT = "joint"


# ---------------------------------------------------------------------------
# Elementary operators
# ---------------------------------------------------------------------------

def destroy(dim: int) -> np.ndarray:
    """Bosonic annihilation operator on a Fock space truncated at dim levels."""
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1).astype(complex)


def number(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float)).astype(complex)


# Pauli matrices in the persistent-current basis (|up>, |down>).
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Pauli matrices in the qubit energy basis, ordered (|g>, |e>), with the
# sign convention sigma_z|g> = -|g>.
SIGMA_TILDE_Z = np.array([[-1, 0], [0, 1]], dtype=complex)
SIGMA_TILDE_PLUS = np.array([[0, 0], [1, 0]], dtype=complex)   # |e><g|
SIGMA_TILDE_MINUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e|

for _m in (SIGMA_X, SIGMA_Z, SIGMA_TILDE_Z, SIGMA_TILDE_PLUS, SIGMA_TILDE_MINUS):
    _m.setflags(write=False)


def is_hermitian(a: np.ndarray, tol: float = HERMITIAN_TOL) -> bool:
    return bool(np.max(np.abs(a - a.conj().T)) < tol)


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    d = u.shape[0]
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(d))) < tol)


# ---------------------------------------------------------------------------
# States
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TruncationPolicy:
    """Fock-space cutoff and the thermal tail mass it must keep below."""

    n_max: int
    tail_tolerance: float = 1e-12

    def __post_init__(self):
        if self.n_max < 0:
            raise DomainError("n_max must be non-negative")
        if not 0 < self.tail_tolerance < 1:
            raise DomainError("tail_tolerance must lie in (0, 1)")


def min_n_max_for_thermal(nbar: float, tail_tolerance: float = 1e-12) -> int:
    """Smallest cutoff N with sum_{n>N} p_n < tail_tolerance for a thermal state.

    The geometric tail mass above N is (nbar/(1+nbar))**(N+1).
    """
    if nbar < 0:
        raise DomainError("nbar must be non-negative")
    if nbar == 0:
        return 0
    r = nbar / (1.0 + nbar)
    n = int(np.ceil(np.log(tail_tolerance) / np.log(r))) - 1
    n = max(n, 0)
    while r ** (n + 1) >= tail_tolerance:
        n += 1
    return n


def default_n_max(nbar: float, tail_tolerance: float = 1e-12, guard: int = 20) -> int:
    """Automatic cutoff: thermal tail bound plus a guard band for bath heating."""
    return min_n_max_for_thermal(nbar, tail_tolerance) + guard


@dataclass(frozen=True)
class DensityMatrix:
    """Trace-one positive Hermitian operator on the MR or joint qubit x MR space.

    The array is copied and frozen on construction; `psd_tol` loosens the
    positivity check for integrator outputs that are positive only up to the
    stated numerical tolerance.
    """

    data: np.ndarray
    space: Space
    psd_tol: float = field(default=PSD_TOL, compare=False)

    def __post_init__(self):
        arr = np.array(self.data, dtype=complex)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DomainError("density matrix must be a square 2-d array")
        if self.space is Space.JOINT and arr.shape[0] % 2 != 0:
            raise DomainError("joint-space dimension must be even")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        self.validate()

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    @property
    def n_levels(self) -> int:
        """Fock-space dimension N_max + 1 of the MR factor."""
        return self.dim // 2 if self.space is Space.JOINT else self.dim

    def validate(self):
        tr = np.trace(self.data)
        if abs(tr - 1.0) > TRACE_TOL:
            raise DomainError(f"trace {tr} deviates from 1 beyond {TRACE_TOL}")
        if not is_hermitian(self.data):
            raise DomainError("density matrix is not Hermitian within tolerance")
        if self._min_eigenvalue() < -self.psd_tol:
            raise DomainError(
                f"density matrix has eigenvalue {self._min_eigenvalue():.3e} "
                f"below -{self.psd_tol:g}"
            )

    def _min_eigenvalue(self) -> float:
        off = self.data - np.diag(np.diag(self.data))
        if not off.any():
            return float(np.min(self.data.diagonal().real))
        return float(np.linalg.eigvalsh(self.data)[0])

    def is_diagonal(self, tol: float = 0.0) -> bool:
        off = self.data - np.diag(np.diag(self.data))
        return bool(np.max(np.abs(off)) <= tol) if off.size else True

    def populations(self) -> np.ndarray:
        return self.data.diagonal().real.copy()


def thermal_occupation(temperature: float, frequency: float) -> float:
    """Bose-Einstein occupation 1/(exp(hbar*w/kB*T) - 1).

    Args:
        temperature: bath temperature in kelvin.
        frequency: angular frequency in rad/s.
    """
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    if frequency <= 0:
        raise DomainError("frequency must be positive")
    if temperature == 0:
        return 0.0
    x = HBAR * frequency / (KB * temperature)
    with np.errstate(over="ignore"):
        denom = np.expm1(x)
    if not np.isfinite(denom):
        return 0.0
    return float(1.0 / denom)


def thermal_density_matrix(nbar: float, policy: TruncationPolicy) -> DensityMatrix:
    """Truncated thermal state with p_n proportional to nbar^n/(1+nbar)^(n+1).

    Renormalized to unit trace after truncation.  Raises TruncationError,
    reporting the minimal admissible cutoff, if the discarded tail mass
    exceeds the policy's tolerance.
    """
    if nbar < 0:
        raise DomainError("nbar must be non-negative")
    needed = min_n_max_for_thermal(nbar, policy.tail_tolerance)
    if policy.n_max < needed:
        raise TruncationError(
            f"n_max={policy.n_max} keeps tail mass above {policy.tail_tolerance:g} "
            f"for nbar={nbar}; need n_max >= {needed}",
            min_n_max=needed,
        )
    n = np.arange(policy.n_max + 1, dtype=float)
    if nbar == 0:
        p = np.zeros(policy.n_max + 1)
        p[0] = 1.0
    else:
        r = nbar / (1.0 + nbar)
        p = r ** n / (1.0 + nbar)
        p /= p.sum()
    return DensityMatrix(np.diag(p.astype(complex)), Space.MR)


# ---------------------------------------------------------------------------
# Matrix exponential oracle and tensor plumbing
# ---------------------------------------------------------------------------

def matrix_exponential(h: np.ndarray, t: float) -> np.ndarray:
    """Unitary exp(-i*h*t) of a Hermitian h, via spectral decomposition.

    Eigendecomposition is preferred over scaling-and-squaring here because the
    inputs are Hermitian by contract and the spectral route gives a unitary
    result to machine precision.
    """
    h = np.asarray(h, dtype=complex)
    if not is_hermitian(h):
        raise DomainError("matrix_exponential requires a Hermitian input")
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * t)
    return (v * phases) @ v.conj().T


def tensor_embed(qubit_op: np.ndarray, mr_op: np.ndarray) -> np.ndarray:
    """Kronecker product with the qubit factor leftmost.

    The joint basis is |g,0>, |g,1>, ..., |e,0>, |e,1>, ...: joint index
    q*(N_max+1) + n.
    """
    qubit_op = np.asarray(qubit_op, dtype=complex)
    mr_op = np.asarray(mr_op, dtype=complex)
    if qubit_op.shape != (2, 2):
        raise DomainError("qubit operator must be 2x2")
    if mr_op.ndim != 2 or mr_op.shape[0] != mr_op.shape[1]:
        raise DomainError("MR operator must be square")
    return np.kron(qubit_op, mr_op)


def partial_trace_qubit(rho: DensityMatrix) -> DensityMatrix:
    """Trace out the qubit of a joint state, leaving the MR density matrix."""
    if rho.space is not Space.JOINT:
        raise DomainError("partial_trace_qubit requires a joint-space state")
    m = rho.n_levels
    r4 = rho.data.reshape(2, m, 2, m)
    reduced = np.einsum("qmqn->mn", r4)
    return DensityMatrix(reduced, Space.MR, psd_tol=rho.psd_tol)
