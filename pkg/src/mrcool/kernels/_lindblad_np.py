"""Pure-numpy master-equation stepper; reference twin of the compiled kernel.

The generator is
    drho/dt = -i[H, rho] + g_down D[a] + g_up D[a^dag]
              + g_relax D[sigma_-] + (g_phi/2) D[sigma_z]
on the joint qubit x MR space (qubit factor leftmost, ground block first).
H enters in CSR form; the ladder dissipators are applied as index shifts on
the MR axes, so one sparse product per stage is the only matrix multiply.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp


class _Workspace:
    def __init__(self, m: int):
        mr_n = np.arange(m, dtype=float)
        n_joint = np.tile(mr_n, 2)
        e_joint = np.repeat([0.0, 1.0], m)
        self.nsum = n_joint[:, None] + n_joint[None, :]
        # a a^dag of the *truncated* raising operator: n+1 below the edge, 0 at
        # it.  Using n+1 everywhere would leak trace at the cutoff.
        up_n = np.where(mr_n < m - 1, mr_n + 1.0, 0.0)
        up_joint = np.tile(up_n, 2)
        self.upsum = up_joint[:, None] + up_joint[None, :]
        self.esum = e_joint[:, None] + e_joint[None, :]
        root = np.sqrt(np.arange(1, m, dtype=float))
        self.w_down = (root[:, None] * root[None, :]).reshape(1, m - 1, 1, m - 1)
        self.w_up = self.w_down


def _rhs(rho, h, m, g_down, g_up, g_relax, g_phi, ws):
    c = h @ rho
    out = -1j * (c - c.conj().T)
    r4 = rho.reshape(2, m, 2, m)
    o4 = out.reshape(2, m, 2, m)
    if g_down != 0.0:
        o4[:, :-1, :, :-1] += g_down * (ws.w_down * r4[:, 1:, :, 1:])
        out -= (0.5 * g_down) * (ws.nsum * rho)
    if g_up != 0.0:
        o4[:, 1:, :, 1:] += g_up * (ws.w_up * r4[:, :-1, :, :-1])
        out -= (0.5 * g_up) * (ws.upsum * rho)
    if g_relax != 0.0:
        o4[0, :, 0, :] += g_relax * r4[1, :, 1, :]
        out -= (0.5 * g_relax) * (ws.esum * rho)
    if g_phi != 0.0:
        o4[0, :, 1, :] -= g_phi * r4[0, :, 1, :]
        o4[1, :, 0, :] -= g_phi * r4[1, :, 0, :]
    return out


def rk4_evolve(
    rho: np.ndarray,
    h_data: np.ndarray,
    h_indices: np.ndarray,
    h_indptr: np.ndarray,
    m_levels: int,
    g_down: float,
    g_up: float,
    g_relax: float,
    g_phi: float,
    dt: float,
    n_steps: int,
) -> np.ndarray:
    """Advance rho by n_steps classical RK4 steps, re-Hermitizing each step."""
    d = 2 * m_levels
    h = sp.csr_matrix((h_data, h_indices, h_indptr), shape=(d, d))
    rho = np.array(rho, dtype=complex)
    ws = _Workspace(m_levels)
    args = (h, m_levels, g_down, g_up, g_relax, g_phi, ws)
    for _ in range(n_steps):
        k1 = _rhs(rho, *args)
        k2 = _rhs(rho + (0.5 * dt) * k1, *args)
        k3 = _rhs(rho + (0.5 * dt) * k2, *args)
        k4 = _rhs(rho + dt * k3, *args)
        rho += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        rho = 0.5 * (rho + rho.conj().T)
    return rho
