"""Scratch oracle checks; not part of the package."""
import sys

sys.path.insert(0, "src")
import numpy as np

from mrcool import core, jc

# --- thermal occupations (frozen expected values) ---
for t_mk in (20.0, 40.0):
    nb = core.thermal_occupation(t_mk * 1e-3, 2 * np.pi * 100e6)
    print(f"nbar({t_mk} mK, 2pi x 100 MHz) = {nb!r}")

print("min n_max for nbar=7.84 tail 1e-12:", core.min_n_max_for_thermal(7.84, 1e-12))
print("min n_max for nbar=3.69 tail 1e-12:", core.min_n_max_for_thermal(3.69, 1e-12))

# --- oracle: closed-form lambda_n vs <g,n| e^{-iHtau} |g,n> ---
worst = 0.0
worst_off = 0.0
for delta in (1.0, 1.1):
    for g in (0.01, 0.04):
        for tau in (1.0, 8.0, 10.0):
            p = jc.SystemParams(delta=delta, g=g, n_max=60)
            h = jc.build_jc_hamiltonian(p)
            u = core.matrix_exponential(h, tau)
            ev = jc.effective_eigenvalues(p, tau)
            m = p.n_levels
            # ground block of U: indices q=0 rows/cols
            vg = u[:m, :m]
            diag = np.diag(vg)
            err = np.max(np.abs(diag[:51] - ev.lam[:51]))
            worst = max(worst, err)
            # off branch: <e, n-1 | U | g, n> = u[m + (n-1), n]
            n_idx = np.arange(1, 51)
            off_oracle = u[m + n_idx - 1, n_idx]
            err_off = np.max(np.abs(np.abs(off_oracle) - ev.off_branch[n_idx]))
            worst_off = max(worst_off, err_off)
            # kraus pair phases vs oracle
            m_g, m_e = jc.kraus_pair(p, tau)
            err_me = np.max(np.abs(m_e[n_idx - 1, n_idx] - off_oracle))
            # excited pair vs oracle: <e,m|U|e,m> = u[m+mi, m+mi]; <g,n|U|e,n-1> = u[n, m+n-1]
            k_ee, k_eg = jc.excited_kraus_pair(p, tau)
            ee_oracle = np.diag(u[m:, m:])
            err_ee = np.max(np.abs(np.diag(k_ee)[:50] - ee_oracle[:50]))
            eg_oracle = u[n_idx, m + n_idx - 1]
            err_eg = np.max(np.abs(k_eg[n_idx, n_idx - 1] - eg_oracle))
            print(
                f"delta={delta} g={g} tau={tau}: |lam err|={err:.2e} off={err_off:.2e} "
                f"me_phase={err_me:.2e} ee={err_ee:.2e} eg={err_eg:.2e}"
            )

print("worst lambda err:", worst, "worst off err:", worst_off)

# --- completeness ---
p = jc.SystemParams(delta=1.07, g=0.03, n_max=40)
m_g, m_e = jc.kraus_pair(p, 7.3)
comp = m_g.conj().T @ m_g + m_e.conj().T @ m_e
print("kraus completeness err:", np.max(np.abs(comp - np.eye(p.n_levels))))
k_ee, k_eg = jc.excited_kraus_pair(p, 7.3)
comp_e = (k_ee.conj().T @ k_ee + k_eg.conj().T @ k_eg)[: p.n_max, : p.n_max]
print("excited completeness err (below edge):", np.max(np.abs(comp_e - np.eye(p.n_max))))

# --- resonance |lambda_1| = cos(0.4) for g=0.04 tau=10 ---
p = jc.SystemParams(delta=1.0, g=0.04, n_max=10)
ev = jc.effective_eigenvalues(p, 10.0)
print("resonance |lam_1| =", abs(ev.lam[1]), "cos(0.4) =", np.cos(0.4))

# --- Omega_1 frozen value ---
p = jc.SystemParams(delta=1.1, g=0.04, n_max=5)
spec = jc.dressed_spectrum(p)
print("Omega_1(delta=1.1,g=0.04) =", spec.omega_rabi[1], "sqrt:", np.hypot(0.05, 0.04))

# --- full Hamiltonian: matrix element and g=0 spectrum ---
p = jc.SystemParams(delta=1.3, g=0.02, n_max=8)
h_full = jc.build_full_hamiltonian(p)
# <up,n|H|up,n+1> should be -g sqrt(n+1); up is qubit index 0
for n in (0, 3):
    print(f"<up,{n}|H|up,{n+1}> =", h_full[n, n + 1], "expect", -p.g * np.sqrt(n + 1))

p0 = jc.SystemParams(delta=1.3, g=0.0, n_max=8)
evals = np.linalg.eigvalsh(jc.build_full_hamiltonian(p0))
expect = np.sort(np.concatenate([np.arange(9) + 0.65, np.arange(9) - 0.65]))
print("g=0 spectrum err:", np.max(np.abs(evals - expect)))

# --- RWA agreement: spectra and survival amplitudes ---
for delta in (1.0, 1.1):
    p = jc.SystemParams(delta=delta, g=0.04, n_max=120)
    h_full_e = jc.full_hamiltonian_energy_basis(p)
    h_jc = jc.build_jc_hamiltonian(p)
    tau = 10.0
    u_full = core.matrix_exponential(h_full_e, tau)
    ev = jc.effective_eigenvalues(p, tau)
    m = p.n_levels
    v_full = np.diag(u_full[:m, :m])
    err = np.abs(v_full[:50] - ev.lam[:50])
    print(f"RWA survival-amplitude max err (delta={delta}, n<50):", err.max())
    ev_full = np.sort(np.linalg.eigvalsh(h_full_e))
    ev_jc = np.sort(np.linalg.eigvalsh(h_jc))
    k = 40
    print("  low-lying spectrum diff:", np.max(np.abs(ev_full[:k] - ev_jc[:k])))

# --- fig1 numbers: ETIM tau=10 resonance nbar0 from 20 mK ---
nbar0 = core.thermal_occupation(0.020, 2 * np.pi * 100e6)
n_max = core.default_n_max(nbar0)
print("fig1 n_max:", n_max)
p = jc.SystemParams(delta=1.0, g=0.04, n_max=n_max)
pol = core.TruncationPolicy(n_max=n_max)
rho = core.thermal_density_matrix(nbar0, pol)
pops = rho.populations()
w = np.abs(jc.effective_eigenvalues(p, 10.0).lam) ** 2
pn = pops.copy()
surv = 1.0
nvec = np.arange(n_max + 1)
for step in range(1, 61):
    pn = pn * w
    s = pn.sum()
    surv *= s
    pn /= s
    if step in (1, 5, 10, 20, 60):
        print(f"  N={step}: nbar={nvec @ pn:.6e} P_g={surv:.6f} F_g={pn[0]:.6f}")
print("  1/(1+nbar0) =", 1 / (1 + nbar0), " 1/(1+3.69) =", 1 / 4.69)

# fig1 detuned
p11 = jc.SystemParams(delta=1.1, g=0.04, n_max=n_max)
w11 = np.abs(jc.effective_eigenvalues(p11, 10.0).lam) ** 2
pn = pops.copy()
surv = 1.0
for step in range(1, 61):
    pn = pn * w11
    s = pn.sum()
    surv *= s
    pn /= s
    if step in (5, 60):
        print(f"  detuned N={step}: nbar={nvec @ pn:.6e} P_g={surv:.6f}")

# --- fig2: tau=8, nbar0 from 40 mK, ETIM vs UTIM ---
nbar2 = core.thermal_occupation(0.040, 2 * np.pi * 100e6)
n_max2 = core.default_n_max(nbar2)
print("fig2 nbar0:", nbar2, "n_max:", n_max2)
p2 = jc.SystemParams(delta=1.0, g=0.04, n_max=n_max2)
pol2 = core.TruncationPolicy(n_max=n_max2)
pops2 = core.thermal_density_matrix(nbar2, pol2).populations()
nvec2 = np.arange(n_max2 + 1)

w_et = np.abs(jc.effective_eigenvalues(p2, 8.0).lam) ** 2
pn = pops2.copy()
surv = 1.0
for step in range(1, 21):
    pn = pn * w_et
    s = pn.sum()
    surv *= s
    pn /= s
print(f"  ETIM N=20: nbar={nvec2 @ pn:.6e} P_g={surv:.6f}")

rng = np.random.default_rng(7)
means = []
for trial in range(100):
    dt_j = rng.uniform(-4.0, 4.0, 20)
    taus = 8.0 + dt_j - np.concatenate([[0.0], dt_j[:-1]])
    pn = pops2.copy()
    for tj in taus:
        wv = np.abs(jc.effective_eigenvalues(p2, tj).lam) ** 2
        pn = pn * wv
        pn /= pn.sum()
    means.append(nvec2 @ pn)
print(f"  UTIM mean nbar(20) over 100 draws: {np.mean(means):.6e} max {np.max(means):.3e}")

# UTIM N=10 for robustness criterion
vals = []
for trial in range(20):
    dt_j = rng.uniform(-4.0, 4.0, 10)
    taus = 8.0 + dt_j - np.concatenate([[0.0], dt_j[:-1]])
    pn = pops2.copy()
    for tj in taus:
        wv = np.abs(jc.effective_eigenvalues(p2, tj).lam) ** 2
        pn = pn * wv
        pn /= pn.sum()
    vals.append(nvec2 @ pn)
vals = np.array(vals)
print(f"  UTIM nbar(10): min={vals.min():.3e} median={np.median(vals):.3e} max={vals.max():.3e}")
