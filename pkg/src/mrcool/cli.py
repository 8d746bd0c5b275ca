"""Experiment command line: named runs, presets, sweeps, reproducible outputs.

Subcommands
-----------
run         execute one config (or re-run a manifest) and write CSV + manifest
fig1        equal-interval cooling curves, resonant and 10% detuned
            (nbar0 from 20 mK at 100 MHz, g = 0.04, tau = 10, 60 measurements)
fig2        equal vs random intervals at resonance
            (nbar0 from 40 mK, g = 0.04, tau = 8, 20 measurements, 100 seeds)
robustness  fig2 parameters with resonator damping gamma_m = 1e-5 (Q = 1e5):
            10 random-interval measurements, damped vs closed comparison,
            trace-drift and thermal fixed-point checks
validate    closed-form measurement eigenvalues against the dense
            matrix-exponential oracle over a parameter grid
sweep       one or two swept axes, long-format CSV

Exit codes: 0 success, 2 config error, 3 numerical failure, 4 preset check
failure.  Every run writes a manifest sufficient to reproduce it byte for
byte: `mrcool run --config <manifest.yaml>` re-runs the recorded command.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from pathlib import Path

import numpy as np
import yaml

from . import __version__, config as cfgmod, kernels
from .config import ConfigError
from .core import (
    DensityMatrix,
    DomainError,
    Space,
    TruncationError,
    default_n_max,
    matrix_exponential,
    tensor_embed,
    thermal_density_matrix,
    thermal_occupation,
    number as number_op,
)
from .jc import SystemParams, build_jc_hamiltonian, effective_eigenvalues, kraus_pair
from .opensys import (
    ConfigurationError,
    DissipationParams,
    IntegratorConfig,
    NumericalFailure,
    damped_protocol_run,
    lindblad_evolve_unnormalized,
)
from .protocol import (
    CoolingRecord,
    RunMode,
    ScheduleKind,
    generate_schedule,
    postselected_run,
    sample_trajectory,
)

CSV_HEADER = ["N", "t", "nbar", "survival", "fidelity", "mode"]
STATS_HEADER = ["N", "t_nominal", "nbar_mean", "nbar_std", "nbar_min", "nbar_max", "survival_mean"]
ORACLE_GRID = {"delta": (1.0, 1.1), "g": (0.01, 0.04), "tau": (1.0, 8.0, 10.0)}
ORACLE_N = 50
ORACLE_TOL = 1e-10
COMPLETENESS_TOL = 1e-12


def _fmt(x) -> str:
    return repr(float(x))


def _write_csv(path: Path, header: list[str], rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _record_rows(record: CoolingRecord):
    times = record.schedule.times
    mode = record.mode.value
    rows = [["0", _fmt(0.0), _fmt(record.nbar[0]), _fmt(record.survival[0]), _fmt(record.fidelity[0]), mode]]
    for j in range(1, len(record.nbar)):
        rows.append(
            [str(j), _fmt(times[j - 1]), _fmt(record.nbar[j]), _fmt(record.survival[j]), _fmt(record.fidelity[j]), mode]
        )
    return rows


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    digest.update(path.read_bytes())
    return digest.hexdigest()


def _write_manifest(out_dir: Path, name: str, payload: dict, outputs: list[Path]) -> Path:
    payload = dict(payload)
    payload["outputs"] = [{"path": p.name, "sha256": _sha256(p)} for p in outputs]
    path = out_dir / name
    with open(path, "w", encoding="utf-8") as fh:
        yaml.safe_dump(payload, fh, sort_keys=False)
    return path


def _manifest_base(command: dict, seed: int, started: float) -> dict:
    return {
        "mrcool_manifest": 1,
        "tool_version": __version__,
        "backend": kernels.BACKEND,
        "command": command,
        "master_seed": seed,
        "wall_clock_seconds": round(time.perf_counter() - started, 3),
    }


class _Checks:
    """Named pass/fail assertions reported by the presets."""

    def __init__(self):
        self.items = []

    def add(self, name: str, passed: bool, detail: str):
        self.items.append({"name": name, "passed": bool(passed), "detail": detail})
        print(f"[{'PASS' if passed else 'FAIL'}] {name}: {detail}")

    @property
    def all_passed(self) -> bool:
        return all(item["passed"] for item in self.items)

    def as_list(self):
        return self.items


# ---------------------------------------------------------------------------
# run / sweep
# ---------------------------------------------------------------------------

def _initial_state(resolved: cfgmod.ResolvedRun) -> DensityMatrix:
    return DensityMatrix(np.diag(resolved.initial_populations.astype(complex)), Space.MR)


def _single_record(resolved: cfgmod.ResolvedRun, seed: int, index: int = 0) -> CoolingRecord:
    rho0 = _initial_state(resolved)
    sched = generate_schedule(resolved.schedule_kind, resolved.tau, resolved.count, seed)
    if resolved.mode is RunMode.POSTSELECTED:
        if resolved.dissipation is None:
            return postselected_run(rho0, sched, resolved.params)
        return damped_protocol_run(
            rho0, sched, resolved.params, resolved.dissipation, policy=None, cfg=resolved.integrator
        )
    if resolved.dissipation is None:
        return sample_trajectory(rho0, sched, resolved.params, resolved.policy, seed, index)
    return damped_protocol_run(
        rho0,
        sched,
        resolved.params,
        resolved.dissipation,
        policy=resolved.policy,
        cfg=resolved.integrator,
        seed=seed,
        index=index,
    )


def _run_series(resolved: cfgmod.ResolvedRun, threads: int) -> list[tuple[str, CoolingRecord]]:
    if resolved.mode is RunMode.TRAJECTORY:
        if len(resolved.seeds) != 1:
            raise ConfigError("schedule.seeds: trajectory mode takes a single master seed")
        master = resolved.seeds[0]
        indices = range(resolved.trajectories)
        names = (
            [resolved.prefix]
            if resolved.trajectories == 1
            else [f"{resolved.prefix}_traj{i:04d}" for i in indices]
        )
        with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
            records = list(pool.map(lambda i: _single_record(resolved, master, i), indices))
        return list(zip(names, records))
    if len(resolved.seeds) == 1:
        return [(resolved.prefix, _single_record(resolved, resolved.seeds[0]))]
    names = [f"{resolved.prefix}_seed{s}" for s in resolved.seeds]
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        records = list(pool.map(lambda s: _single_record(resolved, s), resolved.seeds))
    return list(zip(names, records))


def _derived_block(resolved: cfgmod.ResolvedRun) -> dict:
    derived = {"nbar0": float(resolved.nbar0), "n_max": int(resolved.params.n_max)}
    if resolved.dissipation is not None:
        derived["gamma_m"] = float(resolved.dissipation.gamma_m)
        derived["nbar_bath"] = float(resolved.dissipation.nbar_bath)
    if resolved.integrator is not None:
        derived["dt"] = float(resolved.integrator.dt)
    return derived


def _execute_run_config(raw: dict, args) -> int:
    started = time.perf_counter()
    resolved = cfgmod.resolve(raw, seed_override=args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    series = _run_series(resolved, args.threads)
    outputs = []
    for name, record in series:
        path = out_dir / f"{name}.csv"
        _write_csv(path, CSV_HEADER, _record_rows(record))
        outputs.append(path)
    manifest = _manifest_base(
        {"kind": "run", "config": resolved.echo}, resolved.seeds[0], started
    )
    manifest["derived"] = _derived_block(resolved)
    _write_manifest(out_dir, f"{resolved.prefix}_manifest.yaml", manifest, outputs)
    return 0


def _execute_sweep_config(raw: dict, args) -> int:
    axes = cfgmod.parse_sweep(raw)
    if not axes:
        print("sweep: no sweep.axes given; running the plain configuration", file=sys.stderr)
        return _execute_run_config(raw, args)
    base = {k: v for k, v in raw.items() if k != "sweep"}
    started = time.perf_counter()
    combos = list(product(*(vals for _, vals in axes)))
    paths = [path for path, _ in axes]

    def one(combo):
        cfg = base
        for path, value in zip(paths, combo):
            cfg = cfgmod.apply_override(cfg, path, value)
        resolved = cfgmod.resolve(cfg, seed_override=args.seed)
        if len(resolved.seeds) != 1 or resolved.trajectories != 1:
            raise ConfigError("sweep: each combination must resolve to a single run")
        return _single_record(resolved, resolved.seeds[0])

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        records = list(pool.map(one, combos))

    resolved0 = cfgmod.resolve(base, seed_override=args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for combo, record in zip(combos, records):
        prefix_cols = [_fmt(v) if isinstance(v, float) else str(v) for v in combo]
        for row in _record_rows(record):
            rows.append(prefix_cols + row)
    header = paths + CSV_HEADER
    csv_path = out_dir / f"{resolved0.prefix}_sweep.csv"
    _write_csv(csv_path, header, rows)
    manifest = _manifest_base({"kind": "sweep", "config": dict(raw)}, resolved0.seeds[0], started)
    manifest["derived"] = {"combinations": len(combos), "axes": list(paths)}
    _write_manifest(out_dir, f"{resolved0.prefix}_sweep_manifest.yaml", manifest, [csv_path])
    return 0


def _rerun_manifest(manifest: dict, args) -> int:
    command = manifest.get("command")
    if not isinstance(command, dict) or "kind" not in command:
        raise ConfigError("manifest: missing command block; cannot re-run")
    kind = command["kind"]
    if kind in ("run", "sweep"):
        cfg = command.get("config")
        if not isinstance(cfg, dict):
            raise ConfigError("manifest: command.config missing")
        executor = _execute_run_config if kind == "run" else _execute_sweep_config
        return executor(cfg, args)
    if kind == "preset":
        name = command.get("name")
        runners = {"fig1": cmd_fig1, "fig2": cmd_fig2, "robustness": cmd_robustness, "validate": cmd_validate}
        if name not in runners:
            raise ConfigError(f"manifest: unknown preset {name!r}")
        sub = argparse.Namespace(
            out_dir=args.out_dir,
            seed=command.get("seed", 1) if args.seed is None else args.seed,
            threads=args.threads,
        )
        return runners[name](sub)
    raise ConfigError(f"manifest: unknown command kind {kind!r}")


def cmd_run(args) -> int:
    raw = cfgmod.load_config_file(args.config)
    if raw.get("mrcool_manifest") is not None:
        return _rerun_manifest(raw, args)
    return _execute_run_config(raw, args)


def cmd_sweep(args) -> int:
    raw = cfgmod.load_config_file(args.config)
    if raw.get("mrcool_manifest") is not None:
        return _rerun_manifest(raw, args)
    return _execute_sweep_config(raw, args)


# ---------------------------------------------------------------------------
# presets
# ---------------------------------------------------------------------------

FIG1 = {"temperature_K": 0.020, "frequency_Hz": 100e6, "g": 0.04, "tau": 10.0, "count": 60}
FIG2 = {"temperature_K": 0.040, "frequency_Hz": 100e6, "g": 0.04, "tau": 8.0, "count": 20}
ROBUSTNESS = {"count": 10, "gamma_m": 1e-5, "fixed_point": {"n_max": 70, "gamma_m": 0.02, "duration": 300.0}}
FIG2_ENSEMBLE_SEEDS = 100


def _thermal_state(nbar0: float, n_max: int) -> DensityMatrix:
    from .core import TruncationPolicy

    return thermal_density_matrix(nbar0, TruncationPolicy(n_max=n_max))


def cmd_fig1(args) -> int:
    started = time.perf_counter()
    nbar0 = thermal_occupation(FIG1["temperature_K"], 2 * math.pi * FIG1["frequency_Hz"])
    n_max = default_n_max(nbar0)
    rho0 = _thermal_state(nbar0, n_max)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    records = {}
    for delta in (1.0, 1.1):
        params = SystemParams(delta=delta, g=FIG1["g"], n_max=n_max)
        sched = generate_schedule(ScheduleKind.ETIM, FIG1["tau"], FIG1["count"], args.seed)
        rec = postselected_run(rho0, sched, params)
        path = out_dir / f"fig1_delta{delta}.csv"
        _write_csv(path, CSV_HEADER, _record_rows(rec))
        outputs.append(path)
        records[delta] = rec
    checks = _Checks()
    resonant = records[1.0]
    checks.add(
        "fig1.final_cooling",
        resonant.nbar[60] <= 1e-3,
        f"resonant nbar(60) = {resonant.nbar[60]:.3e} (required <= 1e-3)",
    )
    checks.add(
        "fig1.rapid_initial_drop",
        resonant.nbar[5] <= 0.1 * nbar0,
        f"resonant nbar(5) = {resonant.nbar[5]:.4f} vs 0.1*nbar0 = {0.1 * nbar0:.4f}",
    )
    manifest = _manifest_base({"kind": "preset", "name": "fig1", "seed": args.seed}, args.seed, started)
    manifest["derived"] = {"nbar0": nbar0, "n_max": n_max}
    manifest["parameters"] = dict(FIG1)
    manifest["checks"] = checks.as_list()
    _write_manifest(out_dir, "fig1_manifest.yaml", manifest, outputs)
    return 0 if checks.all_passed else 4


def cmd_fig2(args) -> int:
    started = time.perf_counter()
    nbar0 = thermal_occupation(FIG2["temperature_K"], 2 * math.pi * FIG2["frequency_Hz"])
    n_max = default_n_max(nbar0)
    rho0 = _thermal_state(nbar0, n_max)
    params = SystemParams(delta=1.0, g=FIG2["g"], n_max=n_max)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []

    etim = postselected_run(rho0, generate_schedule(ScheduleKind.ETIM, FIG2["tau"], FIG2["count"], args.seed), params)
    path = out_dir / "fig2_etim.csv"
    _write_csv(path, CSV_HEADER, _record_rows(etim))
    outputs.append(path)

    utim_rep = postselected_run(
        rho0, generate_schedule(ScheduleKind.UTIM, FIG2["tau"], FIG2["count"], args.seed), params
    )
    path = out_dir / "fig2_utim.csv"
    _write_csv(path, CSV_HEADER, _record_rows(utim_rep))
    outputs.append(path)

    seeds = [args.seed + 1 + k for k in range(FIG2_ENSEMBLE_SEEDS)]

    def one(seed):
        sched = generate_schedule(ScheduleKind.UTIM, FIG2["tau"], FIG2["count"], seed)
        return postselected_run(rho0, sched, params)

    with ThreadPoolExecutor(max_workers=max(1, args.threads)) as pool:
        ensemble = list(pool.map(one, seeds))
    nbars = np.stack([r.nbar for r in ensemble])
    survs = np.stack([r.survival for r in ensemble])
    rows = []
    for j in range(FIG2["count"] + 1):
        rows.append(
            [
                str(j),
                _fmt(j * FIG2["tau"]),
                _fmt(nbars[:, j].mean()),
                _fmt(nbars[:, j].std()),
                _fmt(nbars[:, j].min()),
                _fmt(nbars[:, j].max()),
                _fmt(survs[:, j].mean()),
            ]
        )
    path = out_dir / "fig2_utim_stats.csv"
    _write_csv(path, STATS_HEADER, rows)
    outputs.append(path)

    checks = _Checks()
    mean_final = float(nbars[:, -1].mean())
    checks.add(
        "fig2.utim_not_worse_than_etim",
        mean_final <= etim.nbar[-1],
        f"seed-averaged random-interval nbar(20) = {mean_final:.4e} vs equal-interval {etim.nbar[-1]:.4e}",
    )
    manifest = _manifest_base({"kind": "preset", "name": "fig2", "seed": args.seed}, args.seed, started)
    manifest["derived"] = {"nbar0": nbar0, "n_max": n_max, "ensemble_seeds": len(seeds)}
    manifest["parameters"] = dict(FIG2)
    manifest["checks"] = checks.as_list()
    _write_manifest(out_dir, "fig2_manifest.yaml", manifest, outputs)
    return 0 if checks.all_passed else 4


def cmd_robustness(args) -> int:
    started = time.perf_counter()
    nbar0 = thermal_occupation(FIG2["temperature_K"], 2 * math.pi * FIG2["frequency_Hz"])
    n_max = default_n_max(nbar0)
    rho0 = _thermal_state(nbar0, n_max)
    params = SystemParams(delta=1.0, g=FIG2["g"], n_max=n_max)
    sched = generate_schedule(ScheduleKind.UTIM, FIG2["tau"], ROBUSTNESS["count"], args.seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []

    closed = postselected_run(rho0, sched, params)
    path = out_dir / "robustness_closed.csv"
    _write_csv(path, CSV_HEADER, _record_rows(closed))
    outputs.append(path)

    diss = DissipationParams(gamma_m=ROBUSTNESS["gamma_m"], nbar_bath=nbar0)
    damped = damped_protocol_run(rho0, sched, params, diss)
    path = out_dir / "robustness_damped.csv"
    _write_csv(path, CSV_HEADER, _record_rows(damped))
    outputs.append(path)

    checks = _Checks()
    rel = abs(damped.nbar[-1] - closed.nbar[-1]) / closed.nbar[-1]
    checks.add(
        "robustness.damped_within_10pct",
        rel <= 0.10,
        f"nbar(10): damped {damped.nbar[-1]:.4e} vs closed {closed.nbar[-1]:.4e} (rel {rel:.2%})",
    )

    # explicit trace-drift measurement over one full interval
    from .opensys import embed_ground, default_config

    joint = embed_ground(rho0)
    raw = lindblad_evolve_unnormalized(joint, build_jc_hamiltonian(params), diss, FIG2["tau"], default_config(params, diss))
    drift = abs(float(np.trace(raw).real) - 1.0)
    checks.add("robustness.trace_drift", drift < 1e-8, f"|trace - 1| = {drift:.2e} over tau = {FIG2['tau']}")

    fp = ROBUSTNESS["fixed_point"]
    m_fp = fp["n_max"] + 1
    h_free = tensor_embed(np.eye(2), number_op(m_fp))
    joint0 = np.zeros((2 * m_fp, 2 * m_fp), dtype=complex)
    joint0[0, 0] = 1.0
    diss_fp = DissipationParams(gamma_m=fp["gamma_m"], nbar_bath=nbar0)
    # the damping here is strong enough that the dissipative stiffness, not
    # the unitary frequencies, bounds the stable step
    stiffness = fp["gamma_m"] * (2 * nbar0 + 1) * fp["n_max"]
    dt_fp = min(0.05, 0.9 / stiffness)
    raw_fp = lindblad_evolve_unnormalized(joint0, h_free, diss_fp, fp["duration"], IntegratorConfig(dt=dt_fp))
    nvec = np.tile(np.arange(m_fp), 2)
    nbar_fp = float(np.real(nvec @ np.diag(raw_fp)))
    rel_fp = abs(nbar_fp - nbar0) / nbar0
    checks.add(
        "robustness.thermal_fixed_point",
        rel_fp <= 0.01,
        f"damped oscillator reaches nbar = {nbar_fp:.4f} vs bath {nbar0:.4f} (rel {rel_fp:.2%})",
    )

    manifest = _manifest_base({"kind": "preset", "name": "robustness", "seed": args.seed}, args.seed, started)
    manifest["derived"] = {
        "nbar0": nbar0,
        "n_max": n_max,
        "gamma_m": ROBUSTNESS["gamma_m"],
        "total_time": float(sched.times[-1]),
    }
    manifest["checks"] = checks.as_list()
    _write_manifest(out_dir, "robustness_manifest.yaml", manifest, outputs)
    return 0 if checks.all_passed else 4


def cmd_validate(args) -> int:
    started = time.perf_counter()
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    n_max = ORACLE_N + 10
    rows = []
    worst_lambda = 0.0
    worst_completeness = 0.0
    print(f"{'delta':>6} {'g':>6} {'tau':>5}  {'max|lambda - oracle|':>21}  {'completeness dev':>17}")
    for delta in ORACLE_GRID["delta"]:
        for g in ORACLE_GRID["g"]:
            params = SystemParams(delta=delta, g=g, n_max=n_max)
            h = build_jc_hamiltonian(params)
            for tau in ORACLE_GRID["tau"]:
                u = matrix_exponential(h, tau)
                lam = effective_eigenvalues(params, tau).lam
                m = params.n_levels
                oracle = np.diag(u[:m, :m])
                err = float(np.max(np.abs(oracle[: ORACLE_N + 1] - lam[: ORACLE_N + 1])))
                m_g, m_e = kraus_pair(params, tau)
                comp = m_g.conj().T @ m_g + m_e.conj().T @ m_e
                dev = float(np.max(np.abs(comp - np.eye(m))))
                worst_lambda = max(worst_lambda, err)
                worst_completeness = max(worst_completeness, dev)
                rows.append([_fmt(delta), _fmt(g), _fmt(tau), _fmt(err), _fmt(dev)])
                print(f"{delta:6.2f} {g:6.3f} {tau:5.1f}  {err:21.3e}  {dev:17.3e}")
    csv_path = out_dir / "validate.csv"
    _write_csv(csv_path, ["delta", "g", "tau", "lambda_vs_oracle", "kraus_completeness_dev"], rows)
    checks = _Checks()
    checks.add(
        "validate.lambda_vs_oracle",
        worst_lambda < ORACLE_TOL,
        f"max deviation {worst_lambda:.3e} over grid (required < {ORACLE_TOL:g}, n <= {ORACLE_N})",
    )
    checks.add(
        "validate.kraus_completeness",
        worst_completeness < COMPLETENESS_TOL,
        f"max completeness deviation {worst_completeness:.3e} (required < {COMPLETENESS_TOL:g})",
    )
    manifest = _manifest_base({"kind": "preset", "name": "validate", "seed": args.seed}, args.seed, started)
    manifest["checks"] = checks.as_list()
    _write_manifest(out_dir, "validate_manifest.yaml", manifest, [csv_path])
    return 0 if checks.all_passed else 4


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mrcool",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_config=False):
        if needs_config:
            p.add_argument("--config", required=True, help="YAML config (or manifest to re-run)")
        p.add_argument("--out-dir", default="out", help="output directory (default: out)")
        p.add_argument("--seed", type=int, default=None, help="override the master seed")
        p.add_argument("--threads", type=int, default=1, help="worker threads for ensembles and sweeps")

    common(sub.add_parser("run", help="execute one configuration or re-run a manifest"), needs_config=True)
    common(sub.add_parser("sweep", help="execute a configuration over one or two swept axes"), needs_config=True)
    common(sub.add_parser("fig1", help="equal-interval cooling curves (nbar0=3.69, g=0.04, tau=10, N=60)"))
    common(sub.add_parser("fig2", help="equal vs random intervals (nbar0=7.84, g=0.04, tau=8, N=20, 100 seeds)"))
    common(sub.add_parser("robustness", help="fig2 parameters with resonator damping (Q=1e5, N=10)"))
    common(sub.add_parser("validate", help="closed-form eigenvalues vs matrix-exponential oracle"))
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.seed is None and args.command in ("fig1", "fig2", "robustness", "validate"):
        args.seed = 1
    handlers = {
        "run": cmd_run,
        "sweep": cmd_sweep,
        "fig1": cmd_fig1,
        "fig2": cmd_fig2,
        "robustness": cmd_robustness,
        "validate": cmd_validate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, DomainError, TruncationError, ConfigurationError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
