"""Experiment configuration: strict schema, explicit units, full resolution.

A run is described by one YAML file.  Unknown keys are rejected with their
path; temperatures and frequencies must carry unit suffixes ("20 mK",
"100 MHz"); everything else is dimensionless in resonator units.  Resolution
produces concrete numbers only (occupations, cutoffs, seed lists), echoed
into the run manifest so a manifest is sufficient to reproduce a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import yaml

from .core import default_n_max, thermal_occupation
from .jc import SystemParams
from .opensys import DissipationParams, IntegratorConfig, max_stable_dt
from .protocol import OutcomePolicy, RunMode, ScheduleKind

MAX_SWEEP_COMBINATIONS = 10_000
MAX_TRAJECTORY_FILES = 1_000

_TEMP_UNITS = {"K": 1.0, "mK": 1e-3, "uK": 1e-6}
_FREQ_UNITS = {"Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9}


class ConfigError(ValueError):
    """Configuration rejected; the message names the offending key."""


def _fail(path: str, message: str):
    raise ConfigError(f"{path}: {message}")


def _require_mapping(node, path: str) -> dict:
    if not isinstance(node, dict):
        _fail(path, f"expected a mapping, got {type(node).__name__}")
    return node


def _check_keys(node: dict, allowed: set, path: str):
    unknown = set(node) - allowed
    if unknown:
        _fail(path, f"unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")


def _number(node, path: str, minimum=None, strict_min=False) -> float:
    if isinstance(node, bool) or not isinstance(node, (int, float)):
        _fail(path, f"expected a number, got {node!r}")
    x = float(node)
    if not math.isfinite(x):
        _fail(path, "must be finite")
    if minimum is not None:
        if strict_min and x <= minimum:
            _fail(path, f"must be > {minimum}")
        if not strict_min and x < minimum:
            _fail(path, f"must be >= {minimum}")
    return x


def _integer(node, path: str, minimum=None) -> int:
    if isinstance(node, bool) or not isinstance(node, int):
        _fail(path, f"expected an integer, got {node!r}")
    if minimum is not None and node < minimum:
        _fail(path, f"must be >= {minimum}")
    return node


def parse_quantity(node, units: dict, path: str) -> float:
    """Parse "value unit" into SI; the unit suffix is mandatory."""
    if not isinstance(node, str):
        _fail(path, f"physical quantities need an explicit unit suffix, e.g. '20 {next(iter(units))}'")
    text = node.strip()
    for suffix in sorted(units, key=len, reverse=True):
        if text.endswith(suffix):
            body = text[: -len(suffix)].strip()
            try:
                value = float(body)
            except ValueError:
                _fail(path, f"cannot parse number in {node!r}")
            return value * units[suffix]
    _fail(path, f"unknown unit in {node!r}; expected one of {sorted(units)}")


@dataclass
class ResolvedRun:
    """A fully concrete run: numbers only, ready to execute."""

    params: SystemParams
    schedule_kind: ScheduleKind
    tau: float
    count: int
    seeds: list[int]
    initial_populations: np.ndarray
    nbar0: float
    dissipation: DissipationParams | None
    integrator: IntegratorConfig | None
    mode: RunMode
    policy: OutcomePolicy
    trajectories: int
    prefix: str
    echo: dict = field(repr=False, default_factory=dict)


_TOP_KEYS = {"params", "schedule", "initial_state", "dissipation", "integrator", "mode", "output", "sweep"}


def resolve(raw: dict, seed_override: int | None = None) -> ResolvedRun:
    """Validate a parsed config mapping and resolve every derived quantity."""
    raw = _require_mapping(raw, "<top level>")
    _check_keys(raw, _TOP_KEYS, "<top level>")
    for section in ("params", "schedule", "initial_state"):
        if section not in raw:
            _fail(section, "required section missing")

    # initial state first: the automatic cutoff depends on it
    init = _require_mapping(raw["initial_state"], "initial_state")
    _check_keys(init, {"temperature", "frequency", "nbar", "populations"}, "initial_state")
    given = [k for k in ("temperature", "nbar", "populations") if k in init]
    if len(given) != 1:
        _fail("initial_state", "give exactly one of temperature(+frequency), nbar, populations")
    populations = None
    if "temperature" in init:
        if "frequency" not in init:
            _fail("initial_state.frequency", "required alongside temperature")
        temp = parse_quantity(init["temperature"], _TEMP_UNITS, "initial_state.temperature")
        freq = parse_quantity(init["frequency"], _FREQ_UNITS, "initial_state.frequency")
        if temp < 0:
            _fail("initial_state.temperature", "must be non-negative")
        if freq <= 0:
            _fail("initial_state.frequency", "must be positive")
        nbar0 = thermal_occupation(temp, 2.0 * math.pi * freq)
    elif "nbar" in init:
        if "frequency" in init:
            _fail("initial_state.frequency", "only meaningful alongside temperature")
        nbar0 = _number(init["nbar"], "initial_state.nbar", minimum=0.0)
    else:
        if "frequency" in init:
            _fail("initial_state.frequency", "only meaningful alongside temperature")
        pops_node = init["populations"]
        if not isinstance(pops_node, list) or not pops_node:
            _fail("initial_state.populations", "expected a non-empty list of numbers")
        populations = np.array(
            [_number(v, f"initial_state.populations[{i}]", minimum=0.0) for i, v in enumerate(pops_node)]
        )
        total = populations.sum()
        if abs(total - 1.0) > 1e-8:
            _fail("initial_state.populations", f"must sum to 1 (got {total!r})")
        populations = populations / total
        nbar0 = float(np.arange(len(populations)) @ populations)

    # params
    pnode = _require_mapping(raw["params"], "params")
    _check_keys(pnode, {"delta", "g", "n_max"}, "params")
    delta = _number(pnode.get("delta"), "params.delta", minimum=0.0, strict_min=True)
    g = _number(pnode.get("g"), "params.g", minimum=0.0)
    n_max_node = pnode.get("n_max", "auto")
    if n_max_node == "auto":
        n_max = default_n_max(nbar0)
        if populations is not None:
            n_max = max(n_max, len(populations) - 1)
    else:
        n_max = _integer(n_max_node, "params.n_max", minimum=1)
        if populations is not None and len(populations) - 1 > n_max:
            _fail("params.n_max", "smaller than the explicit populations list")
    params = SystemParams(delta=delta, g=g, n_max=n_max)

    if populations is None:
        r = nbar0 / (1.0 + nbar0) if nbar0 > 0 else 0.0
        pops = r ** np.arange(n_max + 1) / (1.0 + nbar0) if nbar0 > 0 else None
        if pops is None:
            pops = np.zeros(n_max + 1)
            pops[0] = 1.0
        else:
            pops = pops / pops.sum()
        initial_populations = pops
    else:
        initial_populations = np.zeros(n_max + 1)
        initial_populations[: len(populations)] = populations

    # schedule
    snode = _require_mapping(raw["schedule"], "schedule")
    _check_keys(snode, {"kind", "tau", "count", "seed", "seeds"}, "schedule")
    kind_text = snode.get("kind")
    if kind_text not in ("etim", "utim"):
        _fail("schedule.kind", f"expected 'etim' or 'utim', got {kind_text!r}")
    kind = ScheduleKind(kind_text)
    tau = _number(snode.get("tau"), "schedule.tau", minimum=0.0, strict_min=True)
    count = _integer(snode.get("count"), "schedule.count", minimum=1)
    if "seed" in snode and "seeds" in snode:
        _fail("schedule", "give either seed or seeds, not both")
    if "seeds" in snode:
        seeds_node = snode["seeds"]
        if not isinstance(seeds_node, list) or not seeds_node:
            _fail("schedule.seeds", "expected a non-empty list of integers")
        seeds = [_integer(s, f"schedule.seeds[{i}]", minimum=0) for i, s in enumerate(seeds_node)]
    else:
        seeds = [_integer(snode.get("seed", 0), "schedule.seed", minimum=0)]
    if seed_override is not None:
        seeds = [int(seed_override)]

    # dissipation (optional)
    dissipation = None
    if "dissipation" in raw:
        dnode = _require_mapping(raw["dissipation"], "dissipation")
        _check_keys(dnode, {"gamma_m", "nbar_bath", "gamma_q_relax", "gamma_q_phi"}, "dissipation")
        gamma_m = _number(dnode.get("gamma_m", 0.0), "dissipation.gamma_m", minimum=0.0)
        nb_node = dnode.get("nbar_bath", "auto")
        if nb_node == "auto":
            nbar_bath = nbar0
        else:
            nbar_bath = _number(nb_node, "dissipation.nbar_bath", minimum=0.0)
        dissipation = DissipationParams(
            gamma_m=gamma_m,
            nbar_bath=nbar_bath,
            gamma_q_relax=_number(dnode.get("gamma_q_relax", 0.0), "dissipation.gamma_q_relax", minimum=0.0),
            gamma_q_phi=_number(dnode.get("gamma_q_phi", 0.0), "dissipation.gamma_q_phi", minimum=0.0),
        )

    # integrator (optional; only meaningful with dissipation present)
    integrator = None
    if "integrator" in raw:
        inode = _require_mapping(raw["integrator"], "integrator")
        _check_keys(inode, {"dt"}, "integrator")
        integrator = IntegratorConfig(dt=_number(inode.get("dt"), "integrator.dt", minimum=0.0, strict_min=True))
    elif dissipation is not None:
        integrator = IntegratorConfig(dt=max_stable_dt(params, dissipation))

    # mode
    mode = RunMode.POSTSELECTED
    policy = OutcomePolicy.DISCARD
    trajectories = 1
    if "mode" in raw:
        mnode = _require_mapping(raw["mode"], "mode")
        _check_keys(mnode, {"kind", "policy", "trajectories"}, "mode")
        kind_text = mnode.get("kind", "postselected")
        if kind_text not in ("postselected", "trajectory"):
            _fail("mode.kind", f"expected 'postselected' or 'trajectory', got {kind_text!r}")
        mode = RunMode(kind_text)
        policy_text = mnode.get("policy", "discard")
        if policy_text not in ("discard", "reset", "track"):
            _fail("mode.policy", f"expected discard/reset/track, got {policy_text!r}")
        policy = OutcomePolicy(policy_text)
        trajectories = _integer(mnode.get("trajectories", 1), "mode.trajectories", minimum=1)
        if mode is RunMode.POSTSELECTED and trajectories != 1:
            _fail("mode.trajectories", "only meaningful in trajectory mode")
        if trajectories > MAX_TRAJECTORY_FILES:
            _fail(
                "mode.trajectories",
                f"{trajectories} trajectory files exceed the cap {MAX_TRAJECTORY_FILES}; "
                "use the library ensemble API for large ensembles",
            )

    # output
    prefix = "run"
    if "output" in raw:
        onode = _require_mapping(raw["output"], "output")
        _check_keys(onode, {"prefix"}, "output")
        prefix = onode.get("prefix", "run")
        if not isinstance(prefix, str) or not prefix:
            _fail("output.prefix", "expected a non-empty string")

    echo = {
        "params": {"delta": delta, "g": g, "n_max": n_max},
        "schedule": {"kind": kind.value, "tau": tau, "count": count, "seeds": seeds},
        "initial_state": dict(init),
        "mode": {"kind": mode.value, "policy": policy.value, "trajectories": trajectories},
        "output": {"prefix": prefix},
    }
    if dissipation is not None:
        echo["dissipation"] = {
            "gamma_m": dissipation.gamma_m,
            "nbar_bath": dissipation.nbar_bath,
            "gamma_q_relax": dissipation.gamma_q_relax,
            "gamma_q_phi": dissipation.gamma_q_phi,
        }
    if integrator is not None:
        echo["integrator"] = {"dt": integrator.dt}

    return ResolvedRun(
        params=params,
        schedule_kind=kind,
        tau=tau,
        count=count,
        seeds=seeds,
        initial_populations=initial_populations,
        nbar0=nbar0,
        dissipation=dissipation,
        integrator=integrator,
        mode=mode,
        policy=policy,
        trajectories=trajectories,
        prefix=prefix,
        echo=echo,
    )


def parse_sweep(raw: dict) -> list[tuple[str, list]]:
    """Extract and validate the sweep axes (one or two) from a config mapping."""
    if "sweep" not in raw:
        return []
    snode = _require_mapping(raw["sweep"], "sweep")
    _check_keys(snode, {"axes"}, "sweep")
    axes_node = snode.get("axes")
    if not isinstance(axes_node, list) or not axes_node:
        _fail("sweep.axes", "expected a non-empty list of axes")
    if len(axes_node) > 2:
        _fail("sweep.axes", "at most two swept axes are supported")
    axes = []
    total = 1
    for i, axis in enumerate(axes_node):
        axis = _require_mapping(axis, f"sweep.axes[{i}]")
        _check_keys(axis, {"path", "values"}, f"sweep.axes[{i}]")
        path = axis.get("path")
        if not isinstance(path, str) or not path:
            _fail(f"sweep.axes[{i}].path", "expected a dotted key path string")
        values = axis.get("values")
        if not isinstance(values, list) or not values:
            _fail(f"sweep.axes[{i}].values", "expected a non-empty list")
        for j, v in enumerate(values):
            if isinstance(v, bool) or not isinstance(v, (int, float, str)):
                _fail(f"sweep.axes[{i}].values[{j}]", f"unsupported value {v!r}")
            if isinstance(v, float) and not math.isfinite(v):
                _fail(f"sweep.axes[{i}].values[{j}]", "must be finite")
        total *= len(values)
        axes.append((path, values))
    if total > MAX_SWEEP_COMBINATIONS:
        raise ConfigError(
            f"sweep: {total} combinations exceed the cap {MAX_SWEEP_COMBINATIONS}"
        )
    return axes


def apply_override(raw: dict, path: str, value) -> dict:
    """Return a copy of the config with one dotted-path value replaced."""
    parts = path.split(".")
    out = dict(raw)
    node = out
    for part in parts[:-1]:
        child = node.get(part)
        if not isinstance(child, dict):
            _fail(path, f"cannot descend into {part!r}")
        child = dict(child)
        node[part] = child
        node = child
    node[parts[-1]] = value
    return out


def load_config_file(path) -> dict:
    """Read a YAML config; a manifest file is unwrapped to its embedded config."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = yaml.safe_load(fh)
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: invalid YAML ({exc})") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    return raw
