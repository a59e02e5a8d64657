"""Command-line front end: precession series, interference sweeps, chi-scan
fringe experiments, and nondispersivity reports driven by JSON scenario
configs.

Output is deterministic: CSV cells use 17 significant digits with '.' decimal
separators and bare newline line endings, so repeated runs of the same config
are byte identical. Undefined phases serialize as NaN in CSV and null in JSON.
Exit status: 0 on success, 2 on configuration errors, 3 on numerical domain
errors.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .classical import ClassicalDipole
from .dispersion import GaussianPacket, RegionInterval, nondispersivity_sweep
from .errors import (
    ConfigError,
    GeodesicAmbiguous,
    InsufficientSamples,
    NotNormalized,
    SingularInversion,
    SingularPoint,
    StepTooLarge,
    UndefinedPhase,
)
from .fields import FieldConfig, PlanarPath, UnitSystem, line_integral_A, pulse_integral_B
from .interferometry import (
    CSV_COLUMNS,
    EPS_VIS,
    compute_interference,
    detector_probabilities,
    nonideal_phase,
    nonideal_visibility,
)
from .quantum import bloch_of, evolve_spin, spinor_from_angles

TWO_PI = 2.0 * math.pi

MODES = (
    "sab-classical",
    "ac-classical",
    "sab-quantum",
    "ac-quantum",
    "interfere",
    "sweep",
    "chi-scan",
    "nondispersive",
)

_KNOWN_KEYS = {
    "mode",
    "out",
    "format",
    "field",
    "theta",
    "azimuth",
    "phi_d",
    "phi",
    "visibility",
    "path",
    "grid_theta",
    "grid_phid",
    "chi_samples",
    "t_max",
    "n_t",
    "n_sub",
    "solid_angle_steps",
    "packet",
    "region",
    "velocities",
    "k_sigma",
}

_ANGLE_KEYS = ("theta", "azimuth", "phi_d", "phi")


@dataclass
class Scenario:
    """A validated run description (file config merged with flag overrides)."""

    mode: str
    out: Path
    fmt: str = "csv"
    field: FieldConfig | None = None
    theta: float | None = None
    azimuth: float = 0.0
    phi_d: float | None = None
    phi: float | None = None
    visibility: float | None = None
    path: PlanarPath | None = None
    grid_theta: np.ndarray | None = None
    grid_phid: np.ndarray | None = None
    chi_samples: int = 64
    t_max: float | None = None
    n_t: int = 101
    n_sub: int = 32
    solid_angle_steps: int = 2048
    packet: GaussianPacket | None = None
    region: RegionInterval | None = None
    velocities: list[float] | None = None
    k_sigma: float = 5.0


def fit_fringe(samples: Sequence[tuple[float, float]]) -> tuple[float | None, float]:
    """Least-squares fit of P1 = (1 + nu cos(phi + chi)) / 2 to a chi scan.

    Uses the linear reformulation P1 = 1/2 + a cos chi + b sin chi with
    nu = 2 sqrt(a^2 + b^2) and phi = atan2(-b, a). The phase is None
    (undefined) when the fitted visibility falls below EPS_VIS.

    Raises InsufficientSamples unless there are at least 3 distinct chi values
    spanning at least half a fringe period (pi).
    """
    chi = np.array([c for c, _ in samples], dtype=float)
    y = np.array([p for _, p in samples], dtype=float)
    if np.unique(chi).size < 3:
        raise InsufficientSamples("need at least 3 samples at distinct chi values")
    if chi.max() - chi.min() < math.pi - 1e-9:
        raise InsufficientSamples("chi samples must span at least half a period")
    design = np.column_stack([np.cos(chi), np.sin(chi)])
    (a, b), *_ = np.linalg.lstsq(design, y - 0.5, rcond=None)
    nu = 2.0 * math.hypot(a, b)
    if nu < EPS_VIS:
        return None, nu
    return math.atan2(-b, a), nu


def _format_cell(value: Any) -> str:
    if value is None:
        return "NaN"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if math.isnan(x):
        return "NaN"
    return format(x, ".17g")


def _json_safe(value: Any) -> Any:
    if value is None or isinstance(value, bool):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    x = float(value)
    return None if math.isnan(x) else x


def _write_csv(out: Path, columns: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
    lines = [",".join(columns)]
    lines.extend(",".join(_format_cell(v) for v in row) for row in rows)
    with open(out, "w", newline="") as handle:
        handle.write("\n".join(lines) + "\n")


def _write_json(
    out: Path, mode: str, columns: Sequence[str], rows: Sequence[Sequence[Any]], extras: dict | None
) -> None:
    payload: dict = {
        "mode": mode,
        "columns": list(columns),
        "rows": [[_json_safe(v) for v in row] for row in rows],
    }
    if extras:
        payload.update(extras)
    with open(out, "w", newline="") as handle:
        handle.write(json.dumps(payload, indent=2, allow_nan=False) + "\n")


def _require(scenario: Scenario, attr: str, key: str) -> Any:
    value = getattr(scenario, attr)
    if value is None:
        raise ConfigError(f"mode {scenario.mode!r} requires config key {key!r}")
    return value


def _require_pulse(scenario: Scenario):
    fc = _require(scenario, "field", "field")
    if fc.pulse is None:
        raise ConfigError(f"mode {scenario.mode!r} requires config key 'field.pulse'")
    return fc


def _run_interfere(sc: Scenario):
    theta = _require(sc, "theta", "theta")
    phi_d = _require(sc, "phi_d", "phi_d")
    result = compute_interference(theta, phi_d, sc.solid_angle_steps)
    return list(CSV_COLUMNS), [list(result.values())], None


def _run_sweep(sc: Scenario):
    grid_theta = _require(sc, "grid_theta", "grid_theta")
    grid_phid = _require(sc, "grid_phid", "grid_phid")
    rows = []
    for theta in grid_theta:
        for phi_d in grid_phid:
            rows.append(list(compute_interference(float(theta), float(phi_d), sc.solid_angle_steps).values()))
    return list(CSV_COLUMNS), rows, None


def _run_chi_scan(sc: Scenario):
    if sc.phi is not None or sc.visibility is not None:
        if sc.phi is None or sc.visibility is None:
            raise ConfigError("chi-scan ground truth needs both keys 'phi' and 'visibility'")
        phi, nu = sc.phi, sc.visibility
    else:
        theta = _require(sc, "theta", "theta")
        phi_d = _require(sc, "phi_d", "phi_d")
        nu = nonideal_visibility(theta, phi_d)
        try:
            phi = nonideal_phase(theta, phi_d)
        except UndefinedPhase:
            phi = 0.0  # the fringe is flat; the phase value is immaterial
    if not 0.0 <= nu <= 1.0:
        raise ConfigError("config key 'visibility' must lie in [0, 1]")
    if sc.chi_samples < 3:
        raise ConfigError("config key 'chi_samples' must be at least 3")
    rows = []
    samples = []
    for j in range(sc.chi_samples):
        chi = TWO_PI * j / sc.chi_samples
        p1, p2 = detector_probabilities(phi, nu, chi)
        rows.append([chi, p1, p2])
        samples.append((chi, p1))
    fit_phi, fit_nu = fit_fringe(samples)
    extras = {"fit": {"phi": _json_safe(fit_phi), "visibility": _json_safe(fit_nu)}}
    return ["chi", "P1", "P2"], rows, extras


def _time_grid(sc: Scenario, pulse) -> np.ndarray:
    t_max = sc.t_max if sc.t_max is not None else max(pulse.t_off, 0.0)
    if t_max < 0.0:
        raise ConfigError("config key 't_max' must be nonnegative")
    if sc.n_t < 1:
        raise ConfigError("config key 'n_t' must be at least 1")
    return np.linspace(0.0, t_max, sc.n_t)


def _run_sab_classical(sc: Scenario):
    fc = _require_pulse(sc)
    theta = _require(sc, "theta", "theta")
    units = fc.units
    rows = []
    for t in _time_grid(sc, fc.pulse):
        gamma = -units.Gamma * pulse_integral_B(fc.pulse, 0.0, float(t))
        vec = ClassicalDipole(units.mu, theta, sc.azimuth + gamma).vector
        rows.append([float(t), gamma, vec[0], vec[1], vec[2]])
    return ["t", "gamma", "mu_x", "mu_y", "mu_z"], rows, None


def _run_sab_quantum(sc: Scenario):
    fc = _require_pulse(sc)
    theta = _require(sc, "theta", "theta")
    units = fc.units
    s0 = spinor_from_angles(theta, sc.azimuth)
    rows = []
    for t in _time_grid(sc, fc.pulse):
        gamma = -2.0 * units.mu / units.hbar * pulse_integral_B(fc.pulse, 0.0, float(t))
        n = bloch_of(evolve_spin(s0, gamma))
        rows.append([float(t), gamma, n[0], n[1], n[2]])
    return ["t", "gamma", "n_x", "n_y", "n_z"], rows, None


def _ac_series(sc: Scenario, rotation_factor: float):
    """Rows of cumulative gamma along the path; rotation_factor converts the
    per-segment line integral into the precession angle."""
    fc = _require(sc, "field", "field")
    path = _require(sc, "path", "path")
    verts = path.vertices
    gamma = 0.0
    arclength = 0.0
    points = [(0.0, verts[0], 0.0)]
    for i in range(path.n_segments):
        seg = PlanarPath(verts[i : i + 2])
        gamma += rotation_factor * line_integral_A(fc, seg, sc.n_sub)
        arclength += float(np.linalg.norm(verts[i + 1] - verts[i]))
        points.append((arclength, verts[i + 1], gamma))
    return points


def _run_ac_classical(sc: Scenario):
    fc = _require(sc, "field", "field")
    theta = _require(sc, "theta", "theta")
    units = fc.units
    rows = []
    for s, vertex, gamma in _ac_series(sc, -units.Gamma):
        vec = ClassicalDipole(units.mu, theta, sc.azimuth + gamma).vector
        rows.append([s, vertex[0], vertex[1], gamma, vec[0], vec[1], vec[2]])
    return ["s", "x", "y", "gamma", "mu_x", "mu_y", "mu_z"], rows, None


def _run_ac_quantum(sc: Scenario):
    fc = _require(sc, "field", "field")
    theta = _require(sc, "theta", "theta")
    units = fc.units
    s0 = spinor_from_angles(theta, sc.azimuth)
    rows = []
    for s, vertex, gamma in _ac_series(sc, -2.0 * units.mu / units.hbar):
        n = bloch_of(evolve_spin(s0, gamma))
        rows.append([s, vertex[0], vertex[1], gamma, n[0], n[1], n[2]])
    return ["s", "x", "y", "gamma", "n_x", "n_y", "n_z"], rows, None


def _run_nondispersive(sc: Scenario):
    fc = _require_pulse(sc)
    packet = _require(sc, "packet", "packet")
    region = _require(sc, "region", "region")
    velocities = _require(sc, "velocities", "velocities")
    if len(velocities) == 0:
        raise ConfigError("config key 'velocities' must be nonempty")
    report = nondispersivity_sweep(packet, velocities, region, fc.pulse, fc.units, sc.k_sigma)
    rows = [[row.velocity, row.contained, row.gamma, row.valid] for row in report.rows]
    return list(report.columns), rows, None


_RUNNERS = {
    "interfere": _run_interfere,
    "sweep": _run_sweep,
    "chi-scan": _run_chi_scan,
    "sab-classical": _run_sab_classical,
    "sab-quantum": _run_sab_quantum,
    "ac-classical": _run_ac_classical,
    "ac-quantum": _run_ac_quantum,
    "nondispersive": _run_nondispersive,
}


def run(scenario: Scenario) -> int:
    """Execute a validated scenario and write its single output file."""
    columns, rows, extras = _RUNNERS[scenario.mode](scenario)
    if scenario.fmt == "json":
        _write_json(scenario.out, scenario.mode, columns, rows, extras)
    else:
        _write_csv(scenario.out, columns, rows)
        if extras and "fit" in extras:
            fit = extras["fit"]
            print(f"fit: phi={_format_cell(fit['phi'])} visibility={_format_cell(fit['visibility'])}")
    return 0


def _as_float(cfg: dict, key: str) -> float | None:
    if key not in cfg or cfg[key] is None:
        return None
    try:
        return float(cfg[key])
    except (TypeError, ValueError):
        raise ConfigError(f"config key {key!r} must be a number") from None


def _as_int(cfg: dict, key: str, default: int) -> int:
    if key not in cfg or cfg[key] is None:
        return default
    value = cfg[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or int(value) != value:
        raise ConfigError(f"config key {key!r} must be an integer")
    return int(value)


def _grid_from_config(value: Any, key: str) -> np.ndarray:
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise ConfigError(f"config key {key!r} must be a [start, stop, count] triple")
    a, b, n = float(value[0]), float(value[1]), int(value[2])
    if n < 1:
        raise ConfigError(f"config key {key!r} needs a count of at least 1")
    return np.linspace(a, b, n)


def _grid_from_flag(text: str, flag: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"flag {flag} expects the form a:b:n")
    try:
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"flag {flag} expects the form a:b:n") from None
    if n < 1:
        raise ConfigError(f"flag {flag} needs a count of at least 1")
    return np.linspace(a, b, n)


def _parse_path(value: Any) -> PlanarPath:
    if not isinstance(value, dict) or "vertices" not in value:
        raise ConfigError("config key 'path' must be an object with a 'vertices' list")
    try:
        return PlanarPath(np.asarray(value["vertices"], dtype=float), bool(value.get("closed", False)))
    except ValueError as exc:
        raise ConfigError(f"config key 'path' is invalid: {exc}") from None


def _parse_packet(value: Any, units) -> GaussianPacket:
    if not isinstance(value, dict):
        raise ConfigError("config key 'packet' must be an object")
    try:
        return GaussianPacket(
            x0=float(value["x0"]),
            v=float(value.get("v", 0.0)),
            sigma0=float(value["sigma0"]),
            m=float(value.get("m", units.m)),
            hbar=float(value.get("hbar", units.hbar)),
        )
    except KeyError as exc:
        raise ConfigError(f"packet is missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ConfigError(f"config key 'packet' is invalid: {exc}") from None


def _parse_region(value: Any) -> RegionInterval:
    if not isinstance(value, dict):
        raise ConfigError("config key 'region' must be an object")
    try:
        return RegionInterval(float(value["x_min"]), float(value["x_max"]))
    except KeyError as exc:
        raise ConfigError(f"region is missing key {exc.args[0]!r}") from None
    except ValueError as exc:
        raise ConfigError(f"config key 'region' is invalid: {exc}") from None


def build_scenario(args: argparse.Namespace) -> Scenario:
    """Merge the config file with flag overrides and validate the result."""
    cfg: dict = {}
    if args.config is not None:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigError(f"cannot read config file: {exc}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(cfg, dict):
            raise ConfigError("config file must hold a JSON object")
    for key in cfg:
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"unknown config key {key!r}")

    mode = args.mode or cfg.get("mode")
    if mode not in MODES:
        raise ConfigError(f"config key 'mode' must be one of {', '.join(MODES)}; got {mode!r}")
    out = args.out or cfg.get("out")
    if out is None:
        raise ConfigError("config key 'out' is required")
    fmt = args.fmt or cfg.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"config key 'format' must be 'csv' or 'json', got {fmt!r}")

    field_cfg = FieldConfig.from_dict(cfg["field"]) if cfg.get("field") is not None else None
    units = field_cfg.units if field_cfg is not None else None

    azimuth = _as_float(cfg, "azimuth")
    k_sigma = _as_float(cfg, "k_sigma")
    scenario = Scenario(
        mode=mode,
        out=Path(out),
        fmt=fmt,
        field=field_cfg,
        theta=args.theta if args.theta is not None else _as_float(cfg, "theta"),
        azimuth=0.0 if azimuth is None else azimuth,
        phi_d=args.phi_d if args.phi_d is not None else _as_float(cfg, "phi_d"),
        phi=_as_float(cfg, "phi"),
        visibility=_as_float(cfg, "visibility"),
        path=_parse_path(cfg["path"]) if cfg.get("path") is not None else None,
        chi_samples=args.chi_samples
        if args.chi_samples is not None
        else _as_int(cfg, "chi_samples", 64),
        t_max=_as_float(cfg, "t_max"),
        n_t=_as_int(cfg, "n_t", 101),
        n_sub=_as_int(cfg, "n_sub", 32),
        solid_angle_steps=_as_int(cfg, "solid_angle_steps", 2048),
        packet=_parse_packet(cfg["packet"], units or UnitSystem()) if cfg.get("packet") is not None else None,
        region=_parse_region(cfg["region"]) if cfg.get("region") is not None else None,
        velocities=[float(v) for v in cfg["velocities"]] if cfg.get("velocities") is not None else None,
        k_sigma=5.0 if k_sigma is None else k_sigma,
    )

    if args.grid_theta is not None:
        scenario.grid_theta = _grid_from_flag(args.grid_theta, "--grid-theta")
    elif cfg.get("grid_theta") is not None:
        scenario.grid_theta = _grid_from_config(cfg["grid_theta"], "grid_theta")
    if args.grid_phid is not None:
        scenario.grid_phid = _grid_from_flag(args.grid_phid, "--grid-phid")
    elif cfg.get("grid_phid") is not None:
        scenario.grid_phid = _grid_from_config(cfg["grid_phid"], "grid_phid")

    if args.degrees:
        factor = math.pi / 180.0
        for key in _ANGLE_KEYS:
            value = getattr(scenario, key)
            if value is not None:
                setattr(scenario, key, value * factor)
        if scenario.grid_theta is not None:
            scenario.grid_theta = scenario.grid_theta * factor
        if scenario.grid_phid is not None:
            scenario.grid_phid = scenario.grid_phid * factor
    return scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinphase",
        description="Precession and two-path interference simulations for planar dipole setups.",
    )
    parser.add_argument("--mode", choices=MODES, help="scenario to run (overrides the config file)")
    parser.add_argument("--config", type=Path, help="JSON scenario config file")
    parser.add_argument("--out", type=Path, help="output file path")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), help="output format")
    parser.add_argument("--theta", type=float, help="initial tilt from +z (radians)")
    parser.add_argument("--phi-d", dest="phi_d", type=float, help="ideal phase difference (radians)")
    parser.add_argument("--grid-theta", dest="grid_theta", help="theta sweep grid as a:b:n")
    parser.add_argument("--grid-phid", dest="grid_phid", help="phi_D sweep grid as a:b:n")
    parser.add_argument("--chi-samples", dest="chi_samples", type=int, help="number of chi-scan samples")
    parser.add_argument("--degrees", action="store_true", help="interpret input angles as degrees")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        scenario = build_scenario(args)
        return run(scenario)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (
        SingularPoint,
        StepTooLarge,
        UndefinedPhase,
        SingularInversion,
        GeodesicAmbiguous,
        NotNormalized,
        InsufficientSamples,
    ) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
