"""Photon-number sweeps, feasibility calculators and JSON configuration.

Sweep tables carry one row per (chi, N) with the fixed column set in
:data:`CSV_COLUMNS`. Floats are written with 17 significant digits so a
table is byte-identical across runs; a quadrature bound beyond the
linearisation limit is left empty rather than written as 0.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass, field, fields
import io
import json
import math
from pathlib import Path

import numpy as np
from scipy.constants import c as C_LIGHT, hbar as HBAR

from .bounds import cr_bound_rs
from .errors import ConfigError
from .fock import KerrVariant, Probe
from .geometry import EARTH_RADIUS, EARTH_SCHWARZSCHILD_RADIUS, Geometry
from .interferometer import (
    DEFAULT_VALIDITY_THRESHOLD,
    MeasurementPlan,
    SqueezedProbe,
    quadrature_bound_rs,
    sql_bound_rs,
    squeezed_lossy_bound,
    validity_metric,
)

__all__ = [
    "CSV_COLUMNS",
    "FIG2_CHIS",
    "SweepSpec",
    "FeasibilityInput",
    "PowerEstimate",
    "Improvement",
    "photon_grid",
    "run_sweep",
    "format_csv",
    "format_value",
    "write_csv",
    "y_tilde",
    "chi_from_material",
    "chi_from_phase",
    "phase_per_photon",
    "peak_power",
    "report_improvement",
    "load_config",
    "config_from_dict",
    "Config",
]

CSV_COLUMNS = (
    "N",
    "chi",
    "y_tilde",
    "bound_fisher",
    "bound_quadrature",
    "bound_sql",
    "bound_squeezed_lossy",
    "validity_metric",
    "valid_flag",
)

# glass fibre, two intermediate estimates, and photonic crystal fibre values
FIG2_CHIS = (1e-6, 1e-2, 0.1, 1.0, 6.0)

ALL_METHODS = ("fisher", "quadrature", "sql", "squeezed_lossy")


def photon_grid(log10_min, log10_max, points_per_decade):
    """Log-spaced photon numbers with both decade bounds included."""
    if log10_max < log10_min or points_per_decade < 1:
        raise ValueError("empty photon-number grid")
    count = int(round((log10_max - log10_min) * points_per_decade)) + 1
    return np.logspace(log10_min, log10_max, count)


@dataclass(frozen=True)
class SweepSpec:
    """Photon-number x chi grid for the desk-scale figure.

    Defaults reproduce the Earth-surface setting: L = 1 cm, h = 10 m,
    omega = 1e14 rad/s, M = 1e10.
    """

    log10_N_min: float = 8.0
    log10_N_max: float = 22.0
    points_per_decade: int = 10
    chis: tuple = FIG2_CHIS
    geometry: Geometry = field(
        default_factory=lambda: Geometry(r_s=EARTH_SCHWARZSCHILD_RADIUS, r_A=EARTH_RADIUS, h=10.0, L=0.01)
    )
    omega: float = 1e14
    M: int = 10**10
    eps_a: float = 1.0
    eps_b: float = 1.0
    squeeze_eps: float = 1.0 - 1e-6
    methods: tuple = ALL_METHODS
    validity_threshold: float = DEFAULT_VALIDITY_THRESHOLD

    def __post_init__(self):
        object.__setattr__(self, "chis", tuple(float(c) for c in self.chis))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.chis:
            raise ValueError("chi list is empty")
        if any(c < 0 for c in self.chis):
            raise ValueError("chi values must be non-negative")
        unknown = set(self.methods) - set(ALL_METHODS)
        if unknown:
            raise ValueError(f"unknown methods {sorted(unknown)}")
        photon_grid(self.log10_N_min, self.log10_N_max, self.points_per_decade)

    @property
    def grid(self):
        return photon_grid(self.log10_N_min, self.log10_N_max, self.points_per_decade)


def y_tilde(probe, n_prime=1.0):
    """Dimensionless nonlinearity dominance N chi n' / omega."""
    if probe.omega <= 0:
        raise ValueError("omega must be positive")
    return probe.N_a * probe.chi * n_prime / probe.omega


def _row(spec, chi, N):
    g = spec.geometry
    probe = Probe.from_photon_number(N, omega=spec.omega, chi=chi)
    metric = validity_metric(probe, g)
    valid = metric <= spec.validity_threshold
    plan = MeasurementPlan(M=spec.M, eps_a=spec.eps_a, eps_b=spec.eps_b)
    row = {
        "N": N,
        "chi": chi,
        "y_tilde": y_tilde(probe, g.n_prime),
        "bound_fisher": None,
        "bound_quadrature": None,
        "bound_sql": None,
        "bound_squeezed_lossy": None,
        "validity_metric": metric,
        "valid_flag": valid,
    }
    if "fisher" in spec.methods:
        row["bound_fisher"] = cr_bound_rs(probe, g, spec.M).relative_error
    if "quadrature" in spec.methods and valid:
        row["bound_quadrature"] = quadrature_bound_rs(probe, g, plan).relative_error
    if "sql" in spec.methods:
        row["bound_sql"] = sql_bound_rs(probe, g, spec.M).relative_error
    if "squeezed_lossy" in spec.methods:
        sq = SqueezedProbe.split(N, eps=spec.squeeze_eps)
        row["bound_squeezed_lossy"] = squeezed_lossy_bound(sq, g, spec.omega, spec.M).relative_error
    return row


def run_sweep(spec, workers=None):
    """Evaluate every (chi, N) point; rows come back ordered by chi, then N."""
    points = [(chi, float(N)) for chi in spec.chis for N in spec.grid]
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda pt: _row(spec, *pt), points))
    return [_row(spec, chi, N) for chi, N in points]


def format_value(value):
    """CSV cell text: empty for None, true/false for flags, 17 significant digits for numbers."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return format(value, ".17g")


def format_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([format_value(row[col]) for col in CSV_COLUMNS])
    return buf.getvalue()


def write_csv(rows, path):
    Path(path).write_text(format_csv(rows))


@dataclass(frozen=True)
class FeasibilityInput:
    n_tilde: float
    n0: float
    A: float
    dt: float
    omega: float
    N: float

    def __post_init__(self):
        for f in fields(self):
            if not getattr(self, f.name) > 0:
                raise ValueError(f"{f.name} must be positive")


def chi_from_material(inp):
    """Effective chi (rad/s) from the nonlinear index of a pulse of area A, duration dt."""
    chi_prime = (inp.n_tilde / inp.n0) * HBAR * inp.omega / (inp.A * inp.dt)
    return 0.5 * inp.n0 * inp.omega * chi_prime


def phase_per_photon(chi, length, group_index=1.0):
    """Single-photon nonlinear phase chi * tau for a medium of the given length."""
    return chi * group_index * length / C_LIGHT


def chi_from_phase(phase, length, group_index=1.0):
    """Inverse of :func:`phase_per_photon`."""
    return phase * C_LIGHT / (group_index * length)


@dataclass(frozen=True)
class PowerEstimate:
    peak: float
    average: float | None


def peak_power(N, omega, dt, repetition_rate=None):
    """Peak power N hbar omega / dt, and N hbar omega M when a rate M is given."""
    if N <= 0 or omega <= 0 or dt <= 0:
        raise ValueError("N, omega and dt must be positive")
    energy = N * HBAR * omega
    average = energy * repetition_rate if repetition_rate is not None else None
    return PowerEstimate(peak=energy / dt, average=average)


@dataclass(frozen=True)
class Improvement:
    ratio: float
    sql: float
    quadrature: float
    orders_of_magnitude: float
    note: str


def report_improvement(N, chi, geometry, M, omega=1e14, claimed_orders=None):
    """Ratio of the linear (SQL) bound to the Kerr quadrature bound at equal N."""
    probe = Probe.from_photon_number(N, omega=omega, chi=chi)
    sql = sql_bound_rs(probe, geometry, M).relative_error
    quad = quadrature_bound_rs(probe, geometry, MeasurementPlan(M=M)).relative_error
    ratio = sql / quad
    orders = math.log10(ratio)
    note = f"improvement {ratio:.6g} ({orders:.3f} decades)"
    if claimed_orders is not None and abs(orders - claimed_orders) > 0.5:
        note += f"; differs from the quoted {claimed_orders} decades by {orders - claimed_orders:+.2f}"
    return Improvement(ratio=ratio, sql=sql, quadrature=quad, orders_of_magnitude=orders, note=note)


# --- configuration -----------------------------------------------------------

_SECTIONS = {
    "probe": {
        "photon_number": 1e17,
        "omega_rad_per_s": 1e14,
        "chi_rad_per_s": 0.1,
        "q": 2,
        "variant": "shifted_quadratic",
        "tau_s": 1.0,
    },
    "geometry": {
        "r_s_m": EARTH_SCHWARZSCHILD_RADIUS,
        "r_A_m": EARTH_RADIUS,
        "h_m": 10.0,
        "L_m": 0.01,
        "n_prime": 1.0,
    },
    "plan": {
        "M": 10**10,
        "eps_a": 1.0,
        "eps_b": 1.0,
        "beta_offset_rad": 0.0,
        "squeeze_eps": 1.0 - 1e-6,
    },
    "sweep": {
        "log10_N_min": 8.0,
        "log10_N_max": 22.0,
        "points_per_decade": 10,
        "chi_rad_per_s": list(FIG2_CHIS),
        "methods": list(ALL_METHODS),
        "validity_threshold": DEFAULT_VALIDITY_THRESHOLD,
    },
    "feasibility": {
        "n_tilde_m2_per_W": 2.6e-20,
        "n0": 1.45,
        "area_m2": 1e-12,
        "pulse_duration_s": 30e-15,
        "omega_rad_per_s": 1e14,
        "photon_number": 1e20,
        "repetition_rate_hz": 1e10,
        "fibre_length_m": 4.5,
        "phase_per_photon_rad": [1e-8, 1e-7],
    },
}


@dataclass(frozen=True)
class Config:
    probe: Probe
    tau: float
    geometry: Geometry
    plan: MeasurementPlan
    beta_offset: float
    squeeze_eps: float
    sweep: SweepSpec
    feasibility: dict


def config_from_dict(raw):
    """Validate a configuration mapping; unknown sections or keys are errors."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(raw) - set(_SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    merged = {}
    for name, defaults in _SECTIONS.items():
        section = raw.get(name, {})
        if not isinstance(section, dict):
            raise ConfigError(f"section {name!r} must be an object")
        bad = set(section) - set(defaults)
        if bad:
            raise ConfigError(f"unknown keys in {name!r}: {sorted(bad)}")
        merged[name] = {**defaults, **section}
    try:
        return _build(merged)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _build(cfg):
    pr, ge, pl, sw = cfg["probe"], cfg["geometry"], cfg["plan"], cfg["sweep"]
    geometry = Geometry(r_s=ge["r_s_m"], r_A=ge["r_A_m"], h=ge["h_m"], L=ge["L_m"], n_prime=ge["n_prime"])
    probe = Probe.from_photon_number(
        pr["photon_number"],
        omega=pr["omega_rad_per_s"],
        chi=pr["chi_rad_per_s"],
        q=pr["q"],
        variant=KerrVariant(pr["variant"]),
    )
    if pr["tau_s"] < 0:
        raise ConfigError("tau_s must be non-negative")
    if not isinstance(pl["M"], int) and not float(pl["M"]).is_integer():
        raise ConfigError("M must be an integer")
    plan = MeasurementPlan(M=int(pl["M"]), eps_a=pl["eps_a"], eps_b=pl["eps_b"])
    chis = sw["chi_rad_per_s"]
    if not isinstance(chis, list):
        chis = [chis]
    sweep = SweepSpec(
        log10_N_min=sw["log10_N_min"],
        log10_N_max=sw["log10_N_max"],
        points_per_decade=int(sw["points_per_decade"]),
        chis=tuple(chis),
        geometry=geometry,
        omega=pr["omega_rad_per_s"],
        M=int(pl["M"]),
        eps_a=pl["eps_a"],
        eps_b=pl["eps_b"],
        squeeze_eps=pl["squeeze_eps"],
        methods=tuple(sw["methods"]),
        validity_threshold=sw["validity_threshold"],
    )
    return Config(
        probe=probe,
        tau=pr["tau_s"],
        geometry=geometry,
        plan=plan,
        beta_offset=pl["beta_offset_rad"],
        squeeze_eps=pl["squeeze_eps"],
        sweep=sweep,
        feasibility=dict(cfg["feasibility"]),
    )


def load_config(path=None):
    """Read a JSON configuration file; ``None`` gives the built-in defaults."""
    if path is None:
        return config_from_dict({})
    try:
        raw = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    return config_from_dict(raw)
