"""Run configuration: a TOML file with ``[driver]``, ``[grid]``, ``[sampling]``,
``[experiment]`` and ``[output]`` tables.  Every key is optional.

Example::

    [driver]
    mean_amplitude = 0.053
    omega = 0.057
    ellipticity = 0.9
    squeezing_intensity = 1e-5
    squeezing_angle = 0.0
    envelope = "monochromatic"   # or "sin2"
    n_cycles = 5
    duration_fs = 13.0

    [grid]
    excursion_periods = 1.5
    window = "none"              # or "hann"
    depletion = false

    [sampling]
    n_samples = 140
    weight_floor = 1e-40
    threads = 1

    [experiment]
    kind = "phi-sweep"
    harmonics = [17, 19, 21]
    phi_points = 24

    [output]
    directory = "out"
    csv = true
    svg = false
"""
from __future__ import annotations

import hashlib
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields, replace

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .phase_space import DriverConfig, Monochromatic, Sin2

EXPERIMENTS = ("spectrum", "phi-sweep", "ellipticity-sweep", "g2-report", "toy-g2", "depletion-sweep")


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


@dataclass(frozen=True)
class GridSettings:
    n_t: int | None = None
    excursion_periods: float = 1.5
    window: str | None = None
    depletion: bool = False
    pad_factor: int = 1


@dataclass(frozen=True)
class SamplingSettings:
    n_samples: int = 140
    weight_floor: float = 1e-40
    threads: int = 1


@dataclass(frozen=True)
class ExperimentSettings:
    kind: str = "spectrum"
    harmonics: tuple = (17, 19, 21)
    max_order: int = 39
    half_width: float = 0.5
    g2_mode: str = "windowed"
    phi_points: int = 24
    phis: tuple | None = None
    ellipticities: tuple = (0.1, 0.5, 0.9)
    squeezing_angles: tuple = (0.0, math.pi)
    # toy model
    p_values: tuple = (0.0, 0.5, 1.0, 2.0, 3.0, 4.0, 6.0, 8.0)
    toy_means: tuple = (0.0, 0.5, 1.0, 2.0)
    toy_sigma: float = 1.0
    toy_eps_crit: float | None = None
    toy_exponent: float = 2.0
    # depletion sweep
    mean_amplitudes: tuple = (0.0, 0.03, 0.053)
    squeezing_intensities: tuple = (1e-5, 5e-5, 1e-4)
    depletion_order: int = 13
    pulse_fs: float = 13.0


@dataclass(frozen=True)
class OutputSettings:
    directory: str = "out"
    csv: bool = True
    svg: bool = False


@dataclass(frozen=True)
class RunConfig:
    driver: DriverConfig = field(default_factory=DriverConfig)
    grid: GridSettings = field(default_factory=GridSettings)
    sampling: SamplingSettings = field(default_factory=SamplingSettings)
    experiment: ExperimentSettings = field(default_factory=ExperimentSettings)
    output: OutputSettings = field(default_factory=OutputSettings)

    def validate(self):
        e = self.experiment
        if e.kind not in EXPERIMENTS:
            raise ConfigError(f"experiment.kind must be one of {EXPERIMENTS}, got {e.kind!r}")
        if self.sampling.n_samples < 1:
            raise ConfigError("sampling.n_samples must be >= 1")
        if self.sampling.threads < 1:
            raise ConfigError("sampling.threads must be >= 1")
        if self.grid.window not in (None, "hann"):
            raise ConfigError("grid.window must be 'none' or 'hann'")
        if e.g2_mode not in ("windowed", "pointwise"):
            raise ConfigError("experiment.g2_mode must be 'windowed' or 'pointwise'")
        need = {
            "phi-sweep": ("harmonics",),
            "ellipticity-sweep": ("harmonics", "ellipticities", "squeezing_angles"),
            "toy-g2": ("p_values", "toy_means"),
            "depletion-sweep": ("mean_amplitudes", "squeezing_intensities"),
        }.get(e.kind, ())
        for name in need:
            if len(getattr(e, name)) == 0:
                raise ConfigError(f"experiment.{name} must not be empty for {e.kind}")
        if e.kind == "phi-sweep" and e.phis is None and e.phi_points < 2:
            raise ConfigError("experiment.phi_points must be >= 2")
        if e.kind == "phi-sweep" and e.phis is not None and len(e.phis) == 0:
            raise ConfigError("experiment.phis must not be empty")
        return self

    def to_dict(self):
        d = asdict(self)
        env = self.driver.envelope
        d["driver"]["envelope"] = {"kind": type(env).__name__, **asdict(env)}
        return d

    def digest(self):
        """SHA-256 of the canonical JSON form (output settings excluded)."""
        d = self.to_dict()
        d.pop("output")
        d["sampling"].pop("threads")
        blob = json.dumps(d, sort_keys=True, default=repr).encode()
        return hashlib.sha256(blob).hexdigest()


def _take(table, cls, section, converters=None):
    converters = converters or {}
    known = {f.name for f in fields(cls)}
    unknown = set(table) - known
    if unknown:
        raise ConfigError(f"unknown keys in [{section}]: {sorted(unknown)}")
    kw = {}
    for k, v in table.items():
        conv = converters.get(k)
        kw[k] = conv(v) if conv else v
    return kw


def _tuple(v):
    return tuple(v)


def _window(v):
    if v in (None, "none", "None", ""):
        return None
    return str(v).lower()


def _driver(table):
    t = dict(table)
    env_kind = str(t.pop("envelope", "monochromatic")).lower()
    n_cycles = t.pop("n_cycles", 5.0)
    lead_in = t.pop("lead_in_cycles", 2.0)
    duration = t.pop("duration_fs", 13.0)
    if env_kind in ("monochromatic", "mono"):
        env = Monochromatic(float(n_cycles), float(lead_in))
    elif env_kind in ("sin2", "sin^2"):
        env = Sin2(float(duration))
    else:
        raise ConfigError(f"unknown envelope {env_kind!r}")
    kw = _take(t, DriverConfig, "driver")
    kw.pop("envelope", None)
    try:
        return DriverConfig(envelope=env, **kw)
    except ValueError as exc:
        raise ConfigError(f"[driver]: {exc}") from exc


def from_mapping(data) -> RunConfig:
    data = dict(data)
    unknown = set(data) - {"driver", "grid", "sampling", "experiment", "output"}
    if unknown:
        raise ConfigError(f"unknown sections: {sorted(unknown)}")
    exp_conv = {k: _tuple for k in (
        "harmonics", "phis", "ellipticities", "squeezing_angles", "p_values", "toy_means",
        "mean_amplitudes", "squeezing_intensities")}
    cfg = RunConfig(
        driver=_driver(data.get("driver", {})),
        grid=GridSettings(**_take(data.get("grid", {}), GridSettings, "grid", {"window": _window})),
        sampling=SamplingSettings(**_take(data.get("sampling", {}), SamplingSettings, "sampling")),
        experiment=ExperimentSettings(**_take(data.get("experiment", {}), ExperimentSettings,
                                              "experiment", exp_conv)),
        output=OutputSettings(**_take(data.get("output", {}), OutputSettings, "output")),
    )
    return cfg.validate()


def load_config(path) -> RunConfig:
    with open(path, "rb") as fh:
        try:
            data = tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return from_mapping(data)


def with_overrides(cfg: RunConfig, kind=None, out=None, samples=None, threads=None, svg=None):
    """Apply command-line overrides on top of a loaded configuration."""
    if kind is not None:
        cfg = replace(cfg, experiment=replace(cfg.experiment, kind=kind))
    if out is not None:
        cfg = replace(cfg, output=replace(cfg.output, directory=str(out)))
    if samples is not None:
        cfg = replace(cfg, sampling=replace(cfg.sampling, n_samples=int(samples)))
    if threads is not None:
        cfg = replace(cfg, sampling=replace(cfg.sampling, threads=int(threads)))
    if svg:
        cfg = replace(cfg, output=replace(cfg.output, svg=True))
    return cfg.validate()
