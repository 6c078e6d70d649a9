"""Numerical studies driven by a :class:`~sqhhg.config.RunConfig`.

Each study is a list of parameter points.  A point is one full pipeline run
(realizations -> dipoles -> ensemble spectrum -> per-order observables) and
its summary is cached as ``points/<study>-<index>-<key>.npz`` in the output
directory, so interrupted sweeps can be resumed.  CSV files are always
rendered from those summaries in parameter order, which makes them
independent of scheduling and of whether a point was recomputed or resumed.
"""
from __future__ import annotations

import csv
import hashlib
import json
import logging
import math
import os
import platform
import time
from dataclasses import asdict, replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import RunConfig
from .observables import REPORT_COLUMNS, harmonic_reports
from .phase_space import DriverConfig, Sin2, reduce_angle, realizations
from .sfa import SfaGrid, compute_dipoles
from .spectra import (
    SPECTRUM_COLUMNS,
    UndefinedReferenceError,
    accumulate,
    cutoff_order,
    delta_s_ratio,
    fmt,
    fourier_of_delta_s,
)
from .toy import g2_bsv_closed_form, g2_table

log = logging.getLogger(__name__)

_REPORT_FIELDS = ("i_par", "i_perp", "ellipticity", "visibility", "g2_par", "g2_perp", "phase")


class ExperimentError(RuntimeError):
    """A study failed; the message names the parameter point."""


# ---------------------------------------------------------------- points


def _point_key(driver: DriverConfig, cfg: RunConfig, extra=()):
    d = asdict(driver)
    d["envelope"] = {"kind": type(driver.envelope).__name__, **asdict(driver.envelope)}
    blob = {
        "driver": d,
        "grid": asdict(cfg.grid),
        "n_samples": cfg.sampling.n_samples,
        "weight_floor": cfg.sampling.weight_floor,
        "half_width": cfg.experiment.half_width,
        "g2_mode": cfg.experiment.g2_mode,
        "max_order": cfg.experiment.max_order,
        "extra": list(extra),
        "version": __version__,
    }
    return hashlib.sha256(json.dumps(blob, sort_keys=True, default=repr).encode()).hexdigest()[:16]


def _orders(spectrum, cfg):
    hw = cfg.experiment.half_width
    top = min(cfg.experiment.max_order, int(spectrum.omega[-1] / spectrum.omega_l - hw))
    return [q for q in range(1, top + 1, 2) if q - hw > 0]


def ensemble_spectrum(driver: DriverConfig, cfg: RunConfig):
    """Ensemble :class:`SpectrumSet` for one driver under ``cfg``'s grid and sampling."""
    g = cfg.grid
    grid = SfaGrid.for_driver(driver, n_t=g.n_t, excursion_periods=g.excursion_periods)
    reals = realizations(driver, cfg.sampling.n_samples, cfg.sampling.weight_floor)
    total = sum(r.weight for r in reals)
    if abs(total - 1.0) > 1e-12:
        reals = [replace(r, weight=r.weight / total) for r in reals]
    records = compute_dipoles(
        reals, driver, grid, threads=cfg.sampling.threads, depletion=g.depletion,
        window=g.window, pad_factor=g.pad_factor,
    )
    return accumulate(records, config=driver)


def _summarize(spectrum, cfg, keep_spectrum):
    orders = _orders(spectrum, cfg)
    reports = harmonic_reports(spectrum, orders, cfg.experiment.half_width, cfg.experiment.g2_mode)
    out = {"orders": np.array(orders, dtype=int)}
    for name in _REPORT_FIELDS:
        out[name] = np.array([np.nan if getattr(r, name) is None else getattr(r, name)
                              for r in reports], dtype=float)
    try:
        out["cutoff"] = np.array(cutoff_order(spectrum, half_width=cfg.experiment.half_width))
    except ValueError:
        out["cutoff"] = np.array(-1)
    if keep_spectrum:
        n = int(np.searchsorted(spectrum.omega, (cfg.experiment.max_order + 1) * spectrum.omega_l,
                                side="right"))
        n = min(n, len(spectrum.omega))
        out["omega"] = spectrum.omega[:n]
        out["omega_l"] = np.array(spectrum.omega_l)
        out["s_par"] = spectrum.s_par[:n]
        out["s_perp"] = spectrum.s_perp[:n]
        out["m4_par"] = spectrum.m4_par[:n]
        out["m4_perp"] = spectrum.m4_perp[:n]
        out["x"] = spectrum.x[:n]
    return out


class PointStore:
    """Per-point summaries on disk, written atomically."""

    def __init__(self, directory, resume):
        self.dir = Path(directory) / "points"
        self.dir.mkdir(parents=True, exist_ok=True)
        self.resume = resume
        self.computed = 0
        self.reused = 0
        self.timings = []

    def get(self, study, index, driver, cfg, label, keep_spectrum=False):
        key = _point_key(driver, cfg)
        path = self.dir / f"{study}-{index:03d}-{key}.npz"
        if self.resume and path.exists():
            with np.load(path) as z:
                data = {k: z[k] for k in z.files}
            self.reused += 1
            log.info("resumed %s point %d (%s)", study, index, label)
            return data
        t0 = time.perf_counter()
        try:
            spectrum = ensemble_spectrum(driver, cfg)
            data = _summarize(spectrum, cfg, keep_spectrum)
        except Exception as exc:  # add run context, keep the original as cause
            raise ExperimentError(f"{study} point {index} ({label}) failed: {exc}") from exc
        tmp = path.with_suffix(".tmp.npz")
        np.savez(tmp, **data)
        os.replace(tmp, path)
        dt = time.perf_counter() - t0
        self.computed += 1
        self.timings.append((f"{study}[{index}] {label}", dt))
        log.info("computed %s point %d (%s) in %.1f s", study, index, label, dt)
        return data


def _nan_none(v):
    v = float(v)
    return None if math.isnan(v) else v


def _report_rows(data):
    rows = []
    for i, q in enumerate(data["orders"]):
        rows.append([str(int(q))] + [fmt(_nan_none(data[f][i])) for f in _REPORT_FIELDS])
    return rows


def _write_csv(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def _total_at(data, q):
    idx = np.flatnonzero(data["orders"] == q)
    if len(idx) == 0:
        raise ExperimentError(f"harmonic {q} is outside the computed orders")
    i = idx[0]
    return float(data["i_par"][i] + data["i_perp"][i])


def _delta_s_or_none(data, ref, q):
    try:
        return delta_s_ratio(_total_at(data, q), _total_at(ref, q))
    except UndefinedReferenceError:
        return None


# ---------------------------------------------------------------- studies


def phi_grid(cfg: RunConfig):
    e = cfg.experiment
    if e.phis is not None:
        return [float(p) for p in e.phis]
    n = e.phi_points
    return [-math.pi + 2 * math.pi * k / n for k in range(n)]


def _is_pi(phi):
    return abs(reduce_angle(phi) - math.pi) < 1e-12


def run_spectrum(cfg, store, outdir, svg):
    data = store.get("spectrum", 0, cfg.driver, cfg, "driver", keep_spectrum=True)
    files = []
    if cfg.output.csv:
        om, wl = data["omega"], float(data["omega_l"])
        rows = [[fmt(om[k]), fmt(om[k] / wl), fmt(data["s_par"][k]), fmt(data["s_perp"][k]),
                 fmt(data["m4_par"][k]), fmt(data["m4_perp"][k]), fmt(data["x"][k].real),
                 fmt(data["x"][k].imag)] for k in range(len(om))]
        _write_csv(outdir / "spectrum.csv", SPECTRUM_COLUMNS, rows)
        _write_csv(outdir / "harmonics.csv", REPORT_COLUMNS, _report_rows(data))
        files += ["spectrum.csv", "harmonics.csv"]
    if svg:
        from .plotting import plot_spectrum
        plot_spectrum(data, outdir / "spectrum.svg")
        files.append("spectrum.svg")
    return files, {"cutoff_order": int(data["cutoff"])}


def run_g2_report(cfg, store, outdir, svg):
    data = store.get("g2-report", 0, cfg.driver, cfg, "driver")
    files = []
    if cfg.output.csv:
        _write_csv(outdir / "g2_report.csv", REPORT_COLUMNS, _report_rows(data))
        files.append("g2_report.csv")
    if svg:
        from .plotting import plot_g2_orders
        plot_g2_orders({"": data}, outdir / "g2_report.svg")
        files.append("g2_report.svg")
    return files, {"g2_mode": cfg.experiment.g2_mode}


def run_phi_sweep(cfg, store, outdir, svg):
    """Delta S versus squeezing angle for each listed order, and its Fourier table."""
    phis = phi_grid(cfg)
    harmonics = list(cfg.experiment.harmonics)
    points = list(phis)
    if not any(_is_pi(p) for p in points):
        points.append(math.pi)
    results = [
        store.get("phi-sweep", i, replace(cfg.driver, squeezing_angle=p), cfg, f"phi={p:.6g}")
        for i, p in enumerate(points)
    ]
    ref = results[next(i for i, p in enumerate(points) if _is_pi(p))]
    table = [[_delta_s_or_none(results[i], ref, q) for q in harmonics] for i in range(len(phis))]
    files = []
    if cfg.output.csv:
        _write_csv(outdir / "delta_s.csv", ["phi"] + [f"dS_q{q}" for q in harmonics],
                   [[fmt(p)] + [fmt(v) for v in row] for p, row in zip(phis, table)])
        files.append("delta_s.csv")
        long_rows = []
        for p, data in zip(points, results):
            long_rows += [[fmt(reduce_angle(p))] + r for r in _report_rows(data)]
        _write_csv(outdir / "phi_sweep_harmonics.csv", ("phi",) + REPORT_COLUMNS, long_rows)
        files.append("phi_sweep_harmonics.csv")
        try:
            header = ["k"]
            cols = []
            for j, q in enumerate(harmonics):
                vals = [row[j] for row in table]
                if any(v is None for v in vals):
                    raise ValueError(f"undefined Delta S for q={q}")
                k, c = fourier_of_delta_s(phis, vals)
                header += [f"Re_q{q}", f"Im_q{q}"]
                cols.append(c)
            order = np.argsort(k, kind="stable")
            rows = [[str(int(k[i]))] + sum(([fmt(c[i].real), fmt(c[i].imag)] for c in cols), [])
                    for i in order]
            _write_csv(outdir / "delta_s_fourier.csv", header, rows)
            files.append("delta_s_fourier.csv")
        except ValueError as exc:
            log.warning("Fourier table skipped: %s", exc)
    if svg:
        from .plotting import plot_delta_s
        plot_delta_s(phis, harmonics, table, outdir / "delta_s.svg")
        files.append("delta_s.svg")
    return files, {"phi_points": len(phis)}


def run_ellipticity_sweep(cfg, store, outdir, svg):
    """Observables per (A, phi); Delta S is referred to phi = pi at the same A."""
    e = cfg.experiment
    angles = [float(p) for p in e.squeezing_angles]
    points = []
    for a in e.ellipticities:
        pts = list(angles)
        if not any(_is_pi(p) for p in pts):
            pts.append(math.pi)
        points += [(float(a), p) for p in pts]
    results = [
        store.get("ellipticity-sweep", i,
                  replace(cfg.driver, ellipticity=a, squeezing_angle=p), cfg, f"A={a:.6g},phi={p:.6g}")
        for i, (a, p) in enumerate(points)
    ]
    by_key = {(a, round(reduce_angle(p), 12)): d for (a, p), d in zip(points, results)}
    rows = []
    heat = {}
    for a in e.ellipticities:
        ref = by_key[(float(a), round(math.pi, 12))]
        for p in angles:
            data = by_key[(float(a), round(reduce_angle(p), 12))]
            heat[(float(a), p)] = data
            for i, q in enumerate(data["orders"]):
                ds = _delta_s_or_none(data, ref, int(q))
                rows.append([fmt(a), fmt(reduce_angle(p)), fmt(ds)] + _report_rows(data)[i])
    files = []
    if cfg.output.csv:
        _write_csv(outdir / "ellipticity_sweep.csv", ("A", "phi", "delta_S") + REPORT_COLUMNS, rows)
        files.append("ellipticity_sweep.csv")
    if svg:
        from .plotting import plot_ellipticity_heatmap
        for p in angles:
            name = f"ellipticity_phi{reduce_angle(p):+.3f}.svg"
            plot_ellipticity_heatmap(
                [float(a) for a in e.ellipticities], [heat[(float(a), p)] for a in e.ellipticities],
                outdir / name, f"phi = {reduce_angle(p):.3f}")
            files.append(name)
    return files, {"points": len(points)}


def depletion_driver(cfg: RunConfig, mean_amplitude, squeezing_intensity):
    """Linearly polarized squeezed driver with a ``sin^2`` pulse."""
    return replace(cfg.driver, mean_amplitude=float(mean_amplitude),
                   squeezing_intensity=float(squeezing_intensity), ellipticity=0.0,
                   envelope=Sin2(cfg.experiment.pulse_fs), geometry="collinear")


def run_depletion_sweep(cfg, store, outdir, svg):
    """g2 of one order over (I_sq, mean field) with the ADK-depleted engine."""
    e = cfg.experiment
    dcfg = replace(cfg, grid=replace(cfg.grid, depletion=True))
    points = [(float(i), float(m)) for i in e.squeezing_intensities for m in e.mean_amplitudes]
    results = [
        store.get("depletion-sweep", k, depletion_driver(dcfg, m, i), dcfg, f"Isq={i:.3g},eps={m:.3g}")
        for k, (i, m) in enumerate(points)
    ]
    q = e.depletion_order
    rows, long_rows = [], []
    for (i, m), data in zip(points, results):
        idx = np.flatnonzero(data["orders"] == q)
        if len(idx) == 0:
            raise ExperimentError(f"depletion order {q} is outside the computed orders")
        j = idx[0]
        rows.append([fmt(i), fmt(m), str(q), fmt(_nan_none(data["g2_par"][j])),
                     fmt(_nan_none(data["i_par"][j]))])
        long_rows += [[fmt(i), fmt(m)] + r for r in _report_rows(data)]
    files = []
    if cfg.output.csv:
        _write_csv(outdir / "depletion_g2.csv",
                   ["squeezing_intensity", "mean_amplitude", "q", "g2_par", "I_par"], rows)
        _write_csv(outdir / "depletion_harmonics.csv",
                   ("squeezing_intensity", "mean_amplitude") + REPORT_COLUMNS, long_rows)
        files += ["depletion_g2.csv", "depletion_harmonics.csv"]
    if svg:
        from .plotting import plot_depletion
        plot_depletion(points, [r[3] for r in rows], q, outdir / "depletion_g2.svg")
        files.append("depletion_g2.svg")
    return files, {"depletion_order": q}


def run_toy_g2(cfg, store, outdir, svg):
    """g2 versus exponent ``p`` for several mean fields (plus the zero-mean closed form)."""
    e = cfg.experiment
    rows = g2_table(e.p_values, e.toy_means, e.toy_sigma, e.toy_eps_crit, e.toy_exponent)
    out_rows = []
    for p, m, g in rows:
        closed = g2_bsv_closed_form(p) if m == 0 and e.toy_eps_crit is None else None
        out_rows.append([fmt(p), fmt(m), fmt(e.toy_sigma), fmt(g), fmt(closed)])
    files = []
    if cfg.output.csv:
        _write_csv(outdir / "toy_g2.csv", ["p", "mean", "sigma", "g2", "g2_closed_form"], out_rows)
        files.append("toy_g2.csv")
    if svg:
        from .plotting import plot_toy
        plot_toy(rows, outdir / "toy_g2.svg")
        files.append("toy_g2.svg")
    return files, {"rows": len(rows)}


STUDIES = {
    "spectrum": run_spectrum,
    "g2-report": run_g2_report,
    "phi-sweep": run_phi_sweep,
    "ellipticity-sweep": run_ellipticity_sweep,
    "depletion-sweep": run_depletion_sweep,
    "toy-g2": run_toy_g2,
}


def _write_manifest(path, cfg, files, info, store, elapsed):
    lines = [
        f"experiment = {cfg.experiment.kind}",
        f"config_sha256 = {cfg.digest()}",
        f"code_version = {__version__}",
        f"python = {platform.python_version()}",
        f"numpy = {np.__version__}",
        f"threads = {cfg.sampling.threads}",
        f"points_computed = {store.computed}",
        f"points_resumed = {store.reused}",
        f"elapsed_seconds = {elapsed:.3f}",
    ]
    lines += [f"{k} = {v}" for k, v in sorted(info.items())]
    lines += [f"output = {f}" for f in files]
    lines += [f"timing {label} = {dt:.3f}" for label, dt in store.timings]
    lines.append("config = " + json.dumps(cfg.to_dict(), sort_keys=True, default=repr))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_experiment(cfg: RunConfig, resume=False):
    """Run the configured study; returns the output directory."""
    cfg.validate()
    outdir = Path(cfg.output.directory)
    outdir.mkdir(parents=True, exist_ok=True)
    if not os.access(outdir, os.W_OK):
        raise ExperimentError(f"output directory {outdir} is not writable")
    store = PointStore(outdir, resume)
    t0 = time.perf_counter()
    files, info = STUDIES[cfg.experiment.kind](cfg, store, outdir, cfg.output.svg)
    _write_manifest(outdir / "manifest", cfg, files, info, store, time.perf_counter() - t0)
    return outdir
