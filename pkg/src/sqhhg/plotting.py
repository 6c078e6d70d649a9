"""SVG renderings of the study CSV data (convenience only; CSVs are the contract)."""
from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

# fixed ids and no timestamp, so identical data give identical files
matplotlib.rcParams["svg.hashsalt"] = "sqhhg"
_META = {"Date": None, "Creator": "sqhhg"}


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)


def plot_spectrum(data, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    h = data["omega"] / float(data["omega_l"])
    for key, label in (("s_par", "par"), ("s_perp", "perp")):
        y = np.where(data[key] > 0, data[key], np.nan)
        ax.semilogy(h, y, lw=0.8, label=label)
    ax.set_xlabel("harmonic order")
    ax.set_ylabel("S (arb. u.)")
    ax.legend()
    _save(fig, path)


def plot_g2_orders(datasets, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for label, data in datasets.items():
        ax.semilogy(data["orders"], data["g2_par"], "o-", ms=3, label=f"par {label}".strip())
        ax.semilogy(data["orders"], data["g2_perp"], "s--", ms=3, label=f"perp {label}".strip())
    ax.axhline(1.0, color="k", lw=0.5, ls=":")
    ax.set_xlabel("harmonic order")
    ax.set_ylabel("g2(0)")
    ax.legend(fontsize=7)
    _save(fig, path)


def plot_delta_s(phis, harmonics, table, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    for j, q in enumerate(harmonics):
        y = np.array([np.nan if row[j] is None else row[j] for row in table], dtype=float)
        peak = np.nanmax(y) if np.any(np.isfinite(y)) else 1.0
        ax.plot(np.asarray(phis) / math.pi, y / (peak or 1.0), "o-", ms=3, label=f"q = {q}")
    ax.set_xlabel("phi / pi")
    ax.set_ylabel("Delta S (normalized)")
    ax.legend()
    _save(fig, path)


def plot_ellipticity_heatmap(a_values, datasets, path, title=""):
    orders = datasets[0]["orders"]
    grid = np.array([d["ellipticity"] for d in datasets], dtype=float)
    fig, ax = plt.subplots(figsize=(6, 3.5))
    mesh = ax.pcolormesh(orders, a_values, grid, vmin=0, vmax=1, shading="nearest")
    fig.colorbar(mesh, ax=ax, label="E_q")
    ax.set_xlabel("harmonic order")
    ax.set_ylabel("A")
    ax.set_title(title)
    _save(fig, path)


def plot_depletion(points, g2_cells, q, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    isqs = sorted({p[0] for p in points})
    means = sorted({p[1] for p in points})
    lookup = {p: (float(c) if c else np.nan) for p, c in zip(points, g2_cells)}
    for m in means:
        ax.loglog(isqs, [lookup[(i, m)] for i in isqs], "o-", label=f"mean = {m:g}")
    ax.set_xlabel("I_sq (a.u.)")
    ax.set_ylabel(f"g2(0), q = {q}")
    ax.legend()
    _save(fig, path)


def plot_toy(rows, path):
    fig, ax = plt.subplots(figsize=(6, 3.5))
    means = sorted({m for _, m, _ in rows})
    for m in means:
        sel = [(p, g) for p, mm, g in rows if mm == m]
        ax.semilogy([p for p, _ in sel], [g for _, g in sel], "o-", ms=3, label=f"mean = {m:g}")
    ax.set_xlabel("p")
    ax.set_ylabel("g2(0)")
    ax.legend()
    _save(fig, path)
