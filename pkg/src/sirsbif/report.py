"""Artifact emission: deterministic CSV tables and matplotlib SVG figures.

CSV files are written atomically (temp file + rename), UTF-8 with LF line
endings, floats in shortest round-trip decimal form, so identical inputs
yield byte-identical files.  SVG figures get a fixed hash salt and no date
metadata for the same reason.
"""

from __future__ import annotations

import csv
import json
import os
import tempfile

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

plt.rcParams["svg.hashsalt"] = "sirsbif"

_SVG_METADATA = {"Date": None}


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _atomic_write(path: str, writer):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            writer(handle)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path: str, header: list, rows: list):
    def writer(handle):
        out = csv.writer(handle, lineterminator="\n")
        out.writerow(header)
        for row in rows:
            out.writerow([_fmt(v) for v in row])
    _atomic_write(path, writer)


def write_json(path: str, payload: dict):
    def writer(handle):
        json.dump(payload, handle, indent=2, sort_keys=True)
        handle.write("\n")
    _atomic_write(path, writer)


def _save(fig, path: str):
    fig.savefig(path, format="svg", metadata=_SVG_METADATA)
    plt.close(fig)


def phase_portrait_svg(path: str, params, trajectories, equilibria=None,
                       cycles=None, title: str = ""):
    """Trajectory fan in the (x, y) plane with equilibria and cycles marked."""
    fig, ax = plt.subplots(figsize=(5.5, 4.5))
    for traj in trajectories:
        xs = [s[0] for s in traj.states]
        ys = [s[1] for s in traj.states]
        ax.plot(xs, ys, lw=0.7, color="tab:blue", alpha=0.8)
    for rep in equilibria or []:
        y = params.eta * rep.z
        marker = "o" if rep.det > 0 else "x"
        ax.plot([rep.z], [y], marker=marker, color="tab:red", ms=6)
    ax.plot([0.0], [0.0], marker="s", color="tab:red", ms=5)
    for rec in cycles or []:
        ax.plot([rec.anchor[0] + rec.radius * rec.ray[0]],
                [rec.anchor[1] + rec.radius * rec.ray[1]],
                marker="+", color="tab:green", ms=8)
    ax.set_xlabel("x (infective density)")
    ax.set_ylabel("y (recovered density)")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def displacement_svg(path: str, samples, records=None, title: str = ""):
    """Displacement d(r) = P(r) - r against the section radius."""
    fig, ax = plt.subplots(figsize=(5.5, 4.0))
    rs = [r for r, d in samples if d is not None]
    ds = [d for _, d in samples if d is not None]
    ax.axhline(0.0, color="k", lw=0.6)
    ax.plot(rs, ds, marker=".", lw=0.8, color="tab:blue")
    for rec in records or []:
        ax.axvline(rec.radius, color="tab:green", lw=0.8, ls="--")
    ax.set_xlabel("section radius r")
    ax.set_ylabel("displacement P(r) - r")
    if rs:
        ax.set_xscale("log")
    ax.set_yscale("symlog", linthresh=1e-12)
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    _save(fig, path)


def sweep_svg(path: str, sweep, title: str = ""):
    """Equilibrium abscissas and cycle counts along the swept parameter."""
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(5.5, 6.0), sharex=True)
    for pt in sweep.points:
        for rep in pt.equilibria:
            color = "tab:red" if rep.det < 0 else "tab:blue"
            ax1.plot([pt.value], [rep.z], marker=".", color=color)
    ax1.set_ylabel("equilibrium abscissa z")
    ax1.grid(True, alpha=0.3)
    vals = [pt.value for pt in sweep.points if pt.cycle_count is not None]
    counts = [pt.cycle_count for pt in sweep.points if pt.cycle_count is not None]
    ax2.step(vals, counts, where="mid", color="tab:green")
    for ev in sweep.events:
        ax2.axvspan(min(ev.lo, ev.hi), max(ev.lo, ev.hi), color="tab:orange", alpha=0.3)
    ax2.set_xlabel(sweep.parameter)
    ax2.set_ylabel("limit-cycle count")
    ax2.grid(True, alpha=0.3)
    if title:
        ax1.set_title(title)
    _save(fig, path)
