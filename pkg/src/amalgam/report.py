"""Scaling fits, verification reports, and file emission.

Reports are plain data.  Emission writes three artifacts per batch: a long
CSV (scenario, param, t, value), a JSON summary that round-trips exactly
through load_reports, and one log-log SVG figure per scenario with curves.
Verdicts are PASS, FAIL, or NOT_APPLICABLE; the latter is emitted whenever a
law's hypotheses fail, never a silent pass.
"""

from __future__ import annotations

import csv
import json
import math
import os
from dataclasses import asdict, dataclass, field

import numpy as np

from .grid import DomainError

PASS = "PASS"
FAIL = "FAIL"
NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares line through (log t, log value)."""

    slope: float
    intercept: float
    max_rel_residual: float
    window: tuple
    n_nodes: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["window"] = list(self.window)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ScalingFit":
        d = dict(d)
        d["window"] = tuple(d["window"])
        return cls(**d)


def fit_exponent(samples, window=None, min_nodes: int = 6) -> ScalingFit:
    """Fit value ~ C t^slope on the samples inside the window.

    samples: iterable of (t, value) with positive values; window: (t_min,
    t_max) or None for the full range.  Requires at least min_nodes nodes.
    """
    pts = [(float(t), float(v)) for t, v in samples]
    if window is not None:
        lo, hi = window
        pts = [(t, v) for t, v in pts if lo * (1 - 1e-12) <= t <= hi * (1 + 1e-12)]
    if len(pts) < min_nodes:
        raise DomainError(f"need at least {min_nodes} nodes in the fit window, got {len(pts)}")
    if any(v <= 0 or t <= 0 for t, v in pts):
        raise DomainError("fit needs positive times and values")
    ts = np.array([t for t, _ in pts])
    vs = np.array([v for _, v in pts])
    lt, lv = np.log(ts), np.log(vs)
    slope, intercept = np.polyfit(lt, lv, 1)
    resid = np.abs(np.exp(lv - (slope * lt + intercept)) - 1.0)
    return ScalingFit(
        slope=float(slope),
        intercept=float(intercept),
        max_rel_residual=float(resid.max()),
        window=(float(ts.min()), float(ts.max())),
        n_nodes=len(pts),
    )


@dataclass
class VerifyReport:
    """One verification scenario's parameters, measurements, and verdict."""

    scenario: str
    params: dict
    seed: int
    measured: dict = field(default_factory=dict)
    curves: dict = field(default_factory=dict)
    predicted: dict = field(default_factory=dict)
    tolerance: float = 0.0
    verdict: str = NOT_APPLICABLE
    prediction: str = ""
    fits: dict = field(default_factory=dict)
    notes: str = ""

    def add_curve(self, name: str, pairs) -> None:
        self.curves[name] = [[float(t), float(v)] for t, v in pairs]

    def add_fit(self, name: str, fit: ScalingFit) -> None:
        self.fits[name] = fit.to_dict()

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "VerifyReport":
        return cls(**d)


def _verdict_exit_code(verdict: str) -> int:
    return {PASS: 0, FAIL: 1, NOT_APPLICABLE: 2}.get(verdict, 3)


def exit_code(reports) -> int:
    """0 only if every report passes; NOT_APPLICABLE dominates PASS."""
    codes = [_verdict_exit_code(r.verdict) for r in reports]
    if not codes:
        return 0
    if 1 in codes:
        return 1
    if 2 in codes:
        return 2
    return 0


def emit_report(reports, outdir, basename: str = "verify"):
    """Write CSV + JSON (+ one SVG per scenario).  Returns written paths."""
    reports = list(reports)
    os.makedirs(outdir, exist_ok=True)
    paths = []

    csv_path = os.path.join(outdir, f"{basename}.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scenario", "param", "t", "value"])
        for r in reports:
            for name, pairs in r.curves.items():
                for t, v in pairs:
                    writer.writerow([r.scenario, name, repr(t), repr(v)])
            for name, v in r.measured.items():
                if isinstance(v, (int, float)):
                    writer.writerow([r.scenario, name, "", repr(float(v))])
    paths.append(csv_path)

    json_path = os.path.join(outdir, f"{basename}.json")
    with open(json_path, "w") as fh:
        json.dump([r.to_dict() for r in reports], fh, indent=1)
    paths.append(json_path)

    for r in reports:
        if not r.curves:
            continue
        paths.append(_plot_report(r, outdir, basename))
    return paths


def _plot_report(r: VerifyReport, outdir, basename: str) -> str:
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5.0, 3.6))
    loglog_ok = True
    for name, pairs in r.curves.items():
        ts = [t for t, _ in pairs]
        vs = [v for _, v in pairs]
        if any(t <= 0 for t in ts) or any(v <= 0 for v in vs):
            loglog_ok = False
        ax.plot(ts, vs, marker="o", markersize=3, linewidth=1, label=name)
    for name, fd in r.fits.items():
        fit = ScalingFit.from_dict(fd)
        lo, hi = fit.window
        if lo > 0 and hi > lo:
            ts = np.geomspace(lo, hi, 32)
            ax.plot(ts, np.exp(fit.intercept) * ts ** fit.slope, "--", linewidth=1,
                    label=f"{name} fit t^{fit.slope:.3f}")
    if loglog_ok:
        ax.set_xscale("log")
        ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("value")
    title = r.scenario
    if "slope" in r.predicted:
        title += f"  (predicted {r.predicted['slope']:+.3f})"
    ax.set_title(f"{title} [{r.verdict}]", fontsize=9)
    ax.legend(fontsize=6, loc="best")
    fig.tight_layout()
    safe = r.scenario.replace("/", "_")
    path = os.path.join(outdir, f"{basename}_{safe}.svg")
    fig.savefig(path)
    plt.close(fig)
    return path


def load_reports(json_path):
    with open(json_path) as fh:
        data = json.load(fh)
    return [VerifyReport.from_dict(d) for d in data]


def slope_verdict(fit: ScalingFit, predicted: float, tol: float) -> str:
    return PASS if abs(fit.slope - predicted) <= tol and math.isfinite(fit.slope) else FAIL


def flatness_verdict(values, max_ratio: float) -> str:
    vals = [v for v in values if math.isfinite(v)]
    if len(vals) != len(list(values)) or not vals:
        return FAIL
    lo, hi = min(vals), max(vals)
    if lo <= 0:
        return FAIL
    return PASS if hi / lo <= max_ratio else FAIL
