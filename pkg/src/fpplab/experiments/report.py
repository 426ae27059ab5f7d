"""Experiment reports: cells, checks, verdicts and the on-disk artifacts."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import dataclass, field

from .. import constants

SCHEMA = "fpp-lab/1"
CSV_HEADER = ["cell", "parameter", "estimate", "stderr", "reference", "n"]
SIGMAS = 3.0
MAX_TOUCH_RATE = 0.05
MIN_REPLICAS = 30


@dataclass(frozen=True)
class Cell:
    cell: str
    parameter: float
    estimate: float
    stderr: float
    reference: float
    n: int

    def to_json(self) -> dict:
        return {k: _clean(getattr(self, k)) for k in CSV_HEADER}


@dataclass(frozen=True)
class Check:
    """An inequality in the form margin >= 0, with the standard error of the margin."""

    name: str
    margin: float
    stderr: float

    @property
    def holds(self) -> bool:
        return self.margin >= 0

    @property
    def violated(self) -> bool:
        se = self.stderr if math.isfinite(self.stderr) else 0.0
        return not (self.margin >= -SIGMAS * se)

    def to_json(self) -> dict:
        return {"name": self.name, "margin": _clean(self.margin), "stderr": _clean(self.stderr),
                "holds": self.holds, "violated": self.violated}


@dataclass
class ExperimentReport:
    name: str
    inequality: str
    config: dict
    config_hash: str
    cells: list
    checks: list
    fitted: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    raw: dict = field(default_factory=dict)
    replicas: int = 0
    failures: int = 0
    boundary_touch_rate: float = 0.0
    runtime: float = 0.0  # kept out of report.json so re-runs are byte-identical

    @property
    def verdict(self) -> str:
        if self.replicas < MIN_REPLICAS or self.boundary_touch_rate > MAX_TOUCH_RATE:
            return "inconclusive"
        if self.replicas and self.failures > MAX_TOUCH_RATE * self.replicas:
            return "inconclusive"
        if any(c.violated for c in self.checks):
            return "violated"
        return "consistent"

    @property
    def remediation(self) -> str | None:
        if self.boundary_touch_rate > MAX_TOUCH_RATE:
            return "geodesics touched the search box too often; increase padding"
        if self.replicas < MIN_REPLICAS:
            return f"verdicts need at least {MIN_REPLICAS} replicas"
        if self.failures > MAX_TOUCH_RATE * max(1, self.replicas):
            return "too many replicas failed; see raw.failures"
        return None

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "name": self.name,
            "inequality": self.inequality,
            "verdict": self.verdict,
            "remediation": self.remediation,
            "config": self.config,
            "provenance": {"master_seed": self.config["master_seed"], "config_hash": self.config_hash,
                           "constants_hash": constants.constants_hash()},
            "replicas": self.replicas,
            "failures": self.failures,
            "boundary_touch_rate": _clean(self.boundary_touch_rate),
            "cells": [c.to_json() for c in self.cells],
            "checks": [c.to_json() for c in self.checks],
            "fitted": _clean(self.fitted),
            "notes": list(self.notes),
            "raw": _clean(self.raw),
        }

    def summary(self) -> str:
        lines = [f"{self.name}: {self.verdict}  ({self.replicas} replicas, config {self.config_hash[:12]})",
                 f"  tests: {self.inequality}"]
        for c in self.cells:
            lines.append(f"  {c.cell:<18} est {c.estimate:.6g} ± {c.stderr:.2g}  ref {c.reference:.6g}  n={c.n}")
        for c in self.checks:
            flag = "ok" if c.holds else ("VIOLATED" if c.violated else "within noise")
            lines.append(f"  check {c.name}: margin {c.margin:.4g} (se {c.stderr:.2g}) {flag}")
        for k, v in self.fitted.items():
            lines.append(f"  fitted {k} = {v:.6g}" if isinstance(v, float) else f"  fitted {k} = {v}")
        if self.remediation:
            lines.append(f"  hint: {self.remediation}")
        return "\n".join(lines)


def _clean(v):
    """JSON-safe copy: non-finite floats become strings, tuples become lists."""
    if isinstance(v, float):
        if math.isnan(v):
            return None
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(v, dict):
        return {str(k): _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    if hasattr(v, "item"):  # numpy scalar
        return _clean(v.item())
    return v


def report_bytes(rep: ExperimentReport) -> bytes:
    return (json.dumps(rep.to_json(), sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def cells_csv(rep: ExperimentReport) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for c in rep.cells:
        w.writerow([c.cell, repr(float(c.parameter)), repr(float(c.estimate)), repr(float(c.stderr)),
                    repr(float(c.reference)), c.n])
    return buf.getvalue()


def plot_svg(rep: ExperimentReport, width: int = 480, height: int = 320) -> str:
    """Estimate vs parameter with 3 s.e. error bars; references drawn as hollow squares."""
    cells = [c for c in rep.cells if all(math.isfinite(v) for v in (c.parameter, c.estimate))]
    pad = 48
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
           f'<rect width="{width}" height="{height}" fill="white"/>',
           f'<text x="{width / 2:.1f}" y="16" text-anchor="middle">{rep.name}: {rep.verdict}</text>']
    if cells:
        xs = [c.parameter for c in cells]
        ys = [c.estimate for c in cells] + [c.reference for c in cells if math.isfinite(c.reference)]
        ys += [c.estimate + SIGMAS * c.stderr for c in cells if math.isfinite(c.stderr)]
        ys += [c.estimate - SIGMAS * c.stderr for c in cells if math.isfinite(c.stderr)]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
        if x1 == x0:
            x0, x1 = x0 - 1, x1 + 1
        if y1 == y0:
            y0, y1 = y0 - 1, y1 + 1
        sx = lambda x: pad + (x - x0) / (x1 - x0) * (width - 2 * pad)
        sy = lambda y: height - pad - (y - y0) / (y1 - y0) * (height - 2 * pad)
        out.append(f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>')
        out.append(f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>')
        for v, anchor in ((x0, "start"), (x1, "end")):
            out.append(f'<text x="{sx(v):.1f}" y="{height - pad + 14}" text-anchor="{anchor}">{v:.4g}</text>')
        for v in (y0, y1):
            out.append(f'<text x="{pad - 4}" y="{sy(v) + 4:.1f}" text-anchor="end">{v:.4g}</text>')
        pts = " ".join(f"{sx(c.parameter):.1f},{sy(c.estimate):.1f}" for c in cells)
        out.append(f'<polyline points="{pts}" fill="none" stroke="steelblue"/>')
        for c in cells:
            x, y = sx(c.parameter), sy(c.estimate)
            if math.isfinite(c.stderr) and c.stderr > 0:
                lo, hi = sy(c.estimate - SIGMAS * c.stderr), sy(c.estimate + SIGMAS * c.stderr)
                out.append(f'<line x1="{x:.1f}" y1="{lo:.1f}" x2="{x:.1f}" y2="{hi:.1f}" stroke="steelblue"/>')
            out.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="3" fill="steelblue"/>')
            if math.isfinite(c.reference):
                r = sy(c.reference)
                out.append(f'<rect x="{x - 3:.1f}" y="{r - 3:.1f}" width="6" height="6" fill="none" stroke="firebrick"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_report(rep: ExperimentReport, out_dir: str) -> dict:
    """Write report.json, cells.csv and plot.svg under out_dir/<name>/; append to out_dir/manifest.jsonl."""
    target = os.path.join(out_dir, rep.name)
    try:
        os.makedirs(target, exist_ok=True)
        with open(os.path.join(target, "report.json"), "wb") as fh:
            fh.write(report_bytes(rep))
        with open(os.path.join(target, "cells.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(cells_csv(rep))
        with open(os.path.join(target, "plot.svg"), "w", encoding="utf-8") as fh:
            fh.write(plot_svg(rep))
        entry = {"name": rep.name, "seed": rep.config["master_seed"], "config_hash": rep.config_hash,
                 "verdict": rep.verdict, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
                 "runtime_s": round(rep.runtime, 3)}
        with open(os.path.join(out_dir, "manifest.jsonl"), "a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write report under {target}: {exc.strerror or exc}") from exc
    return entry
