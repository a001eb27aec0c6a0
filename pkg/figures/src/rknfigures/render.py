"""CSV-to-figure rendering.

The input contract is the benchmark CSV header
``scheme,problem,parameter,h,stages,cost,force_evals,max_energy_err,
final_pos_err,status,wall_time_s``.  Two plot kinds are supported:

* ``efficiency`` — log-log, cost (force evaluations per unit time) against
  max energy error, one series per scheme;
* ``scan`` — linear parameter axis against log energy error at fixed cost.

Rows whose status is not ``ok`` are dropped with a console note; input files
are never modified.
"""

from __future__ import annotations

import csv
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .errors import EmptyData, MissingColumn

KINDS = ("efficiency", "scan")

_REQUIRED = {
    "efficiency": ("scheme", "cost", "max_energy_err", "status"),
    "scan": ("scheme", "parameter", "max_energy_err", "status"),
}

_AXES = {
    "efficiency": ("force evaluations per unit time", "max energy error"),
    "scan": ("parameter", "max energy error"),
}


@dataclass
class FigureSpec:
    kind: str
    csv_paths: list[str]
    output: str
    x_label: str | None = None
    y_label: str | None = None
    title: str | None = None
    group_key: str = "scheme"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"plot kind {self.kind!r} not in {KINDS}")


def load_records(path, required: tuple[str, ...]) -> list[dict]:
    """Read one CSV, validate the header, drop non-ok rows with a note."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise MissingColumn(f"{path}: column {column!r} missing from header")
        rows = list(reader)
    kept = [r for r in rows if r.get("status", "ok") == "ok"]
    dropped = len(rows) - len(kept)
    if dropped:
        print(f"note: dropped {dropped} failed row(s) from {path}", file=sys.stderr)
    return kept


def _series(rows: list[dict], group_key: str, x_col: str, y_col: str):
    """Group rows into (label, xs, ys) triples, skipping blank values."""
    groups: dict[str, tuple[list[float], list[float]]] = {}
    for row in rows:
        x_raw, y_raw = row.get(x_col, ""), row.get(y_col, "")
        if not x_raw or not y_raw:
            continue
        xs, ys = groups.setdefault(row.get(group_key, ""), ([], []))
        xs.append(float(x_raw))
        ys.append(float(y_raw))
    out = []
    for label in sorted(groups):
        xs, ys = groups[label]
        order = sorted(range(len(xs)), key=xs.__getitem__)
        out.append((label, [xs[i] for i in order], [ys[i] for i in order]))
    return out


def build_figure(spec: FigureSpec):
    """Assemble the matplotlib figure for a spec (no file output)."""
    x_col = "cost" if spec.kind == "efficiency" else "parameter"
    y_col = "max_energy_err"
    rows: list[dict] = []
    for path in spec.csv_paths:
        rows.extend(load_records(path, _REQUIRED[spec.kind]))
    series = _series(rows, spec.group_key, x_col, y_col)
    if not any(xs for _, xs, _ in series):
        raise EmptyData("no usable rows after dropping failed runs")

    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    for label, xs, ys in series:
        ax.plot(xs, ys, marker="o", markersize=4, linewidth=1.2, label=label)
    ax.set_yscale("log")
    if spec.kind == "efficiency":
        ax.set_xscale("log")
    default_x, default_y = _AXES[spec.kind]
    ax.set_xlabel(spec.x_label or default_x)
    ax.set_ylabel(spec.y_label or default_y)
    if spec.title:
        ax.set_title(spec.title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> str:
    """Render a spec to its output image path and return the path."""
    fig = build_figure(spec)
    try:
        fig.savefig(spec.output, dpi=150)
    finally:
        plt.close(fig)
    return spec.output
