"""Turn simulator CSV output into matplotlib figures.

This package is a standalone plotting layer.  It reads the CSV files that
the simulator's command line writes and renders them; the CSV column
contract is the only coupling between the two packages, so this module
never imports the simulator itself.

Two file schemas are understood:

* sweep files, one row per grid point, with columns
  ``scheduler, K, N, <snr_db or tx_power_dbm>, eta_I, eta_tr,
  mean_rate_per_cell, ci95, qualifier_mean, fallback_frac, trials, seed``
* threshold tables with columns ``K, N, optimal_eta_I, achieved_rate``

Four figure kinds map onto them: ``rate-vs-snr`` and ``rate-vs-power``
plot mean rate against the sweep axis, ``eta-sweep`` plots mean rate
against the interference threshold, and ``eta-table`` draws the optimal
threshold per network size as grouped bars.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

__all__ = [
    "KINDS",
    "Curve",
    "FigureSpec",
    "load_curves",
    "load_table",
    "render",
]

KINDS = ("rate-vs-snr", "rate-vs-power", "eta-sweep", "eta-table")

_X_COLUMN = {
    "rate-vs-snr": "snr_db",
    "rate-vs-power": "tx_power_dbm",
    "eta-sweep": "eta_I",
}

_X_LABEL = {
    "rate-vs-snr": "average SNR (dB)",
    "rate-vs-power": "transmit power (dBm)",
    "eta-sweep": "interference threshold eta_I",
}

_DEFAULT_TITLE = {
    "rate-vs-snr": "Mean per-cell rate vs SNR",
    "rate-vs-power": "Mean per-cell rate vs transmit power",
    "eta-sweep": "Mean per-cell rate vs interference threshold",
    "eta-table": "Optimal interference threshold by network size",
}

_RATE_LABEL = "mean per-cell rate (bits per channel use)"


@dataclass(frozen=True)
class FigureSpec:
    """One figure request: which CSV, which kind of plot, where to save it.

    ``K`` and ``N`` optionally restrict the input to one cell count or one
    user count before plotting.
    """

    kind: str
    csv: str
    out: str
    title: str | None = None
    dpi: int = 150
    K: int | None = None
    N: int | None = None

    def validate(self) -> None:
        if self.kind not in KINDS:
            known = ", ".join(KINDS)
            raise ValueError(f"unknown figure kind '{self.kind}' (expected one of {known})")
        if self.dpi <= 0:
            raise ValueError("dpi must be positive")


@dataclass(frozen=True)
class Curve:
    """One plotted line: label, x positions, means, and half-widths of CIs."""

    label: str
    x: tuple[float, ...]
    y: tuple[float, ...]
    err: tuple[float, ...]

    @property
    def peak(self) -> tuple[float, float]:
        """(x, y) of the highest point; ties resolve to the smallest x."""
        best = max(range(len(self.y)), key=lambda i: (self.y[i], -self.x[i]))
        return self.x[best], self.y[best]


def _read_rows(path: str, required: tuple[str, ...]) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for column in required:
            if column not in header:
                raise ValueError(f"column '{column}' missing from {path}")
        return list(reader)


def _apply_filters(rows: list[dict[str, str]], spec: FigureSpec) -> list[dict[str, str]]:
    if spec.K is not None:
        rows = [r for r in rows if int(r["K"]) == spec.K]
    if spec.N is not None:
        rows = [r for r in rows if int(r["N"]) == spec.N]
    if not rows:
        raise ValueError("no rows match the requested K/N filters")
    return rows


def load_curves(
    kind: str, path: str, K: int | None = None, N: int | None = None
) -> list[Curve]:
    """Read a sweep CSV and shape it into one curve per scheduler and size.

    For the two axis kinds, a scheduler may appear with several eta_I rows
    at the same x when the sweep ran a candidate threshold grid; each x
    then keeps the row with the highest mean rate, which reproduces the
    simulator's own per-point threshold selection.  Ties keep the smallest
    threshold.  For ``eta-sweep`` the threshold itself is the x axis and
    every row is kept.
    """
    if kind not in _X_COLUMN:
        known = ", ".join(_X_COLUMN)
        raise ValueError(f"unknown curve kind '{kind}' (expected one of {known})")
    xcol = _X_COLUMN[kind]
    rows = _read_rows(
        path, ("scheduler", "K", "N", xcol, "eta_I", "mean_rate_per_cell", "ci95")
    )
    rows = _apply_filters(rows, FigureSpec(kind=kind, csv=path, out="", K=K, N=N))

    schedulers = sorted({r["scheduler"] for r in rows})
    cells = sorted({int(r["K"]) for r in rows})
    users = sorted({int(r["N"]) for r in rows})

    grouped: dict[tuple[str, int, int], dict[float, tuple[float, float, float]]] = {}
    for r in sorted(rows, key=lambda r: float(r["eta_I"])):
        key = (r["scheduler"], int(r["K"]), int(r["N"]))
        x = float(r[xcol])
        y = float(r["mean_rate_per_cell"])
        err = float(r["ci95"])
        eta = float(r["eta_I"])
        points = grouped.setdefault(key, {})
        if kind == "eta-sweep":
            points[eta] = (y, err, eta)
        else:
            # candidate-grid reduction: strict improvement over ascending
            # eta keeps the smallest threshold on ties
            best = points.get(x)
            if best is None or y > best[0]:
                points[x] = (y, err, eta)

    curves = []
    for scheduler, k, n in sorted(grouped):
        parts = [scheduler]
        if len(cells) > 1:
            parts.append(f"K={k}")
        if len(users) > 1:
            parts.append(f"N={n}")
        label = " ".join(parts) if len(schedulers) > 1 or len(parts) > 1 else scheduler
        points = grouped[(scheduler, k, n)]
        xs = sorted(points)
        curves.append(
            Curve(
                label=label,
                x=tuple(xs),
                y=tuple(points[x][0] for x in xs),
                err=tuple(points[x][1] for x in xs),
            )
        )
    return curves


def load_table(
    path: str, K: int | None = None, N: int | None = None
) -> list[tuple[int, int, float, float]]:
    """Read a threshold table CSV into sorted (K, N, eta, rate) tuples."""
    rows = _read_rows(path, ("K", "N", "optimal_eta_I", "achieved_rate"))
    rows = _apply_filters(rows, FigureSpec(kind="eta-table", csv=path, out="", K=K, N=N))
    return sorted(
        (int(r["K"]), int(r["N"]), float(r["optimal_eta_I"]), float(r["achieved_rate"]))
        for r in rows
    )


def render(spec: FigureSpec) -> dict:
    """Render one figure and return a small summary of what was drawn.

    The summary always holds ``out``, ``kind``, ``n_curves`` and
    ``n_points``; ``eta-sweep`` figures add ``peak``, mapping each curve
    label to its (threshold, rate) maximum.
    """
    spec.validate()
    if spec.kind == "eta-table":
        return _render_table(spec)
    return _render_curves(spec)


def _render_curves(spec: FigureSpec) -> dict:
    curves = load_curves(spec.kind, spec.csv, K=spec.K, N=spec.N)
    fig, ax = plt.subplots(figsize=(6.8, 4.4))
    for curve in curves:
        ax.errorbar(
            curve.x,
            curve.y,
            yerr=curve.err,
            marker="o",
            markersize=4,
            capsize=2.5,
            linewidth=1.6,
            label=curve.label,
        )
    info: dict = {
        "out": spec.out,
        "kind": spec.kind,
        "n_curves": len(curves),
        "n_points": sum(len(c.x) for c in curves),
    }
    if spec.kind == "eta-sweep":
        peaks = {c.label: c.peak for c in curves}
        for x, y in peaks.values():
            ax.plot([x], [y], marker="v", markersize=9, color="black", zorder=5)
        info["peak"] = peaks
    ax.set_xlabel(_X_LABEL[spec.kind])
    ax.set_ylabel(_RATE_LABEL)
    ax.set_title(spec.title or _DEFAULT_TITLE[spec.kind])
    ax.grid(alpha=0.3)
    if len(curves) > 1:
        ax.legend()
    _save(fig, spec)
    return info


def _render_table(spec: FigureSpec) -> dict:
    entries = load_table(spec.csv, K=spec.K, N=spec.N)
    cells = sorted({k for k, _, _, _ in entries})
    users = sorted({n for _, n, _, _ in entries})
    lookup = {(k, n): eta for k, n, eta, _ in entries}

    fig, ax = plt.subplots(figsize=(6.8, 4.4))
    width = 0.8 / len(cells)
    for j, k in enumerate(cells):
        xs = []
        heights = []
        for i, n in enumerate(users):
            if (k, n) in lookup:
                xs.append(i + (j - (len(cells) - 1) / 2.0) * width)
                heights.append(lookup[(k, n)])
        ax.bar(xs, heights, width=width, label=f"K={k}")
    ax.set_xticks(range(len(users)))
    ax.set_xticklabels([str(n) for n in users])
    ax.set_xlabel("users per cell N")
    ax.set_ylabel("optimal interference threshold")
    ax.set_title(spec.title or _DEFAULT_TITLE["eta-table"])
    ax.grid(alpha=0.3, axis="y")
    if len(cells) > 1:
        ax.legend()
    _save(fig, spec)
    return {
        "out": spec.out,
        "kind": spec.kind,
        "n_curves": len(cells),
        "n_points": len(entries),
    }


def _save(fig, spec: FigureSpec) -> None:
    kwargs: dict = {"dpi": spec.dpi}
    if spec.out.lower().endswith(".png"):
        # a fixed Software tag keeps repeated renders byte-identical
        kwargs["metadata"] = {"Software": "dosplots"}
    fig.tight_layout()
    try:
        fig.savefig(spec.out, **kwargs)
    finally:
        plt.close(fig)
