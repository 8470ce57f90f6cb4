"""CSV reading, median aggregation, slope fits, and the figure itself."""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SCHEMA_LINE = "# schema=1"
REQUIRED_COLUMNS = ("method", "d", "wall_ms")


class FiguresError(Exception):
    """Base for everything this package raises on bad input."""


class SchemaError(FiguresError):
    pass


class MissingMethodError(FiguresError):
    pass


class EmptyDataError(FiguresError):
    pass


@dataclass(frozen=True)
class BenchRow:
    method: str
    d: int
    wall_ms: float


def read_bench_csv(path) -> list[BenchRow]:
    """Parse a schema-1 benchmark CSV into rows.

    The first line must be exactly the schema marker; the second is a header
    that must contain at least method, d, wall_ms (extra columns pass
    through unread, so the producer can grow the format compatibly).
    """
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != SCHEMA_LINE:
            raise SchemaError(
                f"{path}: expected first line {SCHEMA_LINE!r}, found {first!r}"
            )
        reader = csv.DictReader(io.StringIO(fh.read()))
        field_names = reader.fieldnames or []
        for col in REQUIRED_COLUMNS:
            if col not in field_names:
                raise SchemaError(f"{path}: header lacks required column {col!r}")
        rows = []
        for rec in reader:
            try:
                rows.append(BenchRow(
                    method=rec["method"].strip(),
                    d=int(rec["d"]),
                    wall_ms=float(rec["wall_ms"]),
                ))
            except (TypeError, ValueError, AttributeError) as exc:
                raise SchemaError(f"{path}: malformed row {rec!r}") from exc
    if not rows:
        raise EmptyDataError(f"{path}: no data rows")
    return rows


def median_series(rows: list[BenchRow], method: str):
    """(degrees, median wall_ms) for one method, ascending in d."""
    byd: dict[int, list[float]] = {}
    for r in rows:
        if r.method == method:
            byd.setdefault(r.d, []).append(r.wall_ms)
    if not byd:
        have = sorted({r.method for r in rows})
        raise MissingMethodError(f"method {method!r} not in file (have: {have})")
    ds = np.array(sorted(byd), dtype=float)
    med = np.array([float(np.median(byd[int(d)])) for d in ds])
    return ds, med


def fit_slope(ds, walls, lo: float | None = None, hi: float | None = None) -> float:
    """Least-squares slope of log2(wall) against log2(d), optionally windowed."""
    ds = np.asarray(ds, dtype=float)
    walls = np.asarray(walls, dtype=float)
    mask = np.ones(ds.shape, dtype=bool)
    if lo is not None:
        mask &= ds >= lo
    if hi is not None:
        mask &= ds <= hi
    if int(mask.sum()) < 2:
        raise EmptyDataError(
            f"fit window [{lo}, {hi}] leaves {int(mask.sum())} point(s); need >= 2"
        )
    return float(np.polyfit(np.log2(ds[mask]), np.log2(walls[mask]), 1)[0])


def render_scaling_figure(
    csv_path,
    out_path,
    methods: list[str],
    fit_lo: float | None = None,
    fit_hi: float | None = None,
    title: str | None = None,
) -> dict:
    """Scatter + fitted line per method on log-log axes.

    Validates everything before touching out_path, so a failed run leaves no
    partial file.  Writes a sidecar `<out stem>.slopes.json` with the fitted
    slopes and returns its contents.
    """
    rows = read_bench_csv(csv_path)
    series = {m: median_series(rows, m) for m in methods}
    slopes = {m: fit_slope(ds, med, fit_lo, fit_hi) for m, (ds, med) in series.items()}

    plt.rcParams["svg.hashsalt"] = "qspf-figures"
    fig, ax = plt.subplots(figsize=(6.0, 4.2), dpi=150)
    markers = ["o", "s", "^", "D", "v", "*"]
    for i, m in enumerate(methods):
        ds, med = series[m]
        ax.plot(ds, med, markers[i % len(markers)], ms=5, ls="none",
                label=f"{m} (slope {slopes[m]:.2f})")
        # fitted line through the windowed points
        mask = np.ones(ds.shape, dtype=bool)
        if fit_lo is not None:
            mask &= ds >= fit_lo
        if fit_hi is not None:
            mask &= ds <= fit_hi
        coef = np.polyfit(np.log2(ds[mask]), np.log2(med[mask]), 1)
        grid = np.linspace(np.log2(ds.min()), np.log2(ds.max()), 64)
        ax.plot(2.0**grid, 2.0 ** np.polyval(coef, grid), "--", lw=1, alpha=0.7)
    ax.set_xscale("log", base=2)
    ax.set_yscale("log", base=2)
    ax.set_xlabel("half degree d")
    ax.set_ylabel("median wall time (ms)")
    ax.set_title(title or "runtime scaling")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, metadata=_stable_metadata(out_path))
    plt.close(fig)

    payload = {
        "input": os.path.basename(str(csv_path)),
        "methods": methods,
        "fit_lo": fit_lo,
        "fit_hi": fit_hi,
        "slopes": slopes,
        "points": {m: int(series[m][0].size) for m in methods},
    }
    sidecar = os.path.splitext(str(out_path))[0] + ".slopes.json"
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return payload


def _stable_metadata(out_path) -> dict | None:
    """Strip run-dependent metadata so identical inputs give identical bytes."""
    ext = os.path.splitext(str(out_path))[1].lower()
    if ext == ".png":
        return {"Software": "qspf-figures"}
    if ext == ".svg":
        return {"Date": None}
    if ext == ".pdf":
        return {"CreationDate": None}
    return None
