"""Empirical norm-violation reports: delimited tables plus figures.

For an identity that is exactly valid in inner-product spaces, the report
sweeps a family of l_p norms (and l_inf), records the largest relative
residual seen over a deterministic trial set, and renders the sweep to a
figure: the residual collapses to rounding noise at p = 2 and is
macroscopic elsewhere.  A second table and figure probe the curve
g(t) = ||x + t*y||^2 for selected norms: third differences vanish only
when g is quadratic, i.e. only for the inner-product norm.
"""

from __future__ import annotations

import csv
import itertools
import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .core import PlainIdentity
from .evaluate import (
    GRID_POOL,
    NormSpec,
    VectorAssignment,
    VIOLATION_RTOL,
    _eval_float_parts,
    degree_probe,
)
from .signed import SignedIdentity

Identity = Union[PlainIdentity, SignedIdentity]

DEFAULT_P_VALUES: tuple[float, ...] = (1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 8.0, 16.0)

#: Pinned direction pair whose l_1 curve has a kink inside the probe grid.
PROBE_X: tuple[float, float] = (1.0, 0.0)
PROBE_Y: tuple[float, float] = (-1.0, 1.0)

_GRID_CAP = 1024
_FLOOR = 1e-17


@dataclass(frozen=True)
class SweepRow:
    norm_label: str
    p: float  # math.inf for l_inf
    max_rel_residual: float
    violated: bool


@dataclass(frozen=True)
class ProbeRow:
    norm_label: str
    r: float
    s: float
    third_difference: float


@dataclass(frozen=True)
class ReportArtifacts:
    residuals_csv: Path
    probe_csv: Path
    residuals_figure: Path
    probe_figure: Path
    sweep_rows: list[SweepRow]
    probe_rows: list[ProbeRow]


def _trial_assignments(n: int, trials: int, seed: int) -> list[VectorAssignment]:
    out = []
    if len(GRID_POOL) ** n <= _GRID_CAP:
        for combo in itertools.product(GRID_POOL, repeat=n):
            out.append(VectorAssignment(n, 2, combo))
    rng = random.Random(seed)
    for r in range(trials):
        dim = 2 + r % 3
        vecs = tuple(
            tuple(rng.uniform(-2.0, 2.0) for _ in range(dim)) for _ in range(n)
        )
        out.append(VectorAssignment(n, dim, vecs))
    return out


def residual_sweep(
    ident: Identity,
    p_values: Sequence[float] = DEFAULT_P_VALUES,
    trials: int = 200,
    seed: int = 0,
) -> list[SweepRow]:
    """Largest relative residual of `ident` per norm over a deterministic
    trial set (fixed grid plus seeded randoms)."""
    assignments = _trial_assignments(ident.n, trials, seed)
    norms = [NormSpec.lp(p) for p in p_values] + [NormSpec.linf()]
    rows = []
    for norm in norms:
        worst = 0.0
        for va in assignments:
            residual, scale = _eval_float_parts(ident, va, norm)
            if scale > 0.0:
                worst = max(worst, abs(residual) / scale)
        rows.append(
            SweepRow(
                norm_label=norm.label(),
                p=math.inf if norm.kind == "linf" else norm.p,
                max_rel_residual=worst,
                violated=worst > VIOLATION_RTOL,
            )
        )
    return rows


def probe_sweep(
    norms: Sequence[NormSpec] = (NormSpec.lp(1.0), NormSpec.lp(2.0), NormSpec.linf()),
    x: Sequence[float] = PROBE_X,
    y: Sequence[float] = PROBE_Y,
) -> list[ProbeRow]:
    rows = []
    for norm in norms:
        for r, s, diff in degree_probe(x, y, norm).samples:
            rows.append(ProbeRow(norm.label(), r, s, diff))
    return rows


def _write_residuals_csv(path: Path, rows: list[SweepRow]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["norm", "p", "max_rel_residual", "violated"])
        for row in rows:
            writer.writerow(
                [row.norm_label, row.p, f"{row.max_rel_residual:.6e}", int(row.violated)]
            )


def _write_probe_csv(path: Path, rows: list[ProbeRow]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["norm", "r", "s", "third_difference"])
        for row in rows:
            writer.writerow([row.norm_label, row.r, row.s, f"{row.third_difference:.6e}"])


def _plot_residuals(path: Path, rows: list[SweepRow], title: str) -> None:
    finite = [r for r in rows if math.isfinite(r.p)]
    inf_rows = [r for r in rows if not math.isfinite(r.p)]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(
        [r.p for r in finite],
        [max(r.max_rel_residual, _FLOOR) for r in finite],
        marker="o",
        label="max relative residual",
    )
    if inf_rows:
        edge = max(r.p for r in finite) * 1.5 if finite else 1.0
        ax.plot(
            [edge],
            [max(inf_rows[0].max_rel_residual, _FLOOR)],
            marker="s",
            color="tab:red",
            label="l_inf",
        )
    ax.axhline(VIOLATION_RTOL, color="gray", linestyle="--", linewidth=0.8,
               label="violation threshold")
    ax.axvline(2.0, color="tab:green", linestyle=":", linewidth=0.8, label="p = 2")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("p")
    ax.set_ylabel("max |residual| / scale")
    ax.set_title(title)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _plot_probe(path: Path, norms: Sequence[NormSpec], rows: list[ProbeRow]) -> None:
    ts = [i / 50.0 for i in range(-150, 151)]
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=False)
    for norm in norms:
        g = [norm.norm_sq(tuple(a + t * b for a, b in zip(PROBE_X, PROBE_Y))) for t in ts]
        top.plot(ts, g, label=norm.label())
    top.set_xlabel("t")
    top.set_ylabel("||x + t y||^2")
    top.set_title(f"x = {PROBE_X}, y = {PROBE_Y}")
    top.legend(fontsize=8)
    labels = sorted({row.norm_label for row in rows})
    for label in labels:
        diffs = [abs(row.third_difference) for row in rows if row.norm_label == label]
        bottom.plot(range(len(diffs)), [max(d, _FLOOR) for d in diffs],
                    marker="o", linestyle="", label=label)
    bottom.set_yscale("log")
    bottom.set_xlabel("grid point")
    bottom.set_ylabel("|third difference|")
    bottom.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(
    ident: Identity,
    out_dir: Path,
    title: str = "norm-identity residual sweep",
    p_values: Sequence[float] = DEFAULT_P_VALUES,
    trials: int = 200,
    seed: int = 0,
) -> ReportArtifacts:
    """Run both sweeps and write residuals.csv, probe.csv, and the two
    figures into `out_dir` (created if needed)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sweep_rows = residual_sweep(ident, p_values=p_values, trials=trials, seed=seed)
    norms = (NormSpec.lp(1.0), NormSpec.lp(2.0), NormSpec.linf())
    probe_rows = probe_sweep(norms)
    artifacts = ReportArtifacts(
        residuals_csv=out_dir / "residuals.csv",
        probe_csv=out_dir / "probe.csv",
        residuals_figure=out_dir / "residuals.png",
        probe_figure=out_dir / "probe.png",
        sweep_rows=sweep_rows,
        probe_rows=probe_rows,
    )
    _write_residuals_csv(artifacts.residuals_csv, sweep_rows)
    _write_probe_csv(artifacts.probe_csv, probe_rows)
    _plot_residuals(artifacts.residuals_figure, sweep_rows, title)
    _plot_probe(artifacts.probe_figure, norms, probe_rows)
    return artifacts
