"""Figures for catalogs and reports, rendered to files with the Agg backend."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .coloring import PartialColoring  # noqa: E402
from .figure1 import NODE, POSITION  # noqa: E402

EDGE_COLORS = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def vertex_positions(d: int) -> dict[int, tuple[float, float]]:
    """Q_3 uses the catalog drawing layout; other cubes a projection of the unit vectors."""
    if d == 3:
        return {v: POSITION[name] for name, v in NODE.items()}
    out = {}
    for v in range(1 << d):
        x = y = 0.0
        for j in range(d):
            if v >> j & 1:
                ang = math.pi * (0.5 + j / d)
                x += math.cos(ang) * (1 + 0.25 * j)
                y += math.sin(ang) * (1 + 0.25 * j)
        out[v] = (x, y)
    return out


def draw_coloring(ax, phi: PartialColoring, title: str | None = None) -> None:
    cube = phi.host
    pos = vertex_positions(cube.d)
    for i, (u, v) in enumerate(cube.endpoints):
        (x1, y1), (x2, y2) = pos[u], pos[v]
        c = phi.colors[i]
        if c:
            ax.plot([x1, x2], [y1, y2], color=EDGE_COLORS[(c - 1) % len(EDGE_COLORS)], lw=2.5)
            ax.text((x1 + x2) / 2, (y1 + y2) / 2, str(c), fontsize=7, ha="center", va="center",
                    bbox=dict(boxstyle="round,pad=0.1", fc="white", ec="none"))
        else:
            ax.plot([x1, x2], [y1, y2], color="0.8", lw=0.8, ls="--")
    xs, ys = zip(*pos.values())
    ax.scatter(xs, ys, s=18, color="black", zorder=3)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title, fontsize=8)


def plot_colorings(colorings, path, titles=None, cols: int = 3) -> Path:
    colorings = list(colorings)
    n = max(len(colorings), 1)
    cols = min(cols, n)
    rows = math.ceil(n / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(2.6 * cols, 2.6 * rows), squeeze=False)
    for ax in axes.flat:
        ax.axis("off")
    for k, phi in enumerate(colorings):
        draw_coloring(axes.flat[k], phi, titles[k] if titles else None)
    fig.tight_layout()
    return _save(fig, path)


def plot_catalog(catalog, path) -> Path:
    titles = [f"#{k + 1}: {len(e.coloring)} edges" for k, e in enumerate(catalog.entries)]
    return plot_colorings([e.coloring for e in catalog.entries], path, titles, cols=6 if len(titles) > 9 else 3)


def plot_claim_table(rows, path) -> Path:
    """Observed forbidden-triple maxima against their bounds, per colored-edge count."""
    a = [r["a"] for r in rows]
    fig, ax = plt.subplots(figsize=(5, 3))
    ax.bar([x - 0.2 for x in a], [r["bound"] for r in rows], width=0.4, label="bound", color="0.7")
    ax.bar([x + 0.2 for x in a], [r["observed"] for r in rows], width=0.4, label="observed", color="#1f77b4")
    ax.set_xlabel("colored edges")
    ax.set_ylabel("forbidden triples")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save(fig, path)


def plot_report(report, path) -> Path:
    groups = {k: v for k, v in report.breakdown.items() if isinstance(v, dict) and "instances" in v}
    fig, ax = plt.subplots(figsize=(max(4, 0.6 * len(groups) + 2), 3))
    names = list(groups) or ["all"]
    ok = [groups[g]["instances"] - groups[g]["failed"] for g in names] if groups else [report.passed]
    bad = [groups[g]["failed"] for g in names] if groups else [report.failed]
    ax.bar(names, ok, color="#2ca02c", label="pass")
    ax.bar(names, bad, bottom=ok, color="#d62728", label="fail")
    ax.set_ylabel("instances")
    ax.set_title(f"{report.theorem}: {report.status}", fontsize=9)
    ax.tick_params(axis="x", labelrotation=45, labelsize=7)
    ax.legend(frameon=False, fontsize=7)
    fig.tight_layout()
    return _save(fig, path)


def _save(fig, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
