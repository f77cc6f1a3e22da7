"""Matplotlib rendering of figure panels and sweeps.

Output is made byte-reproducible: fixed SVG hash salt, no date metadata,
Agg backend.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_RC = {
    "svg.hashsalt": "qfacets",
    "svg.fonttype": "none",
    "font.size": 10,
    "axes.linewidth": 0.8,
    "lines.linewidth": 1.2,
    "legend.frameon": False,
}

_STYLES = ["-", "--", "-.", ":"]


def _as_float(ys):
    return np.array([np.nan if v is None else v for v in ys], dtype=float)


def _save(fig, path):
    fmt = str(path).rsplit(".", 1)[-1].lower()
    meta = {"Date": None} if fmt == "svg" else {"Software": None}
    fig.savefig(path, format=fmt, metadata=meta)
    plt.close(fig)


def render_panel(panel, path, width: float = 5.0, height: float = 3.4) -> None:
    """Line plot of one :class:`~qfacets.analysis.FigurePanel`; singular points leave gaps."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(width, height))
        for i, c in enumerate(panel.curves):
            ax.plot(c.x, _as_float(c.y), _STYLES[i % len(_STYLES)], label=c.label)
        for x in panel.metadata.get("singularities", []):
            ax.axvline(x, color="0.5", lw=0.6, ls=":")
        ax.set_xlabel(panel.xlabel)
        ax.set_ylabel(panel.ylabel)
        ax.set_title(panel.title)
        if len(panel.curves) > 1:
            ax.legend()
        fig.tight_layout()
        _save(fig, path)


def render_sweep(records, columns, path, xlabel: str = "abscissa") -> None:
    with plt.rc_context(_RC):
        fig, axes = plt.subplots(len(columns), 1, sharex=True, figsize=(5.0, 1.8 * len(columns) + 0.6))
        axes = np.atleast_1d(axes)
        xs = [r.abscissa for r in records]
        for ax, col in zip(axes, columns):
            ax.plot(xs, _as_float([getattr(r, col) for r in records]))
            ax.set_ylabel(col)
        axes[-1].set_xlabel(xlabel)
        fig.tight_layout()
        _save(fig, path)
