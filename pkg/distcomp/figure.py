"""Curvature-scale figure: one fitted comparison function per curvature."""

import logging
from pathlib import Path
from typing import Dict, List, Tuple

import matplotlib
import numpy as np
from matplotlib.figure import Figure

from .colors import AXIS_COLOR, GRID_COLOR, get_curvature_color
from .errors import ParameterError
from .fitting import FitResult
from .formats import write_csv
from .model_spaces import eval_g
from .utils import format_curvature

logger = logging.getLogger(__name__)

# 900 x 600 pt viewBox at matplotlib's 72 pt per inch.
FIGURE_SIZE_IN = (12.5, 600 / 72)
SVG_HASH_SALT = "distcomp"


def scale_curves(scale: Dict[float, FitResult], t1: float, t2: float, n: int) -> Tuple[np.ndarray, List[Tuple[float, np.ndarray]]]:
    """Evaluate every fitted curve on n uniform nodes, largest k first."""
    ts = np.linspace(t1, t2, n)
    curves = [(k, np.asarray(eval_g(scale[k].params, ts))) for k in sorted(scale, reverse=True)]
    return ts, curves


def render_svg(ts: np.ndarray, curves: List[Tuple[float, np.ndarray]], path: Path) -> None:
    """Write the figure; identical inputs give identical bytes."""
    ks = [k for k, _ in curves]
    fig = Figure(figsize=FIGURE_SIZE_IN)
    ax = fig.add_subplot(1, 1, 1)
    middle = len(ts) // 2
    for index, (k, gs) in enumerate(curves):
        color = get_curvature_color(k, ks)
        ax.plot(ts, gs, color=color, linewidth=1.2)
        # stagger labels left and right of the midpoint so neighbours stay legible
        offset = 12 if index % 2 == 0 else -12
        ax.annotate(
            f"k={format_curvature(k)}",
            xy=(ts[middle], gs[middle]),
            xytext=(offset, 0),
            textcoords="offset points",
            ha="left" if offset > 0 else "right",
            va="center",
            fontsize=7,
            color=color,
        )
    if not curves:
        ax.set_xlim(ts[0], ts[-1])
        ax.text(0.5, 0.5, "no feasible curvature", transform=ax.transAxes, ha="center", color=AXIS_COLOR)
    ax.margins(0.05)
    ax.set_xlabel("t")
    ax.set_ylabel("g_k(t)")
    ax.grid(True, color=GRID_COLOR, linewidth=0.5)
    for spine in ax.spines.values():
        spine.set_color(AXIS_COLOR)

    with matplotlib.rc_context({"svg.hashsalt": SVG_HASH_SALT, "svg.fonttype": "path"}):
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise ParameterError(f"cannot write {path}: {e}")
    logger.info(f"Wrote {len(curves)} curves to {path}")


def write_curves_csv(ts: np.ndarray, curves: List[Tuple[float, np.ndarray]], path: Path) -> None:
    """Companion table: column t, then g_<k> per curve."""
    columns = {"t": ts}
    for k, gs in curves:
        columns[f"g_{format_curvature(k)}"] = gs
    try:
        stream = open(path, "w", newline="\n")
    except OSError as e:
        raise ParameterError(f"cannot write {path}: {e}")
    with stream:
        write_csv(columns, stream)
