"""
Curve colors for the curvature-scale figure.

Positive curvatures draw in warm tones, negative ones in cool tones and the
flat comparison function in black, so a glance at the plot tells the sign
of each curve. Within a sign the shade darkens with |k|.
"""

from typing import Dict, List, Sequence

from .model_spaces import CurvatureSign, as_curvature

# Light to dark, hex values as matplotlib accepts them.
CURVATURE_PALETTES: Dict[CurvatureSign, List[str]] = {
    CurvatureSign.POSITIVE: [
        "#FDAE6B",
        "#FD8D3C",
        "#F16913",
        "#D94801",
        "#C0392B",
        "#A63603",
        "#7F2704",
    ],
    CurvatureSign.NEGATIVE: [
        "#9ECAE1",
        "#6BAED6",
        "#4292C6",
        "#2171B5",
        "#08519C",
        "#08306B",
        "#041E42",
        "#020F21",
    ],
    CurvatureSign.ZERO: ["#000000"],
}

AXIS_COLOR = "#333333"
GRID_COLOR = "#DDDDDD"


def get_curvature_color(k: float, ks: Sequence[float]) -> str:
    """Color for curve k among the curvatures ks drawn together."""
    sign = as_curvature(k).sign
    palette = CURVATURE_PALETTES[sign]
    same_sign = sorted({abs(x) for x in ks if as_curvature(x).sign is sign})
    if abs(k) not in same_sign or len(same_sign) <= 1:
        return palette[-1] if sign is CurvatureSign.ZERO else palette[len(palette) // 2]
    rank = same_sign.index(abs(k))
    return palette[round(rank * (len(palette) - 1) / (len(same_sign) - 1))]
