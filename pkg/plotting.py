"""
plotting.py
过 OZ 轴与球心的竖直截面图：双曲线两支 ρ = ±a√(1 + z²/c²) 与以 (ρ_c, z_c) 为心、r 为半径的圆。
用 reportlab.graphics 输出 SVG，同样的输入得到同样的字节。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Tuple, Union

from reportlab.graphics import renderSVG
from reportlab.graphics.shapes import Circle, Drawing, Line, PolyLine, String
from reportlab.lib import colors

from data_models import PositionType, Sphere, StdHyperboloid

logger = logging.getLogger(__name__)

CANVAS_WIDTH = 480
CANVAS_HEIGHT = 480
MARGIN = 30
BRANCH_SAMPLES = 241
PADDING = 0.1


@dataclass(frozen=True, slots=True)
class PlotBounds:
    """截面平面 (ρ, z) 上的绘图范围"""

    rho_min: float
    rho_max: float
    z_min: float
    z_max: float

    def contains(self, rho: float, z: float) -> bool:
        return self.rho_min <= rho <= self.rho_max and self.z_min <= z <= self.z_max


def _branch_rho(h: StdHyperboloid, z: float) -> float:
    return h.a * math.sqrt(1.0 + z * z / h.c2)


def plot_bounds(h: StdHyperboloid, s: Sphere) -> PlotBounds:
    """范围总是包含整个圆和喉部 (ρ = ±a, z = 0)"""
    rho_c, z_c, r = s.rho_c, s.z_c, s.r
    z_lo = min(z_c - r, -h.c)
    z_hi = max(z_c + r, h.c)
    pad_z = PADDING * (z_hi - z_lo)
    z_lo, z_hi = z_lo - pad_z, z_hi + pad_z

    branch = max(_branch_rho(h, z_lo), _branch_rho(h, z_hi))
    rho_lo = min(-branch, rho_c - r)
    rho_hi = max(branch, rho_c + r)
    pad_rho = PADDING * (rho_hi - rho_lo)
    return PlotBounds(rho_lo - pad_rho, rho_hi + pad_rho, z_lo, z_hi)


class _Mapper:
    """(ρ, z) -> 画布坐标，两轴同一比例"""

    def __init__(self, bounds: PlotBounds) -> None:
        self.bounds = bounds
        span_x = bounds.rho_max - bounds.rho_min
        span_y = bounds.z_max - bounds.z_min
        self.scale = min((CANVAS_WIDTH - 2 * MARGIN) / span_x, (CANVAS_HEIGHT - 2 * MARGIN) / span_y)

    def __call__(self, rho: float, z: float) -> Tuple[float, float]:
        x = MARGIN + (rho - self.bounds.rho_min) * self.scale
        y = MARGIN + (z - self.bounds.z_min) * self.scale
        return round(x, 4), round(y, 4)


def build_drawing(
    h: StdHyperboloid,
    s: Sphere,
    position: Optional[PositionType] = None,
) -> Drawing:
    bounds = plot_bounds(h, s)
    to_canvas = _Mapper(bounds)
    drawing = Drawing(CANVAS_WIDTH, CANVAS_HEIGHT)

    # 坐标轴
    x0, y0 = to_canvas(bounds.rho_min, 0.0)
    x1, _ = to_canvas(bounds.rho_max, 0.0)
    drawing.add(Line(x0, y0, x1, y0, strokeColor=colors.lightgrey, strokeWidth=0.5))
    ax, ay0 = to_canvas(0.0, bounds.z_min)
    _, ay1 = to_canvas(0.0, bounds.z_max)
    drawing.add(Line(ax, ay0, ax, ay1, strokeColor=colors.lightgrey, strokeWidth=0.5))

    # 双曲线两支
    for sign in (1.0, -1.0):
        points: List[float] = []
        for k in range(BRANCH_SAMPLES):
            z = bounds.z_min + (bounds.z_max - bounds.z_min) * k / (BRANCH_SAMPLES - 1)
            points.extend(to_canvas(sign * _branch_rho(h, z), z))
        drawing.add(PolyLine(points, strokeColor=colors.darkblue, strokeWidth=1.2))

    # 球的截面圆
    cx, cy = to_canvas(s.rho_c, s.z_c)
    drawing.add(
        Circle(cx, cy, round(s.r * to_canvas.scale, 4), strokeColor=colors.firebrick, strokeWidth=1.2, fillColor=None)
    )

    label = f"type: {position.value}" if position is not None else "type: ?"
    drawing.add(String(MARGIN, CANVAS_HEIGHT - MARGIN / 2, label, fontName="Helvetica", fontSize=12))
    caption = f"a={h.a:.6g} c={h.c:.6g} r={s.r:.6g} rho_c={s.rho_c:.6g} z_c={s.z_c:.6g}"
    drawing.add(String(MARGIN, MARGIN / 3, caption, fontName="Helvetica", fontSize=8))
    return drawing


def plot_cross_section(
    h: StdHyperboloid,
    s: Sphere,
    out_path: Union[str, Path],
    position: Optional[PositionType] = None,
) -> PlotBounds:
    """写出截面 SVG，返回使用的绘图范围。文件系统错误原样抛出。"""
    drawing = build_drawing(h, s, position)
    svg = renderSVG.drawToString(drawing)
    Path(out_path).write_text(svg, encoding="utf-8")
    logger.info("截面图已写出: %s", out_path)
    return plot_bounds(h, s)
