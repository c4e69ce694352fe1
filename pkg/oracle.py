"""
oracle.py
暴力校验：在双曲面的 (θ, t) 参数网格上采样球的隐函数，判断是否接触、交线分支数，
以及球面采样点落在双曲面内侧还是外侧。

参数化 P(θ, t) = (a cosh t cos θ, a cosh t sin θ, c sinh t) 精确落在曲面上，
所以唯一的误差来源是网格分辨率。
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from config import DEFAULT_TOLERANCES, Tolerances
from data_models import ContactKind, ContactStatus, Side, Sphere, StdHyperboloid
from errors import InconclusiveNearTangent
from positions import contact_status
from quadrics import classify_points

logger = logging.getLogger(__name__)

MIN_NODES = 8
DEFAULT_RESOLUTION = 512
DEFAULT_SIDE_SAMPLES = 1000


# ================== 采样网格 ================== #

@dataclass(frozen=True, slots=True)
class SampleGrid:
    n_theta: int
    n_t: int
    t_max: float
    values: np.ndarray = field(repr=False)
    # 网格分辨率带：无符号变化且 min q 小于它时无法判定
    band: float = 0.0

    def __post_init__(self) -> None:
        if self.n_theta < MIN_NODES or self.n_t < MIN_NODES:
            raise ValueError(f"网格至少 {MIN_NODES}x{MIN_NODES}，实际 {self.n_theta}x{self.n_t}")
        if self.values.shape != (self.n_theta, self.n_t):
            raise ValueError(f"values 形状应为 {(self.n_theta, self.n_t)}，实际 {self.values.shape}")

    @property
    def thetas(self) -> np.ndarray:
        return np.linspace(0.0, 2.0 * math.pi, self.n_theta, endpoint=False)

    @property
    def ts(self) -> np.ndarray:
        return np.linspace(-self.t_max, self.t_max, self.n_t)


def auto_t_max(h: StdHyperboloid, s: Sphere) -> float:
    return math.asinh((abs(s.z_c) + s.r) / h.c) + 1.0


def _resolution_band(h: StdHyperboloid, s: Sphere, t: float, d_theta: float, d_t: float) -> float:
    """q 沿曲面的二阶变化上界乘以局部网格间距的平方"""
    sh, ch = math.sinh(t), math.cosh(t)
    spacing = max(h.a * ch * d_theta, math.sqrt(h.a2 * sh * sh + h.c2 * ch * ch) * d_t)
    curvature = max(1.0 / h.a, h.a / h.c2)
    return 2.0 * (1.0 + s.r * curvature) * spacing * spacing


def sample_surface(
    h: StdHyperboloid,
    s: Sphere,
    n_theta: int = DEFAULT_RESOLUTION,
    n_t: int = DEFAULT_RESOLUTION,
    t_max: Optional[float] = None,
) -> SampleGrid:
    if t_max is None:
        t_max = auto_t_max(h, s)
    theta = np.linspace(0.0, 2.0 * math.pi, n_theta, endpoint=False)
    t = np.linspace(-t_max, t_max, n_t)
    cos_th, sin_th = np.cos(theta)[:, None], np.sin(theta)[:, None]
    ring = h.a * np.cosh(t)[None, :]
    x = ring * cos_th
    y = ring * sin_th
    z = np.broadcast_to(h.c * np.sinh(t)[None, :], x.shape)
    cx, cy, cz = s.center
    values = (x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2 - s.r2

    i, j = np.unravel_index(int(np.argmin(values)), values.shape)
    d_theta = 2.0 * math.pi / n_theta
    d_t = 2.0 * t_max / (n_t - 1)
    band = _resolution_band(h, s, float(t[j]), d_theta, d_t)
    return SampleGrid(n_theta=n_theta, n_t=n_t, t_max=float(t_max), values=values, band=band)


# ================== 接触判定 ================== #

class OracleVerdict(Enum):
    NO_CONTACT_OUTSIDE = "NoContactOutside"
    NO_CONTACT_STRADDLE = "NoContactStraddle"
    CONTACT = "Contact"


@dataclass(frozen=True, slots=True)
class OracleResult:
    verdict: OracleVerdict
    components: int = 0
    min_value: float = 0.0
    band: float = 0.0


def _crossing_cells(values: np.ndarray) -> np.ndarray:
    """单元 (i, j) 由 θ 方向 i, i+1（周期）与 t 方向 j, j+1 四个节点围成"""
    v00 = values[:, :-1]
    v01 = values[:, 1:]
    v10 = np.roll(values, -1, axis=0)[:, :-1]
    v11 = np.roll(values, -1, axis=0)[:, 1:]
    lo = np.minimum(np.minimum(v00, v01), np.minimum(v10, v11))
    hi = np.maximum(np.maximum(v00, v01), np.maximum(v10, v11))
    return (lo < 0.0) & (hi >= 0.0)


def _count_components(mask: np.ndarray) -> int:
    """4 邻接 + θ 周期的连通分量数（只统计 mask 为真的单元）"""
    n_rows, n_cols = mask.shape
    index = np.arange(mask.size).reshape(mask.shape)

    rows = []
    cols = []
    # θ 方向（周期）
    theta_pair = mask & np.roll(mask, -1, axis=0)
    rows.append(index[theta_pair])
    cols.append(np.roll(index, -1, axis=0)[theta_pair])
    # t 方向
    t_pair = mask[:, :-1] & mask[:, 1:]
    rows.append(index[:, :-1][t_pair])
    cols.append(index[:, 1:][t_pair])

    r = np.concatenate(rows)
    c = np.concatenate(cols)
    graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(mask.size, mask.size))
    _, labels = connected_components(graph, directed=False)
    return int(np.unique(labels[mask.ravel()]).size)


def oracle_contact(grid: SampleGrid) -> OracleResult:
    values = grid.values
    min_value = float(values.min())
    crossing = _crossing_cells(values)
    if crossing.any():
        components = _count_components(crossing)
        logger.debug("oracle_contact: 符号变化，分量数 %s", components)
        return OracleResult(OracleVerdict.CONTACT, components, min_value, grid.band)

    if min_value < grid.band:
        if float(values.max()) < 0.0:
            return OracleResult(OracleVerdict.NO_CONTACT_STRADDLE, 0, min_value, grid.band)
        logger.warning("oracle_contact: min q=%s 落在分辨率带 %s 内", min_value, grid.band)
        raise InconclusiveNearTangent(min_value, grid.band)
    return OracleResult(OracleVerdict.NO_CONTACT_OUTSIDE, 0, min_value, grid.band)


# ================== 内外侧 ================== #

class SideVerdict(Enum):
    INTERIOR = "Interior"
    EXTERIOR = "Exterior"
    MIXED = "Mixed"


def fibonacci_sphere(s: Sphere, n: int) -> np.ndarray:
    """球面上 n 个近似均匀的 Fibonacci 采样点，形状 (n, 3)"""
    k = np.arange(n) + 0.5
    z = 1.0 - 2.0 * k / n
    radius = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = math.pi * (3.0 - math.sqrt(5.0)) * k
    unit = np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])
    return s.center_array + s.r * unit


def oracle_side(
    h: StdHyperboloid,
    s: Sphere,
    n: int = DEFAULT_SIDE_SAMPLES,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> SideVerdict:
    signs = classify_points(h, fibonacci_sphere(s, n), tolerances)
    if np.all(signs < 0):
        return SideVerdict.INTERIOR
    if np.all(signs > 0):
        return SideVerdict.EXTERIOR
    return SideVerdict.MIXED


# ================== 交叉校验 ================== #

class Agreement(Enum):
    AGREE = "AGREE"
    DISAGREE = "DISAGREE"
    EXEMPT = "EXEMPT"


@dataclass(frozen=True, slots=True)
class VerificationReport:
    agreement: Agreement
    status: ContactStatus
    oracle: Optional[OracleResult]
    side: Optional[SideVerdict]
    reasons: Tuple[str, ...] = ()


_SIDE_OF = {Side.INTERIOR: SideVerdict.INTERIOR, Side.EXTERIOR: SideVerdict.EXTERIOR}


def cross_check(
    h: StdHyperboloid,
    s: Sphere,
    resolution: int = DEFAULT_RESOLUTION,
    side_samples: int = DEFAULT_SIDE_SAMPLES,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> VerificationReport:
    """解析结论 vs 采样结论。纯相切无法靠采样确认，记为 EXEMPT。"""
    status = contact_status(h, s, tolerances)
    grid = sample_surface(h, s, resolution, resolution)
    try:
        result: Optional[OracleResult] = oracle_contact(grid)
    except InconclusiveNearTangent as exc:
        result = None
        inconclusive = str(exc)
    else:
        inconclusive = ""

    reasons = []
    if status.kind is ContactKind.TANGENT:
        if not status.position.has_extra_contact:
            reasons.append("相切无法由采样确认")
            return VerificationReport(Agreement.EXEMPT, status, result, None, tuple(reasons))
        if result is not None and result.verdict is OracleVerdict.CONTACT:
            return VerificationReport(Agreement.AGREE, status, result, None)
        reasons.append(f"{status.position.value} 伴随横截接触，但采样未发现符号变化")
        return VerificationReport(Agreement.DISAGREE, status, result, None, tuple(reasons))

    if result is None:
        reasons.append(inconclusive)
        return VerificationReport(Agreement.EXEMPT, status, None, None, tuple(reasons))

    if status.kind is ContactKind.NO_CONTACT:
        side = oracle_side(h, s, side_samples, tolerances)
        if result.verdict is OracleVerdict.CONTACT:
            reasons.append(f"解析为无接触，采样发现 {result.components} 个交线分量")
        if side is not _SIDE_OF[status.side]:
            reasons.append(f"解析侧为 {status.side.value}，采样侧为 {side.value}")
        agreement = Agreement.DISAGREE if reasons else Agreement.AGREE
        return VerificationReport(agreement, status, result, side, tuple(reasons))

    if result.verdict is not OracleVerdict.CONTACT:
        reasons.append("解析为横截接触，采样未发现符号变化")
    elif result.components != status.components:
        reasons.append(f"交线分量数不一致: 解析 {status.components}，采样 {result.components}")
    agreement = Agreement.DISAGREE if reasons else Agreement.AGREE
    if agreement is Agreement.DISAGREE:
        logger.warning("cross_check 不一致: %s", "; ".join(reasons))
    return VerificationReport(agreement, status, result, None, tuple(reasons))
