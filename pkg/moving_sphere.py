"""
moving_sphere.py
球心沿参数曲线 t ∈ [0, 1] 移动时跟踪位置类型，并用二分法定位类型切换（相切）时刻。

根随 t 连续变化，所以类型只会在某一时刻出现重根（或根穿过 -a²、c²）时改变。
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from charpoly import cardano, residual_cubic
from config import DEFAULT_TOLERANCES, Tolerances
from data_models import PositionType, RootStructure, Sphere, StdHyperboloid
from positions import classify

logger = logging.getLogger(__name__)

Vec3 = Tuple[float, float, float]

# 到达 t_resolution 后继续对半的最大次数（寻找瞬时相切类型）
EXTRA_HALVINGS = 60
MAX_DEPTH = 8


# ================== 路径 ================== #

@dataclass(frozen=True, slots=True)
class CenterPath:
    """折线路径（各段参数等长）或闭式参数曲线 t -> center"""

    waypoints: Tuple[Vec3, ...] = ()
    func: Optional[Callable[[float], Sequence[float]]] = None

    def __post_init__(self) -> None:
        if self.func is None:
            if len(self.waypoints) < 2:
                raise ValueError("CenterPath 至少需要 2 个路径点")
            object.__setattr__(
                self, "waypoints", tuple(tuple(float(v) for v in p) for p in self.waypoints)
            )

    @classmethod
    def line(cls, start: Sequence[float], end: Sequence[float]) -> "CenterPath":
        return cls(waypoints=(tuple(start), tuple(end)))  # type: ignore[arg-type]

    def at(self, t: float) -> Vec3:
        if self.func is not None:
            x, y, z = self.func(t)
            return (float(x), float(y), float(z))
        pts = np.asarray(self.waypoints)
        n_seg = len(pts) - 1
        u = min(max(t, 0.0), 1.0) * n_seg
        k = min(int(u), n_seg - 1)
        frac = u - k
        p = pts[k] + frac * (pts[k + 1] - pts[k])
        return (float(p[0]), float(p[1]), float(p[2]))

    def reversed(self) -> "CenterPath":
        if self.func is not None:
            f = self.func
            return CenterPath(func=lambda t: f(1.0 - t))
        return CenterPath(waypoints=tuple(reversed(self.waypoints)))


# ================== 报告 ================== #

@dataclass(frozen=True, slots=True)
class SweepSegment:
    t_start: float
    t_end: float
    position: PositionType


@dataclass(frozen=True, slots=True)
class SweepEvent:
    t: float
    from_type: PositionType
    to_type: PositionType
    width: float


@dataclass(frozen=True, slots=True)
class SweepReport:
    segments: Tuple[SweepSegment, ...]
    events: Tuple[SweepEvent, ...]

    def types(self) -> List[PositionType]:
        return [seg.position for seg in self.segments]


# ================== 二分目标 ================== #

class _Track:
    """固定 (h, r, path) 的按 t 求值器"""

    def __init__(self, h: StdHyperboloid, r: float, path: CenterPath, tolerances: Tolerances) -> None:
        self.h = h
        self.r = r
        self.path = path
        self.tolerances = tolerances

    def sphere(self, t: float) -> Sphere:
        return Sphere(center=self.path.at(t), r=self.r)

    def classify(self, t: float) -> PositionType:
        return classify(self.h, self.sphere(t), self.tolerances)

    def delta_sign(self, t: float) -> int:
        """Δ(t) 的符号，落在近零带内返回 0"""
        structure = cardano(residual_cubic(self.h, self.sphere(t))).structure(self.tolerances.eps_delta)
        if structure is RootStructure.COMPLEX_PAIR:
            return 1
        if structure is RootStructure.THREE_DISTINCT:
            return -1
        return 0

    def on_axis(self, t: float) -> bool:
        s = self.sphere(t)
        scale = self.h.a2 + self.h.c2 + s.r2 + s.z_c * s.z_c + s.rho2
        return s.rho2 <= self.tolerances.eps_axis * scale

    def on_equator(self, t: float) -> bool:
        s = self.sphere(t)
        z2 = s.z_c * s.z_c
        scale = self.h.a2 + self.h.c2 + s.r2 + s.rho2 + z2
        return z2 <= self.tolerances.eps_axis * scale

    def landmark_slope(self, t: float, landmark: float) -> float:
        """g_t'(L)：L 为 g 的根时，其符号随另一根穿过 L 而改变"""
        return float(residual_cubic(self.h, self.sphere(t)).derivative(landmark))


def _bisect(
    lo: float,
    hi: float,
    same_as_lo: Callable[[float], bool],
    width: float,
) -> Tuple[float, float]:
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if same_as_lo(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _objective(track: _Track, lo: float, hi: float) -> Optional[Callable[[float], bool]]:
    """选择二分目标：Δ 严格变号 > 轴上 -a² > 赤道面 c² > None（退回按类型二分）"""
    d_lo, d_hi = track.delta_sign(lo), track.delta_sign(hi)
    if d_lo != 0 and d_hi != 0 and d_lo != d_hi:
        return lambda t: track.delta_sign(t) == d_lo

    for located, landmark in ((track.on_axis, -track.h.a2), (track.on_equator, track.h.c2)):
        if located(lo) and located(hi):
            s_lo = np.sign(track.landmark_slope(lo, landmark))
            s_hi = np.sign(track.landmark_slope(hi, landmark))
            if s_lo != 0 and s_hi != 0 and s_lo != s_hi:
                return lambda t, lm=landmark, sl=s_lo: np.sign(track.landmark_slope(t, lm)) == sl
    return None


def _resolve(
    track: _Track,
    lo: float,
    hi: float,
    a_type: PositionType,
    b_type: PositionType,
    depth: int = 0,
) -> List[SweepEvent]:
    width = track.tolerances.t_resolution
    objective = _objective(track, lo, hi)
    if objective is not None:
        # 连续目标函数的零点即事件时刻；零点处的类型若不同于两端，就是瞬时相切类型
        new_lo, new_hi = _bisect(lo, hi, objective, width)
        t_event = 0.5 * (new_lo + new_hi)
        bracket = new_hi - new_lo
        m_type = track.classify(t_event)
        if m_type is a_type or m_type is b_type:
            return [SweepEvent(t_event, a_type, b_type, bracket)]
        return [
            SweepEvent(t_event, a_type, m_type, bracket),
            SweepEvent(t_event, m_type, b_type, bracket),
        ]

    new_lo, new_hi = _bisect(lo, hi, lambda t: track.classify(t) is a_type, width)
    hi_type = track.classify(new_hi)

    # 继续对半，直到中点出现瞬时类型（相切）
    middle: Optional[PositionType] = None
    a, b = new_lo, new_hi
    for _ in range(EXTRA_HALVINGS):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        m_type = track.classify(mid)
        if m_type is not a_type and m_type is not hi_type:
            middle = m_type
            new_lo, new_hi = a, b
            break
        if m_type is a_type:
            a = mid
        else:
            b = mid

    t_event = 0.5 * (new_lo + new_hi)
    bracket = new_hi - new_lo
    if middle is not None:
        events = [
            SweepEvent(t_event, a_type, middle, bracket),
            SweepEvent(t_event, middle, hi_type, bracket),
        ]
    else:
        events = [SweepEvent(t_event, a_type, hi_type, bracket)]

    if hi_type is not b_type:
        if depth >= MAX_DEPTH:
            logger.warning(
                "sweep: [%s, %s] 内类型切换过多，递归深度达到上限 %s", lo, hi, MAX_DEPTH
            )
            events.append(SweepEvent(0.5 * (new_hi + hi), hi_type, b_type, hi - new_hi))
        elif new_hi < hi:
            events.extend(_resolve(track, new_hi, hi, hi_type, b_type, depth + 1))
    return events


def _segments(events: Sequence[SweepEvent], first: PositionType) -> Tuple[SweepSegment, ...]:
    segments: List[SweepSegment] = []
    start, current = 0.0, first
    for ev in events:
        segments.append(SweepSegment(start, ev.t, current))
        start, current = ev.t, ev.to_type
    segments.append(SweepSegment(start, 1.0, current))
    return tuple(segments)


def sweep(
    h: StdHyperboloid,
    r: float,
    path: CenterPath,
    n_steps: int = 200,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
    workers: int = 1,
) -> SweepReport:
    if n_steps < 2:
        raise ValueError(f"n_steps 至少为 2，实际 {n_steps}")
    track = _Track(h, r, path, tolerances)
    ts = [k / n_steps for k in range(n_steps + 1)]

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            types = list(pool.map(track.classify, ts))
    else:
        types = [track.classify(t) for t in ts]

    events: List[SweepEvent] = []
    for k in range(n_steps):
        if types[k] is not types[k + 1]:
            events.extend(_resolve(track, ts[k], ts[k + 1], types[k], types[k + 1]))

    logger.info("sweep: %s 个采样, %s 个事件", len(ts), len(events))
    return SweepReport(segments=_segments(events, types[0]), events=tuple(events))
