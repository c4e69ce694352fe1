"""
positions.py
由根集判定球与双曲面的相对位置类型，给出接触状态、判别式快速判定以及切点（切圆）的闭式解。

类型一览（λ₁ = -a² 为固定根）：
    一般位置      I, E, TI, TE, C
    a <= r 额外   TIc, Td, Ca
    c² < ar 额外  TEs, TEs1, TEs2, Cm
    c² = ar 边界  TEpointBoundary
"""

from __future__ import annotations

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from charpoly import cardano, residual_cubic, root_set
from config import DEFAULT_TOLERANCES, Tolerances
from data_models import (
    ContactKind,
    ContactStatus,
    FastVerdict,
    LocusKind,
    PositionType,
    Regime,
    RegimeReport,
    RigidPose,
    Root,
    RootSet,
    RootStructure,
    Side,
    Sphere,
    StdHyperboloid,
    TangentLocus,
)
from errors import NotTangent, RegimeViolation, UnclassifiableRoots
from quadrics import hyperboloid_matrix, normalize, sphere_matrix

logger = logging.getLogger(__name__)

Vec3 = Tuple[float, float, float]


# ================== 曲率与区域 ================== #

def hyperbola_curvature(h: StdHyperboloid, t: float) -> float:
    """子午线双曲线 (a cosh t, c sinh t) 在参数 t 处的曲率，t = 0 时为 a/c²"""
    sh, ch = math.sinh(t), math.cosh(t)
    return h.a * h.c / (h.a2 * sh * sh + h.c2 * ch * ch) ** 1.5


def _guards(h: StdHyperboloid, s: Sphere, tolerances: Tolerances) -> Tuple[bool, bool]:
    wide = s.r >= h.a * (1.0 - tolerances.eps_cond)
    flat = h.c2 < h.a * s.r * (1.0 + tolerances.eps_cond)
    return wide, flat


def regime(
    h: StdHyperboloid,
    s: Sphere,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> RegimeReport:
    wide, flat = _guards(h, s, tolerances)
    # 判定区域时 flat 用严格不等式，容差只用于分类时的放宽
    flat_strict = h.c2 < h.a * s.r
    if wide and flat_strict:
        kind = Regime.BOTH
    elif wide:
        kind = Regime.WIDE_SPHERE
    elif flat_strict:
        kind = Regime.FLAT_THROAT
    else:
        kind = Regime.STANDARD
    return RegimeReport(
        regime=kind,
        wide=wide,
        flat=flat_strict,
        kappa_h=hyperbola_curvature(h, 0.0),
        kappa_c=1.0 / s.r,
    )


# ================== 分类 ================== #

def _unclassifiable(reason: str, rs: RootSet) -> UnclassifiableRoots:
    logger.warning("根配置无法分类: %s (roots=%s)", reason, rs.values())
    return UnclassifiableRoots(f"根配置无法分类: {reason}", rs)


def classify_roots(
    h: StdHyperboloid,
    s: Sphere,
    rs: RootSet,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> PositionType:
    """根集 + 区域条件 -> 位置类型。各模式互斥。"""
    if rs.has_complex:
        return PositionType.C

    wide, flat = _guards(h, s, tolerances)
    a2, c2 = h.a2, h.c2
    tol = tolerances.eps_cluster * rs.scale
    clusters = rs.clusters()
    m_fixed = rs.fixed_multiplicity()
    others: List[Root] = [r for r in clusters if r.value != rs.fixed_root]
    negatives = [r for r in others if r.value < 0]
    positives = [r for r in others if r.value > 0]

    # -a² 为三重根：沿圆周相切
    if m_fixed == 3:
        if not wide:
            raise _unclassifiable("-a² 三重根但 r < a", rs)
        return PositionType.TIc

    if m_fixed == 2:
        if len(negatives) != 1:
            raise _unclassifiable("-a² 二重根时应恰有一个其余负根", rs)
        if negatives[0].value > -a2:
            return PositionType.I
        if not wide:
            raise _unclassifiable("Ca 需要 a <= r", rs)
        return PositionType.Ca

    if m_fixed != 1:
        raise _unclassifiable(f"-a² 的重数为 {m_fixed}", rs)

    # 三个负根
    if negatives:
        if sum(r.multiplicity for r in negatives) != 2:
            raise _unclassifiable("负根个数不为奇数", rs)
        if len(negatives) == 1:
            d = negatives[0].value
            if d > -a2:
                return PositionType.TI
            if not wide:
                raise _unclassifiable("Td 需要 a <= r", rs)
            return PositionType.Td
        n1, n2 = negatives[0].value, negatives[1].value
        if n1 >= -a2:
            return PositionType.I
        if n2 <= -a2:
            if not wide:
                raise _unclassifiable("Ca 需要 a <= r", rs)
            return PositionType.Ca
        raise _unclassifiable("两负根夹住 -a²", rs)

    # 三个正根
    if len(positives) == 1:
        if abs(positives[0].value - c2) <= tol:
            return PositionType.TEpointBoundary
        raise _unclassifiable("正的三重根不等于 c²", rs)

    if len(positives) == 2:
        double = next(r for r in positives if r.multiplicity == 2).value
        simple = next(r for r in positives if r.multiplicity == 1).value
        if abs(double - c2) <= tol:
            if simple > c2:
                if not flat:
                    raise _unclassifiable("TEs 需要 c² < ar", rs)
                return PositionType.TEs
            # c² 二重根而另一根在其下方：切点高度为虚数，没有实接触
            return PositionType.E
        if abs(simple - c2) <= tol and double > c2:
            if not flat:
                raise _unclassifiable("TEs1 需要 c² < ar", rs)
            return PositionType.TEs1
        if double < c2:
            if double < simple:
                return PositionType.TE
            raise _unclassifiable("二重正根在 c² 与单根之下", rs)
        if simple < c2:
            raise _unclassifiable("单根 < c² < 二重根", rs)
        if flat:
            return PositionType.TEs2
        raise _unclassifiable("c² >= ar 时出现大于 c² 的二重根", rs)

    p1, p2, p3 = (r.value for r in positives)
    if abs(p2 - c2) <= tol or abs(p3 - c2) <= tol:
        return PositionType.E
    if c2 <= p1 + tol:
        if not flat:
            raise _unclassifiable("Cm 需要 c² < ar", rs)
        return PositionType.Cm
    if p2 < c2 < p3:
        return PositionType.E
    raise _unclassifiable("c² 落在被排除的区间", rs)


def classify(
    h: StdHyperboloid,
    s: Sphere,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> PositionType:
    return classify_roots(h, s, root_set(h, s, tolerances), tolerances)


def classify_world(
    h: StdHyperboloid,
    pose: RigidPose,
    s: Sphere,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> PositionType:
    std_h, std_s = normalize((h, pose), s)
    return classify(std_h, std_s, tolerances)


# ================== 接触状态 ================== #

def contact_status_for(
    h: StdHyperboloid,
    s: Sphere,
    kind: PositionType,
    rs: Optional[RootSet] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ContactStatus:
    if kind is PositionType.I:
        return ContactStatus(ContactKind.NO_CONTACT, kind, side=Side.INTERIOR)
    if kind is PositionType.E:
        return ContactStatus(ContactKind.NO_CONTACT, kind, side=Side.EXTERIOR)
    if kind is PositionType.C:
        return ContactStatus(ContactKind.TRANSVERSAL, kind, components=1)
    if kind in (PositionType.Ca, PositionType.Cm):
        return ContactStatus(ContactKind.TRANSVERSAL, kind, components=2)
    locus = tangent_locus(h, s, kind, rs, tolerances)
    return ContactStatus(ContactKind.TANGENT, kind, locus=locus)


def contact_status(
    h: StdHyperboloid,
    s: Sphere,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ContactStatus:
    rs = root_set(h, s, tolerances)
    kind = classify_roots(h, s, rs, tolerances)
    return contact_status_for(h, s, kind, rs, tolerances)


def contact_status_world(
    h: StdHyperboloid,
    pose: RigidPose,
    s: Sphere,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> ContactStatus:
    """世界坐标下的接触状态，切点映射回世界坐标"""
    std_h, std_s = normalize((h, pose), s)
    status = contact_status(std_h, std_s, tolerances)
    if status.locus is None:
        return status
    return ContactStatus(
        status.kind, status.position, status.side, status.locus.mapped(pose), status.components
    )


def fast_contact(
    h: StdHyperboloid,
    s: Sphere,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> FastVerdict:
    """仅在 r < a 且 ar < c² 时有效：只看判别式符号"""
    if s.r >= h.a or h.a * s.r >= h.c2:
        raise RegimeViolation(
            f"快速判定要求 r < a 且 ar < c²，实际 a={h.a}, c={h.c}, r={s.r}"
        )
    structure = cardano(residual_cubic(h, s)).structure(tolerances.eps_delta)
    if structure is RootStructure.COMPLEX_PAIR:
        return FastVerdict.CONTACT
    if structure is RootStructure.MULTIPLE:
        return FastVerdict.TANGENT
    return FastVerdict.NO_CONTACT


# ================== 切点 ================== #

def _pencil_null_point(h: StdHyperboloid, s: Sphere, lam: float) -> Vec3:
    """(λH + S)X = 0 的零空间向量，去齐次化"""
    m = lam * hyperboloid_matrix(h).matrix + sphere_matrix(s).matrix
    _, _, vt = np.linalg.svd(m)
    v = vt[-1]
    if abs(v[3]) <= 1e-12 * float(np.max(np.abs(v))):
        raise NotTangent(f"λ = {lam} 处的零空间向量在无穷远")
    p = v[:3] / v[3]
    return (float(p[0]), float(p[1]), float(p[2]))


def _double_root(rs: RootSet, kind: PositionType) -> float:
    candidates = [r for r in rs.clusters() if r.multiplicity >= 2 and r.value != rs.fixed_root]
    if not candidates:
        raise NotTangent(f"{kind.value} 没有可用的二重根")
    return candidates[0].value


def tangent_locus(
    h: StdHyperboloid,
    s: Sphere,
    kind: PositionType,
    rs: Optional[RootSet] = None,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> TangentLocus:
    if not kind.is_tangent:
        raise NotTangent(f"{kind.value} 不是相切类型")

    a2, c2 = h.a2, h.c2
    cos_t, sin_t = math.cos(s.theta_c), math.sin(s.theta_c)

    if kind is PositionType.TIc:
        z = c2 * s.z_c / (a2 + c2)
        rho = h.a * math.sqrt(1.0 + z * z / c2)
        samples = tuple(
            (rho * math.cos(phi), rho * math.sin(phi), z)
            for phi in (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)
        )
        return TangentLocus(LocusKind.CIRCLE, samples, circle_z=z, circle_rho=rho)

    if kind in (PositionType.TEs, PositionType.TEpointBoundary):
        rho = a2 * s.rho_c / (a2 + c2)
        if kind is PositionType.TEpointBoundary:
            return TangentLocus(LocusKind.POINT, ((rho * cos_t, rho * sin_t, 0.0),))
        z = h.c * math.sqrt(max(0.0, rho * rho / a2 - 1.0))
        return TangentLocus(
            LocusKind.VERTICAL_PAIR,
            ((rho * cos_t, rho * sin_t, z), (rho * cos_t, rho * sin_t, -z)),
        )

    if kind is PositionType.TEs1:
        return TangentLocus(LocusKind.POINT_PLUS_CURVE, ((h.a * cos_t, h.a * sin_t, 0.0),))

    if rs is None:
        rs = root_set(h, s, tolerances)
    point = _pencil_null_point(h, s, _double_root(rs, kind))
    locus_kind = LocusKind.POINT_PLUS_CURVE if kind.has_extra_contact else LocusKind.POINT
    return TangentLocus(locus_kind, (point,))


# ================== 回归样例 ================== #

def exterior_fixture(a: float, c: float, r: float) -> Tuple[StdHyperboloid, Sphere]:
    """z_c = 0 的一般外部位置：根为 -a²、c² 与两个不同的正根，c² 位于两者之间"""
    h = StdHyperboloid(a=a, c=c)
    x2 = (1.0 + h.a2 / h.c2) * (h.c2 + r * r) + (a + r) ** 2
    return h, Sphere(center=(math.sqrt(x2), 0.0, 0.0), r=r)
