"""
charpoly.py
特征多项式 f(λ) = det(λH + S) 及其三次因子 g(λ)，Cardano 判别式，以及带重数聚类的根集。

f(λ) = (a² + λ)·g(λ) / (a⁴c²)，其中 -a² 永远是 f 的根（固定根）。
"""

from __future__ import annotations

import logging
import math
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULT_TOLERANCES, Tolerances
from data_models import (
    CubicPoly,
    CubicRoots,
    Discriminant,
    QuarticPoly,
    Root,
    RootSet,
    RootStructure,
    Sphere,
    StdHyperboloid,
)
from quadrics import hyperboloid_matrix, sphere_matrix

logger = logging.getLogger(__name__)

POLISH_STEPS = 2


# ================== 多项式构造 ================== #

def residual_cubic(h: StdHyperboloid, s: Sphere) -> CubicPoly:
    a2, c2, r2 = h.a2, h.c2, s.r2
    rho2 = s.rho2
    z2 = s.z_c * s.z_c
    return CubicPoly(
        a2=a2 - c2 + r2 - rho2 - z2,
        a1=-(a2 * c2 - a2 * r2 + c2 * r2 - c2 * rho2 + a2 * z2),
        a0=-a2 * c2 * r2,
    )


def full_quartic(h: StdHyperboloid, s: Sphere) -> QuarticPoly:
    g = residual_cubic(h, s)
    a2 = h.a2
    k = 1.0 / (a2 * a2 * h.c2)
    return QuarticPoly(
        c4=k,
        c3=(g.a2 + a2) * k,
        c2=(g.a1 + a2 * g.a2) * k,
        c1=(g.a0 + a2 * g.a1) * k,
        c0=a2 * g.a0 * k,
    )


def characteristic_determinant(h: StdHyperboloid, s: Sphere, lam: float) -> float:
    """直接用 4x4 矩阵计算 det(λH + S)"""
    return float(np.linalg.det(lam * hyperboloid_matrix(h).matrix + sphere_matrix(s).matrix))


def pencil_eigenvalues(h: StdHyperboloid, s: Sphere) -> np.ndarray:
    """-H⁻¹S 的特征值，按实部升序"""
    hm = hyperboloid_matrix(h).matrix
    sm = sphere_matrix(s).matrix
    eig = np.linalg.eigvals(-np.linalg.solve(hm, sm))
    return eig[np.lexsort((eig.imag, eig.real))]


# ================== Cardano ================== #

def cardano(cubic: CubicPoly) -> Discriminant:
    a2, a1, a0 = cubic.a2, cubic.a1, cubic.a0
    q = (3.0 * a1 - a2 * a2) / 9.0
    r = (9.0 * a2 * a1 - 27.0 * a0 - 2.0 * a2 ** 3) / 54.0
    return Discriminant(q=q, r=r, delta=q ** 3 + r * r)


def _newton(
    f: Callable[[float], float],
    df: Callable[[float], float],
    x: float,
    steps: int = POLISH_STEPS,
) -> float:
    for _ in range(steps):
        fx = f(x)
        d = df(x)
        if fx == 0.0 or d == 0.0 or not math.isfinite(d):
            break
        candidate = x - fx / d
        if not math.isfinite(candidate) or abs(f(candidate)) > abs(fx):
            break
        x = candidate
    return x


def _cluster(
    values: Sequence[float],
    tol: float,
    landmarks: Sequence[float] = (),
) -> Tuple[Root, ...]:
    """相邻差 <= tol 的实根合并；簇里若含精确的地标值（-a²、c²）则保留地标值"""
    ordered = sorted(float(v) for v in values)
    groups: List[List[float]] = []
    for v in ordered:
        if groups and v - groups[-1][-1] <= tol:
            groups[-1].append(v)
        else:
            groups.append([v])
    roots = []
    for group in groups:
        value = float(np.mean(group))
        for mark in landmarks:
            if mark in group:
                value = mark
                break
        roots.append(Root(value, len(group)))
    return tuple(roots)


def _merge_closest(roots: Tuple[Root, ...], landmarks: Sequence[float] = ()) -> Tuple[Root, ...]:
    """把最接近的两个簇合并成一个（判别式落在近零带时使用）"""
    if len(roots) < 2:
        return roots
    gaps = [roots[i + 1].value - roots[i].value for i in range(len(roots) - 1)]
    i = int(np.argmin(gaps))
    left, right = roots[i], roots[i + 1]
    value = 0.5 * (left.value + right.value)
    for mark in landmarks:
        if mark in (left.value, right.value):
            value = mark
            break
    merged = Root(value, left.multiplicity + right.multiplicity)
    return roots[:i] + (merged,) + roots[i + 2:]


def _tolerance(values: Sequence[float], eps: float) -> float:
    return eps * max((abs(v) for v in values), default=0.0)


def solve_cubic(cubic: CubicPoly, tolerances: Tolerances = DEFAULT_TOLERANCES) -> CubicRoots:
    disc = cardano(cubic)
    structure = disc.structure(tolerances.eps_delta)
    shift = cubic.a2 / 3.0

    if structure is RootStructure.THREE_DISTINCT:
        m = 2.0 * math.sqrt(-disc.q)
        cos_arg = max(-1.0, min(1.0, disc.r / math.sqrt(-disc.q ** 3)))
        theta = math.acos(cos_arg)
        raw = [m * math.cos((theta + 2.0 * math.pi * k) / 3.0) - shift for k in range(3)]
        polished = [_newton(cubic, cubic.derivative, x) for x in raw]
        roots = _cluster(polished, _tolerance(polished, tolerances.eps_cluster))
        logger.debug("solve_cubic: 三个不同实根 %s", polished)
        return CubicRoots(roots=roots)

    if structure is RootStructure.MULTIPLE:
        cr = float(np.cbrt(disc.r))
        double = -shift - cr
        simple = -shift + 2.0 * cr
        tol = _tolerance([double, simple], tolerances.eps_cluster)
        if abs(simple - double) <= tol:
            triple = -shift
            logger.debug("solve_cubic: 三重根 %s", triple)
            return CubicRoots(roots=(Root(triple, 3),))
        double = _newton(cubic.derivative, cubic.second_derivative, double)
        simple = _newton(cubic, cubic.derivative, simple)
        roots = tuple(sorted((Root(double, 2), Root(simple, 1)), key=lambda item: item.value))
        logger.debug("solve_cubic: 二重根 %s, 单根 %s", double, simple)
        return CubicRoots(roots=roots)

    # 一个实根 + 共轭复根
    sqrt_delta = math.sqrt(disc.delta)
    sign = 1.0 if disc.r >= 0 else -1.0
    big = sign * float(np.cbrt(abs(disc.r) + sqrt_delta))
    small = -disc.q / big if big != 0.0 else 0.0
    x1 = _newton(cubic, cubic.derivative, big + small - shift)

    # 降阶：λ² + bλ + c
    b = cubic.a2 + x1
    c = cubic.a1 + b * x1
    re = -0.5 * b
    im2 = c - re * re
    im = math.sqrt(im2) if im2 > 0 else 0.0
    tol = _tolerance([x1, math.hypot(re, im)], tolerances.eps_cluster)
    if im <= tol:
        logger.debug("solve_cubic: 复根虚部 %s 落入聚类带，视为二重实根", im)
        if abs(x1 - re) <= tol:
            return CubicRoots(roots=(Root(-shift, 3),))
        roots = tuple(sorted((Root(x1, 1), Root(re, 2)), key=lambda item: item.value))
        return CubicRoots(roots=roots)
    return CubicRoots(roots=(Root(x1, 1),), complex_root=complex(re, im))


# ================== 根集 ================== #

def _on_axis(h: StdHyperboloid, s: Sphere, tolerances: Tolerances) -> bool:
    scale = h.a2 + h.c2 + s.r2 + s.z_c * s.z_c + s.rho2
    return s.rho2 <= tolerances.eps_axis * scale


def _on_equator(h: StdHyperboloid, s: Sphere, tolerances: Tolerances) -> bool:
    z2 = s.z_c * s.z_c
    scale = h.a2 + h.c2 + s.r2 + s.rho2 + z2
    return z2 <= tolerances.eps_axis * scale


def _axis_roots(
    h: StdHyperboloid,
    s: Sphere,
    structure: RootStructure,
    tolerances: Tolerances,
) -> Tuple[Root, ...]:
    """球心在 OZ 轴上：g = (λ + a²)(λ² - Bλ - c²r²)，两个非固定根为 λ±"""
    a2, c2, r2 = h.a2, h.c2, s.r2
    z2 = s.z_c * s.z_c
    b = c2 - r2 + z2
    lam_plus = 0.5 * (b + math.hypot(b, 2.0 * h.c * s.r))
    lam_minus = -c2 * r2 / lam_plus

    triple_gap = abs(r2 - a2 - a2 * z2 / (a2 + c2))
    if triple_gap <= tolerances.eps_cond * r2:
        logger.debug("root_set: 轴上三重根条件成立，λ- 取 -a²")
        lam_minus = -a2

    values = [-a2, lam_minus, lam_plus]
    roots = _cluster(values, _tolerance(values, tolerances.eps_cluster), landmarks=(-a2,))
    if structure is RootStructure.MULTIPLE and len(roots) == 3:
        roots = _merge_closest(roots, landmarks=(-a2,))
    return roots


def _equator_roots(
    h: StdHyperboloid,
    s: Sphere,
    structure: RootStructure,
    tolerances: Tolerances,
) -> Tuple[Tuple[Root, ...], Optional[complex]]:
    """球心在 z = 0 平面：g = (λ - c²)(λ² - Bλ + a²r²)，B = ρ² - a² - r²"""
    a2, c2, r2 = h.a2, h.c2, s.r2
    b = s.rho2 - a2 - r2
    prod = a2 * r2
    d = b * b - 4.0 * prod
    near_double = abs(d) <= tolerances.eps_cond * (b * b + 4.0 * prod)

    if d < 0 and not near_double and structure is not RootStructure.MULTIPLE:
        im = 0.5 * math.sqrt(-d)
        re = 0.5 * b
        if im > _tolerance([c2, math.hypot(re, im)], tolerances.eps_cluster):
            return (Root(c2, 1),), complex(re, im)

    if d <= 0 or near_double:
        q_values = [0.5 * b, 0.5 * b]
    else:
        big = 0.5 * (b + math.copysign(math.sqrt(d), b))
        q_values = [big, prod / big]

    c2_gap = abs(r2 + c2 - c2 * s.rho2 / (a2 + c2))
    if c2_gap <= tolerances.eps_cond * (r2 + c2):
        i = int(np.argmin([abs(v - c2) for v in q_values]))
        logger.debug("root_set: c² 重根条件成立，%s 取 c²", q_values[i])
        q_values[i] = c2

    values = [c2] + q_values
    roots = _cluster(values, _tolerance(values, tolerances.eps_cluster), landmarks=(c2,))
    if structure is RootStructure.MULTIPLE and len(roots) == 3:
        roots = _merge_closest(roots, landmarks=(c2,))
    return roots, None


def root_set(
    h: StdHyperboloid,
    s: Sphere,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> RootSet:
    cubic = residual_cubic(h, s)
    disc = cardano(cubic)
    structure = disc.structure(tolerances.eps_delta)
    complex_root: Optional[complex] = None

    if _on_axis(h, s, tolerances):
        roots = _axis_roots(h, s, structure, tolerances)
        branch = "axis"
    elif _on_equator(h, s, tolerances):
        roots, complex_root = _equator_roots(h, s, structure, tolerances)
        branch = "equator"
    else:
        solved = solve_cubic(cubic, tolerances)
        roots, complex_root = solved.roots, solved.complex_root
        branch = "cardano"

    result = RootSet(
        fixed_root=-h.a2,
        roots=roots,
        complex_root=complex_root,
        epsilon=tolerances.eps_cluster,
        discriminant=disc,
    )
    logger.debug(
        "root_set[%s]: roots=%s complex=%s delta=%s",
        branch, [(r.value, r.multiplicity) for r in roots], complex_root, disc.delta,
    )
    return result
