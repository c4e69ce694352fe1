"""
quadrics.py
二次曲面的齐次矩阵、点的内外判定、位姿归一化，以及从任意 4x4 矩阵恢复标准型双曲面。
"""

from __future__ import annotations

import logging
from typing import Sequence, Tuple

import numpy as np

from config import DEFAULT_TOLERANCES, Tolerances
from data_models import PointClass, RigidPose, Sphere, StdHyperboloid, SymQuadric4
from errors import NotCircular, WrongSignature

logger = logging.getLogger(__name__)

WorldHyperboloid = Tuple[StdHyperboloid, RigidPose]


# ================== 矩阵 ================== #

def hyperboloid_matrix(h: StdHyperboloid) -> SymQuadric4:
    return SymQuadric4.from_matrix(np.diag([1.0 / h.a2, 1.0 / h.a2, -1.0 / h.c2, -1.0]))


def sphere_matrix(s: Sphere) -> SymQuadric4:
    m = np.eye(4)
    center = s.center_array
    m[:3, 3] = -center
    m[3, :3] = -center
    m[3, 3] = -s.r2 + float(center @ center)
    return SymQuadric4.from_matrix(m)


def conjugate(q: SymQuadric4, pose: RigidPose) -> SymQuadric4:
    """标准坐标下的二次型搬到世界坐标：M_world = T^-t M T^-1"""
    t_inv = np.linalg.inv(pose.homogeneous())
    return SymQuadric4.from_matrix(t_inv.T @ q.matrix @ t_inv)


# ================== 点的判定 ================== #

def hyperboloid_values(h: StdHyperboloid, points: np.ndarray) -> np.ndarray:
    """批量计算 P^t H P，points 形状 (..., 3)"""
    pts = np.asarray(points, dtype=float)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    return (x * x + y * y) / h.a2 - z * z / h.c2 - 1.0


def hyperboloid_scales(h: StdHyperboloid, points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    return 1.0 + (x * x + y * y) / h.a2 + z * z / h.c2


def classify_point(
    h: StdHyperboloid,
    p: Sequence[float],
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> PointClass:
    pt = np.asarray(p, dtype=float)
    value = float(hyperboloid_values(h, pt))
    if abs(value) <= tolerances.eps_on * float(hyperboloid_scales(h, pt)):
        return PointClass.ON_SURFACE
    return PointClass.INTERIOR if value < 0 else PointClass.EXTERIOR


def classify_points(
    h: StdHyperboloid,
    points: np.ndarray,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> np.ndarray:
    """返回与 points 同形的符号数组：-1 内部，0 曲面上，+1 外部"""
    values = hyperboloid_values(h, points)
    on = np.abs(values) <= tolerances.eps_on * hyperboloid_scales(h, points)
    return np.where(on, 0, np.sign(values)).astype(int)


# ================== 位姿 ================== #

def normalize(world_h: WorldHyperboloid, s: Sphere) -> Tuple[StdHyperboloid, Sphere]:
    h, pose = world_h
    center = pose.inverse_apply(s.center)
    return h, Sphere(center=tuple(float(v) for v in center), r=s.r)  # type: ignore[arg-type]


def recover_standard_form(
    q: SymQuadric4,
    tolerances: Tolerances = DEFAULT_TOLERANCES,
) -> WorldHyperboloid:
    m = q.matrix
    block = m[:3, :3]
    linear = m[:3, 3]

    # 先做符号检查：3x3 块必须非奇异
    eig_raw = np.linalg.eigvalsh(block)
    scale = float(np.max(np.abs(eig_raw)))
    if scale == 0.0 or float(np.min(np.abs(eig_raw))) <= 1e-14 * scale:
        raise WrongSignature("二次型的 3x3 块奇异，不是中心二次曲面")

    center = -np.linalg.solve(block, linear)
    constant = float(m[3, 3] + linear @ center)
    if abs(constant) <= 1e-14 * max(1.0, abs(float(m[3, 3]))):
        raise WrongSignature("平移到中心后常数项为 0（锥面）")

    # 归一化使常数项为 -1
    normalized = block / (-constant)
    eigvals, eigvecs = np.linalg.eigh(normalized)
    negatives = int(np.sum(eigvals < 0))
    if negatives != 1:
        raise WrongSignature(
            f"3x3 块的符号应为 (+, +, -)，实际特征值为 {eigvals.tolist()}"
        )

    mu = float(eigvals[0])
    lam1, lam2 = float(eigvals[1]), float(eigvals[2])
    if abs(lam2 - lam1) > tolerances.eps_circular * max(abs(lam1), abs(lam2)):
        raise NotCircular(f"两个正特征值不相等: {lam1!r} vs {lam2!r}")

    lam = 0.5 * (lam1 + lam2)
    h = StdHyperboloid(a=lam ** -0.5, c=(-mu) ** -0.5)

    # 旋转矩阵列向量 = (e1, e2, 轴)，轴是负特征值对应的特征向量
    rotation = np.column_stack([eigvecs[:, 1], eigvecs[:, 2], eigvecs[:, 0]])
    if np.linalg.det(rotation) < 0:
        rotation[:, 0] = -rotation[:, 0]
    u, _, vt = np.linalg.svd(rotation)
    pose = RigidPose.from_matrix(u @ vt, center.tolist())
    logger.debug("recover_standard_form: a=%s c=%s center=%s", h.a, h.c, center.tolist())
    return h, pose
