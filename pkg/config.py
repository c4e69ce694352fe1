"""
config.py
统一读取 .env / 环境变量。

库函数（quadrics / charpoly / positions ...）只使用 DEFAULT_TOLERANCES，
从不直接读环境；命令行与 HTTP 服务通过 load_settings() 拿到覆盖后的配置。
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field, replace
from typing import Optional

# 尝试加载环境变量
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass

logger = logging.getLogger(__name__)


@dataclass(frozen=True, slots=True)
class Tolerances:
    """
    数值容差集合。

    - eps_on:       点在曲面上的相对判定带
    - eps_cluster:  根聚类（重根合并）的相对带
    - eps_delta:    Cardano 判别式的近零带（相对 |Q|^3 + R^2，与长度单位无关）
    - eps_axis:     球心在 OZ 轴 / XY 平面上的相对判定
    - eps_cond:     三重根、c^2 重根等代数条件的相对判定
    - eps_circular: 由矩阵恢复标准型时两个正特征值的相对差
    - eps_pose:     旋转矩阵正交性
    - t_resolution: 扫掠事件的二分宽度
    """

    eps_on: float = 1e-10
    eps_cluster: float = 1e-7
    eps_delta: float = 1e-10
    eps_axis: float = 1e-9
    eps_cond: float = 1e-9
    eps_circular: float = 1e-9
    eps_pose: float = 1e-12
    t_resolution: float = 1e-10

    def with_cluster(self, eps: Optional[float]) -> "Tolerances":
        if eps is None:
            return self
        if not eps > 0:
            raise ValueError(f"eps_cluster 必须为正数: {eps}")
        return replace(self, eps_cluster=float(eps))


DEFAULT_TOLERANCES = Tolerances()

_TOLERANCE_ENV = {
    "HSC_EPS_ON": "eps_on",
    "HSC_EPS_CLUSTER": "eps_cluster",
    "HSC_EPS_DELTA": "eps_delta",
    "HSC_EPS_AXIS": "eps_axis",
    "HSC_EPS_COND": "eps_cond",
    "HSC_T_RESOLUTION": "t_resolution",
}


@dataclass(frozen=True, slots=True)
class Settings:
    tolerances: Tolerances = field(default_factory=Tolerances)
    grid: int = 512
    steps: int = 200
    side_samples: int = 1000
    log_level: str = "WARNING"
    host: str = "127.0.0.1"
    port: int = 5000


def _env_number(name: str, cast, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = cast(raw)
    except (TypeError, ValueError):
        logger.warning("环境变量 %s=%r 无法解析，使用默认值 %s", name, raw, default)
        return default
    if value <= 0:
        logger.warning("环境变量 %s=%r 必须为正数，使用默认值 %s", name, raw, default)
        return default
    return value


def load_tolerances(base: Tolerances = DEFAULT_TOLERANCES) -> Tolerances:
    overrides = {}
    for env_name, attr in _TOLERANCE_ENV.items():
        overrides[attr] = _env_number(env_name, float, getattr(base, attr))
    return replace(base, **overrides)


def load_settings() -> Settings:
    return Settings(
        tolerances=load_tolerances(),
        grid=_env_number("HSC_GRID", int, 512),
        steps=_env_number("HSC_STEPS", int, 200),
        side_samples=_env_number("HSC_SIDE_SAMPLES", int, 1000),
        log_level=os.getenv("LOG_LEVEL", "WARNING").upper(),
        host=os.getenv("HSC_HOST", "127.0.0.1"),
        port=_env_number("HSC_PORT", int, 5000),
    )
