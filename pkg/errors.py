"""
errors.py
领域异常。全部继承 ValueError，外层（cli / app）按类型映射退出码或 HTTP 状态。
"""

from __future__ import annotations

from typing import TYPE_CHECKING, Optional

if TYPE_CHECKING:
    from data_models import RootSet


class GeometryError(ValueError):
    """所有领域异常的基类"""


class InvalidGeometry(GeometryError):
    """构造几何对象时参数非法（半轴、半径非正，旋转不正交等）"""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message


class NotCircular(GeometryError):
    pass


class WrongSignature(GeometryError):
    pass


class UnclassifiableRoots(GeometryError):
    """根的配置与任何类型都不匹配（数值带冲突）"""

    def __init__(self, message: str, roots: Optional["RootSet"] = None) -> None:
        super().__init__(message)
        self.roots = roots


class RegimeViolation(GeometryError):
    pass


class NotTangent(GeometryError):
    pass


class InconclusiveNearTangent(GeometryError):
    """采样网格分辨率不足以判断是否接触"""

    def __init__(self, min_value: float, band: float) -> None:
        super().__init__(
            f"采样最小值 {min_value:.3e} 落在分辨率带 {band:.3e} 内，无法判定是否相切"
        )
        self.min_value = min_value
        self.band = band


class SceneError(GeometryError):
    """场景文件错误，带出错字段（点号路径）和行号"""

    def __init__(self, field: str, message: str, line: Optional[int] = None) -> None:
        self.field = field
        self.message = message
        self.line = line
        where = f" (第 {line} 行)" if line is not None else ""
        super().__init__(f"{field}{where}: {message}")

    def with_line(self, line: Optional[int]) -> "SceneError":
        return SceneError(self.field, self.message, line)
