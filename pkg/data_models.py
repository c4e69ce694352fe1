"""
data_models.py
几何对象、特征多项式、根集与分类结论的数据结构，以及场景文件的 from_raw 解析。

约定：
- 所有对象不可变（frozen），可以在线程之间自由传递；
- 标准型双曲面 x^2/a^2 + y^2/a^2 - z^2/c^2 = 1，中心在原点、轴为 OZ；
- 长度单位由调用方决定，只要求一致。
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy.spatial.transform import Rotation

from errors import InvalidGeometry, SceneError

Vec3 = Tuple[float, float, float]

QUATERNION_NORM_TOL = 1e-9


# ========= 工具函数 ========= #

def _finite(value: Any, field_name: str) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise InvalidGeometry(field_name, f"需要数值，实际为 {value!r}") from None
    if not math.isfinite(number):
        raise InvalidGeometry(field_name, f"需要有限数值，实际为 {value!r}")
    return number


def _positive(value: Any, field_name: str) -> float:
    number = _finite(value, field_name)
    if number <= 0:
        raise InvalidGeometry(field_name, f"必须大于 0，实际为 {number!r}")
    return number


def _vec3(value: Any, field_name: str) -> Vec3:
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if not isinstance(value, (list, tuple)) or len(value) != 3:
        raise InvalidGeometry(field_name, "需要长度为 3 的数组")
    return tuple(_finite(v, f"{field_name}[{i}]") for i, v in enumerate(value))  # type: ignore[return-value]


def _require(raw: Dict[str, Any], key: str, prefix: str) -> Any:
    if not isinstance(raw, dict):
        raise SceneError(prefix, "需要对象(dict)")
    if key not in raw:
        raise SceneError(f"{prefix}.{key}" if prefix else key, "缺少必填字段")
    return raw[key]


# ========= qcore：几何对象 ========= #

@dataclass(frozen=True, slots=True)
class StdHyperboloid:
    a: float
    c: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", _positive(self.a, "hyperboloid.a"))
        object.__setattr__(self, "c", _positive(self.c, "hyperboloid.c"))

    @property
    def a2(self) -> float:
        return self.a * self.a

    @property
    def c2(self) -> float:
        return self.c * self.c


@dataclass(frozen=True, slots=True)
class Sphere:
    center: Vec3
    r: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", _vec3(self.center, "sphere.center"))
        object.__setattr__(self, "r", _positive(self.r, "sphere.r"))

    @property
    def center_array(self) -> np.ndarray:
        return np.array(self.center, dtype=float)

    @property
    def r2(self) -> float:
        return self.r * self.r

    @property
    def rho2(self) -> float:
        x, y, _ = self.center
        return x * x + y * y

    @property
    def rho_c(self) -> float:
        x, y, _ = self.center
        return math.hypot(x, y)

    @property
    def theta_c(self) -> float:
        x, y, _ = self.center
        return math.atan2(y, x)

    @property
    def z_c(self) -> float:
        return self.center[2]

    def moved_to(self, center: Sequence[float]) -> "Sphere":
        return Sphere(center=tuple(center), r=self.r)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True)
class SymQuadric4:
    """4x4 对称二次型，只保存上三角（按行展开的 10 个元素）"""

    upper: Tuple[float, ...]

    _INDEX = tuple((i, j) for i in range(4) for j in range(i, 4))

    def __post_init__(self) -> None:
        if len(self.upper) != 10:
            raise InvalidGeometry("quadric", "上三角需要 10 个元素")
        object.__setattr__(self, "upper", tuple(float(v) for v in self.upper))

    @classmethod
    def from_matrix(cls, m: Any, rel_tol: float = 1e-12) -> "SymQuadric4":
        m = np.asarray(m, dtype=float)
        if m.shape != (4, 4) or not np.all(np.isfinite(m)):
            raise InvalidGeometry("quadric", "需要有限的 4x4 矩阵")
        scale = max(1.0, float(np.max(np.abs(m))))
        if np.max(np.abs(m - m.T)) > rel_tol * scale:
            raise InvalidGeometry("quadric", "矩阵不对称")
        sym = 0.5 * (m + m.T)
        return cls(tuple(sym[i, j] for i, j in cls._INDEX))

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((4, 4))
        for (i, j), v in zip(self._INDEX, self.upper):
            m[i, j] = v
            m[j, i] = v
        return m

    def evaluate(self, p: Sequence[float]) -> float:
        """X^t M X，X = (x, y, z, 1)"""
        x = np.array([p[0], p[1], p[2], 1.0])
        return float(x @ self.matrix @ x)


@dataclass(frozen=True, slots=True)
class RigidPose:
    """把标准型双曲面放到世界坐标：X_world = R X_std + t"""

    rotation: Tuple[Tuple[float, float, float], ...]
    translation: Vec3

    def __post_init__(self) -> None:
        rot = np.asarray(self.rotation, dtype=float)
        if rot.shape != (3, 3) or not np.all(np.isfinite(rot)):
            raise InvalidGeometry("pose.rotation", "需要有限的 3x3 矩阵")
        if np.max(np.abs(rot.T @ rot - np.eye(3))) > 1e-12:
            raise InvalidGeometry("pose.rotation", "旋转矩阵不正交")
        if abs(np.linalg.det(rot) - 1.0) > 1e-12:
            raise InvalidGeometry("pose.rotation", "旋转矩阵行列式不为 +1")
        object.__setattr__(self, "rotation", tuple(tuple(float(v) for v in row) for row in rot))
        object.__setattr__(self, "translation", _vec3(self.translation, "pose.translation"))

    @classmethod
    def identity(cls) -> "RigidPose":
        return cls(rotation=tuple(map(tuple, np.eye(3))), translation=(0.0, 0.0, 0.0))

    @classmethod
    def from_matrix(cls, rotation: Any, translation: Sequence[float]) -> "RigidPose":
        return cls(rotation=tuple(map(tuple, np.asarray(rotation, dtype=float))), translation=tuple(translation))

    @classmethod
    def from_quaternion(cls, wxyz: Sequence[float], translation: Sequence[float]) -> "RigidPose":
        """标量在前的单位四元数 [w, x, y, z]"""
        w, x, y, z = (float(v) for v in wxyz)
        rot = Rotation.from_quat([x, y, z, w]).as_matrix()
        # 数值上再做一次正交化，保证通过 1e-12 的校验
        u, _, vt = np.linalg.svd(rot)
        return cls.from_matrix(u @ vt, translation)

    @property
    def R(self) -> np.ndarray:
        return np.array(self.rotation, dtype=float)

    @property
    def t(self) -> np.ndarray:
        return np.array(self.translation, dtype=float)

    def apply(self, p: Sequence[float]) -> np.ndarray:
        return self.R @ np.asarray(p, dtype=float) + self.t

    def inverse_apply(self, p: Sequence[float]) -> np.ndarray:
        return self.R.T @ (np.asarray(p, dtype=float) - self.t)

    def homogeneous(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.R
        m[:3, 3] = self.t
        return m

    def is_identity(self) -> bool:
        return bool(np.allclose(self.R, np.eye(3), atol=0.0) and not np.any(self.t))


class PointClass(Enum):
    INTERIOR = "Interior"
    ON_SURFACE = "OnSurface"
    EXTERIOR = "Exterior"


# ========= charpoly：多项式与根集 ========= #

Number = Union[float, complex]


@dataclass(frozen=True, slots=True)
class CubicPoly:
    """首一三次式 λ^3 + a2 λ^2 + a1 λ + a0"""

    a2: float
    a1: float
    a0: float

    def __post_init__(self) -> None:
        for name in ("a2", "a1", "a0"):
            object.__setattr__(self, name, _finite(getattr(self, name), f"cubic.{name}"))

    def __call__(self, x: Number) -> Number:
        return ((x + self.a2) * x + self.a1) * x + self.a0

    def derivative(self, x: Number) -> Number:
        return (3.0 * x + 2.0 * self.a2) * x + self.a1

    def second_derivative(self, x: Number) -> Number:
        return 6.0 * x + 2.0 * self.a2

    @property
    def coefficients(self) -> Tuple[float, float, float, float]:
        return (1.0, self.a2, self.a1, self.a0)


@dataclass(frozen=True, slots=True)
class QuarticPoly:
    """f(λ) = c4 λ^4 + c3 λ^3 + c2 λ^2 + c1 λ + c0"""

    c4: float
    c3: float
    c2: float
    c1: float
    c0: float

    def __call__(self, x: Number) -> Number:
        return (((self.c4 * x + self.c3) * x + self.c2) * x + self.c1) * x + self.c0

    def derivative(self, x: Number) -> Number:
        return ((4.0 * self.c4 * x + 3.0 * self.c3) * x + 2.0 * self.c2) * x + self.c1

    @property
    def coefficients(self) -> Tuple[float, float, float, float, float]:
        return (self.c4, self.c3, self.c2, self.c1, self.c0)


class RootStructure(Enum):
    THREE_DISTINCT = "three_distinct"
    MULTIPLE = "multiple"
    COMPLEX_PAIR = "complex_pair"


@dataclass(frozen=True, slots=True)
class Discriminant:
    q: float
    r: float
    delta: float

    def band(self, eps: float) -> float:
        return eps * (abs(self.q) ** 3 + self.r * self.r)

    def structure(self, eps: float) -> RootStructure:
        band = self.band(eps)
        if self.delta > band:
            return RootStructure.COMPLEX_PAIR
        if self.delta < -band:
            return RootStructure.THREE_DISTINCT
        return RootStructure.MULTIPLE


@dataclass(frozen=True, slots=True)
class Root:
    value: float
    multiplicity: int = 1


@dataclass(frozen=True, slots=True)
class CubicRoots:
    """solve_cubic 的结果：聚类后的实根（升序）以及可能的共轭复根（取 im > 0 的一个）"""

    roots: Tuple[Root, ...]
    complex_root: Optional[complex] = None

    @property
    def multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots) + (2 if self.complex_root is not None else 0)


@dataclass(frozen=True, slots=True)
class RootSet:
    fixed_root: float
    roots: Tuple[Root, ...]
    complex_root: Optional[complex]
    epsilon: float
    discriminant: Discriminant

    @property
    def cubic_multiplicity(self) -> int:
        return sum(r.multiplicity for r in self.roots) + (2 if self.complex_root is not None else 0)

    @property
    def has_complex(self) -> bool:
        return self.complex_root is not None

    @property
    def scale(self) -> float:
        mags = [abs(self.fixed_root)] + [abs(r.value) for r in self.roots]
        if self.complex_root is not None:
            mags.append(abs(self.complex_root))
        return max(mags)

    def values(self) -> List[Number]:
        """四个根（按重数展开，复根成对给出）"""
        out: List[Number] = [self.fixed_root]
        for r in self.roots:
            out.extend([r.value] * r.multiplicity)
        if self.complex_root is not None:
            out.extend([self.complex_root, self.complex_root.conjugate()])
        return out

    def product(self) -> float:
        prod: complex = 1.0
        for v in self.values():
            prod *= v
        return float(np.real(prod))

    def clusters(self) -> Tuple[Root, ...]:
        """把固定根 -a^2 并入数值相同的三次式根，返回四次式的实根簇（升序）"""
        tol = self.epsilon * self.scale
        merged: List[Root] = []
        fixed_used = False
        for r in self.roots:
            if not fixed_used and abs(r.value - self.fixed_root) <= tol:
                merged.append(Root(self.fixed_root, r.multiplicity + 1))
                fixed_used = True
            else:
                merged.append(r)
        if not fixed_used:
            merged.append(Root(self.fixed_root, 1))
        return tuple(sorted(merged, key=lambda item: item.value))

    def fixed_multiplicity(self) -> int:
        for r in self.clusters():
            if r.value == self.fixed_root:
                return r.multiplicity
        return 1

    def multiple_roots(self) -> Tuple[Root, ...]:
        return tuple(r for r in self.clusters() if r.multiplicity >= 2)


# ========= classify：分类结论 ========= #

class PositionType(Enum):
    I = "I"
    E = "E"
    TI = "TI"
    TE = "TE"
    C = "C"
    TIc = "TIc"
    Td = "Td"
    Ca = "Ca"
    TEs = "TEs"
    TEs1 = "TEs1"
    TEs2 = "TEs2"
    Cm = "Cm"
    TEpointBoundary = "TEpointBoundary"

    @property
    def description(self) -> str:
        return _POSITION_DESCRIPTIONS[self]

    @property
    def is_tangent(self) -> bool:
        return self in _TANGENT_TYPES

    @property
    def has_extra_contact(self) -> bool:
        """相切之外还有横截接触"""
        return self in (PositionType.Td, PositionType.TEs1, PositionType.TEs2)

    @classmethod
    def from_raw(cls, raw: str) -> "PositionType":
        return cls(str(raw).strip())


_POSITION_DESCRIPTIONS = {
    PositionType.I: "球在双曲面内部，无接触",
    PositionType.E: "球在双曲面外部，无接触",
    PositionType.TI: "相切，球心在内部",
    PositionType.TE: "相切，球心在外部",
    PositionType.C: "非相切接触（交线一个分支）",
    PositionType.TIc: "沿圆周相切",
    PositionType.Td: "相切并伴随非相切接触",
    PositionType.Ca: "非相切双重接触（交线两个分支）",
    PositionType.TEs: "外部双点相切（同一竖直射线上两点）",
    PositionType.TEs1: "外部相切并伴随非相切接触（喉部切点）",
    PositionType.TEs2: "外部相切并伴随非相切接触",
    PositionType.Cm: "多重接触，无相切（交线两个分支）",
    PositionType.TEpointBoundary: "c^2 = ar 时喉部平面上单点相切",
}

_TANGENT_TYPES = frozenset(
    {
        PositionType.TI,
        PositionType.TE,
        PositionType.TIc,
        PositionType.Td,
        PositionType.TEs,
        PositionType.TEs1,
        PositionType.TEs2,
        PositionType.TEpointBoundary,
    }
)


class Regime(Enum):
    STANDARD = "Standard"
    WIDE_SPHERE = "WideSphere"
    FLAT_THROAT = "FlatThroat"
    BOTH = "Both"


@dataclass(frozen=True, slots=True)
class RegimeReport:
    regime: Regime
    wide: bool
    flat: bool
    kappa_h: float
    kappa_c: float


class Side(Enum):
    INTERIOR = "InteriorSide"
    EXTERIOR = "ExteriorSide"


class ContactKind(Enum):
    NO_CONTACT = "NoContact"
    TANGENT = "Tangent"
    TRANSVERSAL = "Transversal"


class LocusKind(Enum):
    CIRCLE = "Circle"
    POINT = "Point"
    VERTICAL_PAIR = "VerticalPair"
    POINT_PLUS_CURVE = "PointPlusCurve"


@dataclass(frozen=True, slots=True)
class TangentLocus:
    kind: LocusKind
    points: Tuple[Vec3, ...] = ()
    circle_z: Optional[float] = None
    circle_rho: Optional[float] = None

    def mapped(self, pose: "RigidPose") -> "TangentLocus":
        """切点映射到世界坐标（圆周只映射参数不变）"""
        pts = tuple(tuple(float(v) for v in pose.apply(p)) for p in self.points)
        return TangentLocus(self.kind, pts, self.circle_z, self.circle_rho)  # type: ignore[arg-type]


@dataclass(frozen=True, slots=True)
class ContactStatus:
    kind: ContactKind
    position: PositionType
    side: Optional[Side] = None
    locus: Optional[TangentLocus] = None
    components: Optional[int] = None


class FastVerdict(Enum):
    NO_CONTACT = "NoContact"
    TANGENT = "Tangent"
    CONTACT = "Contact"


# ========= 场景文件 ========= #

@dataclass(frozen=True, slots=True)
class SweepPlan:
    waypoints: Tuple[Vec3, ...]
    n_steps: Optional[int] = None

    @classmethod
    def from_raw(cls, raw: Any, prefix: str = "sweep") -> "SweepPlan":
        points = _require(raw, "waypoints", prefix)
        if not isinstance(points, list) or len(points) < 2:
            raise SceneError(f"{prefix}.waypoints", "至少需要 2 个路径点")
        waypoints = []
        for i, p in enumerate(points):
            try:
                waypoints.append(_vec3(p, f"{prefix}.waypoints[{i}]"))
            except InvalidGeometry as exc:
                raise SceneError(exc.field, exc.message) from None
        n_steps = raw.get("n_steps")
        if n_steps is not None and (isinstance(n_steps, bool) or not isinstance(n_steps, int) or n_steps < 2):
            raise SceneError(f"{prefix}.n_steps", f"需要 >= 2 的整数，实际为 {n_steps!r}")
        return cls(waypoints=tuple(waypoints), n_steps=n_steps)


@dataclass(frozen=True, slots=True)
class SceneFile:
    hyperboloid: StdHyperboloid
    sphere: Sphere
    pose: Optional[RigidPose] = None
    sweep: Optional[SweepPlan] = None
    name: str = ""

    @classmethod
    def from_raw(cls, raw: Dict[str, Any], name: str = "") -> "SceneFile":
        if not isinstance(raw, dict):
            raise SceneError("<root>", "顶层 JSON 必须是对象(dict)")

        h_raw = _require(raw, "hyperboloid", "")
        s_raw = _require(raw, "sphere", "")
        try:
            hyperboloid = StdHyperboloid(
                a=_require(h_raw, "a", "hyperboloid"),
                c=_require(h_raw, "c", "hyperboloid"),
            )
            sphere = Sphere(
                center=_require(s_raw, "center", "sphere"),
                r=_require(s_raw, "r", "sphere"),
            )
        except InvalidGeometry as exc:
            raise SceneError(exc.field, exc.message) from None

        pose = None
        pose_raw = h_raw.get("pose")
        if pose_raw is not None:
            pose = _pose_from_raw(pose_raw)

        sweep = None
        if raw.get("sweep") is not None:
            sweep = SweepPlan.from_raw(raw["sweep"])

        return cls(hyperboloid=hyperboloid, sphere=sphere, pose=pose, sweep=sweep, name=name)


def _pose_from_raw(raw: Any) -> RigidPose:
    prefix = "hyperboloid.pose"
    quat = raw.get("rotation", [1.0, 0.0, 0.0, 0.0]) if isinstance(raw, dict) else None
    if quat is None:
        raise SceneError(prefix, "需要对象(dict)")
    if not isinstance(quat, list) or len(quat) != 4:
        raise SceneError(f"{prefix}.rotation", "需要长度为 4 的四元数 [w, x, y, z]")
    try:
        q = [_finite(v, f"{prefix}.rotation[{i}]") for i, v in enumerate(quat)]
        translation = _vec3(raw.get("translation", [0.0, 0.0, 0.0]), f"{prefix}.translation")
    except InvalidGeometry as exc:
        raise SceneError(exc.field, exc.message) from None
    norm = math.sqrt(sum(v * v for v in q))
    if abs(norm - 1.0) > QUATERNION_NORM_TOL:
        raise SceneError(f"{prefix}.rotation", f"四元数未归一化 (|q| = {norm!r})")
    return RigidPose.from_quaternion(q, translation)
