"""
scene_processor.py
场景处理总控：命令行和 HTTP 服务共用的入口。

场景带位姿时先归一化到标准型，再调用 positions / moving_sphere / oracle，最后交给 reports 整理。
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from charpoly import root_set
from config import Settings, load_settings
from data_models import SceneFile, Sphere, StdHyperboloid
from errors import RegimeViolation, SceneError
from moving_sphere import CenterPath, sweep
from oracle import cross_check
from plotting import PlotBounds, plot_cross_section
from positions import classify_roots, contact_status_for, fast_contact, regime
from quadrics import normalize
import reports

logger = logging.getLogger(__name__)


class SceneProcessor:
    """
    场景处理总控类
    """

    def __init__(self, settings: Optional[Settings] = None) -> None:
        self.settings = settings or load_settings()

    @property
    def tolerances(self):
        return self.settings.tolerances

    # ------------------------------------------------------------------
    # 基础
    # ------------------------------------------------------------------

    @staticmethod
    def standard_pair(scene: SceneFile) -> Tuple[StdHyperboloid, Sphere]:
        if scene.pose is None:
            return scene.hyperboloid, scene.sphere
        return normalize((scene.hyperboloid, scene.pose), scene.sphere)

    # ------------------------------------------------------------------
    # 分析接口
    # ------------------------------------------------------------------

    def classify(self, scene: SceneFile) -> Dict[str, Any]:
        h, s = self.standard_pair(scene)
        rs = root_set(h, s, self.tolerances)
        position = classify_roots(h, s, rs, self.tolerances)
        return reports.classify_report(h, s, position, rs, regime(h, s, self.tolerances))

    def contact(self, scene: SceneFile) -> Dict[str, Any]:
        h, s = self.standard_pair(scene)
        rs = root_set(h, s, self.tolerances)
        position = classify_roots(h, s, rs, self.tolerances)
        status = contact_status_for(h, s, position, rs, self.tolerances)
        try:
            fast = fast_contact(h, s, self.tolerances)
        except RegimeViolation:
            fast = None
        return reports.contact_report(status, fast, scene.pose)

    def sweep(self, scene: SceneFile, n_steps: Optional[int] = None) -> Dict[str, Any]:
        if scene.sweep is None:
            raise SceneError("sweep", "场景中缺少扫掠路径 (sweep.waypoints)")
        waypoints = scene.sweep.waypoints
        if scene.pose is not None:
            waypoints = tuple(tuple(float(v) for v in scene.pose.inverse_apply(p)) for p in waypoints)
        steps = n_steps or scene.sweep.n_steps or self.settings.steps
        report = sweep(
            scene.hyperboloid,
            scene.sphere.r,
            CenterPath(waypoints=waypoints),
            steps,
            self.tolerances,
        )
        return reports.sweep_report(report)

    def verify(self, scene: SceneFile, grid: Optional[int] = None) -> Dict[str, Any]:
        h, s = self.standard_pair(scene)
        report = cross_check(
            h,
            s,
            resolution=grid or self.settings.grid,
            side_samples=self.settings.side_samples,
            tolerances=self.tolerances,
        )
        return reports.verify_report(report)

    def plot(self, scene: SceneFile, out_path: str | Path) -> PlotBounds:
        h, s = self.standard_pair(scene)
        rs = root_set(h, s, self.tolerances)
        position = classify_roots(h, s, rs, self.tolerances)
        return plot_cross_section(h, s, out_path, position)
