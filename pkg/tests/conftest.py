from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterator, Tuple

import numpy as np
import pytest

from charpoly import root_set
from data_models import Sphere, StdHyperboloid


# ========= 已知场景 ========= #

EXAMPLE_SCENE: Dict[str, Any] = {
    "hyperboloid": {"a": 1.5, "c": 1.6},
    "sphere": {"center": [2.1, 2.2, 0.3], "r": 1.4},
}

CIRCLE_TANGENT_SCENE: Dict[str, Any] = {
    "hyperboloid": {"a": math.sqrt(2.0), "c": 2.0},
    "sphere": {"center": [0.0, 0.0, 3.0], "r": math.sqrt(5.0)},
}

FLAT_THROAT_SCENE: Dict[str, Any] = {
    "hyperboloid": {"a": 2.0, "c": 1.0},
    "sphere": {"center": [3.0, 3.0, -1.0], "r": math.sqrt(6.0)},
}

SWEEP_SCENE: Dict[str, Any] = {
    "hyperboloid": {"a": 1.5, "c": 1.6},
    "sphere": {"center": [4.0, 0.0, 0.0], "r": 1.0},
    "sweep": {"waypoints": [[4.0, 0.0, 0.0], [0.0, 0.0, 0.0]], "n_steps": 200},
}


@pytest.fixture
def example_pair() -> Tuple[StdHyperboloid, Sphere]:
    return StdHyperboloid(a=1.5, c=1.6), Sphere(center=(2.1, 2.2, 0.3), r=1.4)


@pytest.fixture
def write_scene(tmp_path: Path):
    def _write(raw: Dict[str, Any], name: str = "scene.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(raw, indent=2), encoding="utf-8")
        return path

    return _write


# ========= 随机实例 ========= #

def random_instances(
    seed: int,
    count: int,
    center_span: float = 4.0,
) -> Iterator[Tuple[StdHyperboloid, Sphere]]:
    """覆盖各个区域（r 与 a、c² 与 ar 的大小关系都会出现）"""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        a = float(rng.uniform(0.5, 2.0))
        c = float(rng.uniform(0.5, 2.0))
        r = float(rng.uniform(0.2, 3.0))
        center = tuple(float(v) for v in rng.uniform(-center_span, center_span, size=3))
        yield StdHyperboloid(a=a, c=c), Sphere(center=center, r=r)


def root_margin(h: StdHyperboloid, s: Sphere) -> float:
    """根两两之间、根与 -a²、c² 之间的最小距离，相对 max|λ|"""
    rs = root_set(h, s)
    values = [complex(v) for v in rs.values()]
    landmarks = [complex(-h.a2), complex(h.c2)]
    scale = max(abs(v) for v in values)

    cubic = [complex(r.value) for r in rs.roots for _ in range(r.multiplicity)]
    if rs.complex_root is not None:
        cubic += [rs.complex_root, rs.complex_root.conjugate()]

    gaps = []
    for i in range(len(cubic)):
        for j in range(i + 1, len(cubic)):
            gaps.append(abs(cubic[i] - cubic[j]))
        for mark in landmarks:
            gaps.append(abs(cubic[i] - mark))
    return min(gaps) / scale


def at_margin(seed: int, count: int, margin: float, center_span: float = 4.0):
    for h, s in random_instances(seed, count, center_span):
        if root_margin(h, s) >= margin:
            yield h, s
