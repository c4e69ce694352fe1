"""
scene_store.py
场景文件读取 - 解析 JSON 场景，出错时给出字段路径与行号
"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Any, Dict, Optional

from data_models import SceneFile
from errors import SceneError

logger = logging.getLogger(__name__)

_INDEX_SUFFIX = re.compile(r"\[\d+\]$")


# ================== 对外接口 ================== #

def load_scene(path: str | Path) -> SceneFile:
    """
    读取场景 JSON 文件。
    所有错误都转为 SceneError，并尽量带上出错字段所在的行号。
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SceneError("<file>", f"无法读取场景文件 {path}: {exc}") from None
    return parse_scene(text, name=path.name)


def parse_scene(text: str, name: str = "") -> SceneFile:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError("<json>", f"JSON 语法错误: {exc.msg}", exc.lineno) from None
    try:
        scene = SceneFile.from_raw(raw, name=name)
    except SceneError as exc:
        raise exc.with_line(locate_field(text, exc.field)) from None
    logger.debug("场景 %s 解析完成", name or "<inline>")
    return scene


def scene_from_dict(raw: Dict[str, Any], name: str = "") -> SceneFile:
    """HTTP 请求体等已经解析好的字典；没有原文，行号为空"""
    return SceneFile.from_raw(raw, name=name)


# ================== 内部实现 ================== #

def locate_field(text: str, dotted: str) -> Optional[int]:
    """
    按点号路径依次向后查找 "key"，返回最后找到的键所在的行（1 起）。
    缺失字段时返回其父字段的行。
    """
    if not dotted or dotted.startswith("<"):
        return None
    pos = -1
    found = -1
    for part in dotted.split("."):
        key = _INDEX_SUFFIX.sub("", part)
        hit = text.find(f'"{key}"', pos + 1)
        if hit < 0:
            break
        pos = found = hit
    if found < 0:
        return None
    return text.count("\n", 0, found) + 1
