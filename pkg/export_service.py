"""
数据导出服务模块 - 把扫掠报告与校验报告导出为 Excel 或 CSV
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Any, Dict, Union

import pandas as pd

logger = logging.getLogger(__name__)

SUPPORTED_SUFFIXES = (".csv", ".xlsx")


class ExportService:
    """数据导出服务类"""

    def __init__(self, output_dir: Union[str, Path, None] = None) -> None:
        self.output_dir = Path(output_dir) if output_dir is not None else None
        if self.output_dir is not None:
            self.output_dir.mkdir(parents=True, exist_ok=True)

    def _resolve(self, filename: Union[str, Path]) -> Path:
        path = Path(filename)
        if self.output_dir is not None and not path.is_absolute():
            path = self.output_dir / path
        if path.suffix.lower() not in SUPPORTED_SUFFIXES:
            raise ValueError(f"不支持的格式: {path.suffix or '<无扩展名>'}，仅支持 .csv / .xlsx")
        return path

    # ------------------------------------------------------------------
    # 扫掠
    # ------------------------------------------------------------------

    def export_sweep(self, report: Dict[str, Any], filename: Union[str, Path]) -> str:
        """segments 与 events 两张表；CSV 时合并为一张，用 '记录' 列区分"""
        path = self._resolve(filename)
        df_segments = pd.DataFrame(
            [
                {"起点 t": seg["t_start"], "终点 t": seg["t_end"], "类型": seg["type"]}
                for seg in report["segments"]
            ]
        )
        df_events = pd.DataFrame(
            [
                {"事件 t": ev["t"], "从": ev["from"], "到": ev["to"], "区间宽度": ev["width"]}
                for ev in report["events"]
            ],
            columns=["事件 t", "从", "到", "区间宽度"],
        )

        if path.suffix.lower() == ".xlsx":
            with pd.ExcelWriter(path, engine="openpyxl") as writer:
                df_segments.to_excel(writer, sheet_name="分段", index=False)
                df_events.to_excel(writer, sheet_name="事件", index=False)
        else:
            combined = pd.concat(
                [df_segments.assign(记录="segment"), df_events.assign(记录="event")],
                ignore_index=True,
            )
            combined.to_csv(path, index=False, encoding="utf-8-sig")

        logger.info("扫掠报告已导出: %s", path)
        return str(path)

    # ------------------------------------------------------------------
    # 校验
    # ------------------------------------------------------------------

    def export_verification(self, report: Dict[str, Any], filename: Union[str, Path]) -> str:
        path = self._resolve(filename)
        oracle = report.get("oracle") or {}
        row = {
            "结论": report["agreement"],
            "类型": report["type"],
            "接触": report["contact"],
            "采样结论": oracle.get("verdict", "inconclusive"),
            "采样分量数": oracle.get("components"),
            "采样最小值": oracle.get("min_value"),
            "分辨率带": oracle.get("band"),
            "内外侧": report.get("side"),
            "原因": "; ".join(report.get("reasons", [])),
        }
        df = pd.DataFrame([row])
        if path.suffix.lower() == ".xlsx":
            with pd.ExcelWriter(path, engine="openpyxl") as writer:
                df.to_excel(writer, sheet_name="校验", index=False)
        else:
            df.to_csv(path, index=False, encoding="utf-8-sig")
        logger.info("校验报告已导出: %s", path)
        return str(path)
