"""
cli.py
命令行入口：

    python cli.py classify scene.json [--json] [--tol EPS]
    python cli.py contact  scene.json [--json]
    python cli.py sweep    scene.json [--steps N] [--export out.xlsx]
    python cli.py plot     scene.json -o section.svg
    python cli.py verify   scene.json [--grid N] [--export out.csv]

退出码：0 成功，1 场景无效，2 根配置无法分类，3 采样校验不一致。
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from typing import Any, Callable, Dict, Optional, Sequence, TextIO

from config import load_settings
from errors import GeometryError, InvalidGeometry, SceneError, UnclassifiableRoots
from export_service import ExportService
import reports
from scene_processor import SceneProcessor
from scene_store import load_scene

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID_SCENE = 1
EXIT_UNCLASSIFIABLE = 2
EXIT_DISAGREEMENT = 3


def _positive_int(raw: str) -> int:
    value = int(raw)
    if value < 2:
        raise argparse.ArgumentTypeError(f"需要 >= 2 的整数: {raw}")
    return value


def _positive_float(raw: str) -> float:
    value = float(raw)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"需要正数: {raw}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hyperboloid-sphere",
        description="单叶旋转双曲面与球的相对位置判定",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("scene", help="场景 JSON 文件")
    common.add_argument("--json", action="store_true", help="输出机器可读 JSON")
    common.add_argument("--tol", type=_positive_float, default=None, help="覆盖根聚类容差 eps_cluster")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="位置类型、根集、区域与判别式")
    sub.add_parser("contact", parents=[common], help="接触状态与快速判定")

    p_sweep = sub.add_parser("sweep", parents=[common], help="沿路径移动球心并定位类型切换")
    p_sweep.add_argument("--steps", type=_positive_int, default=None, help="采样步数（覆盖场景值）")
    p_sweep.add_argument("--export", default=None, help="导出到 .csv / .xlsx")

    p_plot = sub.add_parser("plot", parents=[common], help="输出截面 SVG")
    p_plot.add_argument("-o", "--output", required=True, help="SVG 输出路径")

    p_verify = sub.add_parser("verify", parents=[common], help="采样校验")
    p_verify.add_argument("--grid", type=_positive_int, default=None, help="采样网格分辨率")
    p_verify.add_argument("--export", default=None, help="导出到 .csv / .xlsx")
    return parser


def _emit(report: Dict[str, Any], as_json: bool, formatter: Callable[[Dict[str, Any]], str], out: TextIO) -> None:
    if as_json:
        out.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False))
    else:
        out.write(formatter(report))
    out.write("\n")


def run(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None, err: Optional[TextIO] = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)

    settings = load_settings()
    if args.tol is not None:
        settings = replace(settings, tolerances=settings.tolerances.with_cluster(args.tol))
    processor = SceneProcessor(settings)

    try:
        scene = load_scene(args.scene)

        if args.command == "classify":
            _emit(processor.classify(scene), args.json, reports.format_classify, out)
        elif args.command == "contact":
            _emit(processor.contact(scene), args.json, reports.format_contact, out)
        elif args.command == "sweep":
            report = processor.sweep(scene, args.steps)
            if args.export:
                ExportService().export_sweep(report, args.export)
            _emit(report, args.json, reports.format_sweep, out)
        elif args.command == "plot":
            bounds = processor.plot(scene, args.output)
            report = {
                "output": str(args.output),
                "bounds": {
                    "rho_min": bounds.rho_min,
                    "rho_max": bounds.rho_max,
                    "z_min": bounds.z_min,
                    "z_max": bounds.z_max,
                },
            }
            _emit(report, args.json, lambda r: f"wrote {r['output']}", out)
        elif args.command == "verify":
            report = processor.verify(scene, args.grid)
            if args.export:
                ExportService().export_verification(report, args.export)
            _emit(report, args.json, reports.format_verify, out)
            if report["agreement"] == "DISAGREE":
                return EXIT_DISAGREEMENT

    except (SceneError, InvalidGeometry) as exc:
        err.write(f"场景无效: {exc}\n")
        return EXIT_INVALID_SCENE
    except UnclassifiableRoots as exc:
        err.write(f"{exc}\n")
        return EXIT_UNCLASSIFIABLE
    except GeometryError as exc:
        err.write(f"{exc}\n")
        return EXIT_INVALID_SCENE
    except OSError as exc:
        err.write(f"{exc}\n")
        return EXIT_INVALID_SCENE
    except ValueError as exc:
        # 导出格式不支持等参数错误
        err.write(f"{exc}\n")
        return EXIT_INVALID_SCENE
    return EXIT_OK


def main() -> None:
    logging.basicConfig(
        level=load_settings().log_level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    sys.exit(run())


if __name__ == "__main__":
    main()
