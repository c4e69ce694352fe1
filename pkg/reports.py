"""
reports.py
把分类、接触、扫掠与校验结果整理成字典（--json / HTTP 输出）和文本报告。

字典只含 str / int / float / bool / None / list / dict，json.dumps(sort_keys=True) 后可逐字节往返。
"""

from __future__ import annotations

import logging
from typing import Any, Dict, List, Optional

from data_models import (
    ContactStatus,
    FastVerdict,
    PositionType,
    RegimeReport,
    RigidPose,
    RootSet,
    Sphere,
    StdHyperboloid,
    TangentLocus,
)
from moving_sphere import SweepReport
from oracle import VerificationReport

logger = logging.getLogger(__name__)


def fmt(value: float) -> str:
    """文本模式：6 位有效数字"""
    return f"{value:.6g}"


# ================== 分类 ================== #

def root_entries(rs: RootSet) -> List[Dict[str, Any]]:
    return [{"value": r.value, "multiplicity": r.multiplicity} for r in rs.clusters()]


def classify_report(
    h: StdHyperboloid,
    s: Sphere,
    position: PositionType,
    rs: RootSet,
    regime: RegimeReport,
) -> Dict[str, Any]:
    complex_pair = None
    if rs.complex_root is not None:
        complex_pair = {"re": rs.complex_root.real, "im": rs.complex_root.imag}
    disc = rs.discriminant
    return {
        "type": position.value,
        "description": position.description,
        "roots": root_entries(rs),
        "complex_pair": complex_pair,
        "landmarks": {"minus_a2": -h.a2, "c2": h.c2, "ar": h.a * s.r},
        "regime": {
            "name": regime.regime.value,
            "wide_sphere": regime.wide,
            "flat_throat": regime.flat,
            "kappa_h": regime.kappa_h,
            "kappa_c": regime.kappa_c,
        },
        "discriminant": {"Q": disc.q, "R": disc.r, "delta": disc.delta},
        "epsilon": rs.epsilon,
    }


def format_classify(report: Dict[str, Any]) -> str:
    lines = [f"type: {report['type']}  ({report['description']})", "roots:"]
    for root in report["roots"]:
        mult = f" (x{root['multiplicity']})" if root["multiplicity"] > 1 else ""
        lines.append(f"  {fmt(root['value'])}{mult}")
    pair = report.get("complex_pair")
    if pair is not None:
        lines.append(f"  {fmt(pair['re'])} ± {fmt(pair['im'])}i")
    marks = report["landmarks"]
    lines.append(
        f"landmarks: -a^2 = {fmt(marks['minus_a2'])}, c^2 = {fmt(marks['c2'])}, ar = {fmt(marks['ar'])}"
    )
    regime = report["regime"]
    lines.append(
        f"regime: {regime['name']} (kappa_h = {fmt(regime['kappa_h'])}, kappa_c = {fmt(regime['kappa_c'])})"
    )
    disc = report["discriminant"]
    lines.append(f"delta: {fmt(disc['delta'])} (Q = {fmt(disc['Q'])}, R = {fmt(disc['R'])})")
    return "\n".join(lines)


# ================== 接触 ================== #

def locus_dict(locus: Optional[TangentLocus], pose: Optional[RigidPose] = None) -> Optional[Dict[str, Any]]:
    if locus is None:
        return None
    out: Dict[str, Any] = {
        "kind": locus.kind.value,
        "points": [list(p) for p in locus.points],
        "circle_z": locus.circle_z,
        "circle_rho": locus.circle_rho,
    }
    if pose is not None:
        out["points_world"] = [list(p) for p in locus.mapped(pose).points]
    return out


def contact_report(
    status: ContactStatus,
    fast: Optional[FastVerdict],
    pose: Optional[RigidPose] = None,
) -> Dict[str, Any]:
    fast_block = None
    if fast is not None:
        fast_block = {"verdict": fast.value, "agrees": fast_agrees(status, fast)}
    return {
        "type": status.position.value,
        "contact": status.kind.value,
        "side": status.side.value if status.side is not None else None,
        "components": status.components,
        "locus": locus_dict(status.locus, pose),
        "fast_path": fast_block,
    }


def fast_agrees(status: ContactStatus, fast: FastVerdict) -> bool:
    return status.kind.value == {
        FastVerdict.NO_CONTACT: "NoContact",
        FastVerdict.TANGENT: "Tangent",
        FastVerdict.CONTACT: "Transversal",
    }[fast]


def format_contact(report: Dict[str, Any]) -> str:
    lines = [f"type: {report['type']}", f"contact: {report['contact']}"]
    if report["side"] is not None:
        lines.append(f"side: {report['side']}")
    if report["components"] is not None:
        lines.append(f"components: {report['components']}")
    locus = report["locus"]
    if locus is not None:
        lines.append(f"locus: {locus['kind']}")
        if locus["circle_z"] is not None:
            lines.append(f"  circle z = {fmt(locus['circle_z'])}, rho = {fmt(locus['circle_rho'])}")
        else:
            for p in locus["points"]:
                lines.append("  point (" + ", ".join(fmt(v) for v in p) + ")")
        for p in locus.get("points_world", []):
            lines.append("  world (" + ", ".join(fmt(v) for v in p) + ")")
    fast = report["fast_path"]
    if fast is not None:
        tag = "agree" if fast["agrees"] else "DISAGREE"
        lines.append(f"fast path: {fast['verdict']} ({tag})")
    else:
        lines.append("fast path: n/a (requires r < a and ar < c^2)")
    return "\n".join(lines)


# ================== 扫掠 ================== #

def sweep_report(report: SweepReport) -> Dict[str, Any]:
    return {
        "segments": [
            {"t_start": seg.t_start, "t_end": seg.t_end, "type": seg.position.value}
            for seg in report.segments
        ],
        "events": [
            {"t": ev.t, "from": ev.from_type.value, "to": ev.to_type.value, "width": ev.width}
            for ev in report.events
        ],
    }


def format_sweep(report: Dict[str, Any]) -> str:
    lines = ["segments:"]
    for seg in report["segments"]:
        lines.append(f"  [{seg['t_start']:.10f}, {seg['t_end']:.10f}]  {seg['type']}")
    lines.append(f"events: {len(report['events'])}")
    for ev in report["events"]:
        lines.append(f"  t = {ev['t']:.10f}  {ev['from']} -> {ev['to']}  (width {ev['width']:.1e})")
    return "\n".join(lines)


# ================== 校验 ================== #

def verify_report(report: VerificationReport) -> Dict[str, Any]:
    oracle = None
    if report.oracle is not None:
        oracle = {
            "verdict": report.oracle.verdict.value,
            "components": report.oracle.components,
            "min_value": report.oracle.min_value,
            "band": report.oracle.band,
        }
    return {
        "agreement": report.agreement.value,
        "type": report.status.position.value,
        "contact": report.status.kind.value,
        "oracle": oracle,
        "side": report.side.value if report.side is not None else None,
        "reasons": list(report.reasons),
    }


def format_verify(report: Dict[str, Any]) -> str:
    lines = [
        f"agreement: {report['agreement']}",
        f"type: {report['type']} ({report['contact']})",
    ]
    oracle = report["oracle"]
    if oracle is not None:
        lines.append(
            f"oracle: {oracle['verdict']}, components = {oracle['components']}, "
            f"min q = {fmt(oracle['min_value'])}, band = {fmt(oracle['band'])}"
        )
    else:
        lines.append("oracle: inconclusive")
    if report["side"] is not None:
        lines.append(f"side: {report['side']}")
    for reason in report["reasons"]:
        lines.append(f"  - {reason}")
    return "\n".join(lines)
