from __future__ import annotations

import pandas as pd
import pytest

from export_service import ExportService

SWEEP_REPORT = {
    "segments": [
        {"t_start": 0.0, "t_end": 0.375, "type": "E"},
        {"t_start": 0.375, "t_end": 0.375, "type": "TE"},
        {"t_start": 0.375, "t_end": 1.0, "type": "C"},
    ],
    "events": [
        {"t": 0.375, "from": "E", "to": "TE", "width": 5e-11},
        {"t": 0.375, "from": "TE", "to": "C", "width": 5e-11},
    ],
}

VERIFY_REPORT = {
    "agreement": "AGREE",
    "type": "E",
    "contact": "NoContact",
    "oracle": {"verdict": "NoContactOutside", "components": 0, "min_value": 0.3, "band": 0.02},
    "side": "Exterior",
    "reasons": [],
}


def test_sweep_to_xlsx(tmp_path):
    path = ExportService(tmp_path).export_sweep(SWEEP_REPORT, "sweep.xlsx")
    sheets = pd.read_excel(path, sheet_name=None, engine="openpyxl")
    assert set(sheets) == {"分段", "事件"}
    assert list(sheets["分段"]["类型"]) == ["E", "TE", "C"]
    assert len(sheets["事件"]) == 2


def test_sweep_to_csv(tmp_path):
    path = ExportService().export_sweep(SWEEP_REPORT, tmp_path / "sweep.csv")
    df = pd.read_csv(path, encoding="utf-8-sig")
    assert list(df["记录"]) == ["segment"] * 3 + ["event"] * 2


def test_sweep_without_events(tmp_path):
    report = {"segments": [{"t_start": 0.0, "t_end": 1.0, "type": "E"}], "events": []}
    path = ExportService(tmp_path).export_sweep(report, "quiet.xlsx")
    sheets = pd.read_excel(path, sheet_name=None, engine="openpyxl")
    assert sheets["事件"].empty


def test_verification_export(tmp_path):
    path = ExportService(tmp_path).export_verification(VERIFY_REPORT, "verify.csv")
    row = pd.read_csv(path, encoding="utf-8-sig").iloc[0]
    assert row["结论"] == "AGREE"
    assert row["采样结论"] == "NoContactOutside"


def test_inconclusive_verification_export(tmp_path):
    report = dict(VERIFY_REPORT, agreement="EXEMPT", oracle=None, reasons=["相切无法由采样确认"])
    path = ExportService(tmp_path).export_verification(report, "verify.xlsx")
    row = pd.read_excel(path, engine="openpyxl").iloc[0]
    assert row["采样结论"] == "inconclusive"
    assert row["原因"] == "相切无法由采样确认"


@pytest.mark.parametrize("name", ["sweep.txt", "sweep", "sweep.json"])
def test_unsupported_suffix(tmp_path, name):
    with pytest.raises(ValueError):
        ExportService(tmp_path).export_sweep(SWEEP_REPORT, name)
