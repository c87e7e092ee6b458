import json
import re

import pytest
from hypothesis import given

from layerarch.metrics import DEFAULT_PENALTY_SWEEP, StyleThresholds, analyze
from layerarch.report import (
    SCHEMA_VERSION,
    ReportFormatError,
    parse_json_report,
    render_json,
    render_text,
    report_from_dict,
    report_to_dict,
)
from strategies import layered_graphs

CELL = re.compile(r"(\d+)/(\d+)=(\d+\.\d+)")


@pytest.fixture(scope="module")
def report(sample):
    return analyze(sample, DEFAULT_PENALTY_SWEEP)


def test_schema_version(report):
    assert report_to_dict(report)["schema_version"] == SCHEMA_VERSION == 1


def test_round_trip_sample(report):
    assert parse_json_report(render_json(report)) == report


@given(layered_graphs())
def test_round_trip_random(g):
    r = analyze(g, DEFAULT_PENALTY_SWEEP, StyleThresholds(0.1, 0.2))
    assert parse_json_report(render_json(r)) == r


def test_rejects_other_versions(report):
    d = report_to_dict(report)
    d["schema_version"] = 2
    with pytest.raises(ReportFormatError):
        report_from_dict(d)
    del d["schema_version"]
    with pytest.raises(ReportFormatError):
        report_from_dict(d)


def test_rejects_truncated(report):
    d = report_to_dict(report)
    del d["system"]["bv"]
    with pytest.raises(ReportFormatError):
        report_from_dict(d)


def json_ratios(obj, found=None):
    found = [] if found is None else found
    if isinstance(obj, dict):
        if set(obj) >= {"num", "den", "value"}:
            found.append((obj["num"], obj["den"], obj["value"]))
        for v in obj.values():
            json_ratios(v, found)
    elif isinstance(obj, list):
        for v in obj:
            json_ratios(v, found)
    return found


@pytest.mark.parametrize("precision", [2, 4])
def test_text_matches_json(report, precision):
    text = render_text(report, precision)
    full = {(n, d): v for n, d, v in json_ratios(json.loads(render_json(report)))}
    cells = CELL.findall(text)
    assert len(cells) > 100
    for num, den, shown in cells:
        value = full[(int(num), int(den))]
        assert len(shown.split(".")[1]) == precision
        assert abs(float(shown) - value) <= 0.5 * 10**-precision + 1e-12


def test_text_sections(report):
    text = render_text(report)
    for heading in ("Arc analysis", "Node level", "Layer level", "Comparative analysis",
                    "Average system violation", "Logical separation", "Layering style: non-layered"):
        assert heading in text


def test_text_marks_degenerate_cells(report):
    text = render_text(report)
    assert "node 7: bvm_caller" in text and "layer 3: bvc" in text
