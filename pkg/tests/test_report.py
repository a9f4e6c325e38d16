import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from newform_sums.report import DensityReport, ReportFormatError, finite, validate_report

scalars = st.one_of(st.none(), st.booleans(), st.integers(-(2**70), 2**70), st.floats(allow_nan=False, allow_infinity=False), st.text(max_size=8))
blocks = st.dictionaries(st.text(min_size=1, max_size=6), scalars, max_size=5)


@given(blocks, blocks, st.sampled_from(["pass", "fail", "report-only", "insufficient-data"]))
@settings(max_examples=100, deadline=None)
def test_json_round_trip(params, observed, status):
    rep = DensityReport("x", params, observed, {"m": 1.5}, {"sigma": 3.0}, status)
    text = rep.to_json()
    assert validate_report(text) == rep


def test_rejects_bad_reports():
    with pytest.raises(ReportFormatError):
        DensityReport("x", status="ok")
    good = DensityReport("x").to_json()
    with pytest.raises(ReportFormatError):
        validate_report(good.replace('"status"', '"state"'))
    with pytest.raises(ReportFormatError):
        validate_report(good.replace("\n", " \n", 1))
    with pytest.raises(ReportFormatError):
        validate_report("{")
    with pytest.raises(ValueError):
        DensityReport("x", observed={"v": math.nan}).to_json()


def test_csv_rows_and_flat():
    rep = DensityReport("x", {"a": 1}, {"rows": [{"h": 5, "r": 0.25}, {"h": 7, "r": None, "extra": True}]})
    assert rep.to_csv() == "h,r,extra\n5,0.25,\n7,,True\n"
    flat = DensityReport("y", {"a": 1}, {"f": 0.5, "nested": {"z": 1}})
    assert flat.to_csv() == "param_a,observed_f\n1,0.5\n"
    assert finite(math.inf) is None and finite(2.0) == 2.0
