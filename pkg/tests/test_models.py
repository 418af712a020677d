from __future__ import annotations

import pytest
from pydantic import ValidationError

from morreygate.models import (
    CaseRow,
    Comparison,
    Criterion,
    ExponentTuple,
    MergedSummary,
    Provenance,
    ReportDigest,
    SuiteConfig,
    SuiteReport,
    TheoremTag,
    Tolerances,
    Verdict,
)


class TestSuiteConfig:
    def test_defaults(self):
        config = SuiteConfig(suite="hardy")
        assert config.grid.n_dims == 1
        assert config.threads == 1
        assert config.out_dir is None
        assert config.tolerances == Tolerances()

    def test_extra_keys_forbidden(self):
        with pytest.raises(ValidationError):
            SuiteConfig(suite="hardy", resolution=4)

    def test_tolerance_defaults(self):
        tol = Tolerances()
        assert tol.isometry == 1e-9
        assert tol.discretization == 0.05
        assert tol.refined_discretization == 0.025
        assert tol.slope == 0.2


class TestExponentTuple:
    def test_item_access_and_residual(self):
        tup = ExponentTuple(
            theorem_tag=TheoremTag.HARDY,
            n=1,
            values={"p": 2.0, "q": 4.0},
            lhs_dilation_exponent=-0.1,
            rhs_dilation_exponent=-0.25,
        )
        assert tup["q"] == 4.0
        assert tup.dilation_residual == pytest.approx(0.15)

    def test_frozen(self):
        tup = ExponentTuple(theorem_tag=TheoremTag.OLSEN, values={})
        with pytest.raises(ValidationError):
            tup.n = 2


class TestSuiteReport:
    def _report(self, **overrides) -> SuiteReport:
        data = {
            "suite": "roundtrip",
            "config_hash": "0" * 64,
            "config": {"suite": "roundtrip"},
            "grid": {"n_dims": 1},
            "provenance": Provenance(config_hash="0" * 64, threads=1),
        }
        data.update(overrides)
        return SuiteReport(**data)

    def test_defaults(self):
        report = self._report()
        assert report.version == "1.0.0"
        assert report.status == Verdict.PASS
        assert report.stability is None
        assert report.provenance.morrey_norm_is_lower_bound is True

    def test_serialises_enums_as_values(self):
        criterion = Criterion(
            name="homogeneity",
            description="d",
            observed=None,
            bound=1e-10,
            comparison=Comparison.ABS_LE,
            verdict=Verdict.FAIL,
        )
        report = self._report(criteria=[criterion], status=Verdict.FAIL)
        dumped = report.model_dump(mode="json")
        assert dumped["status"] == "fail"
        assert dumped["criteria"][0]["comparison"] == "|x|<="
        assert dumped["criteria"][0]["observed"] is None

    def test_rows_accept_string_params(self):
        row = CaseRow(function_id="bump-00", function_class="compact", params={"w": "inf", "v": 0.5})
        assert row.params["w"] == "inf"
        assert row.extra == {}


class TestMergedSummary:
    def test_digest_list(self):
        digest = ReportDigest(suite="olsen", status=Verdict.PASS, config_hash="c", path="olsen/report.json")
        summary = MergedSummary(status=Verdict.PASS, reports=[digest])
        assert summary.reports[0].failed_criteria == []
