"""Unit tests for text and CSV rendering."""

import io

import pytest

from setlat.application.commands import CommandResult
from setlat.application.corpus import CorpusReport, ExpectationResult
from setlat.cli.reports import (
    certificate_rows,
    flatten_values,
    format_value,
    make_console,
    render_corpus_csv,
    render_csv,
    render_text,
)
from setlat.domain.models import (Certificate, CertificateKind, CheckReport, Failure,
                                  Verdict)
from setlat.domain.xreals import NEG_INF, POS_INF


def sample_report():
    cert = Certificate(kind=CertificateKind.DINI_EXCESS, x=(0.5,), zstar=(0.0, -1.0),
                       phi=0.5, dini=0.25, direction=(-0.5,))
    child = CheckReport(check="STRONG_VI", verdict=Verdict.FAIL, grid="0:1:0.25",
                        grid_points=5,
                        failures=[Failure(message="0 is not in the derivative",
                                          witness={"x": [0.5]}, certificates=[cert])])
    return CheckReport(check="INFIMIZER", verdict=Verdict.FAIL, children=[child],
                       hypotheses_unverified=["uniform_lsc"])


class TestFormatValue:
    """Test canonical value text."""

    @pytest.mark.parametrize("value,text", [
        (None, "-"),
        (True, "true"),
        (Verdict.PASS, "PASS"),
        (0.25, "0.25"),
        (0.0, "0"),
        (3, "3"),
        (POS_INF, "+inf"),
        ((1.0, NEG_INF), "(1, -inf)"),
        ({"t": 0.5}, "{t=0.5}"),
        ("PROPER", "PROPER"),
    ])
    def test_values(self, value, text):
        assert format_value(value) == text

    def test_flatten_nested(self):
        rows = flatten_values({"holds": False, "witness": {"t": 0.5, "a": [-1.0]}})

        assert rows == [["holds", "false"], ["witness.t", "0.5"], ["witness.a", "(-1)"]]


class TestCsv:
    """Test CSV output."""

    def test_key_value_result(self):
        result = CommandResult("eval", "line", Verdict.PASS, {"phi": 0.25, "tag": "PROPER"})

        assert render_csv(result) == "key,value\nphi,0.25\ntag,PROPER\n"

    def test_table_result(self):
        result = CommandResult("scalarize", "line", Verdict.PASS, {"points": 2},
                               columns=["x1", "phi"], rows=[[0.0, POS_INF], [0.5, 1.5]])

        assert render_csv(result) == "x1,phi\n0,+inf\n0.5,1.5\n"

    def test_certificates(self):
        rows = certificate_rows(sample_report())

        assert len(rows) == 1
        result = CommandResult("check-infimizer", "line", Verdict.FAIL,
                               report=sample_report())
        assert render_csv(result).splitlines() == [
            "check,verdict,kind,x,zstar,phi,dini",
            'STRONG_VI,FAIL,DINI_EXCESS,(0.5),"(0, -1)",0.5,0.25',
        ]

    def test_corpus_csv(self):
        report = CorpusReport(results=[
            ExpectationResult(problem="p", name="e", verb="eval", expected=Verdict.PASS,
                              actual=Verdict.FAIL, passed=False, message="verdict FAIL"),
        ])

        assert render_corpus_csv(report).splitlines() == [
            "problem,expectation,verb,expected,actual,status",
            "p,e,eval,PASS,FAIL,MISMATCH verdict FAIL",
        ]


class TestText:
    """Test rich text output."""

    def test_plain_output(self):
        buffer = io.StringIO()
        result = CommandResult("check-infimizer", "line", Verdict.FAIL,
                               {"check": "INFIMIZER"}, report=sample_report())

        render_text(make_console(file=buffer), result)
        text = buffer.getvalue()

        assert "\x1b" not in text
        assert "check-infimizer  line" in text
        assert "STRONG_VI" in text
        assert "unverified hypotheses: uniform_lsc" in text
        assert text.rstrip().endswith("verdict: FAIL")

    def test_output_is_repeatable(self):
        outputs = []
        for _ in range(2):
            buffer = io.StringIO()
            render_text(make_console(file=buffer),
                        CommandResult("eval", "line", Verdict.PASS, {"phi": 0.25}))
            outputs.append(buffer.getvalue())

        assert outputs[0] == outputs[1]
