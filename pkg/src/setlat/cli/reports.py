"""Rendering of command results and corpus runs as rich text or CSV.

Every number goes through ``format_value`` so that the CSV cells and the
text tables print identical strings for identical values.
"""

import csv
import io
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, TextIO

from rich.console import Console
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich.theme import Theme
from rich.tree import Tree

from ..application.commands import CommandResult
from ..application.corpus import CorpusReport
from ..domain.models import CheckReport, Verdict
from ..domain.xreals import format_xreal

REPORT_THEME = Theme({
    "verdict.pass": "bold green",
    "verdict.conditional_pass": "green",
    "verdict.low_confidence": "bold yellow",
    "verdict.inconsistent_numerics": "bold magenta",
    "verdict.fail": "bold red",
    "ui.header": "bold cyan",
    "ui.muted": "dim",
})

REPORT_WIDTH = 100
CERTIFICATE_COLUMNS = ["check", "verdict", "kind", "x", "zstar", "phi", "dini"]
CORPUS_COLUMNS = ["problem", "expectation", "verb", "expected", "actual", "status"]


class OutputFormat(str, Enum):
    TEXT = "text"
    CSV = "csv"


def make_console(file: Optional[TextIO] = None, color: bool = False) -> Console:
    """Fixed-width console; without ``color`` the output is plain and byte-stable."""
    return Console(theme=REPORT_THEME, file=file, width=REPORT_WIDTH,
                   no_color=not color, force_terminal=color, highlight=False,
                   emoji=False)


def format_value(value: Any) -> str:
    """Canonical text of a report value."""
    if value is None:
        return "-"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (int, float)):
        return format_xreal(float(value))
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(format_value(v) for v in value) + ")"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}={format_value(v)}" for k, v in value.items()) + "}"
    return str(value)


def flatten_values(values: Dict[str, Any], prefix: str = "") -> List[List[str]]:
    """Key/value rows with nested dictionaries spelled as dotted keys."""
    rows: List[List[str]] = []
    for key, value in values.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            rows.extend(flatten_values(value, name + "."))
        else:
            rows.append([name, format_value(value)])
    return rows


def _cell(value: Any) -> str:
    if isinstance(value, str) and not isinstance(value, Enum):
        return value
    return format_value(value)


def verdict_style(verdict: Verdict) -> str:
    return f"verdict.{verdict.value.lower()}"


# -- CSV ----------------------------------------------------------------------------

def _csv(columns: List[str], rows: Iterable[List[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(cell) for cell in row])
    return buffer.getvalue()


def certificate_rows(report: CheckReport) -> List[List[Any]]:
    """One row per certificate of every sub-report, depth first."""
    rows: List[List[Any]] = []
    for sub in report.iter_reports():
        certificates = list(sub.certificates)
        for failure in sub.failures:
            certificates.extend(failure.certificates)
        seen = set()
        for cert in certificates:
            key = (cert.kind, cert.x, cert.zstar)
            if key in seen:
                continue
            seen.add(key)
            rows.append([sub.check, sub.verdict, cert.kind, cert.x, cert.zstar,
                         cert.phi, cert.dini])
    return rows


def render_csv(result: CommandResult) -> str:
    if result.report is not None:
        return _csv(CERTIFICATE_COLUMNS, certificate_rows(result.report))
    if result.rows:
        return _csv(result.columns, result.rows)
    return _csv(["key", "value"], flatten_values(result.values))


def render_corpus_csv(report: CorpusReport) -> str:
    return _csv(CORPUS_COLUMNS, _corpus_rows(report))


# -- text ----------------------------------------------------------------------------

def _report_label(report: CheckReport) -> Text:
    label = Text(report.check, style="bold")
    label.append("  ")
    label.append(report.verdict.value, style=verdict_style(report.verdict))
    if report.mode is not None:
        label.append(f"  [{report.mode.value}]", style="ui.muted")
    if report.grid:
        label.append(f"  grid {report.grid} ({report.grid_points} points)",
                     style="ui.muted")
    return label


def _add_report(tree: Tree, report: CheckReport) -> None:
    node = tree.add(_report_label(report))
    _fill(node, report)


def _fill(node: Tree, report: CheckReport) -> None:
    if report.duals:
        node.add(Text(f"duals: {len(report.duals)}", style="ui.muted"))
    for failure in report.failures:
        node.add(Text(f"failure: {failure.message} {format_value(failure.witness)}",
                      style="verdict.fail"))
    for note in report.notes:
        node.add(Text(f"note: {note}", style="ui.muted"))
    if report.hypotheses_unverified:
        node.add(Text("unverified hypotheses: "
                      + ", ".join(report.hypotheses_unverified),
                      style="verdict.low_confidence"))
    for child in report.children:
        _add_report(node, child)


def report_tree(report: CheckReport) -> Tree:
    tree = Tree(_report_label(report))
    _fill(tree, report)
    return tree


def _table(columns: List[str], rows: Iterable[List[Any]]) -> Table:
    table = Table(show_header=True, header_style="ui.header")
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*[Text(_cell(cell)) for cell in row])
    return table


def render_text(console: Console, result: CommandResult) -> None:
    console.print(Panel(Text(f"{result.verb}  {result.problem}", style="ui.header"),
                        border_style="cyan", expand=False))
    if result.values:
        console.print(_table(["key", "value"], flatten_values(result.values)))
    if result.rows:
        console.print(_table(result.columns, result.rows))
    if result.report is not None:
        console.print(report_tree(result.report))
    verdict = Text("verdict: ")
    verdict.append(result.verdict.value, style=verdict_style(result.verdict))
    console.print(verdict)


def _corpus_rows(report: CorpusReport) -> List[List[Any]]:
    return [[r.problem, r.name, r.verb, r.expected,
             r.actual if r.actual is not None else "-",
             "ok" if r.passed else f"MISMATCH {r.message}"]
            for r in report.results]


def render_corpus_text(console: Console, report: CorpusReport) -> None:
    console.print(_table(CORPUS_COLUMNS, _corpus_rows(report)))
    summary = Text(f"{len(report.results) - len(report.failed)}/{len(report.results)} "
                   f"expectations met")
    console.print(summary, style="verdict.pass" if report.passed else "verdict.fail")


def render_corpus_list(console: Console, names: List[str]) -> None:
    for name in names:
        console.print(name)
