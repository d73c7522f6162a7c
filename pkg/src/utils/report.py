import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from rich import box
from rich.console import Console
from rich.table import Table

from src.utils.serialization import dumps

logger = logging.getLogger('adhmlab.cli')


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ''

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'passed': bool(self.passed), 'detail': self.detail}


@dataclass
class Report:
    """Outcome of one subcommand; `anchor` is the displayed statement the checks verify."""
    command: str
    claim: str
    inputs_digest: str
    anchor: str = ''
    checks: List[Check] = field(default_factory=list)
    outputs: Dict[str, Any] = field(default_factory=dict)
    timing_ms: Optional[float] = None

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def check(self, name: str, passed: bool, detail: str = '') -> bool:
        self.checks.append(Check(name, bool(passed), detail))
        if not passed:
            logger.warning(f"Check '{name}' failed: {detail}")
        return bool(passed)

    def to_json(self, include_timing: bool = False) -> Dict[str, Any]:
        out = {
            'command': self.command,
            'claim': self.claim,
            'anchor': self.anchor,
            'inputs_digest': self.inputs_digest,
            'checks': [c.to_json() for c in self.checks],
            'outputs': self.outputs,
            'passed': self.passed,
        }
        if include_timing and self.timing_ms is not None:
            out['timing_ms'] = round(self.timing_ms, 3)
        return out

    def dumps(self, include_timing: bool = False) -> bytes:
        return dumps(self.to_json(include_timing))


def render_markdown(report: Report, console: Optional[Console] = None, include_timing: bool = False):
    """Checks table, then the tabular output (outputs['table'], a list of flat dicts) if any."""
    console = console or Console()
    status = 'PASS' if report.passed else 'FAIL'
    console.print(f"## {report.command}: {status}")
    console.print(report.claim)
    if report.anchor:
        console.print(f"anchor: {report.anchor}")
    checks = Table(box=box.MARKDOWN)
    checks.add_column('check')
    checks.add_column('passed')
    checks.add_column('detail')
    for c in report.checks:
        checks.add_row(c.name, 'yes' if c.passed else 'no', c.detail)
    console.print(checks)
    rows = report.outputs.get('table')
    if rows:
        table = Table(box=box.MARKDOWN)
        columns = list(rows[0])
        for name in columns:
            table.add_column(name)
        for row in rows:
            table.add_row(*(_cell(row.get(name)) for name in columns))
        console.print(table)
    if include_timing and report.timing_ms is not None:
        console.print(f"time: {report.timing_ms:.1f} ms")


def _cell(value) -> str:
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'yes' if value else 'no'
    if isinstance(value, (list, tuple)):
        return ', '.join(_cell(v) for v in value)
    return str(value)
