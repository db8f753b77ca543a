"""Deterministic JSON and CSV rendering of command results."""
import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field

logger = logging.getLogger(__name__)

CHECK_COLUMNS = ("name", "residual", "tol", "pass", "diagnostic", "note")


def _plain(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    raise TypeError(f"{type(value).__name__} is not serializable")


@dataclass
class Report:
    command: str
    config: dict
    seed: int
    checks: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    columns: tuple = ()
    rows: list = field(default_factory=list)

    def add(self, *results):
        self.checks.extend(results)

    def note(self, text):
        if text and text not in self.notes:
            logger.warning(text)
            self.notes.append(text)

    @property
    def failures(self):
        return [c for c in self.checks if not c.diagnostic and not c.passed]

    @property
    def passed(self):
        return not self.failures

    def sorted_checks(self):
        return sorted(self.checks, key=lambda c: c.name)

    def as_dict(self):
        return {
            "command": self.command,
            "config": self.config,
            "seed": self.seed,
            "checks": [c.as_dict() for c in self.sorted_checks()],
            "notes": sorted(self.notes),
            "columns": list(self.columns),
            "rows": self.rows,
            "pass": self.passed,
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, sort_keys=True, default=_plain) + "\n"

    def to_csv(self):
        """The data table when there is one, otherwise the checks."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        if self.columns:
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_cell(row.get(column)) for column in self.columns])
        else:
            writer.writerow(CHECK_COLUMNS)
            for check in self.sorted_checks():
                data = check.as_dict()
                writer.writerow([_cell(data[column]) for column in CHECK_COLUMNS])
        return buffer.getvalue()

    def render(self, fmt):
        return self.to_csv() if fmt == "csv" else self.to_json()


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)
