import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict

from tabulate import tabulate

from weighted_brauer.errors import InvalidInputError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
STATUSES = ("ok", "invalid-input", "internal-error")


@dataclass(frozen=True)
class Report:
    """Outcome of one CLI command; identical inputs give byte-identical JSON."""

    command: str
    inputs: Dict[str, Any]
    payload: Dict[str, Any] = field(default_factory=dict)
    status: str = "ok"

    def __post_init__(self):
        if self.status not in STATUSES:
            raise InvalidInputError(f"Unknown report status {self.status!r}")

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs,
            "payload": self.payload,
            "status": self.status,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def render(self) -> str:
        """Human-readable tables: scalars first, then one table per nested section."""
        scalars = []
        sections = []
        for key, value in sorted(self.payload.items()):
            if isinstance(value, dict):
                sections.append((key, value))
            elif isinstance(value, list) and value and isinstance(value[0], dict):
                sections.append((key, value))
            else:
                scalars.append([key, _cell(value)])

        parts = [f"{self.command} [{self.status}]"]
        if scalars:
            parts.append(tabulate(scalars, headers=["field", "value"], tablefmt="github"))
        for key, value in sections:
            parts.append(f"\n{key}")
            if isinstance(value, dict):
                rows = [[k, _cell(v)] for k, v in value.items()]
                parts.append(tabulate(rows, headers=["key", "value"], tablefmt="github"))
            else:
                headers = sorted({k for row in value for k in row})
                rows = [[_cell(row.get(h)) for h in headers] for row in value]
                parts.append(tabulate(rows, headers=headers, tablefmt="github"))
        return "\n".join(parts) + "\n"

    def write(self, path: str) -> None:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(self.to_json())
        logger.info(f"Report written to {target}")


def _cell(value: Any) -> str:
    if isinstance(value, (dict, list)):
        return json.dumps(value, sort_keys=True, ensure_ascii=False)
    return str(value)
