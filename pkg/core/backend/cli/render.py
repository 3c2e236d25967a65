# core/backend/cli/render.py

"""
render.py

Два представления одного Report:
  - table   - выровненный текст по шаблону core/frontend/templates/report.txt.j2
  - machine - JSON, все числа строками ("12", "-3", "1/2"), ключи отсортированы

Оба строятся из одной и той же модели, поэтому числа в них совпадают.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, List, Optional

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from core.backend.cli.schemas import Report, TableBlock

# ---- Пути к шаблонам: core/frontend/templates ----
_current_dir = os.path.dirname(os.path.abspath(__file__))                # core/backend/cli
_core_dir = os.path.abspath(os.path.join(_current_dir, "..", ".."))      # core
TEMPLATES_DIR = os.path.join(_core_dir, "frontend", "templates")


@lru_cache(maxsize=1)
def _environment() -> Environment:
    return Environment(
        loader=FileSystemLoader(TEMPLATES_DIR),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )


def _table_lines(t: TableBlock) -> List[str]:
    header = ["k\\d"] + [str(d) for d in t.d_values]
    body = [[str(k)] + [str(v) for v in row] for k, row in t.rows]
    width = max(len(c) for line in [header] + body for c in line)
    return [" ".join(c.rjust(width) for c in line).rstrip() for line in [header] + body]


def render_table(report: Report) -> str:
    tpl = _environment().get_template("report.txt.j2")
    return tpl.render(
        report=report,
        tables=[(t.name, _table_lines(t)) for t in report.tables],
    )


def _stringify(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, Fraction)):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _stringify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_stringify(v) for v in value]
    return value


def machine_payload(report: Report) -> dict:
    data = report.model_dump()
    data["status"] = report.status
    return _stringify(data)


def render_machine(report: Report) -> str:
    return json.dumps(machine_payload(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def render(report: Report, fmt: str = "table") -> str:
    if fmt == "machine":
        return render_machine(report)
    if fmt == "table":
        return render_table(report)
    raise ValueError(f"Неизвестный формат {fmt!r}")


# ------------------ прогон каталога ------------------ #

def render_summary(rows: Iterable[tuple], passed: int, failed: int, errors: int,
                   fmt: str = "table", reports: Optional[List[Optional[Report]]] = None,
                   status: str = "ok") -> str:
    """
    rows: (имя файла, статус, подробность). Для machine добавляются полные отчёты.
    """
    rows = list(rows)
    if fmt == "machine":
        payload = {
            "status": status,
            "passed": str(passed),
            "failed": str(failed),
            "errors": str(errors),
            "scenarios": [
                {
                    "file": f,
                    "status": st,
                    "detail": detail,
                    "report": machine_payload(r) if r is not None else None,
                }
                for (f, st, detail), r in zip(rows, reports or [None] * len(rows))
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    tpl = _environment().get_template("summary.txt.j2")
    return tpl.render(rows=rows, passed=passed, failed=failed, errors=errors, status=status)
