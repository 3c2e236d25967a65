# core/backend/cli/main.py

"""
main.py

Точка входа:

    python -m core.backend.cli.main run <file> [--window K,D] [--truncate N]
                                               [--format table|machine] [--report PATH]
    python -m core.backend.cli.main verify <dir> [--format table|machine] [--report PATH]

Коды выхода: 0 - всё прошло, 1 - математическое расхождение, 2 - ошибка ввода.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from core.backend.cli.render import render, render_summary
from core.backend.services.corpus_runner import verify_corpus
from core.backend.services.scenario_service import ScenarioService
from core.backend.settings import Settings, configure_logging, parse_window

logger = logging.getLogger(__name__)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lagrx",
        description="Проверка формул для производных пересечений лагранжианов",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="выполнить один сценарий")
    run.add_argument("file")
    run.add_argument("--window", help="окно K,D (гомологическое, внутреннее)")
    run.add_argument("--truncate", type=int, help="порядок обрезки рядов Пуанкаре")
    run.add_argument("--format", choices=("table", "machine"), default="table")
    run.add_argument("--report", help="куда записать отчёт (по умолчанию stdout)")

    verify = sub.add_parser("verify", help="прогнать каталог сценариев *.scn")
    verify.add_argument("directory")
    verify.add_argument("--format", choices=("table", "machine"), default="table")
    verify.add_argument("--report", help="куда записать итог (по умолчанию stdout)")
    return parser


def _emit(text: str, report_path: Optional[str]) -> None:
    if report_path:
        Path(report_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_run(args: argparse.Namespace, settings: Settings) -> int:
    window = None
    if args.window:
        try:
            window = parse_window(args.window)
        except ValueError as e:
            print(f"--window: {e}", file=sys.stderr)
            return 2
    if args.truncate is not None and args.truncate < 0:
        print("--truncate: должно быть >= 0", file=sys.stderr)
        return 2

    result = ScenarioService(settings=settings).run_file(args.file, window=window, truncate=args.truncate)
    if result.report is None:
        print(result.status, file=sys.stderr)
        return result.exit_code
    _emit(render(result.report, args.format), args.report)
    return result.exit_code


def cmd_verify(args: argparse.Namespace, settings: Settings) -> int:
    summary = verify_corpus(args.directory, settings)
    rows = []
    for r in summary.results:
        detail = ""
        if r.exit_code == 1 and r.report is not None:
            detail = ", ".join(c.name for c in r.report.checks if not c.ok)
        elif r.exit_code == 2:
            detail = r.status
        rows.append((Path(r.path).name, {0: "PASS", 1: "FAIL", 2: "ERROR"}[r.exit_code], detail))
    text = render_summary(
        rows, summary.passed, summary.failed, summary.errors,
        fmt=args.format, reports=[r.report for r in summary.results], status=summary.status,
    )
    _emit(text, args.report)
    if summary.status != "ok":
        print(summary.status, file=sys.stderr)
    return summary.exit_code


def main(argv: Optional[Sequence[str]] = None) -> int:
    settings = Settings.from_env()
    configure_logging(settings)
    args = _build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args, settings)
    return cmd_verify(args, settings)


if __name__ == "__main__":
    sys.exit(main())
