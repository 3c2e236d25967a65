# core/backend/services/corpus_runner.py

"""
corpus_runner.py

Прогон каталога сценариев (*.scn). Порядок результатов - по имени файла,
независимо от числа процессов (LAGRX_WORKERS).
"""

from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from core.backend.services.scenario_service import ScenarioRunResult, ScenarioService
from core.backend.settings import Settings

logger = logging.getLogger(__name__)

SCENARIO_SUFFIX = ".scn"


@dataclass
class CorpusSummary:
    directory: str
    results: List[ScenarioRunResult] = field(default_factory=list)
    status: str = "ok"

    @property
    def passed(self) -> int:
        return sum(1 for r in self.results if r.exit_code == 0)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if r.exit_code == 1)

    @property
    def errors(self) -> int:
        return sum(1 for r in self.results if r.exit_code == 2)

    @property
    def exit_code(self) -> int:
        if self.status != "ok" or self.errors:
            return 2
        return 1 if self.failed else 0


def scenario_files(directory: str | Path) -> List[Path]:
    return sorted(p for p in Path(directory).iterdir() if p.is_file() and p.suffix == SCENARIO_SUFFIX)


def _run_one(path: str) -> ScenarioRunResult:
    # в дочернем процессе сервис собирается заново из окружения
    return ScenarioService().run_file(path)


def verify_corpus(directory: str | Path, settings: Optional[Settings] = None,
                  service: Optional[ScenarioService] = None) -> CorpusSummary:
    settings = settings or Settings.from_env()
    summary = CorpusSummary(str(directory))
    try:
        files = scenario_files(directory)
    except OSError as e:
        summary.status = f"error: не удалось прочитать каталог {directory}: {e}"
        return summary
    if not files:
        summary.status = f"error: в каталоге {directory} нет файлов *{SCENARIO_SUFFIX}"
        return summary

    t0 = time.perf_counter()
    if settings.workers > 1 and service is None:
        with ProcessPoolExecutor(max_workers=settings.workers) as ex:
            summary.results = list(ex.map(_run_one, [str(p) for p in files]))
    else:
        service = service or ScenarioService(settings=settings)
        summary.results = [service.run_file(p) for p in files]
    logger.info(
        "corpus %s: %d passed, %d failed, %d errors in %.0f ms",
        directory, summary.passed, summary.failed, summary.errors, (time.perf_counter() - t0) * 1000,
    )
    return summary
