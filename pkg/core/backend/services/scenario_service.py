# core/backend/services/scenario_service.py

"""
scenario_service.py

Сервис выполнения одного сценария.

Главная идея:
  - снаружи вызываем run_file(path, ...)
  - внутри:
      * читаем и валидируем файл (pydantic)
      * находим конвейер по kind в ScenarioPool
      * запускаем конвейер, сверяем ожидаемые значения из файла
      * заворачиваем всё в ScenarioRunResult (исключения не пробрасываются)

Коды выхода: 0 - все проверки прошли, 1 - математическое расхождение,
2 - ошибка входных данных.

Этот слой:
  CLI  <---> ScenarioService  <---> ScenarioPool + pipelines
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

from pydantic import ValidationError

from core.backend.algebra.koszul import BadLift, MomentNotInIntersection, NotRegular
from core.backend.algebra.polyring import NotInIdeal
from core.backend.cli.schemas import CheckResult, Report, scenario_adapter
from core.backend.geometry.lagrangian import (
    IntersectionNotClean,
    MomentMismatch,
    NonConstantMoment,
    NotClosedForm,
    NotIsotropic,
    OddCanonicalCharacter,
    UnsupportedScenario,
    WrongDimension,
)
from core.backend.geometry.localsys import NotACocycle, OrderMismatch
from core.backend.services.pipelines import RunContext
from core.backend.services.scenario_pool import ScenarioKindNotFoundError, ScenarioPool, default_pool
from core.backend.settings import Settings

logger = logging.getLogger(__name__)


class ScenarioInputError(Exception):
    """Файл не читается, не проходит валидацию или его данные математически некорректны."""
    pass


# Нарушения, относящиеся к данным самого сценария (код выхода 2)
INPUT_ERRORS: Tuple[type, ...] = (
    NotIsotropic,
    WrongDimension,
    NotClosedForm,
    NonConstantMoment,
    MomentMismatch,
    IntersectionNotClean,
    OddCanonicalCharacter,
    UnsupportedScenario,
    NotRegular,
    BadLift,
    MomentNotInIntersection,
    NotInIdeal,
    NotACocycle,
    OrderMismatch,
    ValueError,
    KeyError,
)


# ---------- Результат выполнения сценария ----------

@dataclass
class ScenarioRunResult:
    path: str
    name: str
    success: bool
    status: str
    exit_code: int
    report: Optional[Report]
    started_at: float
    finished_at: float

    @property
    def duration_ms(self) -> int:
        return int((self.finished_at - self.started_at) * 1000)


def format_validation_error(path: str, err: ValidationError) -> str:
    """
    Диагностика с позицией: путь в JSON (body.l1.kind) или строка/столбец
    для синтаксических ошибок JSON.
    """
    parts = []
    for e in err.errors():
        loc = ".".join(str(x) for x in e.get("loc", ()) if x != "")
        parts.append(f"{path}: {loc + ': ' if loc else ''}{e['msg']}")
    return "; ".join(parts)


def load_scenario(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioInputError(f"{p}: не удалось прочитать файл: {e}") from e
    try:
        return scenario_adapter.validate_json(text)
    except ValidationError as e:
        raise ScenarioInputError(format_validation_error(str(p), e)) from e


def _parse_cell(key: str) -> Tuple[int, int]:
    if "," in key:
        k, d = key.split(",", 1)
        return int(k), int(d)
    return int(key), 0


def apply_expectations(report: Report, scn) -> None:
    """
    Сверить ожидаемые клетки таблиц / коэффициенты рядов / описания множеств,
    заявленные в файле, с вычисленными. Каждое расхождение - проваленная проверка.
    """
    for name, cells in sorted(scn.expected.items()):
        table = report.table(name)
        series = report.series_block(name)
        if table is None and series is None:
            report.checks.append(CheckResult(name=f"expected {name}", ok=False, detail="нет такой таблицы или ряда"))
            continue
        mism = []
        for key, want in sorted(cells.items(), key=lambda kv: _parse_cell(kv[0])):
            k, d = _parse_cell(key)
            if table is not None:
                got = table.get(k, d)
            else:
                got = series.coefficients[k] if 0 <= k < len(series.coefficients) else None
            if got != want:
                mism.append((k, d, -1 if got is None else got, want))
        report.checks.append(CheckResult(name=f"expected {name}", ok=not mism, mismatches=mism))

    for name, text in sorted(scn.expected_loci.items()):
        locus = report.locus(name)
        got = locus.description if locus is not None else None
        report.checks.append(CheckResult(
            name=f"expected locus {name}", ok=got == text,
            detail="" if got == text else f"got {got!r}, expected {text!r}",
        ))


# ---------- Сам сервис ----------

class ScenarioService:
    def __init__(self, pool: Optional[ScenarioPool] = None, settings: Optional[Settings] = None) -> None:
        self._pool = pool or default_pool()
        self._settings = settings or Settings.from_env()

    def context_for(self, scn, window: Optional[Tuple[int, int]] = None,
                    truncate: Optional[int] = None) -> RunContext:
        """Флаги CLI важнее значений из файла, те важнее настроек."""
        k, d = self._settings.default_window
        if scn.window is not None:
            k, d = scn.window.homological, scn.window.internal
        if window is not None:
            k, d = window
        n = self._settings.default_truncate
        if scn.truncate is not None:
            n = scn.truncate
        if truncate is not None:
            n = truncate
        return RunContext(k, d, n)

    def run_file(
        self,
        path: str | Path,
        *,
        window: Optional[Tuple[int, int]] = None,
        truncate: Optional[int] = None,
    ) -> ScenarioRunResult:
        started = time.perf_counter()
        path = str(path)

        try:
            scn = load_scenario(path)
        except ScenarioInputError as e:
            logger.warning("%s", e)
            return ScenarioRunResult(path, Path(path).stem, False, f"error: {e}", 2, None,
                                     started, time.perf_counter())

        name = scn.name or Path(path).stem
        scn = scn.model_copy(update={"name": name})
        logger.info("scenario %s (%s) started", name, scn.kind)

        try:
            pipeline = self._pool.get_pipeline(scn.kind)
            report = pipeline(scn, self.context_for(scn, window, truncate))
            if scn.expect_error:
                report.checks.append(CheckResult(
                    name="expected_rejection", ok=False,
                    detail=f"ожидалось {scn.expect_error}, сценарий принят",
                ))
            apply_expectations(report, scn)
        except INPUT_ERRORS + (ScenarioKindNotFoundError,) as e:
            if scn.expect_error == type(e).__name__:
                report = Report(name=name, kind=scn.kind, checks=[
                    CheckResult(name="expected_rejection", ok=True, detail=f"{type(e).__name__}: {e}"),
                ])
            else:
                finished = time.perf_counter()
                logger.warning("scenario %s rejected: %s: %s", name, type(e).__name__, e)
                return ScenarioRunResult(path, name, False, f"error: {type(e).__name__}: {e}", 2, None,
                                         started, finished)
        except Exception as e:
            logger.exception("scenario %s crashed", name)
            return ScenarioRunResult(path, name, False, f"error: {e}", 2, None,
                                     started, time.perf_counter())

        finished = time.perf_counter()
        ok = report.ok
        logger.info("scenario %s finished: %s in %.0f ms", name, report.status, (finished - started) * 1000)
        return ScenarioRunResult(
            path=path,
            name=name,
            success=ok,
            status="ok" if ok else "fail",
            exit_code=0 if ok else 1,
            report=report,
            started_at=started,
            finished_at=finished,
        )
