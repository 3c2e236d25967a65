"""
scenario_pool.py

Реестр конвейеров: kind сценария -> функция, строящая отчёт.

Задача:
- держать в памяти соответствие kind -> pipeline
- давать по kind готовый конвейер
"""

from typing import Callable, Dict

from core.backend.cli.schemas import Report
from core.backend.services.pipelines import RunContext, run_kirwan, run_lagrangian, run_localsys

Pipeline = Callable[[object, RunContext], Report]


class ScenarioKindNotFoundError(Exception):
    pass


class ScenarioPool:
    def __init__(self) -> None:
        self._pipelines: Dict[str, Pipeline] = {}

    def register_pipeline(self, kind: str, pipeline: Pipeline) -> None:
        """
        Зарегистрировать (или перерегистрировать) конвейер для вида сценария.
        """
        self._pipelines[kind] = pipeline

    def get_pipeline(self, kind: str) -> Pipeline:
        try:
            return self._pipelines[kind]
        except KeyError:
            raise ScenarioKindNotFoundError(f"Вид сценария {kind!r} не зарегистрирован")

    def list_kinds(self) -> list[str]:
        return sorted(self._pipelines)


def default_pool() -> ScenarioPool:
    pool = ScenarioPool()
    pool.register_pipeline("lagrangian_intersection", run_lagrangian)
    pool.register_pipeline("kirwan", run_kirwan)
    pool.register_pipeline("localsys", run_localsys)
    return pool
