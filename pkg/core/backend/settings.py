# core/backend/settings.py

"""
settings.py

Настройки приложения из переменных окружения.

  LAGRX_WORKERS           - сколько сценариев считать параллельно в `verify` (по умолчанию 1)
  LAGRX_DEFAULT_WINDOW    - окно "K,D" по умолчанию (гомологическое, внутреннее)
  LAGRX_DEFAULT_TRUNCATE  - порядок обрезки рядов Пуанкаре
  LAGRX_LOG_LEVEL         - уровень логирования (WARNING по умолчанию)
  LAGRX_TRACE=1           - принудительно DEBUG (аналог "sniffer"-режима)
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from typing import Optional, Tuple


def _env_flag(name: str, default: bool = False) -> bool:
    v = os.getenv(name)
    if v is None:
        return default
    return v.strip().lower() in ("1", "true", "yes", "y", "on")


def _env_int(name: str, default: int) -> int:
    v = os.getenv(name)
    if v is None or not v.strip():
        return default
    try:
        return int(v)
    except ValueError:
        return default


def parse_window(text: str) -> Tuple[int, int]:
    """
    "6,10" -> (6, 10). Бросает ValueError при кривом формате.
    """
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ValueError(f"Окно должно иметь вид K,D, получено {text!r}")
    k, d = int(parts[0]), int(parts[1])
    if k < 0 or d < 0:
        raise ValueError(f"Границы окна должны быть неотрицательны: {text!r}")
    return k, d


@dataclass(frozen=True)
class Settings:
    workers: int = 1
    default_window: Tuple[int, int] = (6, 10)
    default_truncate: int = 20
    log_level: str = "WARNING"
    trace: bool = False

    @classmethod
    def from_env(cls) -> "Settings":
        window_raw = os.getenv("LAGRX_DEFAULT_WINDOW")
        try:
            window = parse_window(window_raw) if window_raw else (6, 10)
        except ValueError:
            window = (6, 10)
        return cls(
            workers=max(1, _env_int("LAGRX_WORKERS", 1)),
            default_window=window,
            default_truncate=max(0, _env_int("LAGRX_DEFAULT_TRUNCATE", 20)),
            log_level=(os.getenv("LAGRX_LOG_LEVEL") or "WARNING").upper(),
            trace=_env_flag("LAGRX_TRACE"),
        )


_configured = False


def configure_logging(settings: Optional[Settings] = None) -> None:
    """
    Один раз настроить logging. Вывод только в stderr,
    чтобы отчёты в stdout оставались побайтно воспроизводимыми.
    """
    global _configured
    if _configured:
        return
    settings = settings or Settings.from_env()
    level = logging.DEBUG if settings.trace else getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(
        level=level,
        format="[%(asctime)s] %(levelname)s %(name)s | %(message)s",
    )
    _configured = True
