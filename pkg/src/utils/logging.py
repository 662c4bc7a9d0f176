"""
Journalisation structurée du moteur de certification

structlog au-dessus du logging standard; tous les événements partent sur
stderr (et dans un fichier si demandé) pour que stdout ne porte que les
rapports JSON ou texte.
"""

import logging
import sys
import time
from functools import wraps
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
from structlog.processors import JSONRenderer, TimeStamper, add_log_level, format_exc_info
from structlog.stdlib import LoggerFactory

LEVELS = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}

# Bibliothèques de calcul dont les logs restent au niveau WARNING
QUIET_LIBRARIES = ("networkx", "sympy", "spherogram")


def setup_logging(
    log_level: str = "INFO",
    log_file: Optional[str] = None,
    log_format: str = "console",
):
    """
    Configure structlog et le logger racine

    Args:
        log_level: DEBUG, INFO, WARNING, ERROR ou CRITICAL
        log_file: fichier de log additionnel (optionnel)
        log_format: `json` ou `console`
    """
    level = LEVELS.get(log_level.upper(), logging.INFO)
    renderer = JSONRenderer() if log_format == "json" else structlog.dev.ConsoleRenderer(colors=False)

    structlog.configure(
        processors=[TimeStamper(fmt="iso"), add_log_level, format_exc_info, renderer],
        context_class=dict,
        logger_factory=LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )
    logging.basicConfig(format="%(message)s", stream=sys.stderr, level=level, force=True)

    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        handler = logging.FileHandler(path, encoding="utf-8")
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logging.getLogger().addHandler(handler)

    for name in QUIET_LIBRARIES:
        logging.getLogger(name).setLevel(max(level, logging.WARNING))

    structlog.get_logger().debug("🚀 Journalisation prête", log_level=log_level, log_format=log_format)


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    return structlog.get_logger(name)


def log_execution_time(func_name: Optional[str] = None):
    """Décorateur: durée d'un point d'entrée en DEBUG, erreur en WARNING avec le type"""
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            logger = get_logger()
            name = func_name or func.__name__
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except Exception as exc:
                logger.warning(
                    "❌ Échec",
                    function=name,
                    error_type=type(exc).__name__,
                    error=str(exc),
                    elapsed_ms=round((time.perf_counter() - start) * 1000, 2),
                )
                raise
            logger.debug(
                "⏱️ Terminé",
                function=name,
                elapsed_ms=round((time.perf_counter() - start) * 1000, 2),
            )
            return result
        return wrapper
    return decorator


class LogContext:
    """
    Trace une opération (commande CLI, recensement): début, fin, progression

    Les compteurs passés à `count` sont repris dans le message de fin.
    """

    def __init__(self, operation: str, **context_data: Any):
        self.operation = operation
        self.context_data = context_data
        self.counters: Dict[str, int] = {}
        self.logger = get_logger().bind(operation=operation)
        self.start_time = 0.0

    def __enter__(self) -> "LogContext":
        self.start_time = time.perf_counter()
        self.logger.info("🚀 Début", **self.context_data)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        elapsed = round(time.perf_counter() - self.start_time, 3)
        if exc_type is None:
            self.logger.info("✅ Terminé", elapsed_seconds=elapsed, **self.counters)
        else:
            self.logger.error(
                "❌ Interrompu",
                elapsed_seconds=elapsed,
                error_type=exc_type.__name__,
                error=str(exc_val),
                **self.counters,
            )

    def count(self, key: str, amount: int = 1):
        self.counters[key] = self.counters.get(key, 0) + amount

    def log_progress(self, current: int, total: int, **progress_data: Any):
        percentage = round(current * 100 / total, 1) if total else 0.0
        self.logger.info(
            "📊 Progression",
            current=current,
            total=total,
            percentage=percentage,
            **self.counters,
            **progress_data,
        )
