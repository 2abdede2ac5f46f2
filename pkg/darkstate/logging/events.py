import json
import logging
import os
from datetime import datetime, timezone
from typing import Any, Dict, Optional

# ------------------------------------------------------------------
# Logger configuration
# ------------------------------------------------------------------

logger = logging.getLogger("darkstate_events")

if not logger.handlers:
    handler = logging.StreamHandler()
    formatter = logging.Formatter(
        fmt="%(asctime)s | %(levelname)s | %(message)s"
    )
    handler.setFormatter(formatter)
    logger.addHandler(handler)

logger.setLevel(os.getenv("DARKSTATE_LOG_LEVEL", "WARNING").upper())


def configure_level(level: Optional[str] = None):
    """
    Re-read the log level (after a .env file has been loaded).
    """
    logger.setLevel((level or os.getenv("DARKSTATE_LOG_LEVEL", "WARNING")).upper())


# ------------------------------------------------------------------
# Helper functions
# ------------------------------------------------------------------

def _jsonable(value: Any) -> Any:
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if hasattr(value, "tolist"):
        return _jsonable(value.tolist())
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return value


def log_event(
    event_type: str,
    run_id: Optional[str] = None,
    details: Optional[Dict[str, Any]] = None,
    level: int = logging.INFO,
):
    """
    Log a structured event as one JSON object.

    NOTE:
    - Emitted files remain the source of truth for results
    - This is for observability and debugging
    """

    if not logger.isEnabledFor(level):
        return

    payload = {
        "event_type": event_type,
        "run_id": run_id,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "details": _jsonable(details or {}),
    }

    logger.log(level, json.dumps(payload))


def log_debug(event_type: str, details: Optional[Dict[str, Any]] = None):
    log_event(event_type, details=details, level=logging.DEBUG)


def log_warning(event_type: str, details: Optional[Dict[str, Any]] = None):
    log_event(event_type, details=details, level=logging.WARNING)


def log_command(
    run_id: str,
    command: str,
    config: Optional[Dict[str, Any]] = None,
):
    log_event(
        event_type="command_start",
        run_id=run_id,
        details={
            "command": command,
            "config": config or {},
        },
    )


def log_result(
    run_id: str,
    command: str,
    files: Optional[list] = None,
    summary: Optional[Dict[str, Any]] = None,
):
    log_event(
        event_type="command_result",
        run_id=run_id,
        details={
            "command": command,
            "files": [str(f) for f in files or []],
            "summary": summary or {},
        },
    )


def log_config_error(
    run_id: Optional[str],
    error: Exception,
):
    log_event(
        event_type="config_error",
        run_id=run_id,
        details={
            "error": str(error),
            "type": type(error).__name__,
        },
        level=logging.ERROR,
    )


def log_numerical_failure(
    run_id: Optional[str],
    error: Exception,
):
    log_event(
        event_type="numerical_failure",
        run_id=run_id,
        details={
            "error": str(error),
            "type": type(error).__name__,
        },
        level=logging.ERROR,
    )
