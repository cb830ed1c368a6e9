from typing import Any, Dict, Tuple

from pydantic import ValidationError

from robustprod.core.exceptions import DataError, NumericalError, RobustProdError
from robustprod.utils.logger import logger_instance as log


EXIT_INTERNAL_ERROR = 1
EXIT_USAGE = 2
EXIT_DATA_ERROR = 3
EXIT_NUMERICAL_FAILURE = 4


def _error_object(exc: Exception, exit_code: int) -> Dict[str, Any]:
    details = getattr(exc, "details", {}) or {}
    return {
        "error": {
            "type": type(exc).__name__,
            "message": str(exc),
            "exit_code": exit_code,
            "details": details,
        }
    }


def data_error_handler(exc: DataError, stage: str) -> Tuple[int, Dict[str, Any]]:
    """
    Handler for input problems: bad files, duplicate keys, scale violations.
    """
    log.error(
        "Data error",
        extra={
            "stage": stage,
            "error_type": type(exc).__name__,
            "error": str(exc),
        },
    )
    return EXIT_DATA_ERROR, _error_object(exc, EXIT_DATA_ERROR)


def numerical_error_handler(
    exc: NumericalError, stage: str
) -> Tuple[int, Dict[str, Any]]:
    """
    Handler for computations that are undefined on otherwise valid input.
    """
    log.error(
        "Numerical failure",
        extra={
            "stage": stage,
            "error_type": type(exc).__name__,
            "error": str(exc),
        },
    )
    return EXIT_NUMERICAL_FAILURE, _error_object(exc, EXIT_NUMERICAL_FAILURE)


def internal_error_handler(exc: Exception, stage: str) -> Tuple[int, Dict[str, Any]]:
    """
    Handler for failures outside the robustprod hierarchy. The traceback goes
    to the log; the error object only names the exception.
    """
    log.error(
        "Unexpected failure",
        extra={
            "stage": stage,
            "error_type": type(exc).__name__,
            "error": str(exc),
        },
        exc_info=exc,
    )
    payload = _error_object(exc, EXIT_INTERNAL_ERROR)
    payload["error"]["type"] = "InternalError"
    payload["error"]["details"] = {"exception": type(exc).__name__}
    return EXIT_INTERNAL_ERROR, payload


def handle_exception(exc: Exception, stage: str) -> Tuple[int, Dict[str, Any]]:
    """
    Map an exception raised by a stage to an exit code and an error object.

    Unknown robustprod errors are reported as data errors, anything else as
    an internal error.
    """
    if isinstance(exc, NumericalError):
        return numerical_error_handler(exc, stage)
    if isinstance(exc, DataError):
        return data_error_handler(exc, stage)
    if isinstance(exc, RobustProdError):
        return data_error_handler(exc, stage)
    return internal_error_handler(exc, stage)


def validation_error_handler(
    exc: ValidationError, stage: str
) -> Tuple[int, Dict[str, Any]]:
    """Invalid option values rejected by the parameter models."""
    errors = [
        {"field": ".".join(str(p) for p in err["loc"]), "message": err["msg"]}
        for err in exc.errors()
    ]
    log.warning("Invalid parameters", extra={"stage": stage, "errors": errors})
    payload = _error_object(exc, EXIT_USAGE)
    payload["error"]["message"] = "Invalid parameters"
    payload["error"]["details"] = {"errors": errors}
    return EXIT_USAGE, payload
