import functools
import json
import sys

import click
import typer
from pydantic import ValidationError

from robustprod.core.exception_handlers import handle_exception, validation_error_handler


def _fail(exit_code: int, payload: dict, stage: str):
    payload["error"]["stage"] = stage
    sys.stderr.write(json.dumps(payload, default=str) + "\n")
    raise typer.Exit(code=exit_code)


def cli_error_handler(stage: str):
    """
    Wrap a subcommand so that any failure ends the process with the
    documented exit code and a JSON error object on stderr.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except (typer.Exit, typer.Abort, click.ClickException):
                raise
            except ValidationError as e:
                _fail(*validation_error_handler(e, stage), stage)
            except Exception as e:
                _fail(*handle_exception(e, stage), stage)

        return wrapper

    return decorator
