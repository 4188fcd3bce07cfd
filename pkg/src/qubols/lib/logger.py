import logging
import sys

_IS_VERBOSE = True
LOG = logging.getLogger("qubols")
VERBOSE_NOTICE = "Run with --verbose for more information"
_HANDLER_NAME = "qubols-stderr"


class _Formatter(logging.Formatter):
    """``[LEVEL] message``; debug records also name their module."""

    def __init__(self) -> None:
        super().__init__("[%(levelname)s] %(message)s")
        self._debug = logging.Formatter("[%(levelname)s] %(name)s: %(message)s")

    def format(self, record: logging.LogRecord) -> str:
        if record.levelno <= logging.DEBUG:
            return self._debug.format(record)
        return super().format(record)


def _update_log_level() -> None:
    LOG.setLevel(logging.DEBUG if _IS_VERBOSE else logging.INFO)


def set_not_verbose() -> None:
    global _IS_VERBOSE
    _IS_VERBOSE = False
    _update_log_level()


def configure_logging() -> None:
    """Install the stderr handler of the package logger, once."""
    _update_log_level()
    if any(handler.get_name() == _HANDLER_NAME for handler in LOG.handlers):
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.set_name(_HANDLER_NAME)
    handler.setFormatter(_Formatter())
    LOG.addHandler(handler)


def print_exception(e: Exception) -> None:
    if _IS_VERBOSE:
        LOG.exception(e)
    else:
        LOG.error(f"{e!r}")
        LOG.error(VERBOSE_NOTICE)
