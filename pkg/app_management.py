"""Management of a command-line run."""

from __future__ import annotations

import logging
from typing import TYPE_CHECKING, Literal

from rich.console import Console
from rich.logging import RichHandler

import constants

if TYPE_CHECKING:
    from pathlib import Path
    from types import TracebackType

    from typing_extensions import Self

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def set_up_output(out_dir: Path) -> Path:
    """Create the output directory and return the path of the sidecar log."""
    out_dir.mkdir(parents=True, exist_ok=True)
    return out_dir / constants.RUN_LOG


class RunManager:
    """Context manager for the logging handlers of one run.

    The console gets a ``RichHandler``; ``run.log`` in the output directory gets every record
    with its timestamp. Both are removed again on exit.
    """

    def __init__(self, out_dir: Path, level: int = logging.INFO) -> None:
        """Remember where to log and at which level."""
        self.out_dir = out_dir
        self.level = level
        self.handlers: list[logging.Handler] = []
        self._previous_level = logging.NOTSET

    def __enter__(self) -> Self:
        """Create the output directory and attach the handlers to the root logger."""
        log_path = set_up_output(self.out_dir)
        file_handler = logging.FileHandler(log_path, mode="w", encoding="utf-8")
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        console_handler = RichHandler(console=Console(stderr=True), show_path=False)
        console_handler.setLevel(logging.WARNING)
        self.handlers = [file_handler, console_handler]
        root = logging.getLogger()
        self._previous_level = root.level
        root.setLevel(self.level)
        for handler in self.handlers:
            root.addHandler(handler)
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc_value: BaseException | None,
        traceback: TracebackType | None,
    ) -> Literal[False]:
        """Detach and close the handlers; exceptions are never suppressed."""
        root = logging.getLogger()
        if exc_value is not None:
            logging.getLogger(__name__).error("Run failed: %s", exc_value)
        for handler in self.handlers:
            root.removeHandler(handler)
            handler.close()
        root.setLevel(self._previous_level)
        self.handlers = []
        return False
