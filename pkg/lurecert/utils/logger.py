"""
Logging setup for lurecert

Engine modules log through named loggers with a bracketed component prefix,
e.g. ``[Certify]`` or ``[SLemma]``. Reports are data and never go through
logging; console logs go to stderr so stdout stays free for reports.

Usage:
    from lurecert.utils.logger import get_logger, setup_logging

    setup_logging(level="INFO")          # once, in main()
    logger = get_logger(__name__)        # per module
    logger.info("[Certify] tau* = 1.7")
"""

import logging
import sys
from datetime import date
from pathlib import Path
from typing import List, Literal, Optional

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")

LEVEL_COLORS = {
    "DEBUG": "\033[36m",
    "INFO": "\033[32m",
    "WARNING": "\033[33m",
    "ERROR": "\033[31m",
    "CRITICAL": "\033[35m",
}
NAME_COLOR = "\033[94m"
RESET = "\033[0m"

LOG_DIR = Path("logs")


class ColoredFormatter(logging.Formatter):
    """Colors the level and logger name; the record itself is left untouched"""

    def format(self, record: logging.LogRecord) -> str:
        shown = logging.makeLogRecord(record.__dict__)
        color = LEVEL_COLORS.get(shown.levelname)
        if color:
            shown.levelname = f"{color}{shown.levelname}{RESET}"
        shown.name = f"{NAME_COLOR}{shown.name}{RESET}"
        return super().format(shown)


def coerce_level(level: str) -> LogLevel:
    """Map a user-supplied level name onto a known level, defaulting to INFO"""
    upper = level.upper()
    return upper if upper in LOG_LEVELS else "INFO"  # type: ignore[return-value]


def _file_handler(path: Path, formatter: logging.Formatter) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(path)
    handler.setFormatter(formatter)
    return handler


def setup_logging(
    level: LogLevel = "INFO",
    log_file: Optional[str] = None,
    enable_colors: bool = True,
    include_timestamp: bool = True,
    enable_file_logging: bool = False,
    enable_console_logging: bool = True,
) -> None:
    """
    Configure the root logger. Replaces any handlers from an earlier call.

    Args:
        level: Root level; handlers inherit it so LogLevelContext can move it
        log_file: Extra log file path
        enable_colors: Color the console output when stderr is a TTY
        include_timestamp: Prefix messages with the wall-clock time
        enable_file_logging: Also write logs/lurecert-YYYY-MM-DD.log
        enable_console_logging: Write to stderr
    """
    fmt = "%(levelname)-8s | %(name)s | %(message)s"
    datefmt: Optional[str] = None
    if include_timestamp:
        fmt = "%(asctime)s | " + fmt
        datefmt = "%Y-%m-%d %H:%M:%S"
    plain = logging.Formatter(fmt, datefmt=datefmt)

    root = logging.getLogger()
    root.setLevel(getattr(logging, level.upper(), logging.INFO))
    root.handlers = []

    if enable_console_logging:
        console = logging.StreamHandler(sys.stderr)
        use_colors = enable_colors and sys.stderr.isatty()
        console.setFormatter(ColoredFormatter(fmt, datefmt=datefmt) if use_colors else plain)
        root.addHandler(console)

    files: List[Path] = []
    if enable_file_logging:
        files.append(LOG_DIR / f"lurecert-{date.today().isoformat()}.log")
    if log_file:
        files.append(Path(log_file))
    for path in files:
        root.addHandler(_file_handler(path, plain))

    root.debug(f"[Logging] level {level}, files: {[str(p) for p in files] or 'none'}")


def get_logger(name: str) -> logging.Logger:
    """Named logger; propagates to the root handlers set up above"""
    return logging.getLogger(name)


class LogLevelContext:
    """Temporarily set the root level (used by --verbose)"""

    def __init__(self, level: LogLevel):
        self.level = getattr(logging, level.upper())
        self.saved = logging.NOTSET

    def __enter__(self) -> "LogLevelContext":
        root = logging.getLogger()
        self.saved = root.level
        root.setLevel(self.level)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        logging.getLogger().setLevel(self.saved)
