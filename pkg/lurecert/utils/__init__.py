"""
Utility modules: logging, file I/O and thread fan-out
"""

from .io import dumps_report, file_digest, read_json, write_report
from .logger import get_logger, setup_logging
from .parallel import parallel_map

__all__ = [
    "dumps_report",
    "file_digest",
    "get_logger",
    "parallel_map",
    "read_json",
    "setup_logging",
    "write_report",
]
