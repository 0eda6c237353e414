"""
File I/O helpers: JSON/CSV signals, trajectory CSV, reports and digests

Reports are rendered by a small deterministic serializer: keys keep insertion
order, floats use 17 significant digits and non-finite floats become null, so
identical inputs give byte-identical files.
"""

import csv
import hashlib
import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np

from ..engine.signals import Signal

PathLike = Union[str, Path]


def file_digest(path: PathLike) -> str:
    """sha256 hex digest of a file's bytes"""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def read_json(path: PathLike) -> Any:
    """Parse a JSON file; syntax errors become ValueError with line and column"""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")


def format_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    if x == 0.0:
        return "0.0"
    text = format(x, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _render(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "value") and isinstance(obj.value, str):
        return json.dumps(obj.value)
    if isinstance(obj, np.ndarray):
        return _render(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_render(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in obj):
            return "[" + ", ".join(_render(v, indent, level + 1) for v in obj) + "]"
        items = [f"{pad}{_render(v, indent, level + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps_report(obj: Any, indent: int = 2) -> str:
    return _render(obj, indent, 0) + "\n"


def write_report(obj: Any, path: Optional[PathLike] = None) -> None:
    """Write a report to path, or to stdout when path is None"""
    text = dumps_report(obj)
    if path is None:
        sys.stdout.write(text)
        return
    out = Path(path)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _rows_to_signal(rows: List[List[str]], path: PathLike) -> Signal:
    if rows and rows[0] and not _is_number(rows[0][0]):
        header = [h.strip() for h in rows[0]]
        rows = rows[1:]
        if header and header[0] == "k":
            rows = [r[1:] for r in rows]
    try:
        values = [[float(v) for v in row] for row in rows if row]
    except ValueError as e:
        raise ValueError(f"{path}: non-numeric entry: {e}")
    if not values:
        raise ValueError(f"{path}: no samples")
    return Signal(np.array(values))


def _is_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def read_signal(path: PathLike) -> Signal:
    """Signal from a CSV (one row per k, optional header, optional k column) or JSON list"""
    p = Path(path)
    if p.suffix.lower() == ".csv":
        with open(p, newline="") as f:
            return _rows_to_signal(list(csv.reader(f)), p)
    data = read_json(p)
    if isinstance(data, dict):
        data = data.get("data")
    if not isinstance(data, list) or not data:
        raise ValueError(f"{p}: expected a non-empty list of samples")
    return Signal.from_array(data)


def write_signal(sig: Signal, path: PathLike, name: str = "x") -> None:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    if p.suffix.lower() == ".csv":
        header = ["k"] + ([name] if sig.dim == 1 else [f"{name}_{i}" for i in range(sig.dim)])
        with open(p, "w", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(header)
            for k, row in enumerate(sig.data):
                writer.writerow([k] + [format_float(float(v)) for v in row])
        return
    p.write_text(dumps_report({"data": sig.to_list()}))


def write_columns_csv(columns: Dict[str, np.ndarray], path: Optional[PathLike] = None) -> None:
    """Write equal-length columns (e.g. a trajectory) as CSV, to stdout when path is None"""
    names = list(columns)
    length = len(next(iter(columns.values()))) if columns else 0
    handle = sys.stdout if path is None else open(Path(path), "w", newline="")
    try:
        writer = csv.writer(handle)
        writer.writerow(names)
        for i in range(length):
            row = []
            for name in names:
                v = columns[name][i]
                row.append(str(int(v)) if name == "k" else format_float(float(v)))
            writer.writerow(row)
    finally:
        if path is not None:
            handle.close()
