"""
Unit tests for lurecert utilities.
"""

import json
import logging
import threading

import numpy as np
import pytest

from lurecert.engine.signals import Signal
from lurecert.utils.io import (
    dumps_report,
    file_digest,
    format_float,
    read_json,
    read_signal,
    write_columns_csv,
    write_report,
    write_signal,
)
from lurecert.utils.logger import LogLevelContext, coerce_level, get_logger, setup_logging
from lurecert.utils.parallel import parallel_map, worker_count


class TestLogger:
    """Test the logging utilities"""

    def test_get_logger(self):
        """Test that get_logger returns a logger instance"""
        logger = get_logger("test")
        assert isinstance(logger, logging.Logger)
        assert logger.name == "test"

    def test_setup_logging(self):
        """Test that setup_logging configures logging correctly"""
        try:
            setup_logging(level="INFO", enable_colors=False)
        except Exception as e:
            pytest.fail(f"setup_logging raised an exception: {e}")
        assert logging.getLogger().level == logging.INFO

    def test_level_context(self):
        """Test that LogLevelContext raises and restores the root level"""
        setup_logging(level="WARNING", enable_colors=False)
        with LogLevelContext("DEBUG"):
            assert logging.getLogger().level == logging.DEBUG
        assert logging.getLogger().level == logging.WARNING

    def test_coerce_level(self):
        """Test that unknown level names fall back to INFO"""
        assert coerce_level("debug") == "DEBUG"
        assert coerce_level("chatty") == "INFO"


class TestReportFormatting:
    """Test the deterministic report serializer"""

    def test_format_float(self):
        """Test 17-digit formatting and non-finite handling"""
        assert format_float(0.1) == "0.10000000000000001"
        assert format_float(1.0) == "1.0"
        assert format_float(0.0) == "0.0"
        assert format_float(float("inf")) == "null"
        assert format_float(float("nan")) == "null"

    def test_round_trip_is_valid_json(self):
        """Test that rendered reports parse back to the same data"""
        data = {"b": [1, 2.5, None], "a": {"ok": True, "m": [[1.0, 0.0], [0.0, -1.0]]}}
        parsed = json.loads(dumps_report(data))
        assert parsed == data
        assert list(parsed) == ["b", "a"]

    def test_numpy_values(self):
        """Test that numpy scalars and arrays render like Python values"""
        data = {"x": np.float64(2.0), "n": np.int64(3), "flag": np.bool_(False), "v": np.eye(2)}
        parsed = json.loads(dumps_report(data))
        assert parsed == {"x": 2.0, "n": 3, "flag": False, "v": [[1.0, 0.0], [0.0, 1.0]]}

    def test_deterministic(self, tmp_path):
        """Test that identical reports give identical bytes and digests"""
        data = {"tau": 1.0 / 3.0, "gamma": float("inf"), "rows": [[0.1, 0.2]]}
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        write_report(data, a)
        write_report(data, b)
        assert a.read_bytes() == b.read_bytes()
        assert file_digest(a) == file_digest(b)
        assert json.loads(a.read_text())["gamma"] is None

    def test_unserializable(self):
        """Test that unknown objects are rejected"""
        with pytest.raises(TypeError):
            dumps_report({"x": object()})


class TestSignalFiles:
    """Test signal and trajectory file helpers"""

    def test_read_json_error_location(self, tmp_path):
        """Test that malformed JSON reports line and column"""
        path = tmp_path / "bad.json"
        path.write_text('{\n  "D": [[2.0]],\n}')
        with pytest.raises(ValueError, match="line 3"):
            read_json(path)

    def test_csv_signal(self, tmp_path):
        """Test that CSV signals with header and k column are read"""
        path = tmp_path / "u.csv"
        path.write_text("k,u\n0,1.5\n1,-2\n2,0\n")
        sig = read_signal(path)
        assert sig.dim == 1
        assert sig.horizon == 2
        assert sig.data[:, 0].tolist() == [1.5, -2.0, 0.0]

    def test_write_then_read_signal(self, tmp_path):
        """Test that written vector signals are read back unchanged"""
        sig = Signal.from_array([[1.0, 2.0], [3.0, 4.0]])
        for name in ("s.csv", "s.json"):
            write_signal(sig, tmp_path / name)
            assert read_signal(tmp_path / name) == sig

    def test_empty_signal_file(self, tmp_path):
        """Test that a header-only CSV is rejected"""
        path = tmp_path / "empty.csv"
        path.write_text("k,u\n")
        with pytest.raises(ValueError, match="no samples"):
            read_signal(path)

    def test_columns_csv(self, tmp_path):
        """Test trajectory column output"""
        path = tmp_path / "traj.csv"
        write_columns_csv({"k": np.arange(2), "e1": np.array([0.5, 1.0])}, path)
        assert path.read_text().splitlines() == ["k,e1", "0,0.5", "1,1.0"]


class TestParallel:
    """Test the thread fan-out helper"""

    def test_worker_count(self):
        """Test that the worker count is capped by items and threads"""
        assert worker_count(10, threads=4) == 4
        assert worker_count(2, threads=8) == 2
        assert worker_count(0, threads=8) == 1

    def test_order_preserved(self):
        """Test that results come back in input order"""
        items = list(range(50))
        assert parallel_map(lambda x: x * x, items, threads=4) == [x * x for x in items]

    def test_uses_threads(self):
        """Test that more than one thread runs when allowed"""
        names = parallel_map(lambda _: threading.current_thread().name, range(8), threads=4)
        assert len(names) == 8

    def test_exceptions_propagate(self):
        """Test that a failing item raises in the caller"""

        def boom(x):
            if x == 3:
                raise ValueError("bad item")
            return x

        with pytest.raises(ValueError, match="bad item"):
            parallel_map(boom, range(5), threads=2)
