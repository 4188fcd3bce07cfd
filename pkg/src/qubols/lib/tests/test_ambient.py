import logging
from fractions import Fraction

import numpy as np
import pytest

from qubols.lib import config_file, logger
from qubols.lib.env_config import get_env_seed
from qubols.lib.outputs import atomic_write_text, csv_text, write_json
from qubols.lib.utils import exact_array, format_number, system_run, to_fraction


@pytest.fixture
def config(tmp_path, monkeypatch):
    path = tmp_path / "qubols.ini"
    monkeypatch.setattr(config_file, "get_config_file", lambda: path)
    config_file.get_config.cache_clear()
    yield path
    config_file.get_config.cache_clear()


def test_config_values(config):
    config.write_text("[ANNEALER]\nmc_steps = 500\ntemp_min = 0.5\n[RUN]\nm = x\n")
    assert config_file.get_config_value("ANNEALER", "mc_steps", 10) == 500
    assert config_file.get_config_value("ANNEALER", "replicas", 8) == 8
    assert config_file.get_config_value("ANNEALER", "temp_min", None) == 0.5
    assert config_file.get_config_value("MISSING", "k", 2) == 2
    assert config_file.get_config_int("ANNEALER", "mc_steps") == 500
    assert config_file.get_config_int("RUN", "m") is None
    assert config_file.get_config_int("RUN", "iters") is None


def test_missing_config_file(config):
    assert config_file.get_config_section("ANNEALER") is None
    assert config_file.get_config_value("ANNEALER", "mc_steps", 7) == 7


def test_env_seed(monkeypatch):
    monkeypatch.delenv("QUBOLS_SEED", raising=False)
    assert get_env_seed() is None
    monkeypatch.setenv("QUBOLS_SEED", "12")
    assert get_env_seed() == 12
    monkeypatch.setenv("QUBOLS_SEED", "twelve")
    with pytest.raises(ValueError):
        get_env_seed()


def test_atomic_write_leaves_no_temporary_files(tmp_path):
    path = atomic_write_text(tmp_path / "sub" / "a.txt", "one\n")
    atomic_write_text(path, "two\n")
    assert path.read_text() == "two\n"
    assert list(path.parent.iterdir()) == [path]


def test_csv_and_json(tmp_path):
    assert csv_text(["a", "b"], [[1, "x,y"]]) == 'a,b\n1,"x,y"\n'
    path = write_json(tmp_path / "m.json", {"k": 1})
    assert path.read_text() == '{\n  "k": 1\n}\n'


def test_exact_numbers():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(np.int64(5)) == 5
    assert to_fraction(0.5) == Fraction(1, 2)
    with pytest.raises(ValueError):
        to_fraction(float("inf"))
    assert exact_array([[1, 2], [3, 4]]).dtype == np.int64
    mixed = exact_array([1, Fraction(1, 3)])
    assert mixed.dtype == object
    assert mixed[1] == Fraction(1, 3)
    assert format_number(Fraction(6, 2)) == "3"
    assert format_number(Fraction(1, 4)) == "0.25"


def test_exact_array_beyond_int64():
    values = exact_array([2**70, -(2**64), 1])
    assert values.dtype == object
    assert list(values) == [2**70, -(2**64), 1]
    assert exact_array([2**62]).dtype == np.int64


def test_system_run_exits_with_one():
    with pytest.raises(SystemExit) as exc_info, system_run():
        raise RuntimeError("boom")
    assert exc_info.value.code == 1


def test_configure_logging_installs_one_handler():
    logger.configure_logging()
    logger.configure_logging()
    names = [handler.get_name() for handler in logger.LOG.handlers]
    assert names.count("qubols-stderr") == 1


def test_debug_records_name_their_module():
    formatter = logger._Formatter()
    debug = logging.LogRecord("qubols.x", logging.DEBUG, "", 0, "hi", None, None)
    info = logging.LogRecord("qubols.x", logging.INFO, "", 0, "hi", None, None)
    assert formatter.format(debug) == "[DEBUG] qubols.x: hi"
    assert formatter.format(info) == "[INFO] hi"
