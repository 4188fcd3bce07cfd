import logging
from configparser import ConfigParser
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Optional

from platformdirs import user_config_dir

logger = logging.getLogger(__name__)


def get_config_file() -> Path:
    return Path(user_config_dir()) / "qubols.ini"


@lru_cache
def get_config() -> ConfigParser:
    config_parser = ConfigParser()
    file_to_read = get_config_file()
    if config_parser.read(file_to_read):
        logger.debug(f"Read config file: {file_to_read}")
    else:
        logger.debug(f"Config file not found: {file_to_read}")
    return config_parser


def get_config_section(section_name: str) -> Optional[Dict[str, Any]]:
    config = get_config()
    if section_name not in config:
        return None
    return dict(config[section_name])


def get_config_value(section_name: str, key: str, default: Any) -> Any:
    """Read one value, coerced to the type of ``default``.

    Falls back to ``default`` when the section or key is missing.
    """
    section = get_config_section(section_name)
    if section is None or key not in section:
        return default
    raw = section[key]
    if default is None:
        return float(raw)
    if isinstance(default, bool):
        return raw.lower() in ("1", "true", "yes", "on")
    try:
        return type(default)(raw)
    except ValueError:
        logger.warning(f"Ignoring invalid [{section_name}] {key} = {raw!r}")
        return default


def get_config_int(section_name: str, key: str) -> Optional[int]:
    """Integer value, or ``None`` when missing or invalid."""
    section = get_config_section(section_name)
    if section is None or key not in section:
        return None
    try:
        return int(section[key])
    except ValueError:
        logger.warning(f"Ignoring invalid [{section_name}] {key} = {section[key]!r}")
        return None
