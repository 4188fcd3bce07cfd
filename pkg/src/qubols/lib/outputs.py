import csv
import io
import json
import logging
import os
from pathlib import Path
from tempfile import NamedTemporaryFile
from typing import Any, Iterable, Mapping, Sequence

LOG = logging.getLogger(__name__)


def atomic_write_text(path: Path, text: str) -> Path:
    """Write through a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with NamedTemporaryFile(
        "w",
        encoding="utf-8",
        newline="",
        dir=path.parent,
        prefix=f".{path.name}.",
        suffix=".tmp",
        delete=False,
    ) as fp:
        fp.write(text)
        temp_name = fp.name
    try:
        os.replace(temp_name, path)
    except OSError:
        os.unlink(temp_name)
        raise
    LOG.debug(f"Wrote {path}")
    return path


def csv_text(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def write_json(path: Path, payload: Mapping[str, Any]) -> Path:
    return atomic_write_text(path, json.dumps(payload, indent=2) + "\n")
