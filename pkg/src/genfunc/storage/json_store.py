"""Atomic, lock-guarded JSON file storage."""

from __future__ import annotations

import dataclasses
import json
import math
import tempfile
import threading
from enum import Enum
from pathlib import Path
from typing import Any, Callable

import numpy as np
from pydantic import BaseModel


def jsonable(value: Any) -> Any:
    """Plain JSON types with non-finite floats spelled as strings ("inf", "-inf", "nan")."""
    if isinstance(value, BaseModel):
        return jsonable(value.model_dump())
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: jsonable(getattr(value, f.name)) for f in dataclasses.fields(value)}
    if isinstance(value, Enum):
        return jsonable(value.value)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return jsonable(value.tolist())
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (np.floating, float)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, Path):
        return str(value)
    return value


class JsonStore:
    """Read / write one JSON file with atomic replacement and a writer lock.

    Output is canonical: sorted keys, two-space indent, trailing newline.
    """

    def __init__(self, file_path: Path) -> None:
        self._path = file_path
        self._lock = threading.Lock()

    @property
    def path(self) -> Path:
        return self._path

    def _read(self) -> dict[str, Any]:
        if not self._path.exists() or self._path.stat().st_size == 0:
            return {}
        return json.loads(self._path.read_text(encoding="utf-8"))

    def _write(self, data: dict[str, Any]) -> None:
        self._path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self._path.parent, suffix=".tmp", prefix=".store_")
        try:
            with open(fd, "w", encoding="utf-8") as f:
                json.dump(jsonable(data), f, indent=2, sort_keys=True, allow_nan=False)
                f.write("\n")
            Path(tmp).replace(self._path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise

    def read(self) -> dict[str, Any]:
        """Load the JSON file. Returns ``{}`` if missing or empty."""
        with self._lock:
            return self._read()

    def write(self, data: dict[str, Any]) -> None:
        """Atomically write *data* to the JSON file."""
        with self._lock:
            self._write(data)

    def update(self, transform: Callable[[dict[str, Any]], dict[str, Any]]) -> None:
        """Read, apply *transform*, and write back atomically."""
        with self._lock:
            self._write(transform(self._read()))
