"""Repositories mapping nets, mollifiers and reports to files under a run directory."""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Any

import numpy as np

from genfunc.errors import ConfigError, PreconditionViolated
from genfunc.fourier.transform import NORMALIZATION
from genfunc.grid.box import Box
from genfunc.grid.function import EpsilonNet, GridFunction, Side
from genfunc.grid.growth import GrowthProfile
from genfunc.mollifier.build import Mollifier, build_rho
from genfunc.storage.json_store import JsonStore, jsonable
from genfunc.utils.logging import log

FRAME_DTYPE = "<c8"


def _write_frame(path: Path, samples: np.ndarray) -> None:
    path.write_bytes(np.ascontiguousarray(samples, dtype=FRAME_DTYPE).tobytes(order="C"))


def _read_frame(path: Path, shape: tuple[int, ...]) -> np.ndarray:
    data = np.frombuffer(path.read_bytes(), dtype=FRAME_DTYPE)
    if data.size != math.prod(shape):
        raise ConfigError(f"{path} holds {data.size} samples, expected {math.prod(shape)}")
    return data.reshape(shape).astype(np.complex128)


class NetRepository:
    """One directory per net: ``meta.json`` plus ``frame_XXX.bin`` (complex64, little endian)."""

    def __init__(self, directory: Path) -> None:
        self._dir = directory

    def _path_for(self, name: str) -> Path:
        safe = name.replace("/", "_").replace(" ", "_")
        return self._dir / safe

    def save(self, name: str, net: EpsilonNet, extra: dict[str, Any] | None = None) -> Path:
        target = self._path_for(name)
        target.mkdir(parents=True, exist_ok=True)
        for i, frame in enumerate(net.frames):
            _write_frame(target / f"frame_{i:03d}.bin", frame.samples)
        JsonStore(target / "meta.json").write({
            "box": net.box.model_dump(),
            "ladder": list(net.ladder),
            "side": net.side.value,
            "conjugate": net.conjugate.model_dump() if net.conjugate else None,
            "normalization": NORMALIZATION,
            "dtype": "complex64-le",
            "frames": len(net.frames),
            **(extra or {}),
        })
        log.debug("Saved net %s (%d frames) to %s", name, len(net.frames), target)
        return target

    def load(self, name: str) -> EpsilonNet:
        target = self._path_for(name)
        meta = JsonStore(target / "meta.json").read()
        if not meta:
            raise ConfigError(f"no net stored at {target}")
        box = Box.model_validate(meta["box"])
        frames = [
            GridFunction(box, _read_frame(target / f"frame_{i:03d}.bin", box.shape))
            for i in range(meta["frames"])
        ]
        conjugate = Box.model_validate(meta["conjugate"]) if meta.get("conjugate") else None
        return EpsilonNet(box, tuple(meta["ladder"]), tuple(frames), Side(meta["side"]), conjugate)

    def list_nets(self) -> list[str]:
        if not self._dir.exists():
            return []
        return sorted(p.name for p in self._dir.iterdir() if (p / "meta.json").exists())


class MollifierRepository:
    """``mollifier.json`` (parameters and validation) with ``rho.bin`` and ``psi.bin``."""

    def __init__(self, directory: Path) -> None:
        self._dir = directory

    @property
    def meta_path(self) -> Path:
        return self._dir / "mollifier.json"

    def save(self, m: Mollifier) -> Path:
        self._dir.mkdir(parents=True, exist_ok=True)
        _write_frame(self._dir / "rho.bin", m.rho.samples)
        _write_frame(self._dir / "psi.bin", m.psi.samples)
        JsonStore(self.meta_path).write({
            "r1": m.r1,
            "r2": m.r2,
            "M": m.M,
            "reference": m.reference.model_dump(),
            "validation": m.validation.model_dump(),
            "validated_moment_order": m.validated_moment_order,
            "digest": m.digest(),
        })
        return self.meta_path

    def load(self) -> Mollifier:
        """Rebuild from the stored parameters; the digest must match the stored one."""
        meta = JsonStore(self.meta_path).read()
        if not meta:
            raise ConfigError(f"no mollifier stored at {self._dir}")
        box = Box.model_validate(meta["reference"])
        m = build_rho(box, meta["r1"], meta["r2"], meta["M"])
        if m.digest() != meta["digest"]:
            raise ConfigError(
                f"mollifier digest {m.digest()} differs from stored {meta['digest']}"
            )
        return m

    def load_samples(self) -> tuple[np.ndarray, np.ndarray]:
        """The stored (ρ, ψ) samples as written, in single precision."""
        box = Box.model_validate(JsonStore(self.meta_path).read()["reference"])
        return (
            _read_frame(self._dir / "rho.bin", box.shape),
            _read_frame(self._dir / "psi.bin", box.shape),
        )


class ReportRepository:
    """Stores each report kind as ``<kind>.json`` in one directory."""

    def __init__(self, directory: Path) -> None:
        self._dir = directory

    def _path_for(self, kind: str) -> Path:
        safe = kind.replace("/", "_").replace(" ", "_")
        return self._dir / f"{safe}.json"

    def save(self, kind: str, document: dict[str, Any]) -> Path:
        store = JsonStore(self._path_for(kind))
        store.write(document)
        return store.path

    def load(self, kind: str) -> dict[str, Any] | None:
        path = self._path_for(kind)
        if not path.exists():
            return None
        return JsonStore(path).read()

    def load_all(self) -> dict[str, dict[str, Any]]:
        if not self._dir.exists():
            return {}
        return {
            p.stem: JsonStore(p).read()
            for p in sorted(self._dir.glob("*.json"))
            if p.name != "config.json"
        }


def write_rows_csv(path: Path, rows: list[dict[str, Any]]) -> Path:
    """Rows with a shared header; −∞ is written as ``-inf``."""
    if not rows:
        raise PreconditionViolated(f"nothing to write to {path}")
    path.parent.mkdir(parents=True, exist_ok=True)
    header = list(rows[0])
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=header, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: jsonable(v) for k, v in row.items()})
    return path


def write_profile_csv(path: Path, profile: GrowthProfile) -> Path:
    """Columns index..., exponent, intercept, residual."""
    return write_rows_csv(path, profile.rows())
