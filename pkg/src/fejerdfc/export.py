"""Deterministic JSON/CSV writers and the tolerance settings file."""

from __future__ import annotations

import configparser
import csv
import dataclasses
import math
import os
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

OUT_DIR_ENV = "FEJERDFC_OUT_DIR"


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def to_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits; non-finite floats become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        obj = {f.name: getattr(obj, f.name) for f in dataclasses.fields(obj)}
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj) if math.isfinite(obj) else "null"
    if isinstance(obj, str):
        import json

        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.integer, np.floating)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(to_json(v) for v in obj) + "]"
        items = [pad + to_json(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def write_csv(path: str | os.PathLike, header: Sequence[str], columns: Iterable[Sequence[float]]) -> Path:
    path = Path(path)
    cols = [np.asarray(c) for c in columns]
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in zip(*cols):
            w.writerow([str(int(v)) if isinstance(v, (np.integer, int)) else fmt_float(v) for v in row])
    return path


def resolve_out(path: str | None, default_name: str) -> Path:
    """Relative paths resolve against ``$FEJERDFC_OUT_DIR`` when set."""
    base = Path(os.environ.get(OUT_DIR_ENV, "."))
    p = Path(path) if path else Path(default_name)
    return p if p.is_absolute() else base / p


@dataclasses.dataclass(frozen=True)
class Settings:
    region_samples: int = 4096
    transient: int = 10_000
    detect_tol: float = 1e-6
    dedup_tol: float = 1e-4
    oracle_grid: int = 400
    oracle_grid_n3: int = 100
    oracle_levels: int = 3
    coverage_vectors: int = 200
    coverage_probes: int = 64
    univalence_samples: int = 8192


def load_settings(path: str | os.PathLike | None) -> Settings:
    """Read overrides from the ``[fejerdfc]`` section of an INI file."""
    if path is None:
        return Settings()
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise FileNotFoundError(f"config file not found: {path}")
    if not parser.has_section("fejerdfc"):
        return Settings()
    section = parser["fejerdfc"]
    kwargs = {}
    for f in dataclasses.fields(Settings):
        if f.name in section:
            cast = int if f.type in (int, "int") else float
            kwargs[f.name] = cast(section[f.name])
    unknown = set(section) - {f.name for f in dataclasses.fields(Settings)}
    if unknown:
        raise ValueError(f"unknown settings: {', '.join(sorted(unknown))}")
    return Settings(**kwargs)
