"""bundle.py

Пакет отчётов: каталог с JSON/CSV отчётами, матрицами и функциями уровня
и manifest.json с хэшем SHA-256 каждого файла.

Детерминизм: ключи JSON сортируются, числа float пишутся кратчайшей точной
записью (repr), CSV — UTF-8 с окончаниями LF. Время запуска и замеры
производительности пишутся в timestamps.json / timing.json, которые в
manifest не входят.
"""

from __future__ import annotations

import csv
import dataclasses
import hashlib
import io
import json
import math
import threading
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

from GENERAL.errors import FormatError
from SPECTRA_APP.ADAPTERS.persist import function_payload, matrix_bytes
from SPECTRA_APP.APP.dto import AnalysisReport
from SPECTRA_APP.INFRA.utils import fs_call, safe_mkdir

ARTIFACT_VERSION = "1"
HASH_ALGORITHM = "sha256"
MANIFEST = "manifest.json"
UNTRACKED = frozenset({MANIFEST, "timestamps.json", "timing.json"})


def jsonable(obj: Any) -> Any:
    """Приводит значение к типам JSON; complex → [re, im], неконечные float → строки."""
    match obj:
        case None | bool() | str():
            return obj
        case Enum():
            return jsonable(obj.value)
        case int() | np.integer():
            return int(obj)
        case float() | np.floating():
            value = float(obj)
            if math.isfinite(value):
                return value
            return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
        case complex() | np.complexfloating():
            return [jsonable(obj.real), jsonable(obj.imag)]
        case Fraction():
            return str(obj)
        case Path():
            return obj.as_posix()
        case np.ndarray():
            return [jsonable(v) for v in obj.tolist()]
        case dict():
            return {str(jsonable(k)) if not isinstance(k, str) else k: jsonable(v) for k, v in obj.items()}
        case list() | tuple() | set() | frozenset():
            return [jsonable(v) for v in obj]
        case _ if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
            return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    return str(obj)


def dumps(payload: Any) -> str:
    return json.dumps(jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def csv_cell(value: Any) -> str:
    value = jsonable(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, list):
        return " ".join(csv_cell(v) for v in value)
    return "" if value is None else str(value)


def csv_text(header: tuple[str, ...], rows: tuple[tuple[Any, ...], ...]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    for row in rows:
        writer.writerow([csv_cell(v) for v in row])
    return buffer.getvalue()


def file_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class ReportBundle:
    """Каталог пакета отчётов; записи сериализуются блокировкой."""

    def __init__(self, root: Path) -> None:
        self.root = Path(root)
        self._files: dict[str, str] = {}
        self._lock = threading.Lock()
        safe_mkdir(self.root)

    @property
    def files(self) -> dict[str, str]:
        return dict(self._files)

    def _write(self, relpath: str, data: bytes, tracked: bool = True) -> Path:
        path = self.root / relpath
        with self._lock:
            safe_mkdir(path.parent)
            fs_call(path, "запись", lambda: path.write_bytes(data))
            if tracked:
                self._files[relpath] = file_digest(data)
        logger.info("Записан {}", path)
        return path

    def add_json(self, relpath: str, payload: Any, tracked: bool = True) -> Path:
        return self._write(relpath, dumps(payload).encode("utf-8"), tracked)

    def add_csv(self, relpath: str, header: tuple[str, ...], rows: tuple[tuple[Any, ...], ...]) -> Path:
        return self._write(relpath, csv_text(header, rows).encode("utf-8"))

    def add_bytes(self, relpath: str, data: bytes) -> Path:
        return self._write(relpath, data)

    def write_report(self, report: AnalysisReport) -> None:
        """JSON + CSV отчёта и его артефакты в каталоге report.location."""
        if report.timing:
            self.add_json("timing.json", report.payload(), tracked=False)
            return
        base = f"{report.location}/{report.op}"
        self.add_json(f"{base}.json", report.payload())
        if report.table is not None:
            self.add_csv(f"{base}.csv", report.table.header, report.table.rows)
        for name, matrix in sorted(report.matrices.items()):
            self.add_bytes(f"{report.location}/{name}.pdos", matrix_bytes(matrix))
        for name, function in sorted(report.functions.items()):
            self.add_json(f"{report.location}/{name}.json", function_payload(function))

    def finalize(self, config_echo: dict[str, Any], timestamps: dict[str, Any] | None = None) -> Path:
        """Пишет manifest.json (и timestamps.json вне manifest)."""
        if timestamps is not None:
            self.add_json("timestamps.json", timestamps, tracked=False)
        manifest = {
            "artifact_version": ARTIFACT_VERSION,
            "algorithm": HASH_ALGORITHM,
            "config": config_echo,
            "files": dict(sorted(self._files.items())),
        }
        return self.add_json(MANIFEST, manifest, tracked=False)


def verify_bundle(root: Path) -> list[str]:
    """Пересчитывает хэши manifest.json; возвращает список расхождений."""
    root = Path(root)
    manifest_path = root / MANIFEST
    text = fs_call(manifest_path, "чтение", lambda: manifest_path.read_text(encoding="utf-8"))
    try:
        manifest = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{MANIFEST}: некорректный JSON: {e.msg}", e.pos) from e
    if not isinstance(manifest, dict) or not isinstance(manifest.get("files"), dict):
        raise FormatError(f"{MANIFEST}: нет раздела files")
    if manifest.get("algorithm") != HASH_ALGORITHM:
        raise FormatError(f"{MANIFEST}: неизвестный алгоритм {manifest.get('algorithm')!r}")

    problems: list[str] = []
    for relpath, expected in sorted(manifest["files"].items()):
        path = root / relpath
        if not path.is_file():
            problems.append(f"{relpath}: файл отсутствует")
            continue
        actual = file_digest(fs_call(path, "чтение", path.read_bytes))
        if actual != expected:
            problems.append(f"{relpath}: хэш {actual} не совпадает с {expected}")

    listed = set(manifest["files"])
    for path in sorted(p for p in root.rglob("*") if p.is_file()):
        relpath = path.relative_to(root).as_posix()
        if relpath not in listed and relpath not in UNTRACKED:
            problems.append(f"{relpath}: файл не указан в manifest")
    return problems
