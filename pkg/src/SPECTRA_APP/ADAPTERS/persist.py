"""persist.py

Побитно точное хранение матриц операторов и функций уровня, загрузка
внешних символов из CSV.

Формат матрицы (.pdos), все целые little-endian:

    b"PDOS" | u32 версия (=1) | u32 длина JSON | JSON описания уровня | u64 M |
    2·M·M binary64 (re, im чередуются, построчно)

Функции уровня хранятся в JSON: заголовок уровня и пары [re, im]
(repr float — кратчайшая запись, восстанавливающая число побитно).
"""

from __future__ import annotations

import csv
import json
import struct
from pathlib import Path
from typing import Any

import numpy as np
from loguru import logger

from GENERAL.errors import AppError, FormatError
from SPECTRA_APP.CORE.calculus import OperatorMatrix
from SPECTRA_APP.CORE.group_model import GroupDescriptor, GroupLevel, level_structure, make_level
from SPECTRA_APP.CORE.symbols import SymbolGrid
from SPECTRA_APP.CORE.transform import GridFunction, SpectrumFunction
from SPECTRA_APP.INFRA.utils import fs_call, safe_mkdir

MAGIC = b"PDOS"
FORMAT_VERSION = 1
_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_PAYLOAD_DTYPE = np.dtype("<c16")

CSV_COLUMNS = ("x_index", "dual_dft_index", "re", "im")


def _write_bytes(path: Path, data: bytes) -> None:
    safe_mkdir(path.parent)
    fs_call(path, "запись", lambda: path.write_bytes(data))


def _level_blob(level: GroupLevel) -> bytes:
    return json.dumps(level.to_json_dict(), sort_keys=True, separators=(",", ":")).encode("utf-8")


def _level_from_dict(data: Any, offset: int | None = None) -> GroupLevel:
    if not isinstance(data, dict):
        raise FormatError("описание уровня должно быть JSON-объектом", offset)
    try:
        descriptor, N = GroupDescriptor.from_json_dict(data)
        return make_level(descriptor, N)
    except AppError as e:
        raise FormatError(f"некорректное описание уровня: {e}", offset) from e


# ----------------------------
# Матрицы
# ----------------------------


def matrix_bytes(A: OperatorMatrix) -> bytes:
    blob = _level_blob(A.level)
    payload = np.ascontiguousarray(A.entries, dtype=_PAYLOAD_DTYPE).tobytes(order="C")
    return b"".join(
        (MAGIC, _U32.pack(FORMAT_VERSION), _U32.pack(len(blob)), blob, _U64.pack(A.level.M), payload)
    )


def save_matrix(A: OperatorMatrix, path: Path) -> None:
    _write_bytes(Path(path), matrix_bytes(A))
    logger.debug("Матрица {}×{} записана в {}", A.level.M, A.level.M, path)


def _take(data: bytes, offset: int, size: int, what: str) -> bytes:
    if len(data) < offset + size:
        raise FormatError(f"файл обрезан: нет поля {what}", offset)
    return data[offset : offset + size]


def parse_matrix(data: bytes, provenance: str = "file") -> OperatorMatrix:
    if data[:4] != MAGIC:
        raise FormatError("magic: ожидалось b'PDOS'", 0)
    offset = 4
    (version,) = _U32.unpack(_take(data, offset, 4, "версия"))
    if version != FORMAT_VERSION:
        raise FormatError(f"неподдерживаемая версия формата {version}", offset)
    offset += 4
    (blob_length,) = _U32.unpack(_take(data, offset, 4, "длина описания"))
    offset += 4
    blob = _take(data, offset, blob_length, "описание уровня")
    try:
        header = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise FormatError(f"описание уровня не является JSON: {e}", offset) from e
    level = _level_from_dict(header, offset)
    offset += blob_length

    (M,) = _U64.unpack(_take(data, offset, 8, "M"))
    if M != level.M:
        raise FormatError(f"M={M} не соответствует уровню {level}", offset)
    offset += 8

    expected = 16 * M * M
    available = len(data) - offset
    if available < expected:
        raise FormatError(f"файл обрезан: данных {available} байт из {expected}", offset + available)
    if available > expected:
        raise FormatError(f"лишние {available - expected} байт после данных", offset + expected)
    entries = np.frombuffer(data, dtype=_PAYLOAD_DTYPE, count=M * M, offset=offset).reshape(M, M)
    return OperatorMatrix(level, entries.astype(np.complex128), provenance)


def load_matrix(path: Path) -> OperatorMatrix:
    path = Path(path)
    data = fs_call(path, "чтение", path.read_bytes)
    return parse_matrix(data, provenance=path.name)


# ----------------------------
# Функции уровня
# ----------------------------


def complex_pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(v.real), float(v.imag)] for v in np.asarray(values, dtype=np.complex128)]


def function_payload(f: GridFunction | SpectrumFunction) -> dict[str, Any]:
    kind = "grid_function" if isinstance(f, GridFunction) else "spectrum_function"
    return {"kind": kind, "level": f.level.to_json_dict(), "values": complex_pairs(f.values)}


def save_function(f: GridFunction | SpectrumFunction, path: Path) -> None:
    text = json.dumps(function_payload(f), sort_keys=True, indent=2, allow_nan=False) + "\n"
    path = Path(path)
    safe_mkdir(path.parent)
    fs_call(path, "запись", lambda: path.write_text(text, encoding="utf-8", newline="\n"))


def load_function(path: Path) -> GridFunction | SpectrumFunction:
    path = Path(path)
    text = fs_call(path, "чтение", lambda: path.read_text(encoding="utf-8"))
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path.name}: некорректный JSON: {e.msg}", e.pos) from e
    if not isinstance(data, dict) or data.get("kind") not in ("grid_function", "spectrum_function"):
        raise FormatError(f"{path.name}: ожидался объект с kind grid_function/spectrum_function")
    level = _level_from_dict(data.get("level"))
    raw = data.get("values")
    try:
        values = np.array([complex(float(re), float(im)) for re, im in raw], dtype=np.complex128)
    except (TypeError, ValueError) as e:
        raise FormatError(f"{path.name}: values должны быть парами [re, im]") from e
    if values.shape != (level.M,):
        raise FormatError(f"{path.name}: {values.shape[0]} значений вместо M={level.M}")
    cls = GridFunction if data["kind"] == "grid_function" else SpectrumFunction
    return cls(level, values)


# ----------------------------
# Импорт символа
# ----------------------------


def import_symbol_csv(path: Path, level: GroupLevel) -> SymbolGrid:
    """Символ из CSV с колонками x_index, dual_dft_index, re, im (полное покрытие M×M).

    x_index — плоский индекс точки, dual_dft_index — DFT-индекс двойственного
    элемента; столбцы переводятся в канонический порядок.
    """
    path = Path(path)
    text = fs_call(path, "чтение", lambda: path.read_text(encoding="utf-8"))
    reader = csv.DictReader(text.splitlines())
    missing_columns = [c for c in CSV_COLUMNS if c not in (reader.fieldnames or ())]
    if missing_columns:
        raise FormatError(f"{path.name}: нет колонок {', '.join(missing_columns)}")

    M = level.M
    position = level_structure(level).position
    values = np.zeros((M, M), dtype=np.complex128)
    seen = np.zeros((M, M), dtype=bool)
    for row in reader:
        line = reader.line_num
        try:
            x = int(row["x_index"])
            m = int(row["dual_dft_index"])
            value = complex(float(row["re"]), float(row["im"]))
        except (TypeError, ValueError):
            raise FormatError(f"{path.name}, строка {line}: bad index или значение") from None
        if not (0 <= x < M and 0 <= m < M):
            raise FormatError(f"{path.name}, строка {line}: bad index (x={x}, ξ={m}) вне [0, {M})")
        c = position[m]
        if seen[x, c]:
            raise FormatError(f"{path.name}, строка {line}: duplicate ячейка (x={x}, ξ={m})")
        seen[x, c] = True
        values[x, c] = value

    if not seen.all():
        x, c = (int(i[0]) for i in np.nonzero(~seen))
        m = int(level_structure(level).dft[c])
        raise FormatError(f"{path.name}: нет ячейки (x={x}, ξ={m})")
    logger.debug("Импортирован символ {} для {}", path.name, level)
    return SymbolGrid(level, values, f"csv:{path.name}")
