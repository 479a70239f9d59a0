import json
import math

import numpy as np
import pytest

from GENERAL.errors import FormatError, LocalFileAccessError
from SPECTRA_APP.ADAPTERS.persist import (
    MAGIC,
    import_symbol_csv,
    load_function,
    load_matrix,
    matrix_bytes,
    parse_matrix,
    save_function,
    save_matrix,
)
from SPECTRA_APP.CORE.calculus import OperatorMatrix
from SPECTRA_APP.CORE.group_model import level_structure
from SPECTRA_APP.CORE.transform import GridFunction, SpectrumFunction


def _random_matrix(level, rng):
    return OperatorMatrix(
        level, rng.standard_normal((level.M, level.M)) + 1j * rng.standard_normal((level.M, level.M)), "random"
    )


def test_matrix_file_bit_identical(tmp_path, make_level, rng):
    """Матрица сохраняется и читается без потерь, включая -0.0 и субнормальные числа."""
    level = make_level("vilenkin:2,3", 2)
    entries = rng.standard_normal((level.M, level.M)) + 0j
    entries[0, 0] = complex(-0.0, 5e-324)
    A = OperatorMatrix(level, entries, "random")
    path = tmp_path / "sub" / "a.pdos"
    save_matrix(A, path)

    loaded = load_matrix(path)
    assert loaded.level == level
    assert loaded.entries.tobytes() == A.entries.tobytes()
    assert math.copysign(1.0, loaded.entries[0, 0].real) == -1.0
    assert loaded.provenance == "a.pdos"


def test_matrix_header_layout(make_level, rng):
    """Заголовок: magic, версия, длина описания, JSON уровня, M."""
    level = make_level("p2d1", 2)
    data = matrix_bytes(_random_matrix(level, rng))
    assert data[:4] == MAGIC
    assert int.from_bytes(data[4:8], "little") == 1
    blob_length = int.from_bytes(data[8:12], "little")
    assert json.loads(data[12 : 12 + blob_length]) == {"kind": "padic", "p": 2, "d": 1, "factors": [], "N": 2}
    assert int.from_bytes(data[12 + blob_length : 20 + blob_length], "little") == 4
    assert len(data) == 20 + blob_length + 16 * 16


def test_matrix_bad_magic(make_level, rng):
    data = bytearray(matrix_bytes(_random_matrix(make_level("p2d1", 1), rng)))
    data[0:4] = b"XXXX"
    with pytest.raises(FormatError) as info:
        parse_matrix(bytes(data))
    assert info.value.offset == 0


@pytest.mark.parametrize("cut", [2, 6, 10, 20, 40])
def test_matrix_truncated(make_level, rng, cut):
    """Обрезанный файл любой длины — FormatError, а не падение."""
    data = matrix_bytes(_random_matrix(make_level("p2d1", 2), rng))
    with pytest.raises(FormatError):
        parse_matrix(data[: len(data) - cut] if cut > 16 else data[:cut])


def test_matrix_trailing_bytes(make_level, rng):
    data = matrix_bytes(_random_matrix(make_level("p2d1", 1), rng))
    with pytest.raises(FormatError):
        parse_matrix(data + b"\0")


def test_matrix_wrong_version(make_level, rng):
    data = bytearray(matrix_bytes(_random_matrix(make_level("p2d1", 1), rng)))
    data[4:8] = (2).to_bytes(4, "little")
    with pytest.raises(FormatError):
        parse_matrix(bytes(data))


def test_load_matrix_missing_file(tmp_path):
    with pytest.raises(LocalFileAccessError):
        load_matrix(tmp_path / "absent.pdos")


def test_function_file_roundtrip(tmp_path, make_level, rng):
    """Функции уровня пишутся в JSON и читаются с сохранением вида."""
    level = make_level("p3d1", 2)
    f = GridFunction(level, rng.standard_normal(level.M) + 1j * rng.standard_normal(level.M))
    phi = SpectrumFunction.delta(level, 3)
    save_function(f, tmp_path / "f.json")
    save_function(phi, tmp_path / "phi.json")

    loaded_f = load_function(tmp_path / "f.json")
    loaded_phi = load_function(tmp_path / "phi.json")
    assert isinstance(loaded_f, GridFunction)
    assert isinstance(loaded_phi, SpectrumFunction)
    np.testing.assert_array_equal(loaded_f.values, f.values)
    np.testing.assert_array_equal(loaded_phi.values, phi.values)


@pytest.mark.parametrize(
    "text",
    [
        "{not json",
        '{"kind": "matrix"}',
        '{"kind": "grid_function", "level": {"kind": "padic", "p": 2, "d": 1, "factors": [], "N": 1}, "values": [[1, 0]]}',
        '{"kind": "grid_function", "level": {"kind": "padic", "p": 4, "d": 1, "factors": [], "N": 1}, "values": []}',
        '{"kind": "grid_function", "level": {"kind": "padic", "p": 2, "d": 1, "factors": [], "N": 1}, "values": [1, 2]}',
    ],
)
def test_load_function_rejects_malformed(tmp_path, text):
    path = tmp_path / "f.json"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(FormatError):
        load_function(path)


def _symbol_csv(level, values, skip=None, extra=None):
    dft = level_structure(level).dft
    lines = ["x_index,dual_dft_index,re,im"]
    for x in range(level.M):
        for c in range(level.M):
            if (x, c) == skip:
                continue
            v = values[x, c]
            lines.append(f"{x},{dft[c]},{float(v.real)!r},{float(v.imag)!r}")
    if extra:
        lines.append(extra)
    return "\n".join(lines) + "\n"


def test_import_symbol_csv(tmp_path, make_level, random_symbol):
    """CSV с полным покрытием M×M переводится в канонический порядок."""
    level = make_level("p2d1", 2)
    sigma = random_symbol(level)
    path = tmp_path / "sigma.csv"
    path.write_text(_symbol_csv(level, sigma.values), encoding="utf-8")
    imported = import_symbol_csv(path, level)
    np.testing.assert_array_equal(imported.values, sigma.values)
    assert imported.provenance == "csv:sigma.csv"


def test_import_symbol_csv_missing_cell(tmp_path, make_level, random_symbol):
    level = make_level("p2d1", 2)
    path = tmp_path / "sigma.csv"
    path.write_text(_symbol_csv(level, random_symbol(level).values, skip=(1, 2)), encoding="utf-8")
    with pytest.raises(FormatError, match="нет ячейки"):
        import_symbol_csv(path, level)


def test_import_symbol_csv_duplicate_cell(tmp_path, make_level, random_symbol):
    level = make_level("p2d1", 2)
    path = tmp_path / "sigma.csv"
    path.write_text(_symbol_csv(level, random_symbol(level).values, extra="0,0,1.0,0.0"), encoding="utf-8")
    with pytest.raises(FormatError, match="duplicate"):
        import_symbol_csv(path, level)


@pytest.mark.parametrize(
    "text",
    ["x,dual_dft_index,re,im\n0,0,1,0\n", "x_index,dual_dft_index,re,im\n9,0,1,0\n", "x_index,dual_dft_index,re,im\na,0,1,0\n"],
)
def test_import_symbol_csv_bad_rows(tmp_path, make_level, text):
    path = tmp_path / "sigma.csv"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(FormatError):
        import_symbol_csv(path, make_level("p2d1", 1))
