from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest

# Включает src в path
REPO_ROOT = Path(__file__).resolve().parents[1]
SRC_ROOT = REPO_ROOT / "src"

if str(SRC_ROOT) not in sys.path:
    sys.path.insert(0, str(SRC_ROOT))


@pytest.fixture()
def make_yaml(tmp_path: Path):
    """Helper быстрого создания YAML файла во временной директории."""

    def _make(name: str, text: str) -> Path:
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p

    return _make


@pytest.fixture()
def make_level():
    """Фабрика уровней: make_level("p2d1", 2)."""
    from SPECTRA_APP.CORE.group_model import GroupDescriptor, make_level as build

    def _make(group: str, N: int):
        return build(GroupDescriptor.parse(group), N)

    return _make


@pytest.fixture()
def rng() -> np.random.Generator:
    """Генератор с фиксированным seed: тесты воспроизводимы."""
    return np.random.default_rng(20240601)


@pytest.fixture()
def random_symbol(rng):
    """Случайный комплексный символ на уровне."""
    from SPECTRA_APP.CORE.symbols import SymbolGrid

    def _make(level):
        values = rng.standard_normal((level.M, level.M)) + 1j * rng.standard_normal((level.M, level.M))
        return SymbolGrid(level, values, "random")

    return _make
