"""
bench_service.py

transform-bench: время быстрого (scipy.fft) и прямого O(M²) преобразования
по уровням. Отчёт помечен как замер и пишется в timing.json вне manifest.
"""

import time
from collections.abc import Callable

import numpy as np
from loguru import logger

from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.SERVICES.common import level_rng, table
from SPECTRA_APP.APP.types import Subcommand
from SPECTRA_APP.CORE.group_model import GroupLevel, level_structure
from SPECTRA_APP.CORE.transform import GridFunction, forward, naive_forward


def best_time(fn: Callable[[], object], repeats: int) -> float:
    """Минимальное время из repeats запусков, с."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


class DefaultBenchService:
    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        config = data.context.app
        # замеры последовательно: пул потоков исказил бы время
        rows = [self.measure(level, config.seed, config.repeats) for level in data.levels]
        return [
            AnalysisReport(
                op=Subcommand.TRANSFORM_BENCH.value,
                level=None,
                inputs={"group": config.group, "levels": [level.N for level in data.levels]},
                table=table(("N", "M", "fast_s", "naive_s", "speedup", "max_error"), rows),
                timing=True,
            )
        ]

    def measure(self, level: GroupLevel, seed: int, repeats: int) -> tuple[int, int, float, float, float, float]:
        rng = level_rng(seed, level)
        f = GridFunction(level, rng.standard_normal(level.M) + 1j * rng.standard_normal(level.M))
        level_structure(level)  # прогрев кэша
        fast = best_time(lambda: forward(f), repeats)
        naive = best_time(lambda: naive_forward(f), repeats)
        error = float(np.max(np.abs(forward(f).values - naive_forward(f).values)))
        speedup = naive / fast if fast > 0 else float("inf")
        logger.info("{}: быстрое {:.3g} с, прямое {:.3g} с, ускорение {:.1f}×", level, fast, naive, speedup)
        return level.N, level.M, fast, naive, speedup, error
