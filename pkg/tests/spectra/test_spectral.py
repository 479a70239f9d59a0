import math
from fractions import Fraction

import numpy as np
import pytest

from GENERAL.errors import BadExponent, EmptyGrid, NumericalFailure, SymbolZero
from SPECTRA_APP.APP.types import Verdict
from SPECTRA_APP.CORE.calculus import OperatorMatrix, assemble, extract_symbol
from SPECTRA_APP.CORE.group_model import level_structure
from SPECTRA_APP.CORE.spectral import (
    SingularSpectrum,
    column_norm_spectrum,
    compactness_verdict,
    dixmier_functional,
    eigenvalues,
    elliptic_check,
    fredholm_cloud,
    fredholm_parametrix,
    gohberg_bound_check,
    gohberg_dsigma,
    hausdorff,
    hs_identity_check,
    inverse_residual,
    lorentz_norm,
    minimal_arc,
    nuclear_bound,
    op_norm_lr_probe,
    sandwich_check,
    schatten_norm,
    sectorial_check,
    shell_aligned_grid,
    singular_values,
    symbol_schatten_functional,
    weyl_count,
    weyl_reference,
)
from SPECTRA_APP.CORE.symbol_parser import parse_symbol
from SPECTRA_APP.CORE.symbols import SymbolGrid, eval_grid, evaluate, parse_builtin


def _builtin(text, level):
    return eval_grid(parse_builtin(text), level)


def test_eigenvalues_of_vladimirov(make_level):
    """Собственные числа D^1 на Z_2 при N=2: {0, 2, 4, 4}."""
    level = make_level("p2d1", 2)
    spectrum = eigenvalues(assemble(_builtin("vladimirov:s=1", level)))
    assert spectrum.values.real.tolist() == [4.0, 4.0, 2.0, 0.0]


def test_singular_values_general_matrix(make_level, random_symbol):
    """s-числа по убыванию и равенство Σ s_k² = ‖A‖²_HS."""
    level = make_level("p3d1", 2)
    A = assemble(random_symbol(level))
    s = singular_values(A).s
    assert np.all(np.diff(s) <= 0)
    assert float(np.sum(s**2)) == pytest.approx(float(np.sum(np.abs(A.entries) ** 2)), rel=1e-10)


def test_singular_spectrum_rejects_unsorted(make_level):
    with pytest.raises(NumericalFailure):
        SingularSpectrum(make_level("p2d1", 1), np.array([1.0, 2.0]))


def test_hs_identity(make_level, random_symbol):
    """‖T_σ‖²_HS = Σ_ξ ‖σ(·, ξ)‖²_{L²}; для bessel:s=-1 на Z_2, N=2 — 1.375."""
    level = make_level("p2d1", 2)
    identity = hs_identity_check(_builtin("bessel:s=-1", level))
    assert identity.lhs == pytest.approx(1.375)
    assert identity.rhs == pytest.approx(1.375)

    general = hs_identity_check(random_symbol(make_level("vilenkin:2,3", 2)))
    assert general.relative < 1e-12


def test_schatten_and_symbol_functional(make_level):
    """Для мультипликатора нормы Шаттена совпадают с функционалом символа."""
    level = make_level("p2d1", 4)
    sigma = _builtin("bessel:s=-1", level)
    spectrum = singular_values(assemble(sigma))
    for gamma in (1.0, 2.0, 3.0):
        assert schatten_norm(spectrum, gamma) == pytest.approx(symbol_schatten_functional(sigma, gamma))
    assert schatten_norm(spectrum, math.inf) == 1.0
    with pytest.raises(BadExponent):
        schatten_norm(spectrum, 0.5)


def test_dixmier_partial_sums_per_shell(make_level):
    """Для ⟨ξ⟩^{-1} на Z_2 каждая оболочка добавляет 1/2: частичная сумма до оболочки J равна 1 + J/2."""
    level = make_level("p2d1", 10)
    spectrum = SingularSpectrum.from_values(level, level_structure(level).brackets ** -1.0)
    result = dixmier_functional(spectrum)
    assert len(result.rows) == level.M - 1
    for J in range(1, 11):
        row = result.rows[2**J - 2]
        assert row.N == 2**J - 1
        assert row.partial == pytest.approx(1 + J / 2)
        assert row.ratio == pytest.approx((1 + J / 2) / math.log(2**J))
    assert result.value == max(row.ratio for row in result.rows)


def test_dixmier_of_assembled_bessel_through_shell_12(make_level):
    """⟨ξ⟩^{-1} на Z_2: Σ_{k<2^J} s_k = 1 + J/2 точно в рациональных числах при J ≤ 12.

    До N = 10 s-числа берутся из собранной матрицы, на N = 12 — из модулей мультипликатора.
    Отношение в строке 2^J − 1 близко к 1/(2 ln 2) + 1.4427/J.
    """
    assembled = singular_values(assemble(_builtin("bessel:s=-1", make_level("p2d1", 10))))
    deep = make_level("p2d1", 12)
    multiplier = SingularSpectrum.from_values(deep, level_structure(deep).brackets ** -1.0)
    for spectrum, top in ((assembled, 10), (multiplier, 12)):
        result = dixmier_functional(spectrum)
        for J in range(1, top + 1):
            assert sum(Fraction(float(s)) for s in spectrum.s[: 2**J]) == 1 + Fraction(J, 2)
            row = result.rows[2**J - 2]
            assert row.N == 2**J - 1
            if J >= 8:
                assert row.ratio == pytest.approx(1 / (2 * math.log(2)) + 1.4427 / J, rel=0.01)


def test_dixmier_single_point(make_level):
    """При M = 1 берётся N = 1 с единственным s-числом."""
    level = make_level("p2d1", 0)
    result = dixmier_functional(SingularSpectrum(level, np.array([2.0])))
    assert [row.N for row in result.rows] == [1]
    assert result.value == pytest.approx(2.0 / math.log(2))


def test_lorentz_norm(make_level):
    level = make_level("p2d1", 1)
    spectrum = SingularSpectrum(level, np.array([2.0, 1.0]))
    assert lorentz_norm(spectrum, 2.0, 2.0) == pytest.approx(schatten_norm(spectrum, 2.0))
    assert lorentz_norm(spectrum, 1.0, math.inf) == pytest.approx(2.0)
    with pytest.raises(BadExponent):
        lorentz_norm(spectrum, 0.0, 1.0)


def test_nuclear_bound(make_level):
    level = make_level("p2d1", 3)
    sigma = _builtin("bessel:s=-2", level)
    brackets = level_structure(level).brackets
    assert nuclear_bound(sigma, 1.0, 2.0) == pytest.approx(float(np.sum(brackets**-2.0)))
    with pytest.raises(BadExponent):
        nuclear_bound(sigma, 1.5, 2.0)


def test_sandwich_random_matrix_is_majorized(make_level, random_symbol):
    """Для произвольной матрицы s-числа мажорируют нормы столбцов."""
    level = make_level("p2d1", 4)
    sigma = random_symbol(level)
    report = sandwich_check(assemble(sigma), sigma)
    assert report.majorized
    assert not report.multiplier
    assert report.verdict is Verdict.HOLDS


@pytest.mark.slow
def test_sandwich_majorization_on_random_matrices(make_level, rng):
    """1000 случайных матриц M = 16: s-числа мажорируют нормы столбцов, s_0 ≥ c_0."""
    level = make_level("p2d1", 4)
    for _ in range(1000):
        entries = rng.standard_normal((level.M, level.M)) + 1j * rng.standard_normal((level.M, level.M))
        A = OperatorMatrix(level, entries, "random")
        report = sandwich_check(A, extract_symbol(A))
        assert report.majorized
        assert report.verdict is Verdict.HOLDS


def test_sandwich_pointwise_counterexample(make_level):
    """[[1, 1], [0, 0]]: s = (√2, 0), c = (1, 1) — мажорирование есть, поточечной оценки нет."""
    level = make_level("p2d1", 1)
    A = OperatorMatrix(level, np.array([[1.0, 1.0], [0.0, 0.0]]), "counterexample")
    report = sandwich_check(A, extract_symbol(A))
    np.testing.assert_allclose(report.s, [math.sqrt(2), 0.0], atol=1e-12)
    np.testing.assert_allclose(report.c, [1.0, 1.0], atol=1e-12)
    assert report.majorized
    assert not report.pointwise
    assert report.verdict is Verdict.HOLDS


def test_sandwich_multiplier_is_exact(make_level):
    level = make_level("p3d1", 2)
    sigma = _builtin("vladimirov:s=-1", level)
    report = sandwich_check(assemble(sigma), sigma)
    assert report.multiplier and report.multiplier_exact
    assert report.verdict is Verdict.HOLDS


def test_gohberg_dsigma_and_verdict(make_level):
    """Максимумы по оболочкам для ⟨ξ⟩^{-1}: 1, 1/2, 1/4 — убывание."""
    table = gohberg_dsigma(_builtin("bessel:s=-1", make_level("p2d1", 2)))
    assert table.shell_sups == (1.0, 0.5, 0.25)
    assert table.d_estimate == 0.25
    assert compactness_verdict(table.shell_sups) is Verdict.DECAYING
    assert compactness_verdict([1.0, 1.0, 1.0]) is Verdict.NON_DECAYING
    assert compactness_verdict([1.0, 0.0]) is Verdict.DECAYING
    assert compactness_verdict([]) is Verdict.NON_DECAYING


def test_gohberg_bound_for_identity(make_level, rng):
    """Для σ ≡ 1 граница равна 1 и выполняется во всех испытаниях."""
    level = make_level("p2d1", 3)
    sigma = SymbolGrid.from_multiplier(level, np.ones(level.M), "1")
    probe = gohberg_bound_check(sigma, trials=20, rng=rng)
    assert probe.bound == pytest.approx(1.0)
    assert len(probe.op_norms) == 20
    assert probe.ranks[0] == 0
    assert probe.min_slack >= -1e-9
    assert probe.verdict is Verdict.HOLDS
    with pytest.raises(BadExponent):
        gohberg_bound_check(sigma, trials=0, rng=rng)


@pytest.mark.parametrize("source, bound", [("bessel:s=-1", 1 / 16), ("1", 1.0)])
def test_gohberg_bound_over_100_trials(make_level, rng, source, bound):
    """‖A − K‖ ≥ max норм столбцов внешней оболочки для 100 случайных K ранга ≤ M/2."""
    level = make_level("p2d1", 4)
    sigma = evaluate(parse_symbol(source), level) if source == "1" else _builtin(source, level)
    probe = gohberg_bound_check(sigma, trials=100, rng=rng)
    assert probe.bound == pytest.approx(bound)
    assert len(probe.op_norms) == 100
    assert all(norm >= bound - 1e-9 for norm in probe.op_norms)
    assert max(probe.ranks) <= level.M // 2
    assert probe.verdict is Verdict.HOLDS


def test_hausdorff():
    assert hausdorff(np.array([0j, 1 + 0j]), np.array([0j])) == pytest.approx(1.0)
    assert hausdorff(np.empty(0, complex), np.empty(0, complex)) == 0.0
    assert math.isinf(hausdorff(np.empty(0, complex), np.array([1j])))


def test_fredholm_cloud_of_decaying_symbol(make_level):
    """Для ⟨ξ⟩^{-1} расстояние между A_n и A_{n+1} равно p^{-n} − p^{-(n+1)}."""
    level = make_level("p2d1", 4)
    cloud = fredholm_cloud(_builtin("bessel:s=-1", level), range(level.shell_count))
    assert cloud.nested
    for n, distance in enumerate(cloud.distances):
        assert distance == pytest.approx(2.0**-n - 2.0 ** -(n + 1))
    np.testing.assert_allclose(cloud.spec_f, [2.0**-4])
    assert not cloud.stabilized


def test_fredholm_cloud_of_sign_function(make_level):
    """g(x) = ±1: все облака {−1, 1}, облака стабилизированы."""
    level = make_level("p2d1", 3)
    sigma = evaluate(parse_symbol("1 - 2 * digit(x, 0)"), level)
    cloud = fredholm_cloud(sigma, [0, 1, 2, 3])
    assert all(d == 0.0 for d in cloud.distances)
    assert cloud.stabilized
    np.testing.assert_allclose(cloud.spec_f, [-1.0, 1.0])


def test_fredholm_cloud_rejects_bad_cutoffs(make_level):
    sigma = _builtin("bessel:s=-1", make_level("p2d1", 2))
    with pytest.raises(EmptyGrid):
        fredholm_cloud(sigma, [])
    with pytest.raises(BadExponent):
        fredholm_cloud(sigma, [-1, 0])


def test_fredholm_parametrix(make_level):
    """λ в облаке — Fredholm-спектр; вне облака параметрикс даёт малый остаток."""
    level = make_level("p2d1", 3)
    sigma = evaluate(parse_symbol("1 - 2 * digit(x, 0)"), level)
    inside = fredholm_parametrix(sigma, 1.0, cutoff=3)
    assert inside.verdict is Verdict.FREDHOLM_SPECTRUM
    assert inside.residual == {}

    outside = fredholm_parametrix(sigma, 3.0, cutoff=0)
    assert outside.verdict is Verdict.RESOLVENT
    assert outside.distance == pytest.approx(2.0)
    assert max(outside.residual.values()) < 1e-10


@pytest.mark.parametrize("group, N, s", [("p2d1", 6, 1.0), ("p2d1", 6, 2.0), ("p3d1", 4, 1.0), ("p2d2", 4, 1.0)])
def test_weyl_slope_of_vladimirov(make_level, group, N, s):
    """Наклон log N(t) по log t для D^s совпадает с d/s."""
    level = make_level(group, N)
    spectrum = eigenvalues(assemble(_builtin(f"vladimirov:s={s}", level)))
    reference = weyl_reference(level.descriptor.d, s)
    table = weyl_count(spectrum, shell_aligned_grid(level, s), reference)
    assert table.slope == pytest.approx(reference, rel=1e-9)
    assert table.rows[-1][1] == level.M


def test_weyl_reference_and_grid_checks(make_level):
    assert weyl_reference(1, 2.0) == 0.5
    assert weyl_reference(1, 1.0, alpha=0.5) == pytest.approx(2.5)
    with pytest.raises(BadExponent):
        weyl_reference(1, 0.0)
    with pytest.raises(BadExponent):
        shell_aligned_grid(make_level("p2d1", 1), -1.0)


def test_weyl_count_without_slope(make_level):
    """Меньше двух положительных точек сетки — наклон не определён."""
    level = make_level("p2d1", 1)
    spectrum = eigenvalues(OperatorMatrix.identity(level))
    table = weyl_count(spectrum, [1.0])
    assert table.rows == ((1.0, 2),)
    assert table.slope is None
    with pytest.raises(EmptyGrid):
        weyl_count(spectrum, [])


def test_minimal_arc():
    assert minimal_arc(np.array([0.0, math.pi / 4]))[2] == pytest.approx(math.pi / 4)
    start, end, width = minimal_arc(np.array([3.0, -3.0]))
    assert (start, end) == (3.0, -3.0)
    assert width == pytest.approx(2 * math.pi - 6.0)


def test_sectorial_check(make_level):
    level = make_level("p2d1", 2)
    assert sectorial_check(_builtin("bessel:s=1", level), 0).verdict is Verdict.SECTORIAL
    sign = evaluate(parse_symbol("1 - 2 * digit(x, 0)"), level)
    assert sectorial_check(sign, 0).verdict is Verdict.NOT_SECTORIAL

    report = sectorial_check(_builtin("vladimirov:s=1", level), 0)
    assert report.zeros == level.M
    assert report.verdict is Verdict.SECTORIAL

    zero = SymbolGrid.from_multiplier(level, np.zeros(level.M), "0")
    assert sectorial_check(zero, 0).verdict is Verdict.NOT_SECTORIAL


def test_elliptic_check(make_level):
    level = make_level("p2d1", 3)
    report = elliptic_check(_builtin("bessel:s=1", level), m=1.0, shell_min=0)
    assert report.lower_bound == pytest.approx(1.0)
    assert report.verdict is Verdict.HOLDS
    assert elliptic_check(_builtin("vladimirov:s=1", level), 1.0, 0).verdict is Verdict.FAILS
    assert elliptic_check(_builtin("vladimirov:s=1", level), 1.0, 1).verdict is Verdict.HOLDS
    with pytest.raises(EmptyGrid):
        elliptic_check(_builtin("bessel:s=1", level), 1.0, 4)


def test_inverse_residual(make_level, rng):
    """Для мультипликатора и для функции от x обратный символ точен."""
    level = make_level("p2d1", 3)
    multiplier = inverse_residual(_builtin("bessel:s=1", level), -1.0)
    assert multiplier.report.max_abs == pytest.approx(0.0, abs=1e-15)

    g = SymbolGrid.from_function(level, rng.uniform(1.0, 2.0, level.M), "g")
    assert max(inverse_residual(g, 0.0).report.norms.values()) < 1e-10


def test_inverse_residual_rejects_vanishing_symbol(make_level):
    """σ − λ = 0 в узле сетки — SymbolZero."""
    with pytest.raises(SymbolZero):
        inverse_residual(_builtin("vladimirov:s=1", make_level("p2d1", 2)), 2.0)


def test_op_norm_lr_probe(make_level, rng):
    """Для тождественного оператора оценка снизу равна 1."""
    level = make_level("p2d1", 3)
    probe = op_norm_lr_probe(OperatorMatrix.identity(level), 3.0, trials=5, rng=rng)
    assert probe.character_bound == pytest.approx(1.0)
    assert probe.random_bound == pytest.approx(1.0)
    assert probe.lower_bound == pytest.approx(1.0)
    with pytest.raises(BadExponent):
        op_norm_lr_probe(OperatorMatrix.identity(level), 0.5, trials=1, rng=rng)


def test_column_norm_spectrum_sorted(make_level):
    level = make_level("p2d1", 2)
    spectrum = column_norm_spectrum(_builtin("vladimirov:s=1", level))
    assert spectrum.s.tolist() == [4.0, 4.0, 2.0, 0.0]
