import pytest

from GENERAL.errors import ConfigError, SymbolZero, VerifyError
from GENERAL.loadconfig import build_config
from SPECTRA_APP.ADAPTERS.bundle import ReportBundle
from SPECTRA_APP.APP.controller import SpectraController
from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport, RuntimeContext
from SPECTRA_APP.APP.SERVICES.bench_service import DefaultBenchService
from SPECTRA_APP.APP.SERVICES.calculus_service import DefaultCalculusService
from SPECTRA_APP.APP.SERVICES.compactness_service import DefaultCompactnessService
from SPECTRA_APP.APP.SERVICES.hoermander_service import DefaultHoermanderService
from SPECTRA_APP.APP.SERVICES.operator_service import DefaultOperatorService
from SPECTRA_APP.APP.SERVICES.report_service import report_item
from SPECTRA_APP.APP.SERVICES.spectrum_service import DefaultSpectrumService
from SPECTRA_APP.APP.SERVICES.symbol_loader import DefaultSymbolLoader
from SPECTRA_APP.APP.SERVICES.verify_service import DefaultVerifyService
from SPECTRA_APP.APP.SERVICES.weyl_service import DefaultWeylService
from SPECTRA_APP.APP.types import StatusReport, Subcommand, Verdict
from SPECTRA_APP.CONFIG.config import SpectraConfig
from SPECTRA_APP.CORE.group_model import make_level


def _input(command: Subcommand, **keys) -> AnalysisInput:
    app = build_config(keys, SpectraConfig)
    context = RuntimeContext(app=app, command=command)
    levels = tuple(make_level(app.descriptor, N) for N in app.level_numbers)
    return AnalysisInput(context, levels, DefaultSymbolLoader(app))


def test_symbol_loader_sources():
    """Символ строится из выражения или встроенного символа; без источника — ConfigError."""
    data = _input(Subcommand.SVD, level=2, builtin="vladimirov:s=1")
    level = data.levels[0]
    assert data.symbols.load(level).values[0].tolist() == [0, 2, 4, 4]
    assert data.symbols.describe() == "builtin:vladimirov:s=1"
    assert data.symbols.describe(second=True) == ""
    with pytest.raises(ConfigError):
        data.symbols.load(level, second=True)


def test_assemble_report():
    data = _input(Subcommand.ASSEMBLE, level=2, builtin="vladimirov:s=1")
    [report] = DefaultOperatorService().run(data)
    assert report.op == "assemble"
    assert report.summary["diagonal"] is True
    assert report.summary["extract_error"] < 1e-12
    assert report.summary["parseval_error"] < 1e-12
    assert set(report.matrices) == {"operator"}
    assert report.inputs["symbol"] == "builtin:vladimirov:s=1"


def test_apply_with_function_expression():
    """Быстрый путь и прямая сумма квантования совпадают."""
    data = _input(Subcommand.APPLY, level=3, symbol="digit(x, 0) * norm_xi + 1", function_expr="norm_x")
    [report] = DefaultOperatorService().run(data)
    assert report.summary["direct_deviation"] < 1e-10
    assert set(report.functions) == {"input", "output"}
    assert len(report.table.rows) == 8


def test_apply_requires_function():
    data = _input(Subcommand.APPLY, level=1, builtin="vladimirov:s=1")
    with pytest.raises(ConfigError):
        DefaultOperatorService().run(data)


def test_svd_summary():
    data = _input(Subcommand.SVD, level=2, builtin="vladimirov:s=1")
    [report] = DefaultSpectrumService().run(data)
    assert report.summary == {"s_max": 4.0, "rank": 3}
    assert [row[1] for row in report.table.rows] == [4.0, 4.0, 2.0, 0.0]


def test_schatten_falls_back_to_column_norms():
    """При M > matrix_cap спектр берётся по нормам столбцов символа."""
    small = DefaultSpectrumService().run(_input(Subcommand.SCHATTEN, level=2, builtin="vladimirov:s=1"))[0]
    large = DefaultSpectrumService().run(
        _input(Subcommand.SCHATTEN, level=2, builtin="vladimirov:s=1", matrix_cap=2)
    )[0]
    assert small.summary["spectrum_source"] == "svd"
    assert large.summary["spectrum_source"] == "column_norms"
    assert large.summary["schatten_norm"] == pytest.approx(small.summary["schatten_norm"])


def test_hs_identity_holds():
    [report] = DefaultSpectrumService().run(_input(Subcommand.HS_IDENTITY, level=3, symbol="norm_x + norm_xi"))
    assert report.verdict is Verdict.HOLDS


def test_gohberg_adds_history_report():
    """Для нескольких уровней добавляется сводка d_σ по N."""
    data = _input(Subcommand.GOHBERG, levels="1..3", builtin="vladimirov:s=-1", trials=3)
    reports = DefaultCompactnessService().run(data)
    assert [r.location for r in reports] == ["N1", "N2", "N3", "all"]
    history = reports[-1]
    assert [row[0] for row in history.table.rows] == [1, 2, 3]
    assert history.verdict in (Verdict.DECAYING, Verdict.NON_DECAYING)


def test_fredholm_with_parametrix():
    data = _input(Subcommand.FREDHOLM, level=2, builtin="vladimirov:s=-1", lam="1")
    [report] = DefaultCompactnessService().run(data)
    assert [row[0] for row in report.table.rows] == [0, 1, 2]
    assert report.summary["parametrix"]["cutoff"] == 2
    assert report.summary["parametrix"]["distance"] == pytest.approx(0.75)
    assert report.verdict is Verdict.RESOLVENT


def test_weyl_history_for_several_levels():
    data = _input(Subcommand.WEYL, levels="4..6", builtin="vladimirov:s=1")
    reports = DefaultWeylService().run(data)
    assert len(reports) == 4
    assert reports[-1].level is None
    assert [row[0] for row in reports[-1].table.rows] == [4, 5, 6]
    assert reports[-1].summary["reference"] == 1.0


def test_weyl_order_follows_builtin():
    """Без --order порядок берётся из s встроенного символа: для D² наклон 1/2."""
    data = _input(Subcommand.WEYL, level=4, builtin="vladimirov:s=2")
    [report] = DefaultWeylService().run(data)
    assert report.inputs["order"] == 2.0
    assert report.summary["reference"] == 0.5
    assert report.summary["slope"] == pytest.approx(0.5)
    assert report.verdict is Verdict.HOLDS


def test_sectorial_and_elliptic():
    """Оператор Владимирова секториален и эллиптичен порядка 1 вне нулевой оболочки."""
    [sector] = DefaultWeylService().run(_input(Subcommand.SECTORIAL, level=3, builtin="vladimirov:s=1"))
    [elliptic] = DefaultWeylService().run(_input(Subcommand.ELLIPTIC, level=3, builtin="vladimirov:s=1", m=1))
    assert sector.verdict is Verdict.SECTORIAL
    assert sector.summary["zeros"] == 0
    assert elliptic.verdict is Verdict.HOLDS
    assert elliptic.summary["lower_bound"] == pytest.approx(1.0)


def test_compose_residual_of_multipliers_is_bounded():
    """Остаток композиции мультипликаторов равен нулю; добавляется сводка по уровням."""
    data = _input(
        Subcommand.COMPOSE_RESIDUAL, levels="1..3", builtin="vladimirov:s=1", builtin2="bessel:s=-1"
    )
    reports = DefaultCalculusService().run(data)
    assert len(reports) == 4
    for report in reports[:-1]:
        assert report.summary["max_abs"] == 0.0
        assert set(report.matrices) == {"residual"}
    summary = reports[-1]
    assert summary.inputs["symbol2"] == "builtin:bessel:s=-1"
    assert summary.inputs["levels"] == [1, 2, 3]
    assert summary.verdict is Verdict.BOUNDED


def test_inverse_residual_needs_lambda():
    data = _input(Subcommand.INVERSE_RESIDUAL, level=2, builtin="vladimirov:s=1")
    with pytest.raises(ConfigError):
        DefaultCalculusService().run(data)


def test_inverse_residual_symbol_zero():
    data = _input(Subcommand.INVERSE_RESIDUAL, level=2, builtin="vladimirov:s=1", lam="2")
    with pytest.raises(SymbolZero):
        DefaultCalculusService().run(data)


def test_opnorm_identity():
    [report] = DefaultCalculusService().run(_input(Subcommand.OPNORM, level=2, symbol="1", trials=2))
    assert report.summary["sobolev_norm"] == pytest.approx(1.0)
    assert report.summary["lr_lower_bound"] == pytest.approx(1.0)


def test_hoermander_single_aggregate_report():
    data = _input(Subcommand.HOERMANDER, levels="2..4", builtin="bessel:s=1", m=1, alpha_max=0)
    [report] = DefaultHoermanderService().run(data)
    assert report.level is None
    assert report.summary["verdicts"] == {"0,0": Verdict.STABLE}
    assert report.verdict is Verdict.STABLE


def test_bench_report_is_timing():
    data = _input(Subcommand.TRANSFORM_BENCH, levels="1..2", repeats=1)
    [report] = DefaultBenchService().run(data)
    assert report.timing is True
    assert [row[0] for row in report.table.rows] == [1, 2]
    assert all(row[-1] < 1e-10 for row in report.table.rows)


@pytest.mark.slow
def test_bench_fast_transform_speedup_at_4096():
    """При M = 4096 в одном потоке быстрое преобразование минимум в 50 раз быстрее прямой суммы."""
    data = _input(Subcommand.TRANSFORM_BENCH, level=12, repeats=3)
    [report] = DefaultBenchService().run(data)
    [(N, M, fast, naive, speedup, error)] = report.table.rows
    assert (N, M) == (12, 4096)
    assert speedup >= 50
    assert error < 1e-12


def test_verify_service(tmp_path, make_level):
    bundle = ReportBundle(tmp_path)
    bundle.write_report(AnalysisReport(op="svd", level=make_level("p2d1", 1), inputs={}))
    bundle.finalize({"command": "svd"})
    data = _input(Subcommand.VERIFY, out_dir=str(tmp_path))

    [report] = DefaultVerifyService().run(data)
    assert report.verdict is Verdict.HOLDS

    (tmp_path / "N1" / "svd.json").write_text("{}", encoding="utf-8")
    with pytest.raises(VerifyError):
        DefaultVerifyService().run(data)


def test_report_item_status_follows_verdict():
    report = AnalysisReport(op="weyl", level=None, inputs={}, summary={"slope": 0.5}, verdict=Verdict.FAILS)
    item = report_item(report)
    assert item.name == "weyl all"
    assert item.status is StatusReport.ERROR
    assert item.comment == "fails; slope=0.5"


# ----------------------------
# Контроллер
# ----------------------------


class _Service:
    def __init__(self):
        self.calls = []

    def run(self, data):
        self.calls.append(data)
        return [AnalysisReport(op=data.context.command.value, level=level, inputs={}) for level in data.levels]


class _Bundle:
    def __init__(self, root, log):
        self.root = root
        self.log = log

    def write_report(self, report):
        self.log.append(("write", report.location))

    def finalize(self, config_echo, timestamps=None):
        self.log.append(("finalize", config_echo["command"], sorted(timestamps)))


class _Reporter:
    def __init__(self):
        self.inputs = []

    def run(self, data):
        self.inputs.append(data)


def _controller(command, log, service, reporter, **keys):
    app = build_config(keys, SpectraConfig)
    return SpectraController(
        runtime_context=RuntimeContext(app=app, command=command),
        services={command: service},
        symbol_loader=DefaultSymbolLoader(app),
        bundle_factory=lambda root: _Bundle(root, log),
        report_service=reporter,
    )


def test_controller_runs_levels_and_writes_bundle(tmp_path):
    """Контроллер строит уровни, пишет отчёты по одному и завершает manifest."""
    log, service, reporter = [], _Service(), _Reporter()
    controller = _controller(
        Subcommand.SVD, log, service, reporter, levels="1..2", builtin="vladimirov:s=1", out_dir=str(tmp_path)
    )
    reports = controller.run()

    assert [level.N for level in service.calls[0].levels] == [1, 2]
    assert log == [("write", "N1"), ("write", "N2"), ("finalize", "svd", ["finished", "started"])]
    assert reporter.inputs[0].reports == tuple(reports)
    assert reporter.inputs[0].bundle_dir == tmp_path.as_posix()


def test_controller_requires_level():
    log, service, reporter = [], _Service(), _Reporter()
    with pytest.raises(ConfigError):
        _controller(Subcommand.SVD, log, service, reporter, builtin="vladimirov:s=1").run()
    assert service.calls == []


def test_controller_verify_without_levels_writes_nothing():
    log, service, reporter = [], _Service(), _Reporter()
    _controller(Subcommand.VERIFY, log, service, reporter).run()
    assert service.calls[0].levels == ()
    assert log == []
    assert reporter.inputs[0].bundle_dir is None


def test_controller_unknown_service():
    log, reporter = [], _Reporter()
    app = build_config({"level": 1}, SpectraConfig)
    controller = SpectraController(
        runtime_context=RuntimeContext(app=app, command=Subcommand.SVD),
        services={},
        symbol_loader=DefaultSymbolLoader(app),
        bundle_factory=lambda root: _Bundle(root, log),
        report_service=reporter,
    )
    with pytest.raises(ConfigError):
        controller.run()
