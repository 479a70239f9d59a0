"""verify: пересчёт хэшей manifest.json пакета отчётов (каталог out_dir)."""

from loguru import logger

from GENERAL.errors import VerifyError
from SPECTRA_APP.ADAPTERS.bundle import verify_bundle
from SPECTRA_APP.APP.dto import AnalysisInput, AnalysisReport
from SPECTRA_APP.APP.types import Subcommand, Verdict


class DefaultVerifyService:
    def run(self, data: AnalysisInput) -> list[AnalysisReport]:
        bundle_dir = data.context.app.out_dir
        problems = verify_bundle(bundle_dir)
        if problems:
            for problem in problems:
                logger.error("{}", problem)
            raise VerifyError(f"{bundle_dir}: расхождений {len(problems)}\n" + "\n".join(problems))
        logger.info("Пакет {} совпадает с manifest", bundle_dir)
        return [
            AnalysisReport(
                op=Subcommand.VERIFY.value,
                level=None,
                inputs={"out_dir": bundle_dir},
                verdict=Verdict.HOLDS,
            )
        ]
