import logging
from pathlib import Path

from src.analyses.conditional import ConditionalAnalysis
from src.analyses.full_system import FullSystemAnalysis
from src.analyses.gap import GapAnalysis
from src.analyses.subsystem import SubsystemAnalysis
from src.analyses.xeb_analysis import XebAnalysis
from src.common.base_analysis import BaseAnalysis
from src.common.experiment_config import AnalysisKind, ExperimentConfig
from src.formats.tables import write_summary

SUMMARY_FILE = 'summary.yaml'

logger = logging.getLogger(__name__)


class AnalysisManager:
    @staticmethod
    def init_analysis(cfg: ExperimentConfig) -> BaseAnalysis:
        """
        Initializes and returns the analysis selected by the config.
        :param cfg: The experiment config; cfg.analysis picks the class.
        :return: An analysis object ready to run.
        """
        if cfg.analysis is AnalysisKind.FULL:
            return FullSystemAnalysis(cfg)
        elif cfg.analysis is AnalysisKind.SUBSYSTEM:
            return SubsystemAnalysis(cfg)
        elif cfg.analysis is AnalysisKind.CONDITIONAL:
            return ConditionalAnalysis(cfg)
        elif cfg.analysis is AnalysisKind.XEB:
            return XebAnalysis(cfg)
        elif cfg.analysis is AnalysisKind.GAP:
            return GapAnalysis(cfg)
        else:
            raise ValueError(f"Unsupported analysis: {cfg.analysis}")

    @staticmethod
    def run_experiment(cfg: ExperimentConfig) -> dict:
        """
        Runs one experiment end to end and writes <out_dir>/summary.yaml.
        :param cfg: The experiment config.
        :return: The summary document; summary['passed'] is False if any asserted check failed.
        """
        Path(cfg.out_dir).mkdir(parents=True, exist_ok=True)
        summary = AnalysisManager.init_analysis(cfg).run()
        write_summary(summary, Path(cfg.out_dir) / SUMMARY_FILE)
        logger.info("%s analysis %s", cfg.analysis.value, 'passed' if summary['passed'] else 'FAILED')
        return summary


def run_experiment(cfg: ExperimentConfig) -> dict:
    return AnalysisManager.run_experiment(cfg)
