import logging
from dataclasses import replace
from pathlib import Path

import numpy as np

from src.common.errors import ArgumentError
from src.common.experiment_config import ExperimentConfig
from src.core.distributions import AnalyticLaw
from src.core.state_core import (DepolarizedProbVector, ProbVector, RngSpec, depolarize, probabilities,
                                 sample_haar_state)
from src.core.stats_tests import GofReport, Histogram, default_scaled_range, histogram, ks_one_sample
from src.core.xeb import SampleSet
from src.formats.samples_file import read_samples
from src.formats.tables import write_histogram_csv
from src.managers.trial_manager import TrialManager

IDEAL_STATE_STREAM = 0
SHOT_STREAM = 1 << 40
BASELINE_SHOT_STREAM = SHOT_STREAM + 1

logger = logging.getLogger(__name__)


class BaseAnalysis:
    """
    This class contains the plumbing shared by every analysis: trial fan-out, histogram
    output, goodness-of-fit bookkeeping and the pass/fail checks that decide the exit status.
    """
    name = 'base'

    def __init__(self, cfg: ExperimentConfig, trial_manager: TrialManager | None = None):
        self.cfg = cfg
        self.trials = trial_manager or TrialManager(cfg.seed, cfg.workers)
        self.results: dict = {}
        self.checks: dict[str, bool] = {}
        self.files: list[str] = []

    def run(self) -> dict:
        """
        Executes the analysis and collects its summary.
        :return: Summary dictionary with config, results, checks and the overall verdict.
        """
        logger.info("Running %s analysis: n=%d, lambda=%g, trials=%d, seed=%d",
                    self.name, self.cfg.n, self.cfg.lam, self.cfg.trials, self.cfg.seed)
        self.execute()
        return self.summary()

    def execute(self) -> None:
        raise NotImplementedError

    @property
    def simulated(self) -> bool:
        return self.cfg.samples_path is None

    def ideal_probabilities(self, rng: RngSpec) -> ProbVector:
        """
        Bit-string probabilities of one Haar-random state.
        :param rng: Substream of the trial.
        :return: The ideal ProbVector.
        """
        return probabilities(sample_haar_state(self.cfg.n, rng, self.cfg.n_max))

    def noisy_probabilities(self, rng: RngSpec) -> DepolarizedProbVector:
        """
        Ideal probabilities of one trial, depolarized with the configured strength.
        """
        return depolarize(self.ideal_probabilities(rng), self.cfg.lam)

    def reference_state(self) -> ProbVector:
        """
        The ideal state scored by XEB runs: the Haar state of substream 0 of the run seed.
        """
        return self.ideal_probabilities(RngSpec(self.cfg.seed, IDEAL_STATE_STREAM))

    def adopt_sample_meta(self, sample_set: SampleSet) -> None:
        """
        Takes the seed and λ recorded in a sample file as the run's seed and λ, so the
        samples are scored against the state that produced them. A recorded value that
        contradicts an explicit flag is an error.
        :param sample_set: Samples read from cfg.samples_path.
        """
        recorded = {'seed': sample_set.meta.seed, 'lam': sample_set.meta.lambda_claim}
        adopted = {}
        for name, value in recorded.items():
            if value is None or value == getattr(self.cfg, name):
                continue
            if name in self.cfg.explicit:
                raise ArgumentError(f"{self.cfg.samples_path} was drawn with {name}={value} "
                                    f"but {name}={getattr(self.cfg, name)} was requested")
            adopted[name] = value
        if adopted:
            logger.info("Using %s recorded in %s", adopted, self.cfg.samples_path)
            self.cfg = replace(self.cfg, **adopted)
            self.trials = TrialManager(self.cfg.seed, self.cfg.workers)

    def load_samples(self) -> SampleSet:
        """
        Reads the configured sample file and checks its register size.
        :return: The SampleSet.
        """
        sample_set = read_samples(self.cfg.samples_path)
        if sample_set.n != self.cfg.n:
            raise ArgumentError(f"{self.cfg.samples_path} holds {sample_set.n}-qubit samples but n={self.cfg.n}")
        return sample_set

    def noise_law(self, law: AnalyticLaw) -> AnalyticLaw | None:
        return None if self.cfg.lam >= 1.0 else law

    def write_histogram(self, name: str, values: np.ndarray, value_range: tuple[float, float] | None = None) -> Histogram:
        """
        Histograms scaled values and writes them to <out_dir>/<name>.csv.
        :param name: Result key and file stem.
        :param values: Samples to histogram.
        :param value_range: Bin range; defaults to the scaled figure range for the configured λ.
        :return: The Histogram.
        """
        h = histogram(values, self.cfg.bins, value_range or default_scaled_range(min(self.cfg.lam, 1.0)))
        path = write_histogram_csv(h, Path(self.cfg.out_dir) / f'{name}.csv')
        self.files.append(path.name)
        self.results.setdefault(name, {})['histogram'] = {'count': h.count, 'overflow': h.overflow, 'file': path.name}
        return h

    def goodness_of_fit(self, name: str, values: np.ndarray, law: AnalyticLaw, asserted: bool = True) -> GofReport:
        """
        One-sample KS test of values against a law, stored under results[name]['ks'].
        :param name: Result key.
        :param values: Samples in the law's coordinate.
        :param law: Hypothesized law.
        :param asserted: Whether a failure should fail the run.
        :return: The GofReport.
        """
        report = ks_one_sample(values, law)
        entry = self.results.setdefault(name, {})
        entry['ks'] = {**report.as_dict(), 'law': law.describe()}
        if asserted:
            self.record_check(f'{name}_ks', report.passed)
        else:
            logger.info("%s: KS %.5f vs critical %.5f (reported, not asserted)",
                        name, report.ks_statistic, report.ks_critical_1pct)
        return report

    def record_check(self, name: str, passed: bool) -> None:
        self.checks[name] = bool(passed)
        if passed:
            logger.info("Check %s passed", name)
        else:
            logger.warning("Check %s FAILED", name)

    def summary(self) -> dict:
        return {
            'analysis': self.name,
            'config': self.cfg.as_dict(),
            'results': self.results,
            'checks': dict(sorted(self.checks.items())),
            'passed': all(self.checks.values()),
            'files': sorted(self.files),
        }
