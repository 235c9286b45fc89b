import logging

import numpy as np

from src.common.base_analysis import BaseAnalysis
from src.core.distributions import AnalyticLaw, limit_law
from src.core.stats_tests import ks_one_sample
from src.core.state_core import RngSpec

logger = logging.getLogger(__name__)


class FullSystemAnalysis(BaseAnalysis):
    """
    Distribution of scaled full-register probabilities x = N·p̃ against the (shifted)
    Beta(1, N-1) law and its exponential limit.
    """
    name = 'full'

    def scaled_probabilities(self, rng: RngSpec) -> np.ndarray:
        return self.noisy_probabilities(rng).scaled()

    def execute(self) -> None:
        cfg = self.cfg
        N = 1 << cfg.n
        if self.simulated:
            values = self.trials.pooled(self.scaled_probabilities, cfg.trials)
        else:
            values = self.load_samples().empirical_probs().scaled()
        self.write_histogram('full_system', values)
        law = self.noise_law(AnalyticLaw.full_beta(N, cfg.lam))
        if law is None:
            self.record_check('full_system_fully_mixed', bool(np.all(values == 1.0)))
            return
        self.goodness_of_fit('full_system', values, law, asserted=self.simulated)
        limit = ks_one_sample(values, limit_law(law))
        self.results['full_system']['ks_limit'] = {**limit.as_dict(), 'law': limit_law(law).describe()}
        if self.simulated and cfg.lam > 0:
            self.record_check('full_system_gap_floor', bool(np.min(values) >= cfg.lam))
