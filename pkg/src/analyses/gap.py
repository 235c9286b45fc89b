import numpy as np

from src.common.base_analysis import BaseAnalysis
from src.core.stats_tests import estimate_gap, estimate_lambda_mean


class GapAnalysis(BaseAnalysis):
    """
    Estimates the depolarizing strength from scaled full-register probabilities, by the
    gap (minimum) and by the variance ratio.
    """
    name = 'gap'

    def execute(self) -> None:
        cfg = self.cfg
        N = 1 << cfg.n
        if self.simulated:
            values = self.trials.pooled(lambda rng: self.noisy_probabilities(rng).scaled(), cfg.trials)
        else:
            # Unobserved bit-strings have zero empirical probability and would pin the gap at 0.
            values = self.load_samples().empirical_probs().scaled()
            values = values[values > 0.0]
        self.write_histogram('gap', values)
        lambda_gap = estimate_gap(values)
        lambda_mean = estimate_lambda_mean(values, (N, N, 1))
        self.results['gap'].update({
            'lambda_gap': lambda_gap,
            'lambda_mean': lambda_mean,
            'samples': int(values.size),
            'violations': int(np.count_nonzero(values < cfg.lam)),
        })
        if self.simulated:
            self.record_check('gap_bound', lambda_gap >= cfg.lam)
