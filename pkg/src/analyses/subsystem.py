import numpy as np

from src.common.base_analysis import BaseAnalysis
from src.core.distributions import AnalyticLaw, support
from src.core.marginals import marginalize
from src.core.state_core import RngSpec


class SubsystemAnalysis(BaseAnalysis):
    """
    Distribution of scaled subsystem probabilities x = M·p̃_A against the (shifted)
    Beta(K, N-K) law, plus the exact support bound [λ, (1-λ)M + λ].
    """
    name = 'subsystem'

    def scaled_marginals(self, rng: RngSpec) -> np.ndarray:
        partition = self.cfg.partition
        noisy = self.noisy_probabilities(rng)
        return partition.M * marginalize(noisy.as_prob_vector(), partition)

    def execute(self) -> None:
        cfg = self.cfg
        partition = cfg.partition
        if self.simulated:
            values = self.trials.pooled(self.scaled_marginals, cfg.trials)
        else:
            values = partition.M * marginalize(self.load_samples().empirical_probs(), partition)
        self.results['subsystem'] = {'partition': partition.describe()}
        self.write_histogram('subsystem', values)
        law = self.noise_law(AnalyticLaw.subsystem_beta(partition.N, partition.K, cfg.lam))
        if law is None:
            self.record_check('subsystem_fully_mixed', bool(np.all(values == 1.0)))
            return
        self.goodness_of_fit('subsystem', values, law, asserted=self.simulated)
        lo, hi = support(law)
        inside = bool(np.all((values >= lo) & (values <= hi)))
        self.results['subsystem']['support'] = [lo, hi]
        if self.simulated:
            self.record_check('subsystem_support', inside)
