import logging

import numpy as np

from src.common.base_analysis import BaseAnalysis
from src.core.distributions import AnalyticLaw
from src.core.marginals import (affine_gap, conditional_slice, marginalize, noisy_conditional_affine,
                                noisy_conditional_exact)
from src.core.state_core import RngSpec, depolarize
from src.core.stats_tests import correlation_check

logger = logging.getLogger(__name__)


class ConditionalAnalysis(BaseAnalysis):
    """
    Conditional self-similarity: scaled conditionals M·p̃(y|b) follow the full-register law
    at dimension M, while the plain marginal of the same subsystem does not.
    """
    name = 'conditional'

    @property
    def b(self) -> int:
        return self.cfg.condition_b or 0

    def trial(self, rng: RngSpec) -> dict:
        partition = self.cfg.partition
        ideal = self.ideal_probabilities(rng)
        noisy = depolarize(ideal, self.cfg.lam)
        exact = noisy_conditional_exact(noisy, partition, self.b)
        ideal_slice = conditional_slice(ideal, partition, self.b)
        result = {
            'conditional': partition.M * exact.cond_probs,
            'marginal': partition.M * marginalize(noisy.as_prob_vector(), partition),
            'weight': ideal_slice.weight,
            'first_component': ideal_slice.cond_probs[0],
        }
        if 0.0 < self.cfg.lam < 1.0:
            approx = noisy_conditional_affine(ideal_slice, self.cfg.lam, partition.M)
            result['affine_gap'] = affine_gap(exact, approx)
        return result

    def execute(self) -> None:
        cfg = self.cfg
        partition = cfg.partition
        self.results['conditional'] = {'partition': partition.describe(), 'b': self.b}
        if self.simulated:
            outcomes = self.trials.run(self.trial, cfg.trials)
            conditional = np.concatenate([outcome['conditional'] for outcome in outcomes])
            marginal = np.concatenate([outcome['marginal'] for outcome in outcomes])
        else:
            empirical = self.load_samples().empirical_probs()
            conditional = partition.M * conditional_slice(empirical, partition, self.b).cond_probs
            marginal = partition.M * marginalize(empirical, partition)
            outcomes = []
        self.write_histogram('conditional', conditional)
        self.write_histogram('marginal_contrast', marginal)
        law = self.noise_law(AnalyticLaw.conditional_beta(partition.M, cfg.lam))
        if law is None:
            self.record_check('conditional_fully_mixed', bool(np.all(np.abs(conditional - 1.0) < 1e-12)))
            return
        # Exact only without noise; the noisy conditional law is the typicality approximation.
        self.goodness_of_fit('conditional', conditional, law, asserted=self.simulated and cfg.lam == 0.0)
        self.goodness_of_fit('marginal_contrast', marginal, law, asserted=False)
        if not outcomes:
            return
        if len(outcomes) >= 3:
            report = correlation_check([o['weight'] for o in outcomes], [o['first_component'] for o in outcomes])
            self.results['conditional']['neutrality'] = {
                'correlation': report.correlation, 'bound': report.bound, 'trials': report.trials}
            self.record_check('conditional_neutrality', report.passed)
        gaps = [o['affine_gap'] for o in outcomes if 'affine_gap' in o]
        if gaps:
            self.results['conditional']['affine_gap_mean'] = float(np.mean(gaps))
