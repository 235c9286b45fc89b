import logging

import numpy as np

from src.common.base_analysis import BASELINE_SHOT_STREAM, SHOT_STREAM, BaseAnalysis
from src.core.marginals import conditional_slice, marginalize
from src.core.state_core import ProbVector, RngSpec, depolarize
from src.core.xeb import (SampleMeta, XebKind, draw_samples, expected_xeb, state_expected_xeb, xeb_conditional,
                          xeb_conditional_all, xeb_full, xeb_subsystem)

logger = logging.getLogger(__name__)


class XebAnalysis(BaseAnalysis):
    """
    Full, subsystem and conditional linear XEB of samples drawn from the depolarized
    reference state (or read from a file), with a uniform-sampler baseline.
    """
    name = 'xeb'
    state_known = False

    def execute(self) -> None:
        samples = None
        if not self.simulated:
            samples = self.load_samples()
            self.adopt_sample_meta(samples)
        cfg = self.cfg
        partition = cfg.partition
        ideal = self.reference_state()
        noisy = depolarize(ideal, cfg.lam)
        if samples is None:
            samples = draw_samples(noisy, cfg.shots, RngSpec(cfg.seed, SHOT_STREAM),
                                   SampleMeta(seed=cfg.seed, lambda_claim=cfg.lam, partition=partition))
        # a recorded seed and lambda identify the sampled state
        self.state_known = self.simulated or (samples.meta.seed is not None
                                              and samples.meta.lambda_claim is not None)
        N, M = partition.N, partition.M

        full = xeb_full(samples, ideal)
        self.results['xeb_full'] = {
            **full.as_dict(),
            'ensemble_expected': expected_xeb(XebKind.FULL, N, M, min(cfg.lam, 1.0)),
            'state_expected': state_expected_xeb(ideal.probs, noisy.probs),
        }
        if self.state_known:
            self.record_check('xeb_full_3sigma', full.within(self.results['xeb_full']['state_expected']))

        if partition.k > 0:
            sub = xeb_subsystem(samples, ideal, partition)
            p_a = marginalize(ideal, partition)
            noisy_a = marginalize(noisy.as_prob_vector(), partition)
            self.results['xeb_subsystem'] = {
                **sub.as_dict(),
                'ensemble_expected': expected_xeb(XebKind.SUBSYSTEM, N, M, min(cfg.lam, 1.0)),
                'state_expected': state_expected_xeb(p_a, noisy_a),
            }
            if self.state_known:
                self.record_check('xeb_subsystem_3sigma', sub.within(self.results['xeb_subsystem']['state_expected']))
            self._conditional(samples, ideal, noisy.as_prob_vector())

        if self.simulated:
            self._uniform_baseline(ideal)

    def _conditional(self, samples, ideal: ProbVector, noisy: ProbVector) -> None:
        cfg = self.cfg
        partition = cfg.partition
        if cfg.condition_b is not None:
            cond = xeb_conditional(samples, ideal, partition, cfg.condition_b, cfg.min_post_selected)
            ideal_slice = conditional_slice(ideal, partition, cfg.condition_b)
            noisy_slice = conditional_slice(noisy, partition, cfg.condition_b)
            self.results['xeb_conditional'] = {
                **cond.as_dict(),
                'ensemble_expected': expected_xeb(XebKind.CONDITIONAL, partition.N, partition.M, min(cfg.lam, 1.0)),
                'state_expected': state_expected_xeb(ideal_slice.cond_probs, noisy_slice.cond_probs),
            }
            if self.state_known:
                self.record_check('xeb_conditional_3sigma',
                                  cond.within(self.results['xeb_conditional']['state_expected']))
        overview = xeb_conditional_all(samples, ideal, partition, cfg.min_post_selected)
        self.results['xeb_conditional_all'] = {
            'yields': [int(y) for y in overview.yields],
            'yield_total': int(np.sum(overview.yields)),
            'weighted_fidelity': overview.weighted_fidelity,
            'skipped_b': overview.skipped,
            'per_b': [result.as_dict() for result in overview.per_b],
        }
        self.record_check('post_selection_yields_sum', int(np.sum(overview.yields)) == samples.total)

    def _uniform_baseline(self, ideal: ProbVector) -> None:
        uniform = depolarize(ideal, 1.0)
        baseline = xeb_full(draw_samples(uniform, self.cfg.shots, RngSpec(self.cfg.seed, BASELINE_SHOT_STREAM)), ideal)
        self.results['xeb_uniform_baseline'] = baseline.as_dict()
        self.record_check('xeb_uniform_baseline_3sigma', baseline.within(0.0))
