import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

from src.core.state_core import RngSpec

T = TypeVar('T')

logger = logging.getLogger(__name__)


class TrialManager:
    """
    Fans independent Monte Carlo trials out over a thread pool. Trial i always draws from
    RngSpec(master_seed, i) and results come back in trial order, so the outcome does not
    depend on the number of workers.
    """

    def __init__(self, master_seed: int, workers: int = 1):
        """
        :param master_seed: Seed shared by every trial substream.
        :param workers: Number of worker threads; 1 runs trials inline.
        """
        self.master_seed = int(master_seed)
        self.workers = max(1, int(workers))

    def rng_for(self, trial: int) -> RngSpec:
        """
        Substream of one trial.
        :param trial: Trial index.
        :return: RngSpec(master_seed, trial).
        """
        return RngSpec(self.master_seed, trial)

    def run(self, trial_fn: Callable[[RngSpec], T], trials: int, offset: int = 0) -> list[T]:
        """
        Runs trial_fn once per trial substream.
        :param trial_fn: Function of an RngSpec.
        :param trials: Number of trials.
        :param offset: First substream index, to keep separate batches disjoint.
        :return: Results in trial order.
        """
        specs = [self.rng_for(offset + trial) for trial in range(trials)]
        logger.debug("Running %d trials from substream %d on %d worker(s)", trials, offset, self.workers)
        if self.workers == 1:
            return [trial_fn(spec) for spec in specs]
        with ThreadPoolExecutor(max_workers=self.workers) as executor:
            return list(executor.map(trial_fn, specs))

    def pooled(self, trial_fn: Callable[[RngSpec], np.ndarray], trials: int, offset: int = 0) -> np.ndarray:
        """
        Runs trials and concatenates their arrays in trial order.
        """
        return np.concatenate([np.ravel(part) for part in self.run(trial_fn, trials, offset)])
