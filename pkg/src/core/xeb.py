"""
Bit-string sampling and linear cross-entropy benchmarking: full, subsystem and
conditional (post-selected) fidelities.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from src.common.errors import ArgumentError, InsufficientSamplesError
from src.core.marginals import Partition, conditional_slice, marginalize
from src.core.state_core import DepolarizedProbVector, ProbVector, RngSpec

MIN_POST_SELECTED = 10

logger = logging.getLogger(__name__)


class XebKind(str, Enum):
    FULL = 'Full'
    SUBSYSTEM = 'Subsystem'
    CONDITIONAL = 'Conditional'


@dataclass(frozen=True)
class SampleMeta:
    seed: int | None = None
    lambda_claim: float | None = None
    partition: Partition | None = None
    source: str | None = None


@dataclass(frozen=True)
class SampleSet:
    """
    A multiset of observed bit-strings: basis index -> count.
    """
    n: int
    counts: dict[int, int]
    total: int
    meta: SampleMeta = field(default_factory=SampleMeta)

    def __post_init__(self):
        if any(count < 1 for count in self.counts.values()):
            raise ArgumentError("Stored sample counts must be at least 1")
        if sum(self.counts.values()) != self.total:
            raise ArgumentError(f"Sample total {self.total} does not match the sum of counts")
        if any(not 0 <= index < (1 << self.n) for index in self.counts):
            raise ArgumentError(f"Sample index outside [0, 2^{self.n})")

    @classmethod
    def from_indices(cls, n: int, indices: np.ndarray, meta: SampleMeta | None = None) -> 'SampleSet':
        keys, counts = np.unique(np.asarray(indices, dtype=np.int64), return_counts=True)
        return cls(n, {int(key): int(count) for key, count in zip(keys, counts)}, int(counts.sum()),
                   meta or SampleMeta())

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """
        :return: (indices, counts) as int64 arrays sorted by index.
        """
        keys = np.array(sorted(self.counts), dtype=np.int64)
        counts = np.array([self.counts[key] for key in keys], dtype=np.int64)
        return keys, counts

    def empirical_probs(self) -> ProbVector:
        """
        Frequency estimate count / total of every bit-string probability.
        """
        probs = np.zeros(1 << self.n)
        keys, counts = self.arrays()
        probs[keys] = counts / self.total
        return ProbVector(self.n, probs)


@dataclass(frozen=True)
class XebResult:
    fidelity: float
    std_error: float
    kind: XebKind
    m_eff: int
    shots: int
    b: int | None = None

    def as_dict(self) -> dict:
        result = {
            'fidelity': float(self.fidelity),
            'std_error': float(self.std_error),
            'kind': self.kind.value,
            'm_eff': int(self.m_eff),
            'shots': int(self.shots),
        }
        if self.b is not None:
            result['b'] = int(self.b)
        return result

    def within(self, expected: float, sigmas: float = 3.0) -> bool:
        return abs(self.fidelity - expected) <= sigmas * self.std_error


def draw_samples(p: ProbVector | DepolarizedProbVector, shots: int, rng: RngSpec,
                 meta: SampleMeta | None = None) -> SampleSet:
    """
    I.i.d. bit-string draws by inverse CDF: binary search of uniforms in the cumulative array.
    :param p: Ideal or depolarized probability vector.
    :param shots: Number of draws, at least 1.
    :param rng: Substream to draw from.
    :param meta: Metadata to attach; defaults to the seed and, for noisy vectors, λ.
    :return: The SampleSet.
    """
    if shots < 1:
        raise ArgumentError(f"shots must be at least 1, got {shots}")
    cumulative = np.cumsum(p.probs)
    uniforms = rng.generator().random(shots) * cumulative[-1]
    indices = np.minimum(np.searchsorted(cumulative, uniforms, side='right'), p.dimension - 1)
    if meta is None:
        lambda_claim = p.lam if isinstance(p, DepolarizedProbVector) else None
        meta = SampleMeta(seed=rng.master_seed, lambda_claim=lambda_claim)
    return SampleSet.from_indices(p.n_qubits, indices, meta)


def _linear_xeb(values: np.ndarray, counts: np.ndarray, dimension: int, kind: XebKind, m_eff: int,
                b: int | None = None) -> XebResult:
    # values: ideal probability of each distinct outcome; counts: its multiplicity.
    shots = int(counts.sum())
    mean = float(np.sum(counts * values)) / shots
    if shots > 1:
        variance = float(np.sum(counts * (values - mean) ** 2)) / (shots - 1)
    else:
        variance = 0.0
    return XebResult(
        fidelity=dimension * mean - 1.0,
        std_error=dimension * math.sqrt(variance) / math.sqrt(shots),
        kind=kind, m_eff=m_eff, shots=shots, b=b)


def xeb_full(samples: SampleSet, ideal: ProbVector) -> XebResult:
    """
    F = N·<p_ideal(x_i)> - 1 with std_error N·sd(p_ideal(x_i))/√shots.
    """
    if samples.n != ideal.n_qubits:
        raise ArgumentError(f"Samples of {samples.n} qubits cannot be scored against a {ideal.n_qubits}-qubit vector")
    keys, counts = samples.arrays()
    return _linear_xeb(ideal.probs[keys], counts, ideal.dimension, XebKind.FULL, ideal.n_qubits)


def xeb_subsystem(samples: SampleSet, ideal: ProbVector, part: Partition) -> XebResult:
    """
    F_A = M·<p_A(y_i)> - 1 over the A-substrings of every sample.
    """
    if samples.n != ideal.n_qubits:
        raise ArgumentError(f"Samples of {samples.n} qubits cannot be scored against a {ideal.n_qubits}-qubit vector")
    part.check(samples.n)
    keys, counts = samples.arrays()
    y, _ = part.split_index(keys)
    p_a = marginalize(ideal, part)
    return _linear_xeb(p_a[y], counts, part.M, XebKind.SUBSYSTEM, part.m)


def post_selection_yields(samples: SampleSet, part: Partition) -> np.ndarray:
    """
    Number of samples whose B-substring equals b, for every b in [0, K).
    """
    part.check(samples.n)
    keys, counts = samples.arrays()
    _, z = part.split_index(keys)
    return np.bincount(z, weights=counts, minlength=part.K).astype(np.int64)


def xeb_conditional(samples: SampleSet, ideal: ProbVector, part: Partition, b: int,
                    min_post_selected: int = MIN_POST_SELECTED) -> XebResult:
    """
    F_{A|b} = M·<p_ideal(y_i|b)> - 1 over the samples whose B-substring equals b.
    :param samples: Observed bit-strings.
    :param ideal: Ideal probability vector.
    :param part: Partition of the register.
    :param b: Post-selected B outcome.
    :param min_post_selected: Fewer post-selected samples raise InsufficientSamplesError.
    :return: XebResult over the post-selected shots.
    """
    if samples.n != ideal.n_qubits:
        raise ArgumentError(f"Samples of {samples.n} qubits cannot be scored against a {ideal.n_qubits}-qubit vector")
    part.check(samples.n)
    keys, counts = samples.arrays()
    y, z = part.split_index(keys)
    selected = z == b
    kept = int(counts[selected].sum())
    if kept < min_post_selected:
        raise InsufficientSamplesError(b, kept, min_post_selected, samples.total)
    cond = conditional_slice(ideal, part, b)
    logger.debug("Post-selection on b=%d kept %d of %d shots", b, kept, samples.total)
    return _linear_xeb(cond.cond_probs[y[selected]], counts[selected], part.M, XebKind.CONDITIONAL, part.m, b)


@dataclass(frozen=True)
class ConditionalXebSummary:
    per_b: list[XebResult]
    yields: np.ndarray
    weighted_fidelity: float
    skipped: list[int]


def xeb_conditional_all(samples: SampleSet, ideal: ProbVector, part: Partition,
                        min_post_selected: int = MIN_POST_SELECTED) -> ConditionalXebSummary:
    """
    Conditional XEB for every b with enough post-selected samples, plus their
    yield-weighted mean. Outcomes below the post-selection minimum are listed in skipped.
    """
    yields = post_selection_yields(samples, part)
    per_b, skipped = [], []
    for b in range(part.K):
        if yields[b] < min_post_selected:
            skipped.append(b)
            continue
        per_b.append(xeb_conditional(samples, ideal, part, b, min_post_selected))
    used = np.array([yields[result.b] for result in per_b], dtype=float)
    if used.size:
        weighted = float(np.sum(used * np.array([result.fidelity for result in per_b])) / used.sum())
    else:
        weighted = float('nan')
    return ConditionalXebSummary(per_b, yields, weighted, skipped)


def expected_xeb(kind: XebKind, N: int, M: int, lam: float = 0.0) -> float:
    """
    Ensemble expectation of the linear XEB when sampling a depolarized Haar state:
    Full (1-λ)(N-1)/(N+1); Subsystem (1-λ)(M-1)/(N+1), from the Dir(K, ..., K) second
    moment; Conditional (1-λ)(M-1)/(M+1), exact for λ=0 and under the typicality
    approximation otherwise.
    """
    if kind is XebKind.FULL:
        ideal = (N - 1) / (N + 1)
    elif kind is XebKind.SUBSYSTEM:
        ideal = (M - 1) / (N + 1)
    else:
        ideal = (M - 1) / (M + 1)
    return (1.0 - lam) * ideal


def state_expected_xeb(ideal_scores: np.ndarray, sampler: np.ndarray) -> float:
    """
    Exact expectation of a linear XEB for one ideal vector: dim·Σ sampler·ideal - 1.
    :param ideal_scores: Ideal probabilities (full, marginal or conditional) of length dim.
    :param sampler: Probabilities the samples are drawn from, same space and length.
    """
    return float(ideal_scores.size * np.dot(sampler, ideal_scores) - 1.0)
