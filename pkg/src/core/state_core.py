"""
Haar-random states, their bit-string probability vectors, direct Dirichlet draws and
globally depolarized probability vectors.

Every generator takes an RngSpec; the same (master_seed, stream_index) pair always
reproduces the same draws, whatever thread runs it.
"""
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from src.common.errors import ArgumentError, CapacityError
from src.utils.utils import Utils

DEFAULT_N_MAX = 24
DIRICHLET_MAX_LOG2 = 28
NORMALIZATION_TOL = 1e-12

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RngSpec:
    """
    Seed of one reproducible random substream: a master seed plus a per-trial index.
    """
    master_seed: int
    stream_index: int = 0

    def generator(self) -> np.random.Generator:
        """
        Builds a fresh generator for this substream.
        :return: A numpy Generator seeded from SeedSequence(master_seed, spawn_key=(stream_index,)).
        """
        sequence = np.random.SeedSequence(entropy=int(self.master_seed), spawn_key=(int(self.stream_index),))
        return np.random.default_rng(sequence)

    def child(self, stream_index: int) -> 'RngSpec':
        return RngSpec(self.master_seed, stream_index)


@dataclass(frozen=True)
class StateVector:
    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.amplitudes.shape != (1 << self.n_qubits,):
            raise ArgumentError(
                f"StateVector of {self.n_qubits} qubits needs {1 << self.n_qubits} amplitudes, "
                f"got shape {self.amplitudes.shape}")

    @property
    def dimension(self) -> int:
        return 1 << self.n_qubits


@dataclass(frozen=True)
class ProbVector:
    """
    Normalized bit-string probabilities of an n-qubit register. Index j has qubit 0 as its
    most significant bit.
    """
    n_qubits: int
    probs: np.ndarray

    def __post_init__(self):
        if self.probs.shape != (1 << self.n_qubits,):
            raise ArgumentError(
                f"ProbVector of {self.n_qubits} qubits needs {1 << self.n_qubits} entries, got shape {self.probs.shape}")

    @property
    def dimension(self) -> int:
        return 1 << self.n_qubits

    def scaled(self) -> np.ndarray:
        """
        :return: The scaled probabilities x = N·p.
        """
        return self.dimension * self.probs

    def is_normalized(self, tol: float = NORMALIZATION_TOL) -> bool:
        return bool(np.all(self.probs >= 0.0)) and abs(Utils.stable_sum(self.probs) - 1.0) <= tol


@dataclass(frozen=True)
class DepolarizedProbVector:
    """
    The probability vector of (1-λ)|ψ><ψ| + λ I/N: p̃ = (1-λ)p + λ/N componentwise.
    """
    base: ProbVector
    lam: float
    probs: np.ndarray = field(repr=False)

    @property
    def n_qubits(self) -> int:
        return self.base.n_qubits

    @property
    def dimension(self) -> int:
        return self.base.dimension

    @property
    def floor(self) -> float:
        return self.lam / self.dimension

    def scaled(self) -> np.ndarray:
        return self.dimension * self.probs

    def as_prob_vector(self) -> ProbVector:
        return ProbVector(self.base.n_qubits, self.probs)


def _normalize(weights: np.ndarray) -> np.ndarray:
    total = Utils.stable_sum(weights)
    if not total > 0.0:
        raise ArgumentError("Cannot normalize a vector with zero total weight")
    return weights / total


def sample_haar_state(n: int, rng: RngSpec, n_max: int = DEFAULT_N_MAX) -> StateVector:
    """
    Draws a Haar-random pure state of n qubits.

    Amplitudes are i.i.d. complex normals CN(0, 1) with real and imaginary parts each
    N(0, 1/2), so |z|^2 ~ Exp(1) = Gamma(1, 1), then normalized.
    :param n: Number of qubits, 1 <= n <= n_max.
    :param rng: Substream to draw from.
    :param n_max: Largest accepted qubit count.
    :return: The normalized StateVector.
    """
    if not 1 <= n <= n_max:
        raise CapacityError(f"n={n} qubits is outside the supported range [1, {n_max}]")
    generator = rng.generator()
    dimension = 1 << n
    parts = generator.normal(loc=0.0, scale=math.sqrt(0.5), size=(2, dimension))
    amplitudes = parts[0] + 1j * parts[1]
    norm = math.sqrt(Utils.stable_sum(parts[0] ** 2 + parts[1] ** 2))
    return StateVector(n, amplitudes / norm)


def probabilities(state: StateVector) -> ProbVector:
    """
    Computes the bit-string probabilities p_i = |c_i|^2 of a state.
    :param state: A normalized StateVector.
    :return: The ProbVector of the state.
    """
    amplitudes = state.amplitudes
    return ProbVector(state.n_qubits, amplitudes.real ** 2 + amplitudes.imag ** 2)


def sample_flat_dirichlet(dimension: int, rng: RngSpec) -> ProbVector:
    """
    Draws p ~ Dir(1, ..., 1) directly from standard exponentials. Statistically identical to
    probabilities(sample_haar_state(log2 N)) while holding one real array.
    :param dimension: N, a power of two between 2 and 2^28.
    :param rng: Substream to draw from.
    :return: The ProbVector.
    """
    n_qubits = Utils.log2_dimension(dimension)
    if n_qubits > DIRICHLET_MAX_LOG2:
        raise CapacityError(f"N=2^{n_qubits} exceeds the flat Dirichlet ceiling 2^{DIRICHLET_MAX_LOG2}")
    weights = rng.generator().standard_exponential(dimension)
    return ProbVector(n_qubits, _normalize(weights))


def sample_symmetric_dirichlet(dimension: int, concentration: float, rng: RngSpec) -> np.ndarray:
    """
    Draws Dir(α, ..., α) of the given length from Gamma(α, 1) variates.

    With α = K and length M this is the law of a subsystem marginal p_A.
    :param dimension: Number of components.
    :param concentration: Common shape parameter α > 0.
    :param rng: Substream to draw from.
    :return: A normalized array.
    """
    if dimension < 1:
        raise ArgumentError(f"Dirichlet dimension must be positive, got {dimension}")
    if concentration <= 0:
        raise ArgumentError(f"Dirichlet concentration must be positive, got {concentration}")
    weights = rng.generator().standard_gamma(concentration, size=dimension)
    return _normalize(weights)


def depolarize(p: ProbVector, lam: float) -> DepolarizedProbVector:
    """
    Applies global depolarizing noise of strength λ to a probability vector.
    :param p: The ideal probability vector.
    :param lam: Noise strength in [0, 1].
    :return: p̃ = (1-λ)p + λ/N.
    """
    if not 0.0 <= lam <= 1.0:
        raise ArgumentError(f"Depolarizing strength must lie in [0, 1], got {lam}")
    lam = float(lam)
    noisy = (1.0 - lam) * p.probs + lam / p.dimension
    return DepolarizedProbVector(base=p, lam=lam, probs=noisy)
