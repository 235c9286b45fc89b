"""
Marginalization and conditioning of bit-string probability vectors.

Bit convention: in a basis index j of an n-qubit register, qubit 0 is the most
significant bit (the leftmost character of the bit-string). A Partition names the
qubits of subsystem A in the order they form the A-substring y; subsystem B is the
remaining qubits in ascending order, forming z. ``Partition.trailing(n, m)`` puts B on
the trailing k bits, so conditioning on b=0 with k=1 means "the final bit is 0".
"""
import logging
from dataclasses import dataclass, field

import numpy as np

from src.common.errors import ArgumentError, DegenerateSliceError
from src.core.state_core import DepolarizedProbVector, ProbVector

DEGENERATE_WEIGHT = 1e-300

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Partition:
    n: int
    a_bits: tuple[int, ...]
    b_bits: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        a_bits = tuple(int(q) for q in self.a_bits)
        if not a_bits:
            raise ArgumentError("Subsystem A must contain at least one qubit")
        if len(set(a_bits)) != len(a_bits):
            raise ArgumentError(f"Subsystem A qubits must be distinct, got {list(a_bits)}")
        if any(q < 0 or q >= self.n for q in a_bits):
            raise ArgumentError(f"Subsystem A qubits must lie in [0, {self.n}), got {list(a_bits)}")
        object.__setattr__(self, 'a_bits', a_bits)
        object.__setattr__(self, 'b_bits', tuple(q for q in range(self.n) if q not in set(a_bits)))

    @classmethod
    def trailing(cls, n: int, m: int) -> 'Partition':
        """
        A = the leading m qubits, B = the trailing n-m bits of each bit-string.
        """
        if not 1 <= m <= n:
            raise ArgumentError(f"Subsystem size m={m} must lie in [1, {n}]")
        return cls(n, tuple(range(m)))

    @property
    def m(self) -> int:
        return len(self.a_bits)

    @property
    def k(self) -> int:
        return self.n - self.m

    @property
    def M(self) -> int:
        return 1 << self.m

    @property
    def K(self) -> int:
        return 1 << self.k

    @property
    def N(self) -> int:
        return 1 << self.n

    def check(self, n_qubits: int) -> None:
        if n_qubits != self.n:
            raise ArgumentError(f"Partition of {self.n} qubits does not match a {n_qubits}-qubit vector")

    def split_index(self, index):
        """
        Splits basis indices into (y, z) substrings by bit-gather.
        :param index: Integer or integer array of full basis indices.
        :return: (y, z) with the same shape as index.
        """
        index = np.asarray(index, dtype=np.int64)
        y = np.zeros_like(index)
        z = np.zeros_like(index)
        for qubit in self.a_bits:
            y = (y << 1) | ((index >> (self.n - 1 - qubit)) & 1)
        for qubit in self.b_bits:
            z = (z << 1) | ((index >> (self.n - 1 - qubit)) & 1)
        return y, z

    def describe(self) -> str:
        return f"A={list(self.a_bits)} (m={self.m}), B={list(self.b_bits)} (k={self.k})"


@dataclass(frozen=True)
class ConditionalSlice:
    partition: Partition
    b: int
    cond_probs: np.ndarray
    weight: float


def _qubit_tensor(p: ProbVector, part: Partition) -> np.ndarray:
    part.check(p.n_qubits)
    return p.probs.reshape((2,) * part.n)


def _a_axis_order(part: Partition) -> list[int]:
    # Axes left after reducing or indexing B are the A qubits in ascending order.
    ascending = sorted(part.a_bits)
    return [ascending.index(q) for q in part.a_bits]


def marginalize(p: ProbVector, part: Partition) -> np.ndarray:
    """
    Marginal distribution p_A(y) = Σ_z p(y, z) of subsystem A.
    :param p: Full-register probability vector.
    :param part: Partition of the register.
    :return: Array of M probabilities indexed by the A-substring y.
    """
    tensor = _qubit_tensor(p, part)
    if part.k == 0:
        reduced = tensor
    else:
        reduced = tensor.sum(axis=part.b_bits)
    return np.transpose(reduced, _a_axis_order(part)).reshape(part.M)


def joint_matrix(p: ProbVector, part: Partition) -> np.ndarray:
    """
    Rearranges p into an M×K matrix with rows y and columns b. For trailing partitions
    this is a view of the input.
    """
    tensor = _qubit_tensor(p, part)
    return np.transpose(tensor, list(part.a_bits) + list(part.b_bits)).reshape(part.M, part.K)


def _check_b(part: Partition, b: int) -> None:
    if not 0 <= b < part.K:
        raise ArgumentError(f"Outcome b={b} must lie in [0, {part.K}) for {part.describe()}")


def conditional_slice(p: ProbVector, part: Partition, b: int,
                      degenerate_weight: float = DEGENERATE_WEIGHT) -> ConditionalSlice:
    """
    Conditional distribution p(y|b) = p(y, b) / p(b) of subsystem A given B outcome b.
    :param p: Full-register probability vector.
    :param part: Partition of the register.
    :param b: Outcome of subsystem B, in [0, K).
    :param degenerate_weight: p(b) below this raises DegenerateSliceError.
    :return: The ConditionalSlice, weight = p(b).
    """
    _check_b(part, b)
    tensor = _qubit_tensor(p, part)
    indexer = [slice(None)] * part.n
    for position, qubit in enumerate(part.b_bits):
        indexer[qubit] = (b >> (part.k - 1 - position)) & 1
    joint = np.transpose(tensor[tuple(indexer)], _a_axis_order(part)).reshape(part.M)
    weight = float(np.sum(joint))
    if weight < degenerate_weight:
        raise DegenerateSliceError(b, weight)
    return ConditionalSlice(part, b, joint / weight, weight)


def conditional_slices(p: ProbVector, part: Partition,
                       degenerate_weight: float = DEGENERATE_WEIGHT) -> list[ConditionalSlice]:
    """
    All K conditional slices at once, ordered by b.
    """
    matrix = joint_matrix(p, part)
    weights = matrix.sum(axis=0)
    slices = []
    for b in range(part.K):
        if weights[b] < degenerate_weight:
            raise DegenerateSliceError(b, float(weights[b]))
        slices.append(ConditionalSlice(part, b, matrix[:, b] / weights[b], float(weights[b])))
    return slices


def noisy_conditional_exact(p_noisy: DepolarizedProbVector, part: Partition, b: int) -> ConditionalSlice:
    """
    Exact conditional of a depolarized vector:
    ((1-λ)p(y,b) + λ/N) / ((1-λ)p(b) + λM/N).
    """
    return conditional_slice(p_noisy.as_prob_vector(), part, b)


def noisy_conditional_affine(cond: ConditionalSlice, lam: float, M: int) -> np.ndarray:
    """
    Typicality approximation of the noisy conditional: replaces p(b) by its mean M/N,
    giving (1-λ)p(y|b) + λ/M.
    :param cond: Conditional slice of the ideal vector.
    :param lam: Noise strength in [0, 1).
    :param M: Subsystem A dimension.
    :return: Array of M approximate conditional probabilities.
    """
    if not 0.0 <= lam < 1.0:
        raise ArgumentError(f"Depolarizing strength must lie in [0, 1), got {lam}")
    return (1.0 - lam) * cond.cond_probs + lam / M


def affine_gap(exact: ConditionalSlice, approx: np.ndarray) -> float:
    """
    Mean absolute deviation between an exact noisy conditional and its affine approximation.
    """
    return float(np.mean(np.abs(exact.cond_probs - approx)))
