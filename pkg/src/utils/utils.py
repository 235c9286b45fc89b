import math

import numpy as np

from src.common.errors import ArgumentError

COMPENSATED_SUM_THRESHOLD = 1 << 20


class Utils:
    """
    Utility class for various helper methods.
    """

    @staticmethod
    def is_power_of_two(value: int) -> bool:
        """
        Checks whether an integer is a positive power of two.
        :param value: The integer to check.
        :return: True if value is 1, 2, 4, 8, ..., False otherwise.
        """
        return isinstance(value, (int, np.integer)) and value > 0 and (int(value) & (int(value) - 1)) == 0

    @staticmethod
    def log2_dimension(dimension: int) -> int:
        """
        Converts a Hilbert space dimension into a number of qubits.
        Example:
            Calling log2_dimension(4096) returns 12

        :param dimension: A power of two, at least 2.
        :return: The exponent n such that 2^n == dimension.
        """
        if not Utils.is_power_of_two(dimension) or dimension < 2:
            raise ArgumentError(f"Dimension must be a power of two >= 2, got {dimension}")
        return int(dimension).bit_length() - 1

    @staticmethod
    def stable_sum(values: np.ndarray) -> float:
        """
        Sums an array, switching to compensated summation for very long arrays.
        :param values: One-dimensional array of reals.
        :return: The sum as a Python float.
        """
        if values.size >= COMPENSATED_SUM_THRESHOLD:
            return math.fsum(values)
        return float(np.sum(values))

    @staticmethod
    def index_to_bitstring(index: int, n: int) -> str:
        """
        Renders a basis index as a bit-string, qubit 0 being the leftmost character.
        Example:
            Calling index_to_bitstring(1, 2) returns '01'

        :param index: Basis index in [0, 2^n).
        :param n: Number of qubits.
        :return: A string of n '0'/'1' characters.
        """
        return format(index, f'0{n}b')

    @staticmethod
    def bitstring_to_index(bits: str) -> int:
        """
        Parses a bit-string whose leftmost character is the most significant bit.
        :param bits: A non-empty string of '0'/'1' characters.
        :return: The basis index.
        """
        if not bits or any(char not in '01' for char in bits):
            raise ArgumentError(f"Not a bit-string: {bits!r}")
        return int(bits, 2)
