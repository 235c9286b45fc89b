class HaarStatsError(Exception):
    """
    Base class for every error raised by this package.
    """


class CapacityError(HaarStatsError):
    """
    Raised when a requested state or vector exceeds the configured size ceiling.
    """


class ArgumentError(HaarStatsError, ValueError):
    """
    Raised for invalid parameters: out-of-range noise strengths, inconsistent partitions,
    dimensions that are not powers of two, laws without a requested property.
    """


class DegenerateSliceError(HaarStatsError):
    """
    Raised when conditioning on an outcome whose probability is effectively zero.
    """

    def __init__(self, b: int, weight: float):
        self.b = b
        self.weight = weight
        super().__init__(f"Cannot condition on outcome b={b}: p(b)={weight!r} is effectively zero")


class InsufficientSamplesError(HaarStatsError):
    """
    Raised when post-selection leaves too few samples for a conditional estimate.
    """

    def __init__(self, b: int, post_selected: int, required: int, total: int):
        self.b = b
        self.post_selected = post_selected
        self.required = required
        self.total = total
        super().__init__(
            f"Post-selection on b={b} kept {post_selected} of {total} samples "
            f"(yield {post_selected / total if total else 0.0:.3g}); at least {required} are required")


class SampleParseError(HaarStatsError):
    """
    Raised when a sample file line cannot be parsed.
    """

    def __init__(self, path, line_number: int, reason: str):
        self.path = path
        self.line_number = line_number
        super().__init__(f"{path}:{line_number}: {reason}")


class SampleFormatError(HaarStatsError):
    """
    Raised when a sample file is well-formed line by line but inconsistent as a whole.
    """
