"""
Analytic bit-string probability laws of Haar-random and depolarized states.

Every law is a kernel (a Beta, exponential or Gamma density of a scaled variable x with
unit mean) pushed through the depolarizing affine map x -> (1-λ)x + λ and, when
``scaled`` is False, back to raw probabilities p = x / dimension.

Kernels and their scaled variable:

- FullBeta:          p ~ Beta(1, N-1),  x = N p
- SubsystemBeta:     p_A ~ Beta(K, N-K), x = M p_A  (K = 1 gives FullBeta)
- ConditionalBeta:   p(y|b) ~ Beta(1, M-1), x = M p(y|b)
- ExpLimit:          x ~ Exp(1), the large-N limit of FullBeta
- GammaLimit:        x ~ Gamma(K, scale 1/K), the large-N limit of SubsystemBeta;
                     sharpens towards a Gaussian of mean 1, variance 1/K as K grows

The Shifted* families are the same kernels and exist so that noisy laws can be named
explicitly; any family accepts λ in [0, 1).
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special

from src.common.errors import ArgumentError


class Family(str, Enum):
    FULL_BETA = 'FullBeta'
    SUBSYSTEM_BETA = 'SubsystemBeta'
    EXP_LIMIT = 'ExpLimit'
    GAMMA_LIMIT = 'GammaLimit'
    SHIFTED_EXP_LIMIT = 'ShiftedExpLimit'
    SHIFTED_SUBSYSTEM_BETA = 'ShiftedSubsystemBeta'
    CONDITIONAL_BETA = 'ConditionalBeta'


_SUBSYSTEM_FAMILIES = (Family.SUBSYSTEM_BETA, Family.SHIFTED_SUBSYSTEM_BETA)
_EXP_FAMILIES = (Family.EXP_LIMIT, Family.SHIFTED_EXP_LIMIT)


@dataclass(frozen=True)
class AnalyticLaw:
    """
    A named analytic distribution: family, dimensions N = M·K, noise strength λ and the
    coordinate it is expressed in (scaled x or raw p).
    """
    family: Family
    N: int
    M: int
    K: int
    lam: float = 0.0
    scaled: bool = True

    def __post_init__(self):
        if not 0.0 <= self.lam < 1.0:
            if self.lam == 1.0:
                raise ArgumentError(
                    "λ=1 is the fully mixed state: every scaled probability is exactly 1 "
                    "(p = 1/dimension) and no density exists")
            raise ArgumentError(f"Depolarizing strength must lie in [0, 1), got {self.lam}")
        if self.M * self.K != self.N:
            raise ArgumentError(f"Dimensions must satisfy N = M·K, got N={self.N}, M={self.M}, K={self.K}")
        if self.family in _SUBSYSTEM_FAMILIES + (Family.CONDITIONAL_BETA, Family.FULL_BETA) and self.M < 2:
            raise ArgumentError(f"{self.family.value} needs a subsystem dimension M >= 2, got M={self.M}")
        if self.family is Family.FULL_BETA and self.K != 1:
            raise ArgumentError(f"FullBeta describes the whole register (K=1), got K={self.K}")
        if self.K < 1:
            raise ArgumentError(f"K must be at least 1, got {self.K}")

    @classmethod
    def full_beta(cls, N: int, lam: float = 0.0, scaled: bool = True) -> 'AnalyticLaw':
        return cls(Family.FULL_BETA, N, N, 1, lam, scaled)

    @classmethod
    def subsystem_beta(cls, N: int, K: int, lam: float = 0.0, scaled: bool = True) -> 'AnalyticLaw':
        family = Family.SHIFTED_SUBSYSTEM_BETA if lam > 0 else Family.SUBSYSTEM_BETA
        return cls(family, N, N // K, K, lam, scaled)

    @classmethod
    def conditional_beta(cls, M: int, lam: float = 0.0, scaled: bool = True) -> 'AnalyticLaw':
        return cls(Family.CONDITIONAL_BETA, M, M, 1, lam, scaled)

    @classmethod
    def exp_limit(cls, N: int, lam: float = 0.0, scaled: bool = True) -> 'AnalyticLaw':
        family = Family.SHIFTED_EXP_LIMIT if lam > 0 else Family.EXP_LIMIT
        return cls(family, N, N, 1, lam, scaled)

    @classmethod
    def gamma_limit(cls, N: int, K: int, lam: float = 0.0, scaled: bool = True) -> 'AnalyticLaw':
        return cls(Family.GAMMA_LIMIT, N, N // K, K, lam, scaled)

    @property
    def dimension(self) -> int:
        """
        :return: The dimension whose reciprocal is the mean raw probability (N or M).
        """
        if self.family in _EXP_FAMILIES:
            return self.N
        return self.M

    def pdf(self, v):
        return pdf(self, v)

    def cdf(self, v):
        return cdf(self, v)

    def describe(self) -> str:
        coordinate = 'scaled' if self.scaled else 'raw'
        return f"{self.family.value}(N={self.N}, M={self.M}, K={self.K}, lambda={self.lam:g}, {coordinate})"


def _beta_shapes(law: AnalyticLaw) -> tuple[float, float] | None:
    if law.family is Family.FULL_BETA:
        return 1.0, float(law.N - 1)
    if law.family in _SUBSYSTEM_FAMILIES:
        return float(law.K), float(law.N - law.K)
    if law.family is Family.CONDITIONAL_BETA:
        return 1.0, float(law.M - 1)
    return None


def _kernel_logpdf(law: AnalyticLaw, x: np.ndarray) -> np.ndarray:
    shapes = _beta_shapes(law)
    with np.errstate(divide='ignore', invalid='ignore'):
        if shapes is not None:
            a, b = shapes
            d = law.dimension
            u = x / d
            inside = (u >= 0.0) & (u <= 1.0)
            u = np.clip(u, 0.0, 1.0)
            log_density = special.xlogy(a - 1.0, u) + special.xlog1py(b - 1.0, -u) - special.betaln(a, b) - np.log(d)
        elif law.family in _EXP_FAMILIES:
            inside = x >= 0.0
            log_density = -x
        else:
            k = float(law.K)
            inside = x >= 0.0
            xc = np.maximum(x, 0.0)
            log_density = k * np.log(k) - special.gammaln(k) + special.xlogy(k - 1.0, xc) - k * xc
    return np.where(inside, log_density, -np.inf)


def _kernel_cdf(law: AnalyticLaw, x: np.ndarray) -> np.ndarray:
    shapes = _beta_shapes(law)
    if shapes is not None:
        a, b = shapes
        u = np.clip(x / law.dimension, 0.0, 1.0)
        if a == 1.0:
            return -np.expm1(special.xlog1py(b, -u))
        return special.betainc(a, b, u)
    xc = np.maximum(x, 0.0)
    if law.family in _EXP_FAMILIES:
        return -np.expm1(-xc)
    k = float(law.K)
    return special.gammainc(k, k * xc)


def _kernel_quantile(law: AnalyticLaw, q: np.ndarray) -> np.ndarray:
    shapes = _beta_shapes(law)
    if shapes is not None:
        a, b = shapes
        if a == 1.0:
            u = -np.expm1(np.log1p(-q) / b)
        else:
            u = special.betaincinv(a, b, q)
        return law.dimension * u
    if law.family in _EXP_FAMILIES:
        return -np.log1p(-q)
    k = float(law.K)
    return special.gammaincinv(k, q) / k


def _kernel_moments(law: AnalyticLaw) -> tuple[float, float]:
    shapes = _beta_shapes(law)
    if shapes is not None:
        a, b = shapes
        d = law.dimension
        total = a + b
        return d * a / total, d * d * a * b / (total * total * (total + 1.0))
    if law.family in _EXP_FAMILIES:
        return 1.0, 1.0
    return 1.0, 1.0 / law.K


def _to_kernel(law: AnalyticLaw, v: np.ndarray) -> np.ndarray:
    x = v if law.scaled else v * law.dimension
    return (x - law.lam) / (1.0 - law.lam)


def _from_kernel(law: AnalyticLaw, x0: np.ndarray) -> np.ndarray:
    x = (1.0 - law.lam) * x0 + law.lam
    return x if law.scaled else x / law.dimension


def _as_output(values: np.ndarray, like):
    return float(values) if np.ndim(like) == 0 else values


def logpdf(law: AnalyticLaw, v):
    """
    Log-density of a law at v.
    :param law: The analytic law.
    :param v: Scalar or array in the law's coordinate.
    :return: log f(v); -inf outside the support.
    """
    v_arr = np.asarray(v, dtype=float)
    jacobian = np.log1p(-law.lam) - (0.0 if law.scaled else np.log(law.dimension))
    return _as_output(_kernel_logpdf(law, _to_kernel(law, v_arr)) - jacobian, v)


def pdf(law: AnalyticLaw, v):
    """
    Density of a law at v, evaluated as exp(log-density). Zero outside the support.
    :param law: The analytic law.
    :param v: Scalar or array in the law's coordinate.
    :return: f(v), same shape as v.
    """
    return _as_output(np.exp(np.asarray(logpdf(law, v))), v)


def cdf(law: AnalyticLaw, v):
    """
    Cumulative distribution of a law at v; shifted laws go through the affine change of
    variable cdf(v) = cdf_kernel((v-λ)/(1-λ)).
    :param law: The analytic law.
    :param v: Scalar or array in the law's coordinate.
    :return: F(v) in [0, 1], same shape as v.
    """
    v_arr = np.asarray(v, dtype=float)
    return _as_output(np.clip(_kernel_cdf(law, _to_kernel(law, v_arr)), 0.0, 1.0), v)


def quantile(law: AnalyticLaw, q):
    """
    Inverse CDF.
    :param law: The analytic law.
    :param q: Scalar or array of probabilities in [0, 1].
    :return: v with cdf(law, v) = q.
    """
    q_arr = np.asarray(q, dtype=float)
    if np.any((q_arr < 0.0) | (q_arr > 1.0)):
        raise ArgumentError("Quantile levels must lie in [0, 1]")
    return _as_output(_from_kernel(law, _kernel_quantile(law, q_arr)), q)


def moments(law: AnalyticLaw) -> tuple[float, float]:
    """
    Closed-form mean and variance, adjusted for λ and the coordinate.
    :param law: The analytic law.
    :return: (mean, variance).
    """
    mean, variance = _kernel_moments(law)
    mean = (1.0 - law.lam) * mean + law.lam
    variance = (1.0 - law.lam) ** 2 * variance
    if law.scaled:
        return mean, variance
    d = float(law.dimension)
    return mean / d, variance / (d * d)


def support(law: AnalyticLaw) -> tuple[float, float]:
    """
    Support interval of a law: [λ, (1-λ)·dimension + λ] for Beta kernels and
    [λ, inf) for the limit laws, in scaled coordinates.
    :param law: The analytic law.
    :return: (lower, upper) in the law's coordinate.
    """
    upper = float(law.dimension) if _beta_shapes(law) is not None else np.inf
    lo, hi = _from_kernel(law, np.array([0.0, upper]))
    return float(lo), float(hi)


def limit_law(law: AnalyticLaw) -> AnalyticLaw:
    """
    Large-N limit of a finite-dimensional Beta law, keeping λ and the coordinate.
    :param law: A FullBeta, SubsystemBeta (shifted or not) or ConditionalBeta law.
    :return: ExpLimit for K=1 laws, GammaLimit with shape K and scale 1/K otherwise.
    """
    if law.family is Family.FULL_BETA:
        return AnalyticLaw.exp_limit(law.N, law.lam, law.scaled)
    if law.family is Family.CONDITIONAL_BETA:
        return AnalyticLaw.exp_limit(law.M, law.lam, law.scaled)
    if law.family in _SUBSYSTEM_FAMILIES:
        if law.K == 1:
            return AnalyticLaw.exp_limit(law.N, law.lam, law.scaled)
        return AnalyticLaw.gamma_limit(law.N, law.K, law.lam, law.scaled)
    raise ArgumentError(f"{law.family.value} has no large-N limit law")
