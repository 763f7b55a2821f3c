"""Closed-form constants and one-dimensional special functions.

Every kernel constant of the kit is derived here from the Gamma function,
so that the operators, the transforms and the verification suites all share
a single source of truth.

Rational inputs (``int`` or ``fractions.Fraction``) are kept exact wherever
the formula is algebraic (critical exponent, ``tau``); transcendental
constants are returned as floats.
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

import numpy as np
from scipy import special

from .errors import ConfigurationError, DivergenceError, DomainError, PoleError

__all__ = [
    "Params",
    "gamma_fn",
    "beta_fn",
    "sphere_area",
    "frac_lap_constant",
    "riesz_constant",
    "poisson_constant",
    "green_constant",
    "mean_value_constant",
    "i_const",
    "bubble_prefactor",
    "incomplete_kernel_integral",
    "critical_exponent",
    "tau",
]


def _is_rational(x) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class Params:
    """Problem parameters ``(n, m, alpha, a, p)``.

    ``alpha``, ``a`` and ``p`` may be floats or exact rationals; derived
    quantities keep the arithmetic of the inputs.
    """

    n: int
    m: int
    alpha: Real
    a: Real = 0
    p: Real = 1

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or self.n < 1:
            raise DomainError(f"dimension n must be an integer >= 1, got {self.n!r}")
        if not isinstance(self.m, (int, np.integer)) or self.m < 0:
            raise DomainError(f"order m must be an integer >= 0, got {self.m!r}")
        if not 0 < self.alpha < 2:
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha!r}")
        if self.a < 0:
            raise DomainError(f"a must be >= 0, got {self.a!r}")
        if not self.p > 0:
            raise DomainError(f"p must be > 0, got {self.p!r}")

    @classmethod
    def critical(cls, n: int, m: int, alpha: Real, a: Real = 0) -> "Params":
        """Parameters with ``p`` set to the critical exponent ``p_c(a)``."""
        probe = cls(n, m, alpha, a, 1)
        return cls(n, m, alpha, a, critical_exponent(probe))

    @property
    def gamma(self) -> Real:
        """Total order ``2m + alpha``."""
        return 2 * self.m + self.alpha

    @property
    def subcritical_order(self) -> bool:
        return self.gamma < self.n

    @property
    def conformal_weight(self) -> Real:
        """Exponent ``n - 2m - alpha`` of the Kelvin transform and the bubble."""
        return self.n - self.gamma

    @property
    def tau(self) -> Real:
        return tau(self)

    @property
    def exact(self) -> bool:
        return all(_is_rational(v) for v in (self.alpha, self.a, self.p))

    def as_dict(self) -> dict:
        return {"n": int(self.n), "m": int(self.m), "alpha": float(self.alpha),
                "a": float(self.a), "p": float(self.p)}


def gamma_fn(x: float) -> float:
    """Gamma function on the reals, with a pole error at 0, -1, -2, ...

    Negative non-integer arguments go through the reflection formula.
    """
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))
    return math.gamma(x)


def beta_fn(a: float, b: float) -> float:
    """Euler Beta function for positive arguments."""
    if a <= 0 or b <= 0:
        raise DomainError("beta_fn needs positive arguments")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def sphere_area(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n (2 for n = 1)."""
    return 2.0 * math.pi ** (n / 2) / gamma_fn(n / 2)


def _check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    return alpha


def _check_dim(n) -> int:
    if int(n) != n or n < 1:
        raise DomainError(f"dimension must be a positive integer, got {n}")
    return int(n)


def frac_lap_constant(n: int, alpha: float) -> float:
    """Normalising constant of the singular-integral fractional Laplacian.

    ``2^alpha Gamma((n+alpha)/2) / (pi^{n/2} |Gamma(-alpha/2)|)``, the value
    for which the operator has Fourier symbol ``|xi|^alpha``.
    """
    n = _check_dim(n)
    alpha = _check_alpha(alpha)
    return (2.0 ** alpha * gamma_fn((n + alpha) / 2)
            / (math.pi ** (n / 2) * abs(gamma_fn(-alpha / 2))))


def riesz_constant(gamma: float, n: int) -> float:
    """Constant ``R_{gamma,n}`` of the Riesz potential of order gamma."""
    n = _check_dim(n)
    gamma = float(gamma)
    if not 0.0 < gamma < n:
        raise DomainError(f"Riesz order must lie in (0, {n}), got {gamma}")
    return (gamma_fn((n - gamma) / 2)
            / (math.pi ** (n / 2) * 2.0 ** gamma * gamma_fn(gamma / 2)))


def poisson_constant(n: int, alpha: float) -> float:
    """Prefactor ``Gamma(n/2) sin(pi alpha/2) / pi^{n/2+1}`` of the ball Poisson kernel."""
    n = _check_dim(n)
    alpha = _check_alpha(alpha)
    return gamma_fn(n / 2) * math.sin(math.pi * alpha / 2) / math.pi ** (n / 2 + 1)


def green_constant(n: int, alpha: float) -> float:
    """Prefactor of the ball Green function of the fractional Laplacian.

    ``Gamma(n/2) / (2^alpha pi^{n/2} Gamma(alpha/2)^2)``. As the radius
    grows, this constant times the complete Beta integral tends to the
    Riesz constant ``R_{alpha,n}``.
    """
    n = _check_dim(n)
    alpha = _check_alpha(alpha)
    return gamma_fn(n / 2) / (2.0 ** alpha * math.pi ** (n / 2) * gamma_fn(alpha / 2) ** 2)


def mean_value_constant(alpha: float) -> float:
    """Weight ``(2/pi) sin(pi alpha/2)`` normalising the exterior ring average to 1."""
    alpha = _check_alpha(alpha)
    return 2.0 / math.pi * math.sin(math.pi * alpha / 2)


def i_const(s: float, n: int) -> float:
    """``I(s) = pi^{n/2} Gamma((n-2s)/2) / Gamma(n-s)`` for ``0 < s < n/2``."""
    n = _check_dim(n)
    s = float(s)
    if not 0.0 < s < n / 2:
        raise DomainError(f"I(s) needs 0 < s < n/2, got s={s}, n={n}")
    return math.pi ** (n / 2) * gamma_fn((n - 2 * s) / 2) / gamma_fn(n - s)


def bubble_prefactor(params: Params) -> float:
    """Amplitude ``c*`` of the classified solution ``Q``."""
    if not params.subcritical_order:
        raise ConfigurationError("the bubble exists only when 2m + alpha < n")
    gam = float(params.gamma)
    w = params.n - gam
    prod = riesz_constant(gam, params.n) * i_const(w / 2, params.n)
    return prod ** (-w / (2 * gam))


def incomplete_kernel_integral(T, alpha: float, n: int):
    """``int_0^T b^{alpha/2-1} (1+b)^{-n/2} db``, vectorised over ``T``.

    Computed through ``t = b/(1+b)`` as the incomplete Beta integral
    ``B(T/(1+T); alpha/2, (n-alpha)/2)``, which removes the endpoint
    singularity at ``b = 0``. ``T = inf`` returns the complete Beta value
    (only finite when ``alpha < n``).  When ``alpha >= n`` (only n = 1) the
    integral grows like ``T^{(alpha-n)/2}`` (or ``log T``) and large ``T`` are
    handled through ``u = 1/b``.
    """
    n = _check_dim(n)
    alpha = _check_alpha(alpha)
    a = alpha / 2
    b = (n - alpha) / 2
    T_arr = np.asarray(T, dtype=float)
    if np.any(T_arr < 0):
        raise DomainError("incomplete_kernel_integral needs T >= 0")
    scalar = T_arr.ndim == 0
    T_arr = np.atleast_1d(T_arr)
    out = np.zeros_like(T_arr)
    inf = np.isinf(T_arr)
    fin = ~inf & (T_arr > 0)
    if np.any(inf):
        if b <= 0:
            raise DivergenceError("complete kernel integral diverges when alpha >= n")
        out[inf] = beta_fn(a, b)
    if np.any(fin):
        Tf = T_arr[fin]
        if b > 0:
            x = Tf / (1.0 + Tf)
            out[fin] = special.betainc(a, b, x) * beta_fn(a, b)
        else:
            out[fin] = _kernel_integral_growing(Tf, a, b, n)
    return float(out[0]) if scalar else out


def _head(T, a, b):
    # int_0^T for T <= 1: B(x; a, b) = x^a/a 2F1(a, 1-b; a+1; x), x <= 1/2
    x = T / (1.0 + T)
    return x ** a / a * special.hyp2f1(a, 1.0 - b, a + 1.0, x)


def _tail_antiderivative(eps, b, n):
    """Antiderivative in ``u`` of ``u^{b-1} (1+u)^{-n/2}`` at ``u = eps`` (0 < eps <= 1)."""
    if b == 0:
        # n = alpha = 1: int du / (u sqrt(1+u)) = log((sqrt(1+u)-1)/(sqrt(1+u)+1))
        root = np.sqrt(1.0 + eps)
        return np.log(eps / (root + 1.0) ** 2)
    return eps ** b / b * special.hyp2f1(0.5 * n, b, b + 1.0, -eps)


def _kernel_integral_growing(T, a, b, n):
    """Kernel integral when ``b = (n-alpha)/2 <= 0`` (it grows without bound in T).

    Up to T = 1 the hypergeometric form is well conditioned; beyond it the
    substitution ``u = 1/beta`` gives ``int_{1/T}^1 u^{b-1} (1+u)^{-n/2} du``.
    """
    out = np.empty_like(T)
    small = T <= 1.0
    out[small] = _head(T[small], a, b)
    if np.any(~small):
        eps = 1.0 / T[~small]
        out[~small] = (_head(np.ones(1), a, b)[0] + _tail_antiderivative(1.0, b, n)
                       - _tail_antiderivative(eps, b, n))
    return out


def critical_exponent(params: Params):
    """``p_c(a) = (n + 2m + alpha + 2a) / (n - 2m - alpha)``; exact on rationals."""
    return _critical_exponent(int(params.n), int(params.m), params.alpha, params.a)


@lru_cache(maxsize=1024, typed=True)  # typed: 1, 1.0 and Fraction(1) hash alike
def _critical_exponent(n: int, m: int, alpha, a):
    w = n - 2 * m - alpha
    if w <= 0:
        raise ConfigurationError("critical exponent undefined when 2m + alpha >= n")
    num = n + 2 * m + alpha + 2 * a
    if _is_rational(num) and _is_rational(w):
        return Fraction(num) / Fraction(w)
    return float(num) / float(w)


def tau(params: Params):
    """``n + 2m + alpha + 2a - p (n - 2m - alpha)``; exact on rationals."""
    val = params.n + params.gamma + 2 * params.a - params.p * params.conformal_weight
    return Fraction(val) if _is_rational(val) else val
