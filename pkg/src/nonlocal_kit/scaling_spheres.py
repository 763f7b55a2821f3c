"""Exponent dynamics of the scaling-spheres bootstrap.

The lower-bound exponents obey ``mu_{k+1} = p mu_k - (a + 2m + alpha)``.
Rational inputs stay in exact :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational, Real

from .errors import ConfigurationError, RegimeError
from .special_functions import Params, critical_exponent

__all__ = ["Regime", "MuState", "mu_sequence", "mu_limit", "classify_regime"]


class Regime(enum.Enum):
    SUBCRITICAL = "Subcritical"
    CRITICAL = "Critical"
    SUPERCRITICAL = "Supercritical"
    CRITICAL_ORDER = "CriticalOrder"
    SUPERCRITICAL_ORDER = "SupercriticalOrder"

    def __str__(self) -> str:
        return self.value


def _exact(x):
    return Fraction(x) if isinstance(x, Rational) else x


@dataclass(frozen=True)
class MuState:
    params: Params
    mu0: Real
    sequence: tuple

    @property
    def step(self):
        """The constant ``a + 2m + alpha`` subtracted at every iteration."""
        return _exact(self.params.a + 2 * self.params.m + self.params.alpha)


def _check_subcritical(params: Params) -> None:
    if not params.subcritical_order:
        raise ConfigurationError("the recurrence needs 2m + alpha < n")
    pc = critical_exponent(params)
    if not params.p < pc:
        raise RegimeError(f"p = {params.p} is not below the critical exponent {pc}")


def mu_sequence(params: Params, k_max: int, mu0: Real | None = None) -> MuState:
    """``mu_0, ..., mu_{k_max}`` with ``mu_0 = (n-2m-alpha)/2`` by default."""
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    _check_subcritical(params)
    p = _exact(params.p)
    step = _exact(params.a + 2 * params.m + params.alpha)
    if mu0 is None:
        mu0 = _exact(params.conformal_weight) / 2
    mu = _exact(mu0)
    seq = [mu]
    for _ in range(k_max):
        mu = p * mu - step
        seq.append(mu)
    return MuState(params, seq[0], tuple(seq))


def mu_limit(params: Params):
    """Limit of the sequence: ``-(a+2m+alpha)/(1-p)`` for p < 1, else ``-inf``."""
    _check_subcritical(params)
    p = _exact(params.p)
    if p >= 1:
        return float("-inf")
    return -_exact(params.a + 2 * params.m + params.alpha) / (1 - p)


def classify_regime(params: Params) -> Regime:
    """Order regime from ``2m + alpha`` against n, then p against ``p_c(a)``."""
    gamma = _exact(params.gamma)
    if gamma == params.n:
        return Regime.CRITICAL_ORDER
    if gamma > params.n:
        return Regime.SUPERCRITICAL_ORDER
    pc = critical_exponent(params)
    p = _exact(params.p)
    if p < pc:
        return Regime.SUBCRITICAL
    if p == pc:
        return Regime.CRITICAL
    return Regime.SUPERCRITICAL
