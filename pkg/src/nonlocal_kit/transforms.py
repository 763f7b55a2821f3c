"""Kelvin inversion and the classified bubble family."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, SingularPointError
from .fields import ScalarField
from .special_functions import Params, bubble_prefactor

__all__ = [
    "Bubble",
    "bubble_value",
    "bubble_field",
    "kelvin_transform",
    "kelvin_field",
    "kelvin_deficit",
]


@dataclass(frozen=True, eq=False)
class Bubble:
    """``u(x) = mu^{w/2} Q(mu (x - x0))`` with ``Q(x) = c* (1+|x|^2)^{-w/2}``.

    ``w = n - 2m - alpha`` is the conformal weight of ``params``.
    """

    params: Params
    mu: float = 1.0
    x0: np.ndarray | None = field(default=None)

    def __post_init__(self):
        if not self.params.subcritical_order:
            raise ConfigurationError("the bubble exists only when 2m + alpha < n")
        if not self.mu > 0:
            raise DomainError("bubble scale mu must be positive")
        n = self.params.n
        x0 = np.zeros(n) if self.x0 is None else np.asarray(self.x0, dtype=float).reshape(-1)
        if x0.size != n:
            raise DomainError(f"bubble centre must be a point of R^{n}")
        object.__setattr__(self, "x0", x0)

    @property
    def weight(self) -> float:
        return float(self.params.conformal_weight)

    @property
    def prefactor(self) -> float:
        return bubble_prefactor(self.params)

    def profile(self, r):
        """Value as a function of the distance to ``x0``."""
        w = self.weight
        r = np.asarray(r, dtype=float)
        return (self.prefactor * self.mu ** (0.5 * w)
                * (1.0 + (self.mu * r) ** 2) ** (-0.5 * w))


def bubble_value(bubble: Bubble, x):
    """Bubble value at ``x`` (a point, or an array of points on the last axis)."""
    x = np.asarray(x, dtype=float)
    n = bubble.params.n
    if x.ndim == 0 or x.shape[-1] != n:
        raise DomainError(f"expected points of R^{n}")
    val = bubble.profile(np.linalg.norm(x - bubble.x0, axis=-1))
    return float(val) if np.ndim(val) == 0 else val


def bubble_field(bubble: Bubble, power: float = 1.0) -> ScalarField:
    """The bubble (or its ``power``) as a radial field about ``x0``."""
    w = bubble.weight
    prof = bubble.profile
    if power == 1.0:
        profile = prof
    else:
        def profile(r):
            return prof(r) ** power
    return ScalarField.radial(profile, bubble.params.n, bubble.x0,
                              decay_exponent=w * power, smoothness_radius=0.5 / bubble.mu,
                              name=f"Q^{power:g}")


def _weight(params: Params) -> float:
    w = params.conformal_weight
    if w <= 0:
        raise ConfigurationError("the Kelvin weight n - 2m - alpha must be positive")
    return float(w)


def kelvin_transform(u: ScalarField, lam: float, x, params: Params):
    """``(lam/|x|)^{n-2m-alpha} u(lam^2 x / |x|^2)``, centred at the origin.

    Accepts a single point or an array of points on the last axis.
    """
    if not lam > 0:
        raise DomainError("Kelvin radius must be positive")
    if params.n != u.dim:
        raise DomainError("field dimension differs from params.n")
    w = _weight(params)
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    pts = x.reshape(-1, u.dim)
    r2 = np.sum(pts * pts, axis=-1)
    if np.any(r2 == 0):
        raise SingularPointError("the Kelvin transform is undefined at the origin")
    image = lam * lam * pts / r2[:, None]
    vals = (lam / np.sqrt(r2)) ** w * u(image)
    return float(vals[0]) if single else vals.reshape(x.shape[:-1])


def kelvin_field(u: ScalarField, lam: float, params: Params) -> ScalarField:
    """``u_lam`` as a field (the origin itself is excluded from its domain)."""
    def func(x):
        return kelvin_transform(u, lam, np.asarray(x).reshape(-1, u.dim), params).reshape(
            np.shape(x)[:-1])

    return ScalarField.general(func, u.dim, name=f"K{lam:g}[{u.name}]")


def kelvin_deficit(u: ScalarField, lam: float, x, params: Params):
    """``u_lam(x) - u(x)`` on the punctured ball ``0 < |x| < lam``."""
    x = np.asarray(x, dtype=float)
    norms = np.linalg.norm(x.reshape(-1, u.dim), axis=-1)
    if np.any(norms >= lam) or np.any(norms == 0):
        raise DomainError("kelvin_deficit needs 0 < |x| < lam")
    base = u(x.reshape(-1, u.dim))
    val = np.atleast_1d(kelvin_transform(u, lam, x.reshape(-1, u.dim), params)) - base
    return float(val[0]) if x.ndim <= 1 else val.reshape(x.shape[:-1])
