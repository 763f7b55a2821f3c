"""Scalar fields on R^n with the metadata the quadratures rely on."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, LAlphaError

__all__ = ["ScalarField", "Ball", "check_decay"]


def _as_points(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x.reshape(1)
    if x.shape[-1] != n:
        raise DomainError(f"expected points with last axis {n}, got shape {x.shape}")
    return x


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A function on R^n plus decay and symmetry metadata.

    ``func`` maps an array of points of shape ``(..., n)`` to values of shape
    ``(...)``.  ``decay_exponent`` q declares ``|u(x) - far_value| <= C
    (1+|x|)^{-q}``.  ``smoothness_radius`` is the radius of the ball within
    which a second-order Taylor model is trusted.

    Optional symmetry: a radial field depends only on ``|x - center|`` through
    ``profile``; a ridge field depends only on ``direction . x`` through
    ``profile``.  ``breakpoints`` lists radii (radial) or abscissae (ridge)
    where the profile is not smooth, ``support`` a radius beyond which a
    radial profile vanishes.
    """

    func: Callable[[np.ndarray], np.ndarray]
    dim: int
    decay_exponent: float = 0.0
    smoothness_radius: float = 1.0
    far_value: float = 0.0
    kind: str = "general"
    center: np.ndarray | None = None
    direction: np.ndarray | None = None
    profile: Callable[[np.ndarray], np.ndarray] | None = None
    breakpoints: tuple = ()
    support: float | None = None
    name: str = "field"

    def __post_init__(self):
        if self.decay_exponent < 0:
            raise DomainError("decay exponent must be >= 0")
        if self.kind not in ("general", "radial", "ridge"):
            raise DomainError(f"unknown field kind {self.kind!r}")

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.func(_as_points(x, self.dim)), dtype=float)

    def value(self, x) -> float:
        return float(self(np.asarray(x, dtype=float).reshape(1, self.dim))[0])

    @property
    def is_radial(self) -> bool:
        return self.kind == "radial"

    @property
    def is_ridge(self) -> bool:
        return self.kind == "ridge"

    # -- constructors -----------------------------------------------------
    @classmethod
    def general(cls, func, dim: int, **meta) -> "ScalarField":
        return cls(func=func, dim=int(dim), **meta)

    @classmethod
    def radial(cls, profile, dim: int, center=None, **meta) -> "ScalarField":
        c = np.zeros(dim) if center is None else np.asarray(center, dtype=float)
        if c.shape != (dim,):
            raise DomainError("center must be a point of R^n")

        def func(x):
            return profile(np.linalg.norm(x - c, axis=-1))

        return cls(func=func, dim=int(dim), kind="radial", center=c, profile=profile, **meta)

    @classmethod
    def ridge(cls, profile, direction, **meta) -> "ScalarField":
        e = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(e)
        if norm == 0:
            raise DomainError("ridge direction must be non-zero")
        e = e / norm

        def func(x):
            return profile(x @ e)

        return cls(func=func, dim=e.size, kind="ridge", direction=e, profile=profile, **meta)

    @classmethod
    def constant(cls, c: float, dim: int) -> "ScalarField":
        c = float(c)
        # the zero field is compactly supported (in the empty ball)
        return cls.radial(lambda r: np.full(np.shape(r), c), dim, decay_exponent=0.0,
                          smoothness_radius=np.inf, far_value=c, name=f"const({c:g})",
                          support=0.0 if c == 0 else None)

    @classmethod
    def plane_wave(cls, k) -> "ScalarField":
        """``cos(k . x)`` as a ridge field."""
        k = np.asarray(k, dtype=float)
        kn = float(np.linalg.norm(k))
        if kn == 0:
            raise DomainError("wave vector must be non-zero")
        return cls.ridge(lambda s: np.cos(kn * s), k, decay_exponent=0.0,
                         smoothness_radius=1.0 / kn, name=f"cos(|k|={kn:g})")

    def with_(self, **changes) -> "ScalarField":
        return replace(self, **changes)

    def as_general(self) -> "ScalarField":
        """Same values with the symmetry metadata dropped."""
        return replace(self, kind="general", center=None, direction=None, profile=None,
                       breakpoints=(), support=None)

    def __add__(self, other: "ScalarField") -> "ScalarField":
        if not isinstance(other, ScalarField) or other.dim != self.dim:
            return NotImplemented
        f, g = self.func, other.func
        meta = dict(decay_exponent=min(self.decay_exponent, other.decay_exponent),
                    smoothness_radius=min(self.smoothness_radius, other.smoothness_radius),
                    far_value=self.far_value + other.far_value,
                    name=f"({self.name}+{other.name})")
        same_radial = (self.is_radial and other.is_radial
                       and np.array_equal(self.center, other.center))
        if same_radial:
            p, q = self.profile, other.profile
            return ScalarField.radial(lambda r: p(r) + q(r), self.dim, self.center,
                                      breakpoints=tuple(sorted(set(self.breakpoints)
                                                               | set(other.breakpoints))),
                                      **meta)
        return ScalarField.general(lambda x: f(x) + g(x), self.dim, **meta)

    def __mul__(self, c: float) -> "ScalarField":
        c = float(c)
        f = self.func
        prof = self.profile
        return replace(self, func=lambda x: c * f(x),
                       profile=None if prof is None else (lambda r: c * prof(r)),
                       far_value=c * self.far_value, name=f"{c:g}*{self.name}")

    __rmul__ = __mul__

    def power(self, p: float) -> "ScalarField":
        """Pointwise ``u^p`` (for non-negative fields)."""
        f = self.func
        prof = self.profile
        return replace(self, func=lambda x: f(x) ** p,
                       profile=None if prof is None else (lambda r: prof(r) ** p),
                       decay_exponent=self.decay_exponent * p if self.far_value == 0 else 0.0,
                       far_value=self.far_value ** p, name=f"{self.name}^{p:g}")


@dataclass(frozen=True, eq=False)
class Ball:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.atleast_1d(np.asarray(self.center, dtype=float)))
        if not self.radius > 0:
            raise DomainError("ball radius must be positive")

    @property
    def dim(self) -> int:
        return self.center.size

    def offset(self, x) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=float) - self.center))

    def contains(self, x) -> bool:
        return self.offset(x) < self.radius


def check_decay(u: ScalarField, radii: Sequence[float] = (10.0, 100.0, 1000.0),
                growth_limit: float = 100.0) -> None:
    """Spot-check the declared decay exponent of ``u`` by sampling.

    Raises :class:`LAlphaError` when ``|u - far_value| (1+|x|)^q`` grows by
    more than ``growth_limit`` between the innermost and outermost radius.
    """
    if u.support is not None:
        return
    n = u.dim
    dirs = np.eye(n)
    if n > 1:
        dirs = np.vstack([dirs, -dirs, np.ones((1, n)) / np.sqrt(n)])
    else:
        dirs = np.array([[1.0], [-1.0]])
    base = np.zeros(n) if u.center is None else u.center
    weighted = []
    for r in radii:
        pts = base + r * dirs
        vals = np.abs(u(pts) - u.far_value)
        weighted.append(float(np.max(vals)) * (1.0 + r) ** u.decay_exponent)
    first, last = weighted[0], weighted[-1]
    if last > growth_limit * max(first, 1e-300) and last > 1e-12:
        raise LAlphaError(
            f"field {u.name!r} declares decay {u.decay_exponent} but "
            f"|u|(1+|x|)^q grows from {first:.3g} to {last:.3g}")
