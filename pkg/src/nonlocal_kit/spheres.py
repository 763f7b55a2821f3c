"""Spherical means of fields and of arbitrary functions on spheres.

Symmetric fields are reduced to one polar angle theta (weight
``sin^{n-2} theta``); general fields use exact product rules in n <= 3 and a
fixed deterministic low-discrepancy point set above.  Rules are refined by
doubling until two consecutive orders agree.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import ndtri
from scipy.stats import qmc

from .errors import QuadratureError
from .fields import ScalarField
from .quadrature import DEFAULT_CONFIG, QuadConfig, gauss_legendre01, graded_rule
from .special_functions import beta_fn

__all__ = ["sphere_mean", "sphere_mean_of", "sphere_points", "sphere_rule"]

_START_ORDER = 16


def _theta_norm(n: int) -> float:
    return beta_fn(0.5, (n - 1) / 2)


def _converged(prev, cur, cfg: QuadConfig) -> bool:
    tol = 0.1 * np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(cur))
    return bool(np.all(np.abs(cur - prev) <= tol))


def _theta_rule(edges: np.ndarray, order: int):
    """Nodes/weights for panels between consecutive columns of ``edges``.

    ``edges`` has shape (R, P+1) with edges[:, 0] = 0 and edges[:, -1] = pi;
    interior edges are break points and get geometric grading.
    """
    nodes, weights = [], []
    npanels = edges.shape[1] - 1
    for j in range(npanels):
        # 8-point strips of ratio 2 resolve algebraic end behaviour to ~1e-13
        x, w = graded_rule(order, j > 0, j < npanels - 1, 40, 8)
        a = edges[:, j:j + 1]
        length = edges[:, j + 1:j + 2] - a
        nodes.append(a + length * x[None, :])
        weights.append(length * w[None, :])
    return np.concatenate(nodes, axis=1), np.concatenate(weights, axis=1)


def _theta_mean(values: Callable[[np.ndarray], np.ndarray], breaks: np.ndarray, n: int,
                cfg: QuadConfig) -> np.ndarray:
    """Normalised theta integral, one row per radius, refined by doubling."""
    R = breaks.shape[0]
    edges = np.concatenate([np.zeros((R, 1)), breaks, np.full((R, 1), math.pi)], axis=1)
    norm = _theta_norm(n)
    prev = None
    order = _START_ORDER
    while order <= cfg.max_sphere_order:
        th, w = _theta_rule(edges, order)
        vals = values(th)
        if n != 2:
            w = w * np.sin(th) ** (n - 2)
        cur = np.sum(vals * w, axis=1) / norm
        if prev is not None and _converged(prev, cur, cfg):
            return cur
        prev = cur
        order *= 2
    raise QuadratureError("theta-reduced sphere mean did not converge",
                          estimate=float(np.max(np.abs(prev))))


def _break_angles(cos_values: np.ndarray) -> np.ndarray:
    return np.sort(np.arccos(np.clip(cos_values, -1.0, 1.0)), axis=1)


def _radial_mean(u: ScalarField, x: np.ndarray, radii: np.ndarray, cfg: QuadConfig):
    d = float(np.linalg.norm(x - u.center))
    prof = u.profile
    if d == 0.0:
        return prof(radii)
    rho = radii[:, None]
    bps = [b for b in u.breakpoints if b > 0]
    if u.support is not None and u.support > 0:
        bps.append(u.support)
    bps = np.array(sorted(set(bps)))
    if bps.size:
        cosb = (bps[None, :] ** 2 - d * d - rho ** 2) / (2.0 * d * rho)
        breaks = _break_angles(cosb)
    else:
        breaks = np.zeros((radii.size, 0))

    def values(th):
        dist2 = (d - rho) ** 2 + 4.0 * d * rho * np.cos(0.5 * th) ** 2
        return prof(np.sqrt(dist2))

    return _theta_mean(values, breaks, u.dim, cfg)


def _ridge_mean(u: ScalarField, x: np.ndarray, radii: np.ndarray, cfg: QuadConfig):
    s0 = float(x @ u.direction)
    rho = radii[:, None]
    prof = u.profile
    bps = np.array(sorted(set(u.breakpoints)))
    if bps.size:
        breaks = _break_angles((bps[None, :] - s0) / rho)
    else:
        breaks = np.zeros((radii.size, 0))

    def values(th):
        return prof(s0 + rho * np.cos(th))

    return _theta_mean(values, breaks, u.dim, cfg)


@lru_cache(maxsize=64)
def sphere_points(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Deterministic antipodally symmetric point set on S^{n-1}.

    Halton points pushed through the normal quantile and normalised; ``seed``
    applies a fixed Cranley-Patterson shift (0 means no shift).
    """
    half = max(1, count // 2)
    h = qmc.Halton(d=n, scramble=False).random(half + 1)[1:]
    if seed:
        shift = np.random.default_rng(seed).random(n)
        h = (h + shift) % 1.0
    h = np.clip(h, 1e-12, 1 - 1e-12)
    g = ndtri(h)
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    pts = np.vstack([g, -g])
    pts.flags.writeable = False
    return pts


def sphere_rule(n: int, order: int, cfg: QuadConfig | None = None):
    """Directions and weights (summing to 1) of the sphere rule at ``order``.

    n = 1 uses the two antipodal points, n = 2 the ``order``-point trapezoid
    rule in the angle, n = 3 a Gauss-Legendre (in cos theta) by trapezoid
    (in phi) product with ``order x 2 order`` nodes.  Above three dimensions
    the fixed point set of :func:`sphere_points` is returned regardless of
    ``order``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if n == 1:
        return np.array([[1.0], [-1.0]]), np.array([0.5, 0.5])
    if n == 2:
        phi = 2.0 * math.pi * (np.arange(order) + 0.5) / order
        return np.stack([np.cos(phi), np.sin(phi)], axis=1), np.full(order, 1.0 / order)
    if n == 3:
        t, wt = gauss_legendre01(order)
        t = 2.0 * t - 1.0
        phi = 2.0 * math.pi * (np.arange(2 * order) + 0.5) / (2 * order)
        st = np.sqrt(1.0 - t * t)
        omega = np.stack([np.outer(st, np.cos(phi)).ravel(),
                          np.outer(st, np.sin(phi)).ravel(),
                          np.repeat(t, phi.size)], axis=1)
        return omega, np.repeat(wt, phi.size) / phi.size
    omega = sphere_points(n, cfg.sphere_points, cfg.seed)
    return omega, np.full(omega.shape[0], 1.0 / omega.shape[0])


_CHUNK_POINTS = 1 << 21


def _apply_rule(func, x, radii, omega, wts):
    """Weighted sphere sums for each radius, in chunks bounded in memory."""
    step = max(1, _CHUNK_POINTS // omega.shape[0])
    out = np.empty(radii.size)
    for i in range(0, radii.size, step):
        rho = radii[i:i + step, None, None]
        out[i:i + step] = func(x + rho * omega[None, :, :]) @ wts
    return out


def _generic_mean(func: Callable[[np.ndarray], np.ndarray], x: np.ndarray,
                  radii: np.ndarray, n: int, cfg: QuadConfig) -> np.ndarray:
    """Mean of ``func`` over the spheres ``x + r S^{n-1}``, one per radius."""
    if n == 1 or n > 3:
        omega, wts = sphere_rule(n, 0, cfg)
        return _apply_rule(func, x, radii, omega, wts)
    # refine by doubling; radii drop out as soon as two orders agree
    out = np.empty(radii.size)
    active = np.arange(radii.size)
    prev = None
    order = _START_ORDER
    while order <= cfg.max_sphere_order:
        omega, wts = sphere_rule(n, order, cfg)
        cur = _apply_rule(func, x, radii[active], omega, wts)
        if prev is not None:
            tol = 0.1 * np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(cur))
            done = np.abs(cur - prev) <= tol
            out[active[done]] = cur[done]
            active, cur = active[~done], cur[~done]
            if active.size == 0:
                return out
        prev = cur
        order *= 2
    raise QuadratureError("sphere quadrature did not converge",
                          estimate=float(np.max(np.abs(prev))))


def sphere_mean(u: ScalarField, x, radii, cfg: QuadConfig | None = None) -> np.ndarray:
    """Mean of ``u`` over the spheres of the given radii centred at ``x``.

    Uses the exact radial shortcut, the theta reduction for radial and ridge
    fields, and the generic sphere rules otherwise.
    """
    cfg = cfg or DEFAULT_CONFIG
    x = np.asarray(x, dtype=float).reshape(u.dim)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    out = np.empty_like(radii)
    zero = radii == 0
    if np.any(zero):
        out[zero] = u.value(x)
    pos = ~zero
    if not np.any(pos):
        return out
    r = radii[pos]
    if u.dim == 1:
        out[pos] = _generic_mean(u.func, x, r, 1, cfg)
    elif u.is_radial:
        out[pos] = _radial_mean(u, x, r, cfg)
    elif u.is_ridge:
        out[pos] = _ridge_mean(u, x, r, cfg)
    else:
        out[pos] = _generic_mean(u.func, x, r, u.dim, cfg)
    return out


def sphere_mean_of(func: Callable[[np.ndarray], np.ndarray], x, radii, n: int,
                   cfg: QuadConfig | None = None) -> np.ndarray:
    """Mean over spheres of an arbitrary vectorised function of points."""
    cfg = cfg or DEFAULT_CONFIG
    x = np.asarray(x, dtype=float).reshape(n)
    radii = np.atleast_1d(np.asarray(radii, dtype=float))
    return _generic_mean(func, x, radii, n, cfg)
