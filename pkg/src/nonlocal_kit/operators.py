"""Pointwise nonlocal operators and the ball kernels of the fractional Laplacian.

All integrals are reduced to one-dimensional radial integrals against
spherical means, which are computed by :mod:`nonlocal_kit.spheres`.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev
from scipy import special

from .errors import (BoundaryError, ConfigurationError, DivergenceError, DomainError,
                     QuadratureError)
from .fields import Ball, ScalarField, check_decay
from .quadrature import (DEFAULT_CONFIG, QuadConfig, graded_jacobi_rule, integrate_adaptive,
                         integrate_algebraic_end,
                         integrate_semi_infinite, integrate_tail, integrate_radial_nd,
                         sphere_kernel_mean)
from .special_functions import (beta_fn, frac_lap_constant, green_constant,
                                incomplete_kernel_integral, mean_value_constant,
                                poisson_constant, riesz_constant, sphere_area)
from .spheres import sphere_mean, sphere_mean_of, sphere_rule

__all__ = [
    "frac_laplacian",
    "riesz_potential",
    "riesz_potential_field",
    "spherical_average",
    "ring_average",
    "ring_weight_integral",
    "green_function_alpha",
    "poisson_kernel_alpha",
    "poisson_mass",
    "green_term",
    "poisson_term",
    "green_poisson_reconstruct",
    "poisson_extension_field",
    "green_function_laplacian",
]


def _check_alpha(alpha) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 2.0:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    return alpha


def _point(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != n:
        raise DomainError(f"expected a point of R^{n}, got {x.size} coordinates")
    return x


def _radial_breaks(u: ScalarField, x: np.ndarray) -> list[float]:
    """Radii about ``x`` where spheres cross a kink of a radial field."""
    if not u.is_radial:
        return []
    d = float(np.linalg.norm(x - u.center))
    marks = [b for b in u.breakpoints if b > 0]
    if u.support is not None and u.support > 0:
        marks.append(u.support)
    out = set()
    for b in marks:
        out.update(v for v in (abs(b - d), b + d) if v > 0)
    return sorted(out)


def _far_integral(f: Callable[[np.ndarray], np.ndarray], lo: float, decay: float,
                  oscillatory: bool, cfg: QuadConfig, scale: float = 0.0) -> float:
    """``int_lo^inf f`` for a far-field integrand that is smooth on [lo, inf).

    ``scale`` is the size of the enclosing result, used as the reference of
    the relative tolerance.
    """
    if oscillatory:
        return integrate_semi_infinite(f, lo, cfg, cutoff=lo, oscillatory=True, scale=scale)
    tcfg = cfg.with_(abs_tol=min(0.5, max(cfg.abs_tol, 0.25 * cfg.rel_tol * scale)))
    return integrate_tail(f, lo, tcfg, decay=decay)


def _bounded_far(u: ScalarField, x: np.ndarray) -> float | None:
    """Radius about ``x`` beyond which a compactly supported radial ``u`` vanishes."""
    if u.is_radial and u.support is not None:
        return float(np.linalg.norm(x - u.center)) + u.support
    return None


# -- fractional Laplacian ---------------------------------------------------

def frac_laplacian(u: ScalarField, x, alpha: float, cfg: QuadConfig | None = None,
                   check: bool = True) -> float:
    """``(-Delta)^{alpha/2} u(x)`` through the symmetric second difference.

    With ``F(rho)`` the mean of ``u`` over the sphere of radius rho about x,
    the value is ``c(n,alpha) |S^{n-1}| int_0^inf rho^{-1-alpha} (u(x) - F(rho))
    d rho``.  On ``[0, delta]`` the difference is replaced by its even Taylor
    model ``c1 rho^2 + c2 rho^4 + c3 rho^6`` fitted at delta, delta/2 and
    delta/4, which removes the
    cancellation near rho = 0; the far field subtracts ``far_value`` and is
    integrated by the tail map (decaying fields) or by doubling windows.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = _check_alpha(alpha)
    n = u.dim
    x = _point(x, n)
    if check:
        check_decay(u)
    ux = u.value(x)
    far = u.far_value
    delta = min(cfg.inner_split_radius, u.smoothness_radius)
    if not delta > 0:
        raise DomainError("smoothness_radius must be positive")
    breaks = [b for b in _radial_breaks(u, x) if b > delta]
    cutoff = cfg.tail_cutoff * max([1.0] + breaks)

    def diff(rho):
        return ux - sphere_mean(u, x, rho, cfg)

    # even Taylor model c1 rho^2 + c2 rho^4 + c3 rho^6 through three samples
    probe = delta * np.array([1.0, 0.5, 0.25])
    powers = np.array([2.0, 4.0, 6.0])
    coef = np.linalg.solve(probe[:, None] ** powers[None, :], diff(probe))
    near = float(np.sum(coef * delta ** (powers - alpha) / (powers - alpha)))

    def middle_f(rho):
        return rho ** (-1.0 - alpha) * diff(rho)

    middle = integrate_adaptive(middle_f, delta, cutoff, cfg, points=breaks, singular="none")

    tail = (ux - far) * cutoff ** (-alpha) / alpha
    outer = _bounded_far(u, x)
    if outer is None or outer > cutoff:
        def tail_f(rho):
            return rho ** (-1.0 - alpha) * (sphere_mean(u, x, rho, cfg) - far)

        tail -= _far_integral(tail_f, cutoff, 1.0 + alpha + u.decay_exponent,
                              u.decay_exponent == 0, cfg, abs(near + middle + tail))
    return frac_lap_constant(n, alpha) * sphere_area(n) * (near + middle + tail)


# -- Riesz potentials -------------------------------------------------------

def riesz_potential(f: ScalarField, gamma: float, x, cfg: QuadConfig | None = None) -> float:
    """``I_gamma f(x) = R_{gamma,n} int |x-y|^{gamma-n} f(y) dy``.

    ``f`` must be radial (any centre); in one dimension general fields are
    accepted and integrated directly, split at x.
    """
    cfg = cfg or DEFAULT_CONFIG
    n = f.dim
    gamma = float(gamma)
    const = riesz_constant(gamma, n)
    x = _point(x, n)
    if f.far_value != 0:
        raise DivergenceError("Riesz potential of a field with non-zero far value diverges")
    if f.support is not None and f.support == 0:
        return 0.0
    if f.is_radial:
        x_norm = float(np.linalg.norm(x - f.center))
        val = integrate_radial_nd(f.profile, n - gamma, x_norm, n, f.decay_exponent, cfg,
                                  points=f.breakpoints, support=f.support)
        return const * val
    if n != 1:
        raise ConfigurationError("riesz_potential needs a radial field when n > 1")
    if f.decay_exponent <= gamma:
        raise DivergenceError(
            f"decay {f.decay_exponent} <= gamma = {gamma}: Riesz integral diverges")
    x0 = float(x[0])
    decay = f.decay_exponent + 1.0 - gamma

    def side(sign):
        def g(t):
            return t ** (gamma - 1.0) * f.func((x0 + sign * t)[..., None])
        return integrate_semi_infinite(g, 0.0, cfg, decay=decay)

    return const * (side(1.0) + side(-1.0))


def _tabulated_profile(values: Callable[[np.ndarray], np.ndarray], scale: float,
                       decay: float, degree: int) -> Callable[[np.ndarray], np.ndarray]:
    """Chebyshev model of a profile on [0, inf) in ``t = r/(r+scale)``.

    The tabulated quantity is ``P(r) (1 + r/scale)^decay``, which stays smooth
    and bounded up to t = 1 for profiles with a power-law far field.
    """
    def mapped(t):
        r = scale * t / (1.0 - t)
        return values(r) * (1.0 + r / scale) ** decay

    model = chebyshev.Chebyshev.interpolate(mapped, degree, domain=[0.0, 1.0])

    def profile(r):
        r = np.asarray(r, dtype=float)
        t = r / (r + scale)
        return model(t) * (1.0 + r / scale) ** (-decay)

    return profile


def riesz_potential_field(f: ScalarField, gamma: float, cfg: QuadConfig | None = None,
                          degree: int | None = None) -> ScalarField:
    """The radial field ``I_gamma f`` for a radial ``f`` vanishing at infinity.

    Values are computed pointwise by :func:`riesz_potential`; with ``degree``
    the profile is instead tabulated once as a Chebyshev model (useful when
    the field feeds further nested quadratures).
    """
    cfg = cfg or DEFAULT_CONFIG
    if not f.is_radial:
        raise ConfigurationError("riesz_potential_field needs a radial field")
    n = f.dim
    gamma = float(gamma)
    riesz_constant(gamma, n)
    center = f.center

    def direct(r):
        r = np.asarray(r, dtype=float)
        flat = [riesz_potential(f, gamma, center + np.eye(n)[0] * ri, cfg) for ri in r.ravel()]
        return np.array(flat).reshape(r.shape)

    scale = f.support if f.support else max(1.0, f.smoothness_radius)
    profile = direct if degree is None else _tabulated_profile(direct, scale, n - gamma, degree)
    smooth = f.smoothness_radius if f.support is None else max(f.smoothness_radius, scale)
    return ScalarField.radial(profile, n, center, decay_exponent=n - gamma,
                              smoothness_radius=smooth, name=f"I{gamma:g}[{f.name}]")


# -- averages ---------------------------------------------------------------

def spherical_average(u: ScalarField, center, r: float, cfg: QuadConfig | None = None) -> float:
    """Mean of ``u`` over the sphere of radius ``r`` about ``center``."""
    if not r > 0:
        raise DomainError("sphere radius must be positive")
    return float(sphere_mean(u, _point(center, u.dim), [r], cfg)[0])


def ring_weight_integral(R: float, alpha: float, lo: float) -> float:
    """``int_lo^inf R^alpha / (r (r^2-R^2)^{alpha/2}) dr`` for ``lo >= R``.

    In ``s = R^2/r^2`` this is half the incomplete Beta integral
    ``B(R^2/lo^2; alpha/2, 1-alpha/2)``.
    """
    alpha = _check_alpha(alpha)
    a, b = 0.5 * alpha, 1.0 - 0.5 * alpha
    return 0.5 * special.betainc(a, b, (R / lo) ** 2) * beta_fn(a, b)


def ring_average(u: ScalarField, center, R: float, alpha: float,
                 cfg: QuadConfig | None = None) -> float:
    """``K(alpha) int_R^inf R^alpha / (r (r^2-R^2)^{alpha/2}) F(r) dr``.

    ``F`` is the spherical mean of ``u`` about ``center`` and ``K`` the
    constant normalising the weight to unit mass.  The singular end r = R is
    integrated numerically; beyond the cutoff the weight mass times
    ``far_value`` is taken in closed form and the remainder numerically.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = _check_alpha(alpha)
    if not R > 0:
        raise DomainError("ring radius must be positive")
    x = _point(center, u.dim)
    check_decay(u)
    far = u.far_value
    R = float(R)
    breaks = [b for b in _radial_breaks(u, x) if b > R]
    cutoff = cfg.tail_cutoff * max([1.0, R] + breaks)

    def weight(r):
        return R ** alpha / (r * ((r - R) * (r + R)) ** (0.5 * alpha))

    def near_h(r, off):
        return R ** alpha / (r * (r + R) ** (0.5 * alpha)) * sphere_mean(u, x, r, cfg)

    total = integrate_algebraic_end(near_h, R, cutoff, -0.5 * alpha, cfg, points=breaks)
    total += far * ring_weight_integral(R, alpha, cutoff)
    outer = _bounded_far(u, x)
    if outer is None or outer > cutoff:
        def far_f(r):
            return weight(r) * (sphere_mean(u, x, r, cfg) - far)

        total += _far_integral(far_f, cutoff, 1.0 + alpha + u.decay_exponent,
                               u.decay_exponent == 0, cfg, abs(total))
    return mean_value_constant(alpha) * total


# -- ball kernels -----------------------------------------------------------

def _points(z, n: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    if z.ndim == 0:
        z = z.reshape(1)
    if z.shape[-1] != n:
        raise DomainError(f"expected points of R^{n}, got shape {z.shape}")
    return z


def green_function_alpha(x, y, ball: Ball, alpha: float):
    """Green function of ``(-Delta)^{alpha/2}`` on ``ball``.

    ``C |x-y|^{alpha-n} B(t_R/s_R)`` with ``s_R = |x-y|^2/R^2`` and
    ``t_R = (1-|x-c|^2/R^2)(1-|y-c|^2/R^2)``; zero unless both points are
    interior, ``+inf`` at ``x = y``.  Broadcasts over leading axes.
    """
    alpha = _check_alpha(alpha)
    n = ball.dim
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    scalar = x.ndim <= 1 and y.ndim <= 1
    x, y = _points(x, n), _points(y, n)
    R2 = ball.radius ** 2
    tx = 1.0 - np.sum((x - ball.center) ** 2, axis=-1) / R2
    ty = 1.0 - np.sum((y - ball.center) ** 2, axis=-1) / R2
    dist = np.linalg.norm(x - y, axis=-1)
    tx, ty, dist = np.broadcast_arrays(tx, ty, dist)
    out = np.zeros(dist.shape)
    inside = (tx > 0) & (ty > 0)
    same = inside & (dist == 0)
    ok = inside & ~same
    if np.any(ok):
        T = tx[ok] * ty[ok] * R2 / dist[ok] ** 2
        out[ok] = (green_constant(n, alpha) * dist[ok] ** (alpha - n)
                   * incomplete_kernel_integral(T, alpha, n))
    out[same] = np.inf
    return float(out.reshape(-1)[0]) if scalar else out


def poisson_kernel_alpha(x, y, ball: Ball, alpha: float):
    """Poisson kernel of ``(-Delta)^{alpha/2}`` on ``ball`` (zero for interior y).

    ``x`` must be interior; ``y`` on the sphere raises :class:`BoundaryError`.
    """
    alpha = _check_alpha(alpha)
    n = ball.dim
    x = _point(x, n)
    y = np.asarray(y, dtype=float)
    scalar = y.ndim <= 1
    y = _points(y, n)
    R2 = ball.radius ** 2
    dx2 = float(np.sum((x - ball.center) ** 2))
    if not dx2 < R2:
        raise DomainError("poisson_kernel_alpha needs x inside the ball")
    dy2 = np.sum((y - ball.center) ** 2, axis=-1)
    if np.any(dy2 == R2):
        raise BoundaryError("Poisson kernel is singular on the sphere |y - c| = R")
    out = np.zeros(dy2.shape)
    ext = dy2 > R2
    if np.any(ext):
        dist = np.linalg.norm(y[ext] - x, axis=-1)
        out[ext] = (poisson_constant(n, alpha) * ((R2 - dx2) / (dy2[ext] - R2)) ** (0.5 * alpha)
                    * dist ** (-n))
    return float(out.reshape(-1)[0]) if scalar else out


def _poisson_factor(ball: Ball, x: np.ndarray, alpha: float) -> tuple[float, float]:
    d = ball.offset(x)
    if not d < ball.radius:
        raise DomainError("x must lie inside the ball")
    R = ball.radius
    return d, mean_value_constant(alpha) * ((R - d) * (R + d)) ** (0.5 * alpha)


def poisson_mass(x, ball: Ball, alpha: float, cfg: QuadConfig | None = None) -> float:
    """``int_{|y-c|>R} P(x, y) dy`` evaluated by radial quadrature.

    The sphere integral of ``|x-y|^{-n}`` is the closed-form kernel mean, so
    this is a one-dimensional integral with an ``(r-R)^{-alpha/2}`` end.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = _check_alpha(alpha)
    n = ball.dim
    x = _point(x, n)
    d, pref = _poisson_factor(ball, x, alpha)
    R = ball.radius

    def h(r, off):
        return (r + R) ** (-0.5 * alpha) * r ** (n - 1) * sphere_kernel_mean(d, r, n, n)

    def f(r):
        return (r - R) ** (-0.5 * alpha) * h(r, None)

    cutoff = cfg.tail_cutoff * max(1.0, R)
    near = integrate_algebraic_end(h, R, cutoff, -0.5 * alpha, cfg)
    return pref * (near + integrate_tail(f, cutoff, cfg, decay=1.0 + alpha))


def poisson_term(u: ScalarField, ball: Ball, x, alpha: float,
                 cfg: QuadConfig | None = None) -> float:
    """``int_{|y-c|>R} P(x, y) u(y) dy``.

    In polar coordinates about the centre the inner integral is the sphere
    mean of ``u(y) |x-y|^{-n}``; it is exact for fields radial about the
    centre and uses the sphere rules otherwise.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = _check_alpha(alpha)
    n = ball.dim
    x = _point(x, n)
    check_decay(u)
    d, pref = _poisson_factor(ball, x, alpha)
    R = ball.radius
    c = ball.center
    far = u.far_value
    # about the centre the kernel is constant on each sphere
    concentric = d == 0.0 or (u.is_radial and np.array_equal(u.center, c))

    def kernel_mean(r):
        return sphere_kernel_mean(d, r, n, n)

    def weighted_mean(r, shift):
        r = np.asarray(r, dtype=float)
        if concentric:
            return (sphere_mean(u, c, r, cfg) - shift) * kernel_mean(r)

        # kernel scaled to O(1) so the sphere tolerance stays relative to u
        def g(y):
            ratio = np.linalg.norm(y - c, axis=-1) / np.linalg.norm(y - x, axis=-1)
            return (u.func(y) - shift) * ratio ** n

        return sphere_mean_of(g, c, r, n, cfg) * r ** (-float(n))

    def base(r):
        return ((r - R) * (r + R)) ** (-0.5 * alpha) * r ** (n - 1)

    breaks = [b for b in _radial_breaks(u, c) if b > R]
    cutoff = cfg.tail_cutoff * max([1.0, R] + breaks)

    def near_h(r, off):
        return (r + R) ** (-0.5 * alpha) * r ** (n - 1) * weighted_mean(r, 0.0)

    total = integrate_algebraic_end(near_h, R, cutoff, -0.5 * alpha, cfg, points=breaks)
    if far != 0:
        total += far * integrate_tail(lambda r: base(r) * kernel_mean(r), cutoff, cfg,
                                      decay=1.0 + alpha)
    outer = _bounded_far(u, c)
    if outer is None or outer > cutoff:
        total += _far_integral(lambda r: base(r) * weighted_mean(r, far), cutoff,
                               1.0 + alpha + u.decay_exponent, u.decay_exponent == 0, cfg,
                               abs(total))
    return pref * total


_GREEN_LEVELS = 48


def green_term(v0: ScalarField, ball: Ball, x, alpha: float,
               cfg: QuadConfig | None = None, max_order: int = 512) -> float:
    """``int_B G(x, y) v0(y) dy`` in polar coordinates about ``x``.

    Along each direction the radial variable ``s = rho/rho_max`` runs over
    (0, 1) with a composite Gauss rule graded toward both ends, where the
    integrand behaves like ``s^{alpha-1}`` and ``(1-s)^{alpha/2}``.  The
    direction rule and the core radial order are doubled together until two
    successive values agree.
    """
    cfg = cfg or DEFAULT_CONFIG
    alpha = _check_alpha(alpha)
    n = ball.dim
    x = _point(x, n)
    R = ball.radius
    off = x - ball.center
    d2 = float(off @ off)
    if not d2 < R * R:
        raise DomainError("x must lie inside the ball")
    const = green_constant(n, alpha)
    omega_total = sphere_area(n)
    prev = None
    order = 8
    while order <= max_order:
        dirs, dw = sphere_rule(n, order, cfg)
        s, sc, sw = graded_jacobi_rule(2 * order, alpha - 1.0, 0.0, _GREEN_LEVELS, 10)
        proj = dirs @ off
        root = np.sqrt(proj * proj + R * R - d2)
        rmax = root - proj            # distance to the sphere along each direction
        rneg = root + proj            # |negative root| of the same quadratic
        rho = rmax[:, None] * s[None, :]
        # 1 - |y-c|^2/R^2 = (rmax - rho)(rho + rneg)/R^2, without cancellation
        ty = rmax[:, None] * sc[None, :] * (rho + rneg[:, None]) / (R * R)
        tx = (R * R - d2) / (R * R)
        T = tx * ty * (R * R) / rho ** 2
        kern = incomplete_kernel_integral(T.ravel(), alpha, n).reshape(T.shape)
        pts = x + rho[..., None] * dirs[:, None, :]
        vals = np.asarray(v0.func(pts), dtype=float)
        # the rule carries s^(alpha-1); rho^(alpha-1) = rmax^(alpha-1) s^(alpha-1)
        radial = (kern * vals) @ sw * rmax ** alpha
        cur = omega_total * const * float(radial @ dw)
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(cur))
        if prev is not None and abs(cur - prev) <= tol:
            return cur
        prev = cur
        order *= 2
    raise QuadratureError("Green integral did not converge", estimate=prev)


def green_poisson_reconstruct(u: ScalarField, v0: ScalarField, ball: Ball, x, alpha: float,
                              cfg: QuadConfig | None = None) -> float:
    """``int_B G v0 + int_{B^c} P u``, which equals ``u(x)`` when
    ``v0 = (-Delta)^{alpha/2} u`` in the ball."""
    if u.dim != ball.dim or v0.dim != ball.dim:
        raise DomainError("field and ball dimensions differ")
    return green_term(v0, ball, x, alpha, cfg) + poisson_term(u, ball, x, alpha, cfg)


_EXT_PANELS = 44
_EXT_DEGREE = 24


def _dyadic_table(values: Callable[[np.ndarray], np.ndarray], edge: float, a: float):
    """Piecewise Chebyshev model of a function of ``u`` in (0, 1].

    Panel k covers ``[2^{-k-1}, 2^{-k}]``; below the last panel the model is
    ``edge + beta u^a``, the leading behaviour of an extension at the sphere.
    """
    x = chebyshev.chebpts1(_EXT_DEGREE + 1)
    k = np.arange(_EXT_PANELS)
    u = (x[None, :] + 3.0) * 2.0 ** (-(k[:, None] + 2.0))
    vals = values(u.ravel()).reshape(u.shape)
    coef = np.linalg.solve(chebyshev.chebvander(x, _EXT_DEGREE), vals.T).T
    u_min = 2.0 ** -_EXT_PANELS
    beta = (float(chebyshev.chebval(-1.0, coef[-1])) - edge) / u_min ** a

    def model(u):
        idx = np.clip(-np.frexp(u)[1], 0, _EXT_PANELS - 1)
        t = np.ldexp(u, idx + 2) - 3.0
        c = coef[idx]
        b1 = np.zeros_like(t)
        b2 = np.zeros_like(t)
        for j in range(_EXT_DEGREE, 0, -1):
            b1, b2 = 2.0 * t * b1 - b2 + c[:, j], b1
        out = t * b1 - b2 + c[:, 0]
        low = u < u_min
        out[low] = edge + beta * u[low] ** a
        return out

    return model


def poisson_extension_field(datum: Callable[[np.ndarray], np.ndarray], ball: Ball,
                            alpha: float, core_order: int = 96,
                            decay_exponent: float = 0.0, far_value: float = 0.0,
                            name: str = "poisson-ext") -> ScalarField:
    """Field equal to a radial datum outside ``ball`` and to its Poisson
    extension inside; it is alpha-harmonic in the ball.

    The datum is a profile in the distance to the ball centre.  In
    ``sigma = R^2/r^2`` the extension at interior distance ``s`` is
    ``K (1 - q)^{alpha/2} / 2 int_0^1 sigma^{alpha/2-1}
    (1-sigma)^{-alpha/2} g(R/sqrt(sigma)) / (1 - sigma q) d sigma`` with
    ``q = s^2/R^2``.  It is evaluated once on dyadic panels in ``1 - q``
    (where it behaves like ``A(q) + (1-q)^{alpha/2} B(q)`` with A, B
    analytic) and interpolated afterwards.
    """
    alpha = _check_alpha(alpha)
    n = ball.dim
    R = float(ball.radius)
    a = 0.5 * alpha
    sig, sigc, weights = graded_jacobi_rule(core_order, a - 1.0, -a, _GREEN_LEVELS, 12)
    with np.errstate(over="ignore", under="ignore"):
        gvals = np.asarray(datum(R / np.sqrt(sig)), dtype=float)
    gw = gvals * weights
    K = mean_value_constant(alpha)

    def direct(u):
        out = np.empty(u.shape)
        for i in range(0, u.size, 2048):
            ui = u[i:i + 2048]
            # 1 - sigma q = (1 - sigma) + sigma u, free of cancellation
            out[i:i + 2048] = (1.0 / (np.multiply.outer(ui, sig) + sigc[None, :])) @ gw
        return 0.5 * K * u ** a * out

    edge = float(np.asarray(datum(np.array([R])), dtype=float)[0])
    model = _dyadic_table(direct, edge, a)

    def profile(r):
        r = np.asarray(r, dtype=float)
        out = np.empty(r.shape)
        ins = r < R
        out[~ins] = datum(r[~ins])
        if np.any(ins):
            s = r[ins]
            out[ins] = model((R - s) * (R + s) / (R * R))
        return out

    return ScalarField.radial(profile, n, ball.center, breakpoints=(R,),
                              decay_exponent=decay_exponent, far_value=far_value,
                              smoothness_radius=R, name=name)


def green_function_laplacian(x, y, ball: Ball):
    """Green function of ``-Delta`` on a ball (n >= 3), by the image charge.

    ``R_{2,n} [|x-y|^{2-n} - (|x'| |R x'/|x'|^2 - y'/R|)^{2-n}]`` in
    coordinates ``x' = x - c``; zero outside, ``+inf`` at ``x = y``.
    """
    n = ball.dim
    if n < 3:
        raise ConfigurationError("the Laplacian Green function here needs n >= 3")
    x = _point(x, n) - ball.center
    y = _point(y, n) - ball.center
    R = ball.radius
    nx, ny = float(np.linalg.norm(x)), float(np.linalg.norm(y))
    if not (nx < R and ny < R):
        return 0.0
    dist = float(np.linalg.norm(x - y))
    if dist == 0:
        return math.inf
    if nx == 0:
        image = R
    else:
        image = nx * float(np.linalg.norm(R * x / nx ** 2 - y / R))
    return riesz_constant(2, n) * (dist ** (2 - n) - image ** (2 - n))
