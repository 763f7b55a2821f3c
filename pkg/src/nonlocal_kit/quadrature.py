"""Adaptive one-dimensional quadrature and radially reduced integrals.

The engine is a globally adaptive bisection driven by the 7-point Gauss /
15-point Kronrod pair.  An end that may carry an integrable algebraic
singularity gets a dyadic strip mesh (ratio 1/2) toward it; the piece left
below the last strip is summed as a geometric series, and the mesh is made
deeper while that remainder is uncertain.  Integrands must accept and
return numpy arrays."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy import special

from .errors import DivergenceError, DomainError, QuadratureError
from .special_functions import beta_fn, sphere_area

__all__ = [
    "QuadConfig",
    "integrate_adaptive",
    "integrate_tail",
    "integrate_semi_infinite",
    "graded_rule",
    "graded_jacobi_rule",
    "integrate_algebraic_end",
    "sphere_kernel_average",
    "sphere_kernel_mean",
    "integrate_radial_nd",
]

ArrayFn = Callable[[np.ndarray], np.ndarray]

# Kronrod 15 / Gauss 7 abscissae and weights on [-1, 1] (QUADPACK qk15).
_XK = np.array([
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0])
_WK = np.array([
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714])
_WG = np.array([
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327])

KRONROD_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WK[:-1], _WK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[1::2] = np.concatenate([_WG[:-1], _WG[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadConfig:
    """Tolerances and zone sizes shared by every integral of the kit.

    ``inner_split_radius`` is the radius of the Taylor zone around the
    singularity of the fractional Laplacian, ``tail_cutoff`` the start of the
    far-field treatment.  ``sphere_points`` and ``seed`` control the
    deterministic point sets used on spheres in dimension above three.
    """

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_depth: int = 50
    inner_split_radius: float = 0.1
    tail_cutoff: float = 8.0
    max_panels: int = 100_000
    sphere_points: int = 8192
    seed: int = 0
    max_sphere_order: int = 1 << 15

    def __post_init__(self):
        if not 0 < self.abs_tol < 1 or not 0 < self.rel_tol < 1:
            raise DomainError("abs_tol and rel_tol must lie in (0, 1)")
        if not 1 <= self.max_depth <= 60:
            raise DomainError("max_depth must lie in [1, 60]")
        if not 0 < self.inner_split_radius < self.tail_cutoff:
            raise DomainError("need 0 < inner_split_radius < tail_cutoff")
        if self.sphere_points < 2 or self.seed < 0:
            raise DomainError("sphere_points must be >= 2 and seed >= 0")

    def with_(self, **changes) -> "QuadConfig":
        return replace(self, **changes)


DEFAULT_CONFIG = QuadConfig()


def _gk15(f: ArrayFn, a: np.ndarray, b: np.ndarray):
    """Kronrod estimate, error estimate and |f| mass on each panel [a_i, b_i]."""
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * KRONROD_NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    if not np.all(np.isfinite(fx)):
        raise QuadratureError("integrand returned a non-finite value")
    resk = fx @ KRONROD_WEIGHTS
    resg = fx @ GAUSS_WEIGHTS
    resabs = np.abs(fx) @ KRONROD_WEIGHTS
    resasc = np.abs(fx - 0.5 * resk[:, None]) @ KRONROD_WEIGHTS
    err = np.abs(resk - resg) * h
    resasc = resasc * h
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200.0 * err / resasc) ** 1.5)
    err = np.where((resasc > 0) & (err > 0), scaled, err)
    err = np.maximum(err, 50.0 * _EPS * resabs * h)
    return resk * h, err


_GRADE_LEVELS = 30
_MAX_GRADE_LEVELS = 90


def _endpoint_strips(a: float, w: float, levels: int):
    """Dyadic strip edges from ``a + w`` toward ``a`` (``w`` may be negative)."""
    return [a + w * 0.5 ** k for k in range(levels + 1)]


def _endpoint_remainder(f: ArrayFn, a: float, w: float, levels: int):
    """Sum the unresolved piece ``[a, a + w 2^-levels]`` as a geometric series.

    On dyadic strips approaching an algebraic endpoint singularity
    ``|x-a|^beta`` the strip integrals decay with ratio ``2^{-(1+beta)}``;
    the remainder is the tail of that series.
    """
    edges = np.array([a + w * 0.5 ** k for k in range(levels - 3, levels + 1)])
    lo = np.minimum(edges[:-1], edges[1:])
    hi = np.maximum(edges[:-1], edges[1:])
    s, _ = _gk15(f, lo, hi)
    s1, s2, s3 = s[2], s[1], s[0]   # innermost first
    if s1 == 0.0:
        return 0.0, abs(s2) * 0.5 ** levels
    q = s1 / s2 if s2 != 0 else np.inf
    q_prev = s2 / s3 if s3 != 0 else np.inf
    if not 0.0 < q < 1.0:
        if q >= 1.0 and q_prev >= 1.0:
            raise DivergenceError(f"integrand is not integrable at endpoint {a}")
        return 0.0, 2.0 * abs(s1)
    rem = s1 * q / (1.0 - q)
    if 0.0 < q_prev < 1.0:
        err = abs(rem - s1 * q_prev / (1.0 - q_prev))
    else:
        err = abs(rem)
    return rem, err


def _graded_end(f: ArrayFn, a: float, w: float, cfg: QuadConfig):
    """Depth of the dyadic mesh at a singular end, with its remainder.

    Starts at ``_GRADE_LEVELS`` and goes ten levels deeper while the
    remainder is uncertain, as long as the strips stay resolvable.
    """
    levels = _GRADE_LEVELS
    rem, err = _endpoint_remainder(f, a, w, levels)
    # innermost Kronrod nodes must stay well separated from a in floating point
    floor = 1e4 * _EPS * abs(a) + 1e-280
    while (err > 0.01 * cfg.abs_tol and levels < _MAX_GRADE_LEVELS
           and abs(w) * 0.5 ** (levels + 10) > floor):
        try:
            deeper = _endpoint_remainder(f, a, w, levels + 10)
        except QuadratureError:
            break
        # rounding in the integrand near a can make deeper estimates worse
        if deeper[1] >= err:
            break
        levels += 10
        rem, err = deeper
    return levels, rem, err


def _adaptive(f: ArrayFn, breaks: Sequence[float], graded: Sequence[tuple[bool, bool]],
              cfg: QuadConfig):
    """Core driver: returns (value, error bound) over consecutive breaks.

    ``graded[i]`` flags whether piece ``i`` has a possibly singular left or
    right end; flagged ends receive a dyadic strip mesh plus a geometric
    remainder.
    """
    a_list, b_list = [], []
    rem_total, rem_err = 0.0, 0.0
    for (a, b), (gl, gr) in zip(zip(breaks[:-1], breaks[1:]), graded):
        if not b > a:
            continue
        w = 0.25 * (b - a)
        edges = [a, b]
        for flag, end, step in ((gl, a, w), (gr, b, -w)):
            if not flag:
                continue
            levels, r, e = _graded_end(f, end, step, cfg)
            edges += _endpoint_strips(end, step, levels)
            rem_total += r
            rem_err += e
        edges = sorted(set(edges))
        if gl:
            edges = edges[1:]
        if gr:
            edges = edges[:-1]
        a_list.extend(edges[:-1])
        b_list.extend(edges[1:])
    if not a_list:
        return rem_total, rem_err
    a0 = np.array(a_list)
    b0 = np.array(b_list)
    vals, errs = _gk15(f, a0, b0)
    # heap entries: (-err, seq, a, b, depth, val); seq makes ordering total.
    heap = [(-errs[i], i, a0[i], b0[i], 0, vals[i]) for i in range(a0.size)]
    seq = a0.size
    heapq.heapify(heap)
    frozen = []
    frozen_err = 0.0
    total = float(np.sum(vals)) + rem_total
    total_err = float(np.sum(errs)) + rem_err
    npanels = len(heap)
    while True:
        tol = max(cfg.abs_tol, cfg.rel_tol * abs(total))
        if total_err <= tol or not heap:
            break
        if frozen_err + rem_err > tol or npanels > cfg.max_panels:
            break
        worst = -heap[0][0]
        batch = []
        while heap and len(batch) < 64 and -heap[0][0] >= 0.25 * worst:
            item = heapq.heappop(heap)
            if item[4] >= cfg.max_depth:
                frozen.append(item)
                frozen_err -= item[0]
                continue
            batch.append(item)
        if not batch:
            continue
        npanels += len(batch)
        pa = np.array([it[2] for it in batch])
        pb = np.array([it[3] for it in batch])
        mid = 0.5 * (pa + pb)
        ca = np.concatenate([pa, mid])
        cb = np.concatenate([mid, pb])
        cv, ce = _gk15(f, ca, cb)
        k = len(batch)
        for i, it in enumerate(batch):
            total += cv[i] + cv[i + k] - it[5]
            total_err += ce[i] + ce[i + k] + it[0]
            heapq.heappush(heap, (-ce[i], seq, ca[i], cb[i], it[4] + 1, cv[i]))
            heapq.heappush(heap, (-ce[i + k], seq + 1, ca[i + k], cb[i + k], it[4] + 1, cv[i + k]))
            seq += 2
    panels = sorted(heap + frozen, key=lambda it: (it[2], it[1]))
    value = math.fsum([it[5] for it in panels] + [rem_total])
    error = math.fsum([-it[0] for it in panels] + [rem_err])
    tol = max(cfg.abs_tol, cfg.rel_tol * abs(value))
    if error > tol:
        why = "panel budget exhausted" if npanels > cfg.max_panels else "depth exhausted"
        raise QuadratureError(f"adaptive quadrature failed ({why}): "
                              f"estimate {value:.17g}, error bound {error:.3g}",
                              estimate=value, error=error)
    return value, error


def integrate_adaptive(f: ArrayFn, lo: float, hi: float, cfg: QuadConfig | None = None,
                       points: Sequence[float] = (), singular: str = "both",
                       full_output: bool = False):
    """Integrate a vectorised ``f`` over ``(lo, hi)``.

    ``singular`` names the ends (``"lo"``, ``"hi"``, ``"both"``, ``"none"``)
    that may carry an integrable algebraic singularity; interior ``points``
    are always treated as possibly singular from both sides.  Such ends get a
    ratio-1/2 geometric mesh whose innermost remainder is summed as a
    geometric series.  Raises :class:`QuadratureError` carrying the best
    estimate when ``max(abs_tol, rel_tol*|I|)`` cannot be met.
    """
    cfg = cfg or DEFAULT_CONFIG
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        if lo == hi:
            return (0.0, 0.0) if full_output else 0.0
        raise DomainError("integrate_adaptive needs lo < hi")
    if singular not in ("lo", "hi", "both", "none"):
        raise DomainError(f"unknown singular spec {singular!r}")
    inner = sorted({float(p) for p in points if lo < p < hi})
    breaks = [lo, *inner, hi]
    graded = []
    for i in range(len(breaks) - 1):
        gl = i > 0 or singular in ("lo", "both")
        gr = i < len(breaks) - 2 or singular in ("hi", "both")
        graded.append((gl, gr))
    value, error = _adaptive(f, breaks, graded, cfg)
    return (value, error) if full_output else value


def integrate_tail(f: ArrayFn, lo: float, cfg: QuadConfig | None = None,
                   decay: float = 2.0, full_output: bool = False):
    """``int_lo^inf f`` for ``|f(r)| <= C r^{-decay}`` with ``decay > 1``.

    Uses ``r = lo/t``, which maps the tail onto ``(0, 1]`` with an integrable
    endpoint behaviour ``t^{decay-2}`` at ``t = 0``.
    """
    if decay <= 1:
        raise DivergenceError(f"tail integral diverges for decay exponent {decay} <= 1")
    if not lo > 0:
        raise DomainError("integrate_tail needs lo > 0")
    lo = float(lo)

    def mapped(t):
        return f(lo / t) * (lo / (t * t))

    return integrate_adaptive(mapped, 0.0, 1.0, cfg, full_output=full_output)


def integrate_semi_infinite(f: ArrayFn, lo: float, cfg: QuadConfig | None = None,
                            decay: float = 2.0, points: Sequence[float] = (),
                            oscillatory: bool = False, cutoff: float | None = None,
                            singular_lo: bool = True, scale: float = 0.0,
                            full_output: bool = False):
    """``int_lo^inf f`` split into a finite part and a far field.

    The finite part runs to ``cutoff`` (default ``tail_cutoff`` scaled by
    ``max(1, lo, points)``).  Beyond it a monotone tail goes through
    :func:`integrate_tail`.  An oscillatory one (``oscillatory=True``) is
    summed over doubling windows ``[a, 2a]``; after each window the total is
    estimated with a C-infinity cutoff that falls from 1 to 0 across the
    window, whose truncation error decays faster than any power of the
    number of oscillations per window.  The loop stops once two successive
    estimates agree twice in a row.  ``scale`` is the magnitude of the quantity the
    result will be added to; window tolerances are taken relative to it.
    """
    cfg = cfg or DEFAULT_CONFIG
    span = max([1.0, abs(lo)] + [abs(p) for p in points])
    M = cutoff if cutoff is not None else cfg.tail_cutoff * span
    M = max(M, lo)
    near, near_err = integrate_adaptive(f, lo, M, cfg, points=points,
                                        singular="lo" if singular_lo else "none",
                                        full_output=True)
    if not oscillatory:
        far, far_err = integrate_tail(f, M, cfg, decay=decay, full_output=True)
        total = near + far
        return (total, near_err + far_err) if full_output else total
    total = near
    err = near_err
    a = M
    estimate_prev = None
    quiet = 0
    for _ in range(48):
        b = 2.0 * a
        ref = max(abs(total), abs(scale))
        wcfg = cfg.with_(abs_tol=min(0.5, max(cfg.abs_tol, 0.25 * cfg.rel_tol * ref)))
        width = b - a
        fw = _memo(f)
        smooth = integrate_adaptive(lambda r, a=a: fw(r) * _smooth_step((r - a) / width),
                                    a, b, wcfg, singular="none")
        estimate = total + smooth
        piece, piece_err = integrate_adaptive(fw, a, b, wcfg, singular="none", full_output=True)
        total += piece
        err += piece_err
        tol = max(cfg.abs_tol, cfg.rel_tol * max(abs(estimate), abs(scale)))
        if estimate_prev is not None and abs(estimate - estimate_prev) <= tol:
            quiet += 1
            if quiet >= 2:
                val = estimate
                bound = err + abs(estimate - estimate_prev)
                return (val, bound) if full_output else val
        else:
            quiet = 0
        estimate_prev = estimate
        a = b
    raise QuadratureError("oscillatory tail did not settle", estimate=estimate,
                          error=abs(estimate - estimate_prev))


def _memo(f: ArrayFn) -> ArrayFn:
    """Wrap ``f`` so nodes it has already seen are not evaluated again."""
    seen: dict[float, float] = {}

    def g(r):
        r = np.asarray(r, dtype=float)
        flat = r.ravel()
        new = np.array(sorted({v for v in flat.tolist() if v not in seen}), dtype=float)
        if new.size:
            seen.update(zip(new.tolist(), np.asarray(f(new), dtype=float).ravel().tolist()))
        return np.array([seen[v] for v in flat.tolist()]).reshape(r.shape)

    return g


def _smooth_step(t):
    """C-infinity step falling from 1 at t <= 0 to 0 at t >= 1."""
    t = np.clip(np.asarray(t, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        up = np.where(t > 0, np.exp(-1.0 / t), 0.0)
        down = np.where(t < 1, np.exp(-1.0 / (1.0 - t)), 0.0)
    return down / (up + down)


@lru_cache(maxsize=256)
def gauss_legendre01(order: int):
    """Gauss-Legendre rule with ``order`` nodes on [0, 1].

    Orders up to 1024 are single rules (Golub-Welsch via scipy); above that
    the rule becomes a composite of 1024-point panels, which keeps node
    generation cheap while still resolving oscillation.
    """
    if order <= 1024:
        x, w = special.roots_legendre(order)
        x = 0.5 * (x + 1.0)
        w = 0.5 * w
    else:
        panels = -(-order // 1024)
        x0, w0 = special.roots_legendre(1024)
        left = np.arange(panels)[:, None] / panels
        x = (left + 0.5 * (x0[None, :] + 1.0) / panels).ravel()
        w = np.tile(0.5 * w0 / panels, panels)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


@lru_cache(maxsize=256)
def graded_rule(core_order: int, grade_left: bool, grade_right: bool,
                levels: int = 40, strip_order: int = 10, complement: bool = False):
    """Composite Gauss rule on [0, 1] with geometric grading toward chosen ends.

    A graded end gets the strips ``[2^{-k-3}, 2^{-k-2}]`` (k < levels) plus a
    final strip reaching the endpoint, each with ``strip_order`` Gauss nodes;
    the remaining core carries ``core_order`` nodes.  The rule integrates
    ``x^beta`` (beta > -1) times smooth functions at geometric rate.  With
    ``complement=True`` the triple ``(x, 1 - x, w)`` is returned, where
    ``1 - x`` is exact to relative precision near the right end.
    """
    lo_core = 0.25 if grade_left else 0.0
    hi_core = 0.75 if grade_right else 1.0
    # (start, end, order, mirrored): mirrored pieces are given as distances from 1
    pieces = [(lo_core, hi_core, core_order, False)]
    edges = [0.25 * 0.5 ** k for k in range(levels + 1)] + [0.0]
    strips = [(edges[k + 1], edges[k]) for k in range(len(edges) - 1)]
    if grade_left:
        pieces.extend((a, b, strip_order, False) for a, b in strips)
    if grade_right:
        pieces.extend((a, b, strip_order, True) for a, b in strips)
    xs, cs, ws = [], [], []
    for a, b, order, mirrored in pieces:
        t, w = gauss_legendre01(order)
        pos = a + (b - a) * t
        if mirrored:
            xs.append(1.0 - pos)
            cs.append(pos)
        else:
            xs.append(pos)
            cs.append(1.0 - pos)
        ws.append((b - a) * w)
    x = np.concatenate(xs)
    xc = np.concatenate(cs)
    w = np.concatenate(ws)
    idx = np.argsort(x, kind="stable")
    x, xc, w = x[idx], xc[idx], w[idx]
    for arr in (x, xc, w):
        arr.flags.writeable = False
    return (x, xc, w) if complement else (x, w)


@lru_cache(maxsize=64)
def graded_jacobi_rule(core_order: int, beta_left: float, beta_right: float,
                       levels: int = 40, strip_order: int = 10):
    """Rule for ``int_0^1 x^beta_left (1-x)^beta_right F(x) dx`` with smooth F.

    The mesh of :func:`graded_rule` graded at both ends, with the algebraic
    factors folded into the weights; the two strips touching the ends use
    Gauss-Jacobi nodes, so the end behaviour is integrated exactly rather
    than left to the last Legendre strip.  Returns ``(x, 1 - x, w)``.
    """
    x, xc, w = graded_rule(core_order, True, True, levels, strip_order, complement=True)
    h = 0.25 * 0.5 ** levels
    keep = (x >= h) & (xc >= h)
    xs, cs = [x[keep]], [xc[keep]]
    ws = [w[keep] * x[keep] ** beta_left * xc[keep] ** beta_right]
    for beta, other, left in ((beta_left, beta_right, True), (beta_right, beta_left, False)):
        y, wy = special.roots_jacobi(strip_order, 0.0, beta)
        near = 0.5 * h * (1.0 + y)          # distance to the end
        far = 1.0 - near
        wt = (0.5 * h) ** (1.0 + beta) * wy * far ** other
        xs.append(near if left else far)
        cs.append(far if left else near)
        ws.append(wt)
    x, xc, w = (np.concatenate(a) for a in (xs, cs, ws))
    idx = np.argsort(x, kind="stable")
    x, xc, w = x[idx], xc[idx], w[idx]
    for arr in (x, xc, w):
        arr.flags.writeable = False
    return x, xc, w


def integrate_algebraic_end(h: ArrayFn, lo: float, hi: float, beta: float,
                            cfg: QuadConfig | None = None, points: Sequence[float] = ()):
    """``int_lo^hi (r - lo)^beta h(r, r - lo) dr`` for ``-1 < beta <= 0``.

    The substitution ``r = lo + t^kappa`` with ``kappa = 1/(1+beta)`` turns
    the weight into the constant kappa.  ``h`` receives ``r`` and the exact
    offset ``r - lo``, so factors of ``r - lo`` never suffer cancellation.
    """
    if not -1.0 < beta <= 0.0:
        raise DomainError("integrate_algebraic_end needs -1 < beta <= 0")
    kappa = 1.0 / (1.0 + beta)
    top = (hi - lo) ** (1.0 / kappa)
    pts = [(p - lo) ** (1.0 / kappa) for p in points if lo < p < hi]

    def g(t):
        off = t ** kappa
        return kappa * h(lo + off, off)

    return integrate_adaptive(g, 0.0, top, cfg, points=pts, singular="lo")


def _theta_norm(n: int) -> float:
    # int_0^pi sin^{n-2}(theta) dtheta
    return beta_fn(0.5, (n - 1) / 2)


def sphere_kernel_average(rho: float, r: float, lam: float, n: int,
                          cfg: QuadConfig | None = None) -> float:
    """Normalised spherical mean of ``|rho e1 - r omega|^{-lam}`` over S^{n-1}.

    Computed as a theta integral with weight ``sin^{n-2} theta``; the
    near-diagonal zone ``theta < min(1, |rho-r|/r)`` is split off and the
    singular endpoint at ``theta = 0`` is resolved by bisection grading.
    """
    rho, r = float(rho), float(r)
    if rho < 0 or r < 0 or (rho == 0 and r == 0):
        raise DomainError("sphere_kernel_average needs rho, r >= 0, not both 0")
    if lam >= n:
        raise DivergenceError(f"kernel exponent {lam} >= n = {n} is not locally integrable")
    if rho == 0 or r == 0:
        return max(rho, r) ** (-lam)
    if n == 1:
        if rho == r and lam > 0:
            raise DivergenceError("one-dimensional kernel mean is infinite on the diagonal")
        return 0.5 * (abs(rho - r) ** (-lam) + (rho + r) ** (-lam))
    if rho == r and lam >= n - 1:
        raise DivergenceError("sphere mean diverges on the diagonal for lam >= n-1")
    cfg = cfg or DEFAULT_CONFIG.with_(abs_tol=1e-15, rel_tol=1e-13)
    diff = rho - r
    four_pr = 4.0 * rho * r

    def integrand(theta):
        d2 = diff * diff + four_pr * np.sin(0.5 * theta) ** 2
        return d2 ** (-0.5 * lam) * np.sin(theta) ** (n - 2)

    split = min(1.0, abs(diff) / r)
    pts = (split,) if split > 0 else ()
    val = integrate_adaptive(integrand, 0.0, math.pi, cfg, points=pts)
    return val / _theta_norm(n)


def sphere_kernel_mean(rho, r, lam: float, n: int):
    """Vectorised spherical mean of ``|rho e1 - r omega|^{-lam}``.

    Closed form ``max^{-lam} 2F1(lam/2, (lam-n+2)/2; n/2; (min/max)^2)``.
    Used as the fast path of :func:`integrate_radial_nd`; agrees with the
    theta quadrature of :func:`sphere_kernel_average`.
    """
    rho = np.asarray(rho, dtype=float)
    r = np.asarray(r, dtype=float)
    hi = np.maximum(rho, r)
    lo = np.minimum(rho, r)
    if n == 1:
        with np.errstate(divide="ignore"):
            return 0.5 * (np.abs(rho - r) ** (-lam) + (rho + r) ** (-lam))
    z = (lo / hi) ** 2
    return hi ** (-lam) * special.hyp2f1(0.5 * lam, 0.5 * (lam - n + 2), 0.5 * n, z)


def integrate_radial_nd(profile: ArrayFn, kernel_lambda: float, x_norm: float, n: int,
                        decay_q: float, cfg: QuadConfig | None = None,
                        points: Sequence[float] = (), support: float | None = None,
                        method: str = "hypergeometric") -> float:
    """``int_{R^n} |x-y|^{-lambda} g(|y|) dy`` for a radial profile ``g``.

    Reduces to ``omega_{n-1} int_0^inf r^{n-1} g(r) M(|x|, r) dr`` where ``M``
    is the spherical kernel mean.  The radial integral is split at ``|x|``
    (diagonal singularity), at ``points`` and at ``support`` when ``g``
    vanishes beyond it; otherwise the tail is mapped with decay
    ``decay_q + lambda - n + 1``.
    """
    cfg = cfg or DEFAULT_CONFIG
    lam = float(kernel_lambda)
    x_norm = float(x_norm)
    if lam >= n:
        raise DivergenceError(f"kernel exponent {lam} >= n = {n}: not locally integrable")
    if support is None and decay_q + lam <= n:
        raise DivergenceError(
            f"decay {decay_q} + kernel exponent {lam} <= n = {n}: integral diverges at infinity")
    omega = sphere_area(n)

    if method == "hypergeometric":
        def integrand(r):
            return r ** (n - 1) * profile(r) * sphere_kernel_mean(x_norm, r, lam, n)
    elif method == "quadrature":
        def integrand(r):
            km = np.array([sphere_kernel_average(x_norm, ri, lam, n) for ri in np.ravel(r)])
            return r ** (n - 1) * profile(r) * km.reshape(np.shape(r))
    else:
        raise DomainError(f"unknown method {method!r}")

    pts = sorted({float(p) for p in points if p > 0} | ({x_norm} if x_norm > 0 else set()))
    if support is not None:
        inner = [p for p in pts if p < support]
        val = integrate_adaptive(integrand, 0.0, float(support), cfg, points=inner)
    else:
        val = integrate_semi_infinite(integrand, 0.0, cfg, decay=decay_q + lam - n + 1,
                                      points=pts)
    return omega * val
