import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from nonlocal_kit import (Ball, BoundaryError, Bubble, ConfigurationError, DivergenceError,
                          DomainError, LAlphaError, Params, QuadConfig, ScalarField,
                          bubble_field, bubble_value, frac_laplacian, green_constant,
                          green_function_alpha, green_poisson_reconstruct, incomplete_kernel_integral,
                          mean_value_constant, poisson_extension_field, poisson_kernel_alpha,
                          poisson_mass, ring_average, ring_weight_integral, riesz_constant,
                          riesz_potential, riesz_potential_field, spherical_average)
from nonlocal_kit.operators import green_function_laplacian, green_term, poisson_term


def _bump(radius):
    def f(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape)
        m = r < radius
        out[m] = np.exp(1 - 1 / (1 - (r[m] / radius) ** 2))
        return out
    return f


# -- fractional Laplacian ------------------------------------------------------

@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_frac_laplacian_of_constant_vanishes(alpha):
    u = ScalarField.constant(7.0, 2)
    for x in np.random.default_rng(2).uniform(-5, 5, (50, 2)):
        assert abs(frac_laplacian(u, x, alpha)) <= 1e-10


def test_frac_laplacian_n1_against_direct_symmetric_difference():
    # independent oracle: QUADPACK on the 1-D symmetric-difference integral
    alpha, k, x = 0.7, 1.3, 0.4
    u = ScalarField.plane_wave([k])
    c = alpha * 2 ** (alpha - 1) * math.gamma((1 + alpha) / 2) / (
        math.sqrt(math.pi) * math.gamma(1 - alpha / 2))
    # 2u(x) - u(x+h) - u(x-h) = 2 cos(kx)(1 - cos(kh))
    head = integrate.quad(lambda h: 4 * math.sin(k * h / 2) ** 2 * h ** (-1 - alpha), 0, 1,
                          epsabs=1e-14, epsrel=1e-13)[0]
    osc = integrate.quad(lambda h: h ** (-1 - alpha), 1, np.inf, weight="cos", wvar=k)[0]
    oracle = c / 2 * 2 * math.cos(k * x) * (head + 2 / alpha - 2 * osc)
    assert frac_laplacian(u, [x], alpha) == pytest.approx(oracle, rel=1e-8)
    assert oracle == pytest.approx(k ** alpha * math.cos(k * x), rel=1e-8)


def test_frac_laplacian_linearity():
    v = ScalarField.plane_wave([1.0, 0.5])
    w = ScalarField.radial(lambda r: (1 + r * r) ** -1.0, 2, decay_exponent=2.0)
    x = np.array([0.2, -0.3])
    cfg = QuadConfig()
    lhs = frac_laplacian(v + w, x, 1.2, cfg)
    rhs = frac_laplacian(v, x, 1.2, cfg) + frac_laplacian(w, x, 1.2, cfg)
    assert abs(lhs - rhs) <= 2 * max(cfg.abs_tol, cfg.rel_tol * abs(lhs)) * 10


def test_frac_laplacian_rejects_false_decay():
    u = ScalarField.radial(lambda r: np.ones_like(r) * 0 + (1 + r) ** -0.5, 2, decay_exponent=4.0)
    with pytest.raises(LAlphaError):
        frac_laplacian(u, [0.0, 0.0], 1.0)


def test_frac_laplacian_domain():
    with pytest.raises(DomainError):
        frac_laplacian(ScalarField.constant(1.0, 1), [0.0], 2.0)


def test_frac_laplacian_of_general_field_matches_radial_path():
    g = lambda r: (1 + r * r) ** -1.5
    rad = ScalarField.radial(g, 3, decay_exponent=3.0)
    gen = rad.as_general()
    x = np.array([0.3, 0.1, 0.0])
    assert frac_laplacian(gen, x, 0.8) == pytest.approx(frac_laplacian(rad, x, 0.8), rel=1e-6)


# -- Riesz potentials ----------------------------------------------------------

def test_riesz_potential_examples():
    zero = ScalarField.constant(0.0, 3)
    assert riesz_potential(zero, 1.0, [0.0, 0.0, 1.0]) == 0.0
    ind = ScalarField.radial(lambda r: (np.asarray(r) < 1).astype(float), 3, support=1.0,
                             breakpoints=(1.0,))
    assert riesz_potential(ind, 2.0, [2.0, 0, 0]) == pytest.approx(1 / 6, rel=1e-9)
    Q = Bubble(Params(5, 1, 1, 0, 4))
    f = bubble_field(Q, power=4)
    assert riesz_potential(f, 3.0, np.zeros(5)) == pytest.approx(48 ** (1 / 3), rel=1e-3)


def test_riesz_potential_errors():
    with pytest.raises(DivergenceError):
        riesz_potential(ScalarField.constant(1.0, 3), 1.0, np.zeros(3))
    slow = ScalarField.radial(lambda r: (1 + r) ** -1.0, 3, decay_exponent=1.0)
    with pytest.raises(DivergenceError):
        riesz_potential(slow, 1.0, np.zeros(3))
    with pytest.raises(ConfigurationError):
        riesz_potential(ScalarField.plane_wave([1.0, 0.0]), 1.0, np.zeros(2))


def test_riesz_potential_gaussian_n1_against_quadpack():
    f = ScalarField.general(lambda x: np.exp(-x[..., 0] ** 2), 1, decay_exponent=30.0)
    gam, x = 0.6, 0.3
    ref = riesz_constant(gam, 1) * sum(
        integrate.quad(lambda y: abs(x - y) ** (gam - 1) * math.exp(-y * y), lo, hi,
                       points=[x] if lo < x < hi else None, limit=200)[0]
        for lo, hi in ((-np.inf, -20), (-20, x), (x, 20), (20, np.inf)))
    assert riesz_potential(f, gam, [x]) == pytest.approx(ref, rel=1e-7)


def test_riesz_inversion_bump_n3():
    # (-Delta)^{alpha/2} I_alpha f = f for a smooth compactly supported bump
    f = ScalarField.radial(_bump(1.0), 3, support=1.0, decay_exponent=50.0,
                           smoothness_radius=0.25)
    alpha = 1.0
    u = riesz_potential_field(f, alpha, QuadConfig(rel_tol=1e-8, abs_tol=1e-10), degree=384)
    for r in (0.0, 0.5):
        x = np.array([r, 0.0, 0.0])
        assert frac_laplacian(u, x, alpha) == pytest.approx(f.value(x), rel=1e-3)


# -- averages ---------------------------------------------------------------------

def test_spherical_average_examples():
    assert spherical_average(ScalarField.constant(5.0, 3), np.zeros(3), 2.0) == pytest.approx(5)
    sq = ScalarField.radial(lambda r: r * r, 2)
    assert spherical_average(sq, np.zeros(2), 1.7) == pytest.approx(1.7 ** 2)
    with pytest.raises(DomainError):
        spherical_average(sq, np.zeros(2), 0.0)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
@pytest.mark.parametrize("R", [0.5, 1.0, 2.0])
def test_ring_average_of_one(alpha, R):
    one = ScalarField.constant(1.0, 2)
    assert ring_average(one, [0.3, 0.1], R, alpha) == pytest.approx(1.0, abs=1e-8)


def test_ring_weight_integral_total_mass():
    for alpha in (0.3, 1.0, 1.7):
        assert mean_value_constant(alpha) * ring_weight_integral(2.0, alpha, 2.0) \
            == pytest.approx(1.0, rel=1e-14)


def test_ring_average_of_bubble_below_centre_value():
    Q = Bubble(Params(5, 1, 1, 0, 4))
    u = bubble_field(Q)
    assert ring_average(u, np.zeros(5), 1.0, 1.0) < bubble_value(Q, np.zeros(5))


def test_ring_average_supported_inside_is_zero():
    f = ScalarField.radial(_bump(0.5), 2, support=0.5)
    assert ring_average(f, np.zeros(2), 1.0, 1.0) == 0.0


# -- ball kernels ------------------------------------------------------------------

def _interior(rng, n, R, count):
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    return d * (R * rng.uniform(0, 1, count) ** (1 / n))[:, None]


def test_green_alpha_symmetry_positivity_boundary():
    rng = np.random.default_rng(7)
    for n, alpha in ((1, 0.7), (2, 1.0), (3, 1.5)):
        ball = Ball(np.full(n, 0.3), 1.2)
        x = ball.center + _interior(rng, n, 1.2, 1000)
        y = ball.center + _interior(rng, n, 1.2, 1000)
        gxy = green_function_alpha(x, y, ball, alpha)
        assert np.all(gxy > 0)
        assert np.allclose(gxy, green_function_alpha(y, x, ball, alpha), rtol=1e-13)
        e = np.zeros(n)
        e[0] = 1.2
        assert green_function_alpha(x[0], ball.center + e, ball, alpha) == 0.0
        assert green_function_alpha(x[0], x[0], ball, alpha) == math.inf


def test_green_alpha_at_centre():
    ball = Ball(np.zeros(3), 1.0)
    y = np.array([0.2, 0.3, -0.1])
    dy = np.linalg.norm(y)
    want = green_constant(3, 1.2) * dy ** (1.2 - 3) * incomplete_kernel_integral(1 / dy ** 2 - 1,
                                                                                  1.2, 3)
    assert green_function_alpha(np.zeros(3), y, ball, 1.2) == pytest.approx(want, rel=1e-14)


def test_green_alpha_one_dimensional_closed_form():
    # alpha = 1, n = 1, R = 1: G(x,y) = (1/pi) arcsinh-free form log((1-xy+sqrt(t))/|x-y|)
    ball = Ball([0.0], 1.0)
    x, y = 0.3, -0.4
    t = (1 - x * x) * (1 - y * y)
    want = math.log((1 - x * y + math.sqrt(t)) / abs(x - y)) / math.pi
    assert green_function_alpha([x], [y], ball, 1.0) == pytest.approx(want, rel=1e-12)


def test_poisson_kernel():
    ball = Ball(np.zeros(2), 1.0)
    rng = np.random.default_rng(4)
    ys = rng.normal(size=(200, 2)) * 3
    ys = ys[np.linalg.norm(ys, axis=1) > 1.01]
    assert np.all(poisson_kernel_alpha([0.2, 0.1], ys, ball, 0.8) > 0)
    assert poisson_kernel_alpha([0.2, 0.1], [0.1, 0.1], ball, 0.8) == 0.0
    with pytest.raises(BoundaryError):
        poisson_kernel_alpha([0.0, 0.0], [1.0, 0.0], ball, 0.8)
    with pytest.raises(DomainError):
        poisson_kernel_alpha([2.0, 0.0], [3.0, 0.0], ball, 0.8)


def test_poisson_kernel_ring_reduction_at_centre():
    # integral of P(c, .) over |y| = r equals K(alpha) R^alpha / (r (r^2-R^2)^{alpha/2})
    n, alpha, R, r = 3, 1.3, 1.0, 1.7
    ball = Ball(np.zeros(n), R)
    y = np.array([0.0, 0.0, r])
    surface = 4 * math.pi * r * r * poisson_kernel_alpha(np.zeros(n), y, ball, alpha)
    want = mean_value_constant(alpha) * R ** alpha / (r * (r * r - R * R) ** (alpha / 2))
    assert surface == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_poisson_mass(alpha):
    for n in (1, 2, 3):
        ball = Ball(np.zeros(n), 1.0)
        for x in (np.zeros(n), np.eye(n)[0] / 2):
            assert poisson_mass(x, ball, alpha) == pytest.approx(1.0, abs=1e-6)


def test_green_poisson_constant_and_cosine_n1():
    ball = Ball([0.0], 1.0)
    one, zero = ScalarField.constant(1.0, 1), ScalarField.constant(0.0, 1)
    assert green_poisson_reconstruct(one, zero, ball, [0.0], 1.0) == pytest.approx(1, abs=1e-6)
    u = ScalarField.plane_wave([1.0])
    for x in (0.0, 0.35, -0.6):
        val = green_poisson_reconstruct(u, u, ball, [x], 1.0)
        assert val == pytest.approx(math.cos(x), abs=1e-3)


def test_green_poisson_bubble_n5():
    params = Params(5, 1, 1, 0, 4)
    Q = Bubble(params)
    u = bubble_field(Q)
    v0 = riesz_potential_field(bubble_field(Q, power=4), 2.0, degree=96)
    cfg = QuadConfig(rel_tol=1e-6, abs_tol=1e-8)
    ball = Ball(np.zeros(5), 1.0)
    val = green_poisson_reconstruct(u, v0, ball, np.zeros(5), 1.0, cfg)
    assert val == pytest.approx(bubble_value(Q, np.zeros(5)), rel=1e-3)


def test_green_and_poisson_terms_domain():
    ball = Ball(np.zeros(2), 1.0)
    u = ScalarField.constant(1.0, 2)
    with pytest.raises(DomainError):
        green_term(u, ball, [1.5, 0.0], 1.0)
    with pytest.raises(DomainError):
        poisson_term(u, ball, [1.0, 0.0], 1.0)


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_poisson_extension_matches_poisson_term(alpha):
    ball = Ball(np.zeros(2), 1.0)
    datum = lambda r: np.exp(-np.asarray(r) ** 2)
    ext = poisson_extension_field(datum, ball, alpha, decay_exponent=40.0)
    g = ScalarField.radial(datum, 2, decay_exponent=40.0)
    for d in (0.0, 0.5, 0.9, 0.99):
        x = np.array([d, 0.0])
        assert ext.value(x) == pytest.approx(poisson_term(g, ball, x, alpha), rel=1e-8)
    assert ext.value([1.5, 0.0]) == pytest.approx(math.exp(-2.25))


@pytest.mark.parametrize("alpha", [0.3, 1.0, 1.7])
def test_poisson_extension_against_weighted_quadpack(alpha):
    # in sigma = R^2/r^2 the extension is a Beta-weighted integral; QUADPACK's
    # algebraic weight handles both end singularities independently
    a = alpha / 2
    K = 2 / math.pi * math.sin(math.pi * a)
    ball = Ball(np.zeros(3), 1.0)
    ext = poisson_extension_field(lambda r: np.exp(-np.asarray(r) ** 2), ball, alpha,
                                  decay_exponent=40.0)
    for d in (0.0, 0.7, 0.99, 0.9999):
        q = d * d
        inner = integrate.quad(lambda s: math.exp(-1 / s) / (1 - s * q) if s > 0 else 0.0,
                               0, 1, weight="alg", wvar=(a - 1, -a), epsabs=1e-15,
                               epsrel=1e-13, limit=200)[0]
        want = 0.5 * K * (1 - q) ** a * inner
        assert ext.value([d, 0.0, 0.0]) == pytest.approx(want, rel=1e-10)


def test_green_function_laplacian():
    ball = Ball(np.zeros(3), 1.0)
    assert green_function_laplacian(np.zeros(3), [0.5, 0, 0], ball) == pytest.approx(
        1 / (4 * math.pi), rel=1e-14)
    rng = np.random.default_rng(9)
    xs, ys = _interior(rng, 3, 1.0, 100), _interior(rng, 3, 1.0, 100)
    for x, y in zip(xs, ys):
        assert green_function_laplacian(x, y, ball) == pytest.approx(
            green_function_laplacian(y, x, ball), rel=1e-12)
        on = y / np.linalg.norm(y) * (1 - 1e-15)
        assert abs(green_function_laplacian(x, on, ball)) <= 1e-12
    assert green_function_laplacian(xs[0], xs[0], ball) == math.inf
    assert green_function_laplacian(xs[0], [2.0, 0, 0], ball) == 0.0
    with pytest.raises(ConfigurationError):
        green_function_laplacian([0.0, 0.0], [0.1, 0.0], Ball(np.zeros(2), 1.0))


@given(st.floats(0.05, 1.95), st.floats(0.1, 5.0), st.floats(1.0, 10.0))
def test_ring_weight_integral_monotone_in_lower_limit(alpha, R, factor):
    assert ring_weight_integral(R, alpha, R * factor) <= ring_weight_integral(R, alpha, R)
