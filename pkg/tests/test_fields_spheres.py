import math

import numpy as np
import pytest

from nonlocal_kit import Ball, DomainError, LAlphaError, ScalarField, check_decay
from nonlocal_kit.spheres import sphere_mean, sphere_mean_of, sphere_points, sphere_rule


def test_radial_field_depends_on_distance_only():
    c = np.array([0.5, -1.0, 2.0])
    u = ScalarField.radial(lambda r: np.exp(-r), 3, c)
    rng = np.random.default_rng(0)
    for _ in range(50):
        d = rng.normal(size=3)
        d /= np.linalg.norm(d)
        e = rng.normal(size=3)
        e /= np.linalg.norm(e)
        r = rng.uniform(0, 3)
        assert u.value(c + r * d) == pytest.approx(u.value(c + r * e), rel=1e-14)


def test_field_arithmetic():
    u = ScalarField.radial(lambda r: r ** 2, 2)
    v = ScalarField.radial(lambda r: np.ones_like(r), 2, far_value=1.0)
    w = u + v
    assert w.is_radial and w.value([3.0, 4.0]) == pytest.approx(26.0)
    assert (2 * u).value([1.0, 0.0]) == 2.0
    assert u.power(0.5).value([3.0, 4.0]) == pytest.approx(5.0)
    assert not u.as_general().is_radial


def test_constructors_validate():
    with pytest.raises(DomainError):
        ScalarField.plane_wave([0.0, 0.0])
    with pytest.raises(DomainError):
        ScalarField.ridge(np.cos, [0.0])
    with pytest.raises(DomainError):
        ScalarField.radial(np.exp, 2, center=[0.0])
    with pytest.raises(DomainError):
        Ball([0.0], 0.0)
    with pytest.raises(DomainError):
        ScalarField.general(np.sin, 1, decay_exponent=-1)


def test_ball():
    b = Ball([1.0, 1.0], 2.0)
    assert b.dim == 2 and b.contains([2.0, 2.0]) and not b.contains([3.5, 1.0])
    assert b.offset([1.0, 4.0]) == pytest.approx(3.0)


def test_check_decay():
    ok = ScalarField.radial(lambda r: (1 + r * r) ** -1.0, 3, decay_exponent=2.0)
    check_decay(ok)
    lying = ScalarField.radial(lambda r: (1 + r * r) ** -0.5, 3, decay_exponent=3.0)
    with pytest.raises(LAlphaError):
        check_decay(lying)


def test_sphere_rules_weights():
    for n, order in ((1, 0), (2, 16), (3, 8), (5, 0)):
        omega, w = sphere_rule(n, order)
        assert w.sum() == pytest.approx(1.0, abs=1e-14)
        assert np.allclose(np.linalg.norm(omega, axis=1), 1.0)


def test_sphere_points_deterministic_and_symmetric():
    a = sphere_points(5, 64, 0)
    b = sphere_points(5, 64, 0)
    assert np.array_equal(a, b)
    assert np.allclose(a.sum(axis=0), 0.0)
    assert not np.array_equal(a, sphere_points(5, 64, 3))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_sphere_mean_examples(n):
    five = ScalarField.constant(5.0, n)
    assert sphere_mean(five, np.ones(n), [0.7])[0] == pytest.approx(5.0)
    a = np.arange(1.0, n + 1)
    affine = ScalarField.general(lambda x: x @ a + 2.0, n)
    x0 = np.linspace(-1, 1, n)
    assert sphere_mean(affine, x0, [1.3])[0] == pytest.approx(float(a @ x0) + 2.0, rel=1e-12)
    sq = ScalarField.general(lambda x: np.sum(x * x, axis=-1), n)
    assert sphere_mean(sq, np.zeros(n), [1.5])[0] == pytest.approx(2.25, rel=1e-12)


def test_sphere_mean_paths_agree():
    # an off-centre radial field: theta reduction vs generic product rule
    u = ScalarField.radial(lambda r: np.exp(-r * r), 3, np.array([0.2, 0.0, 0.0]))
    x = np.array([0.0, 0.5, 0.0])
    radii = np.array([0.3, 1.0, 2.5])
    fast = sphere_mean(u, x, radii)
    slow = sphere_mean_of(u.func, x, radii, 3)
    assert np.allclose(fast, slow, rtol=1e-9, atol=1e-12)


def test_ridge_mean_n2():
    # mean of cos(k x1) over a circle of radius rho is J0(k rho) cos(k x1)
    from scipy.special import j0
    u = ScalarField.plane_wave([2.0, 0.0])
    x = np.array([0.3, 0.0])
    got = sphere_mean(u, x, [0.8])[0]
    assert got == pytest.approx(j0(1.6) * math.cos(0.6), rel=1e-10)


def test_spherical_laplacian_commutes_for_square():
    # FD radial Laplacian of the mean of |x|^2 about 0 equals the mean of 2n
    n = 3
    sq = ScalarField.general(lambda x: np.sum(x * x, axis=-1), n)
    h, r = 1e-3, 0.8
    m = lambda rho: sphere_mean(sq, np.zeros(n), [rho])[0]
    lap = (m(r + h) - 2 * m(r) + m(r - h)) / h ** 2 + (n - 1) / r * (m(r + h) - m(r - h)) / (2 * h)
    assert lap == pytest.approx(2 * n, rel=1e-5)
