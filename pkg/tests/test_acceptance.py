"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test appends one PASS/FAIL line to ``RESULTS``; ``conftest.py`` prints
them at the end of the session.  Run as a script to print them directly.
"""

import math
import time

import numpy as np
import pytest

from nonlocal_kit import (Ball, Bubble, Params, ScalarField, bubble_value, frac_laplacian,
                          poisson_mass, ring_average)
from nonlocal_kit.verify.suites import (SUITES, default_params, mu_grid_violations, run_suite,
                                        verify_kelvin, verify_superpoly)

RESULTS = []


def _record(number, title, ok, detail, seconds, budget=None):
    within = budget is None or seconds <= budget
    status = "PASS" if ok and within else "FAIL"
    limit = "" if budget is None else f" / budget {budget:g} s"
    RESULTS.append(f"[{status}] criterion {number:2d}: {title}: {detail} "
                   f"({seconds:.2f} s{limit})")
    return ok and within


def _failed_cases(report):
    return [c.id for c in report.cases if not c.passed]


def test_criterion_01_fourier_symbol():
    start = time.perf_counter()
    worst = 0.0
    direction = np.array([1.0, 2.0, 2.0]) / 3.0
    for n in (1, 2, 3):
        d = direction[:n] / np.linalg.norm(direction[:n])
        x = np.array([0.3, -0.2, 0.1])[:n]
        for alpha in (0.5, 1.0, 1.5):
            for kn in (0.5, 1.0, 2.0):
                k = kn * d
                got = frac_laplacian(ScalarField.plane_wave(k), x, alpha)
                want = kn ** alpha * math.cos(float(k @ x))
                worst = max(worst, abs(got - want) / abs(want))
    elapsed = time.perf_counter() - start
    assert _record(1, "Fourier symbol of cos(k.x), 27 cases", worst <= 1e-4,
                   f"max rel err {worst:.2e} <= 1e-4", elapsed, 60)


def test_criterion_02_poisson_ring_normalisation():
    start = time.perf_counter()
    worst = 0.0
    for n in (2, 3):
        one = ScalarField.constant(1.0, n)
        for R in (0.5, 1.0, 2.0):
            ball = Ball(np.zeros(n), R)
            for alpha in (0.3, 1.0, 1.7):
                worst = max(worst, abs(ring_average(one, np.zeros(n), R, alpha) - 1.0))
                for x in (np.zeros(n), np.eye(n)[0] * R / 2):
                    worst = max(worst, abs(poisson_mass(x, ball, alpha) - 1.0))
    elapsed = time.perf_counter() - start
    assert _record(2, "ring average of 1 and Poisson mass, n in {2,3}", worst <= 1e-6,
                   f"max abs err {worst:.2e} <= 1e-6", elapsed, 10)


def _suite_criterion(number, title, name, budget, **kw):
    start = time.perf_counter()
    report = run_suite(name, default_params(name, **kw))
    elapsed = time.perf_counter() - start
    bad = _failed_cases(report)
    detail = f"{len(report.cases)} cases, " + (f"failed {bad}" if bad else "all pass")
    return report, _record(number, title, report.passed, detail, elapsed, budget)


def test_criterion_03_mean_value():
    report, ok = _suite_criterion(3, "mean-value characterisation (n=2, alpha=1)",
                                  "mean-value", 120)
    eq = [c for c in report.cases if c.id.startswith("eq-gauss")]
    ineq = [c for c in report.cases if c.id.startswith("ineq")]
    assert len(eq) >= 4 and all(c.abs_err <= 1e-3 for c in eq)
    assert all(c.computed - c.expected <= 1e-6 for c in ineq)
    assert ok


def test_criterion_04_green_poisson():
    report, ok = _suite_criterion(4, "Green-Poisson reconstruction (n=1, alpha=1)",
                                  "green-poisson", 120)
    cos_cases = [c for c in report.cases if c.id.startswith("cos-")]
    assert len(cos_cases) >= 3 and all(c.abs_err <= 1e-3 for c in cos_cases)
    assert report.case("radius-independence").abs_err <= 2e-3
    assert ok


def test_criterion_05_riesz_semigroup():
    report, ok = _suite_criterion(5, "Riesz semigroup (n=1, a1=a2=0.4)", "riesz-semigroup", 60)
    for d in ("0.5", "1", "2"):
        assert report.case(f"dist-{d}").rel_err <= 1e-3
    h = report.case("homogeneity")
    assert h.abs_err <= 2e-3 or h.rel_err <= 2e-3
    assert ok


def test_criterion_06_bubble_integral_equation():
    report, ok = _suite_criterion(6, "bubble solves the integral equation (5,1,1), p=4",
                                  "bubble-ie", 300)
    for r in ("0", "0.5", "1", "2"):
        assert report.case(f"ie-r{r}").rel_err <= 1e-3
    q0 = bubble_value(Bubble(Params(5, 1, 1, 0, 4)), np.zeros(5))
    assert abs(q0 - 48 ** (1 / 3)) <= 1e-12 * 48 ** (1 / 3)
    assert ok


def test_criterion_07_superpoly_chain():
    start = time.perf_counter()
    reports = [verify_superpoly(default_params("superpoly", n=n, m=m)) for n, m in ((5, 1), (6, 2))]
    elapsed = time.perf_counter() - start
    bad = [c.id for r in reports for c in r.cases if not c.passed]
    ok = all(r.passed for r in reports)
    assert _record(7, "super-polyharmonic chain, (5,1) and (6,2)", ok,
                   f"{sum(len(r.cases) for r in reports)} cases, "
                   + (f"failed {bad}" if bad else "all pass"), elapsed, 300)


def test_criterion_08_mu_recurrence_exact():
    start = time.perf_counter()
    violations, total = mu_grid_violations()
    elapsed = time.perf_counter() - start
    assert total > 0
    assert _record(8, "exact mu recurrence over the rational grid", violations == 0,
                   f"{violations} violations in {total} sequences", elapsed, 1.0)


def test_criterion_09_kelvin():
    start = time.perf_counter()
    report = verify_kelvin(default_params("kelvin"), samples=100)
    elapsed = time.perf_counter() - start
    inv = report.case("involution").computed
    qinv = report.case("q-invariance").computed
    ok = report.passed and inv <= 1e-12 and qinv <= 1e-12
    assert _record(9, "Kelvin involution and Q-invariance, 100 points", ok,
                   f"involution {inv:.1e}, Q-invariance {qinv:.1e} <= 1e-12", elapsed, 1.0)


def test_criterion_10_determinism(tmp_path):
    start = time.perf_counter()
    differing = []
    for name in SUITES:
        first = tmp_path / f"{name}-1.json"
        second = tmp_path / f"{name}-2.json"
        run_suite(name, out_path=first)
        run_suite(name, out_path=second)
        if first.read_bytes() != second.read_bytes():
            differing.append(name)
    elapsed = time.perf_counter() - start
    assert _record(10, "byte-identical JSON over two runs of every suite", not differing,
                   f"{len(SUITES) - len(differing)}/{len(SUITES)} suites identical", elapsed)


if __name__ == "__main__":  # pragma: no cover
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
