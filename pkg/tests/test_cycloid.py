import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sp_integrate

from cycloidlab.cycloid import Cycloid, FitTarget, _psi, descent_time_closed, fit, point, speed, t_minus_sin
from cycloidlab.errors import DomainError

G = 9.81


@pytest.mark.parametrize(
    "a, t, expected",
    [(1.0, 0.0, (0.0, 0.0)), (1.0, math.pi, (math.pi, 2.0)), (2.0, math.pi / 2, (math.pi - 2.0, 2.0))],
)
def test_point_examples(a, t, expected):
    np.testing.assert_allclose(point(Cycloid(a), t), expected, atol=1e-15)


def test_point_upward_flips_only_slides():
    up = Cycloid(1.0).point_upward(1.0)
    down = Cycloid(1.0, y_down=True).point_upward(1.0)
    assert up[1] > 0 and down[1] == -up[1] and down[0] == up[0]


@pytest.mark.parametrize("a, t, expected", [(1.0, 0.0, 0.0), (1.0, math.pi, 2.0), (3.0, math.pi / 3, 3.0)])
def test_speed_examples(a, t, expected):
    assert float(speed(Cycloid(a), t)) == pytest.approx(expected, abs=1e-14)


@given(st.floats(0.1, 10), st.floats(0.01, 6.2))
def test_speed_matches_finite_difference(a, t):
    c = Cycloid(a)
    h = 1e-5
    fd = (c.point(t + h) - c.point(t - h)) / (2 * h)
    assert float(c.speed(t)) == pytest.approx(float(np.hypot(*fd)), rel=1e-8, abs=1e-8 * a)


def test_radius_must_be_positive():
    with pytest.raises(DomainError):
        Cycloid(0.0)


def test_t_minus_sin_series_is_continuous():
    t = np.array([0.1 - 1e-12, 0.1 + 1e-12, 1e-3])
    direct = t - np.sin(t)
    np.testing.assert_allclose(t_minus_sin(t)[:2], direct[:2], rtol=1e-9)
    assert t_minus_sin(1e-3) == pytest.approx(1e-9 / 6 - 1e-15 / 120, rel=1e-12)


# --- fit ------------------------------------------------------------------------------

@pytest.mark.parametrize(
    "b, a, t_b",
    [((math.pi, 2.0), 1.0, math.pi), ((math.pi / 2 - 1, 1.0), 1.0, math.pi / 2), ((2 * math.pi, 0.0), 1.0, 2 * math.pi)],
)
def test_fit_examples(b, a, t_b):
    got_a, got_t = fit(FitTarget(*b))
    assert got_a == pytest.approx(a, rel=1e-10)
    assert got_t == pytest.approx(t_b, rel=1e-10)


def test_fit_rejects_bad_targets():
    with pytest.raises(DomainError, match="b1 must be positive"):
        FitTarget(-1.0, 2.0)
    with pytest.raises(DomainError, match="b2 must be non-negative"):
        FitTarget(1.0, -2.0)
    with pytest.raises(DomainError):
        fit(FitTarget(1e-30, 1.0))


@pytest.mark.parametrize("a", [0.1, 1.0, 10.0])
@pytest.mark.parametrize("t_b", np.linspace(0.1, 2 * math.pi, 12))
def test_fit_round_trip(a, t_b):
    b1, b2 = Cycloid(a).point(t_b)
    got_a, got_t = fit(FitTarget(float(b1), float(b2)))
    assert got_a == pytest.approx(a, rel=1e-10)
    assert got_t == pytest.approx(t_b, rel=1e-10, abs=1e-10)


def test_psi_strictly_decreasing():
    t = np.linspace(1e-3, 2 * math.pi, 10_000)
    values = np.array([_psi(x) for x in t])
    assert np.all(np.diff(values) < 0)


def test_monotone_flag():
    assert FitTarget(math.pi, 2.0).monotone
    assert not FitTarget(2 * math.pi, 0.0).monotone


# --- closed-form descent ------------------------------------------------------------

def test_closed_descent_from_cusp():
    c = Cycloid(1.0, y_down=True)
    assert descent_time_closed(c, 0.0, math.pi, G) == pytest.approx(math.pi * math.sqrt(1 / G), rel=1e-15)


def test_closed_descent_matches_scipy_oracle():
    c = Cycloid(1.0, y_down=True)
    t0 = math.pi / 2

    def integrand(t):
        h = float(c.point(t)[1] - c.point(t0)[1])
        return float(c.speed(t)) / math.sqrt(2 * G * h)

    ref, _ = sp_integrate.quad(integrand, t0, math.pi, epsabs=1e-13, epsrel=1e-12, limit=200)
    assert descent_time_closed(c, t0, math.pi, G) == pytest.approx(ref, rel=1e-9)


def test_closed_descent_zero_interval():
    assert descent_time_closed(Cycloid(1.0, y_down=True), 1.0, 1.0) == 0.0


def test_closed_descent_needs_slide_orientation_and_gravity():
    with pytest.raises(DomainError):
        descent_time_closed(Cycloid(1.0), 0.0, math.pi)
    with pytest.raises(DomainError):
        descent_time_closed(Cycloid(1.0, y_down=True), 0.0, math.pi, g=0.0)


@given(st.floats(0.0, math.pi - 1e-6), st.floats(0.1, 5.0))
def test_closed_descent_is_tautochronous(t0, a):
    c = Cycloid(a, y_down=True)
    assert descent_time_closed(c, t0, math.pi, G) == pytest.approx(math.pi * math.sqrt(a / G), rel=1e-12)


def test_curve_conversion_has_analytic_derivatives():
    c = Cycloid(2.0).curve(0.0, math.pi, 5)
    assert c.has_analytic
    np.testing.assert_allclose(c.derivative(math.pi), [4.0, 0.0], atol=1e-15)
