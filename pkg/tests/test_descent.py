import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate as sp_integrate

from cycloidlab.curves import PlanarCurve, line_curve, scale_curve
from cycloidlab.cycloid import Cycloid, FitTarget, descent_time_closed, fit
from cycloidlab.descent import (
    DescentParams,
    compare_slides,
    descent_table,
    descent_table_csv,
    descent_time,
    perturb_slide,
    ranking_json,
)
from cycloidlab.errors import DomainError, EndpointError, NotDescendingError, PerturbationError, RegularityError

G = 9.81
PARAMS = DescentParams(G)
SLIDE = Cycloid(1.0, y_down=True).curve(0.0, math.pi, 201)
LINE_TIME = math.sqrt(2 * (math.pi**2 + 4) / (G * 2))


def test_cycloid_descent_from_cusp():
    assert descent_time(SLIDE, 0.0, PARAMS) == pytest.approx(math.pi / math.sqrt(G), rel=1e-9)


def test_generic_quadrature_matches_closed_form():
    closed = descent_time_closed(Cycloid(1.0, y_down=True), 0.0, math.pi, G)
    assert abs(descent_time(SLIDE, 0.0, PARAMS) - closed) < 1e-9


@pytest.mark.parametrize("t0", [0.0, math.pi / 4, math.pi / 2, 3 * math.pi / 4, 0.99 * math.pi, 0.9999 * math.pi])
def test_tautochrone(t0):
    assert descent_time(SLIDE, t0, PARAMS) == pytest.approx(math.pi / math.sqrt(G), rel=1e-9)


def test_straight_line():
    line = line_curve((0.0, 0.0), (math.pi, 2.0), 11)
    assert descent_time(line, 0.0, PARAMS) == pytest.approx(LINE_TIME, rel=1e-12)


def test_line_against_scipy_oracle():
    # Oracle on a tilted line from a mid start: the singular integral goes straight to scipy.
    line = line_curve((0.0, 0.0), (2.0, 3.0), 11)
    s0 = 0.25
    ref, _ = sp_integrate.quad(lambda s: math.hypot(2, 3) / math.sqrt(2 * G * 3 * (s - s0)), s0, 1.0, epsabs=1e-13)
    assert descent_time(line, s0, PARAMS) == pytest.approx(ref, rel=1e-9)


def test_start_equals_end():
    assert descent_time(SLIDE, math.pi, PARAMS) == 0.0


def test_rising_slide_rejected():
    hump = PlanarCurve.from_functions(
        np.linspace(0, 2 * math.pi, 101),
        lambda s: np.stack([s, np.sin(s)], axis=-1),
        lambda s: (np.stack([np.ones_like(s), np.cos(s)], axis=-1), np.stack([np.zeros_like(s), -np.sin(s)], axis=-1)),
    )
    with pytest.raises(NotDescendingError):
        descent_time(hump, 0.0, PARAMS)


def test_non_regular_slide_rejected():
    # Stalls at s = 1: x' = y' = 0 there.
    def pos(s):
        return np.stack([(s - 1) ** 3 + 1, (s - 1) ** 3 + 1], axis=-1)

    def der(s):
        d = 3 * (s - 1) ** 2
        dd = 6 * (s - 1)
        return np.stack([d, d], axis=-1), np.stack([dd, dd], axis=-1)

    stall = PlanarCurve.from_functions(np.linspace(0, 2, 21), pos, der)
    with pytest.raises(RegularityError):
        descent_time(stall, 0.0, PARAMS)


def test_gravity_must_be_positive():
    with pytest.raises(DomainError):
        DescentParams(0.0)


@pytest.mark.parametrize("lam", [0.25, 4.0])
def test_scaling_law(lam):
    base = descent_time(SLIDE, 0.0, PARAMS)
    scaled = descent_time(scale_curve(SLIDE, lam), 0.0, PARAMS)
    assert scaled == pytest.approx(math.sqrt(lam) * base, rel=1e-10)


@given(st.floats(0.0, 3.1), st.floats(0.2, 5.0))
def test_tautochrone_property(t0, a):
    slide = Cycloid(a, y_down=True).curve(0.0, math.pi, 101)
    assert descent_time(slide, t0, PARAMS) == pytest.approx(math.pi * math.sqrt(a / G), rel=1e-8)


def test_descent_table_csv():
    rows = descent_table(SLIDE, [0.0, 1.0], PARAMS)
    text = descent_table_csv(rows)
    lines = text.splitlines()
    assert lines[0] == "start_param,descent_time"
    assert float(lines[2].split(",")[1]) == rows[1][1]


# --- ranking ------------------------------------------------------------------------------

def _fitted(target, samples=201):
    a, t_b = fit(target)
    return Cycloid(a, y_down=True).curve(0.0, t_b, samples)


def test_cycloid_beats_line():
    target = FitTarget(math.pi, 2.0)
    line = line_curve((0.0, 0.0), (math.pi, 2.0), 11)
    ranking = compare_slides(target, [line, _fitted(target)], PARAMS, ids=["line", "cycloid"])
    assert [r.id for r in ranking] == ["cycloid", "line"]
    assert ranking[0].time_seconds == pytest.approx(math.pi / math.sqrt(G), rel=1e-9)
    assert ranking[1].time_seconds == pytest.approx(LINE_TIME, rel=1e-12)
    data = json.loads(ranking_json(ranking))
    assert set(data[0]) == {"id", "time_seconds"}


def test_single_and_duplicate_rankings():
    target = FitTarget(math.pi, 2.0)
    cyc = _fitted(target)
    assert len(compare_slides(target, [cyc], PARAMS)) == 1
    ranking = compare_slides(target, [cyc, cyc], PARAMS, ids=["first", "second"])
    assert [r.id for r in ranking] == ["first", "second"]
    assert ranking[0].time_seconds == ranking[1].time_seconds


def test_endpoint_mismatch():
    target = FitTarget(math.pi, 2.0)
    with pytest.raises(EndpointError):
        compare_slides(target, [line_curve((0.0, 0.0), (math.pi, 2.1))], PARAMS)
    with pytest.raises(EndpointError):
        compare_slides(target, [line_curve((0.0, 1e-6), (math.pi, 2.0))], PARAMS)


# --- perturbations ---------------------------------------------------------------------

def test_zero_amplitude_is_identity():
    assert perturb_slide(SLIDE, 0.0, 3, 7) is SLIDE


def test_perturbation_deterministic():
    p1 = perturb_slide(SLIDE, 0.05, 3, 42)
    p2 = perturb_slide(SLIDE, 0.05, 3, 42)
    np.testing.assert_array_equal(p1.points, p2.points)
    assert not np.array_equal(p1.points, perturb_slide(SLIDE, 0.05, 3, 43).points)


def test_perturbation_fixes_endpoints_and_descends():
    p = perturb_slide(SLIDE, 0.05, 5, 3)
    np.testing.assert_allclose(p.points[[0, -1]], SLIDE.points[[0, -1]], atol=1e-12)
    assert np.all(p.points[1:-1, 1] > p.points[0, 1])
    assert np.max(np.linalg.norm(p.points - SLIDE.points, axis=1)) <= 0.05 + 1e-12


def test_perturbation_rejects_negative_amplitude():
    with pytest.raises(DomainError):
        perturb_slide(SLIDE, -0.1, 3, 0)


def test_perturbation_gives_up_on_hopeless_base():
    # On a level slide every interior point must move down; 20 random modes never agree in sign.
    flat = line_curve((0.0, 0.0), (10.0, 0.0), 201)
    with pytest.raises(PerturbationError):
        perturb_slide(flat, 1.0, 20, 0)


@pytest.mark.parametrize("seed", range(10))
def test_perturbed_cycloid_is_slower(seed):
    base_time = descent_time(SLIDE, 0.0, PARAMS)
    p = perturb_slide(SLIDE, 0.05, 3, seed)
    assert descent_time(p, 0.0, PARAMS) > base_time
