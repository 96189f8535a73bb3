import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from logimap import map_core
from logimap.errors import DegenerateParameter
from logimap.map_core import (
    FixedPointClass,
    MapParams,
    RawQuadraticParams,
    classify_fixed_point,
    derivative,
    fixed_points,
    normalize_quadratic,
    orbit,
    raw_step,
    step,
    substitution_scale,
)

a_domain = st.floats(min_value=0.0, max_value=4.0, allow_nan=False)
unit_interval = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestStep:
    def test_zero_is_fixed(self):
        assert step(MapParams(3.2), 0.0) == 0.0

    def test_peak_at_a4(self):
        # maximum value a/4 at x = 0.5
        assert step(MapParams(4.0), 0.5) == 1.0

    def test_interior_fixed_point_a2(self):
        # (a-1)/a = 0.5 at a = 2
        assert step(MapParams(2.0), 0.5) == 0.5

    @given(a=a_domain)
    def test_intercepts(self, a):
        p = MapParams(a)
        assert step(p, 0.0) == 0.0
        assert step(p, 1.0) == 0.0

    @pytest.mark.parametrize("a", [0.5, 1.0, 2.7, 3.3, 4.0])
    def test_peak_by_grid_search(self, a):
        # dense grid oracle: max of the parabola is a/4, attained at 0.5
        xs = np.linspace(0.0, 1.0, 100_001)
        ys = a * (xs * (1.0 - xs))
        assert abs(ys.max() - a / 4.0) < 1e-9
        assert abs(xs[int(ys.argmax())] - 0.5) < 1e-4

    @given(a=a_domain, x=unit_interval)
    @settings(max_examples=300)
    def test_unit_interval_closed(self, a, x):
        y = step(MapParams(a), x)
        assert 0.0 <= y <= 1.0


class TestOrbit:
    def test_recurrence_is_exact(self):
        p = MapParams(3.7)
        orb = orbit(p, 0.123, 500, transient=7)
        for prev, nxt in zip(orb.states, orb.states[1:]):
            assert nxt == step(p, prev)

    @given(a=a_domain, x0=unit_interval)
    @settings(max_examples=100)
    def test_states_stay_in_unit_interval(self, a, x0):
        orb = orbit(MapParams(a), x0, 200)
        assert not orb.escaped
        assert all(0.0 <= x <= 1.0 for x in orb.states)

    def test_decay_below_one(self):
        # a < 1: population decays monotonically toward extinction
        orb = orbit(MapParams(0.95), 0.6, 200)
        assert orb.states[-1] < 1e-3
        assert all(b < a for a, b in zip(orb.states, orb.states[1:]))

    def test_escape_above_four(self):
        # peak exceeds 1, the state goes negative within two steps and the
        # magnitude then blows past the escape threshold
        orb = orbit(MapParams.unchecked(4.5), 0.5, 10)
        assert orb.escaped
        assert len(orb.states) < 10
        assert orb.states[2] < 0.0

    def test_escape_during_transient(self):
        orb = orbit(MapParams.unchecked(4.5), 0.5, 10, transient=50)
        assert orb.escaped
        assert orb.states == ()

    def test_convergence_to_interior_fixed_point(self):
        # brute-force iteration oracle: (a-1)/a = 0.6 at a = 2.5
        orb = orbit(MapParams(2.5), 0.3, 500)
        assert abs(orb.states[-1] - 0.6) < 1e-12

    def test_requires_positive_length(self):
        with pytest.raises(ValueError):
            orbit(MapParams(2.0), 0.3, 0)


class TestFixedPoints:
    def test_formula_at_a2(self):
        assert fixed_points(MapParams(2.0)) == [0.0, 0.5]

    def test_only_origin_below_one(self):
        assert fixed_points(MapParams(0.95)) == [0.0]

    def test_at_a32(self):
        pts = fixed_points(MapParams(3.2))
        assert pts[0] == 0.0
        assert abs(pts[1] - 2.2 / 3.2) < 1e-15

    @given(a=st.floats(min_value=0.0, max_value=4.0, allow_nan=False))
    @settings(max_examples=200)
    def test_residuals(self, a):
        p = MapParams(a)
        for x_star in fixed_points(p):
            assert abs(step(p, x_star) - x_star) < 1e-12


class TestDerivative:
    def test_critical_point(self):
        assert derivative(MapParams(3.2), 0.5) == 0.0

    def test_at_interior_fixed_point(self):
        # slope at (a-1)/a equals 2-a
        assert abs(derivative(MapParams(2.5), 0.6) - (-0.5)) < 1e-15

    def test_slope_at_origin(self):
        assert derivative(MapParams(4.0), 0.0) == 4.0

    @given(
        a=st.floats(min_value=0.1, max_value=4.0),
        x=st.floats(min_value=0.0, max_value=1.0),
    )
    @settings(max_examples=200)
    def test_matches_central_difference(self, a, x):
        # central differences are exact for quadratics up to rounding, so
        # keep the slope away from its zero to make relative error meaningful
        if abs(1.0 - 2.0 * x) < 0.02:
            x = 0.25
        p = MapParams(a)
        h = 1e-5
        fd = (step(p, x + h) - step(p, x - h)) / (2.0 * h)
        exact = derivative(p, x)
        assert abs(fd - exact) <= 1e-6 * abs(exact)


class TestClassification:
    @pytest.mark.parametrize(
        "a,expected",
        [
            (0.95, FixedPointClass.EXTINCTION_STABLE),
            (2.5, FixedPointClass.INTERIOR_STABLE),
            (3.2, FixedPointClass.UNSTABLE),
            (1.0, FixedPointClass.MARGINAL),
            (3.0, FixedPointClass.MARGINAL),
        ],
    )
    def test_regimes(self, a, expected):
        assert classify_fixed_point(MapParams(a)) is expected


class TestRawQuadratic:
    def test_identity_scale(self):
        raw = RawQuadraticParams(3.2, 3.2)
        assert normalize_quadratic(raw) == MapParams(3.2)
        assert substitution_scale(raw) == 1.0

    def test_scale_two(self):
        raw = RawQuadraticParams(2.0, 4.0)
        assert normalize_quadratic(raw) == MapParams(2.0)
        assert substitution_scale(raw) == 2.0

    def test_degenerate(self):
        with pytest.raises(DegenerateParameter):
            normalize_quadratic(RawQuadraticParams(0.0, 1.0))
        with pytest.raises(DegenerateParameter):
            normalize_quadratic(RawQuadraticParams(2.0, -1.0))

    def test_scaled_iteration_matches_normalized(self):
        # brute force: y_n = 2*x_n follows the normalized recurrence when
        # x_n follows the raw one with (a, b) = (2, 4)
        raw = RawQuadraticParams(2.0, 4.0)
        x = 0.15
        y = substitution_scale(raw) * x
        p = normalize_quadratic(raw)
        for _ in range(100):
            x = raw_step(raw, x)
            y = step(p, y)
            assert abs(y - 2.0 * x) < 1e-12

    @given(
        a=st.floats(min_value=0.2, max_value=3.3),
        scale=st.floats(min_value=0.25, max_value=4.0),
        y0=st.floats(min_value=0.05, max_value=0.95),
    )
    @settings(max_examples=100)
    def test_round_trip_in_contractive_regime(self, a, scale, y0):
        # chaotic parameters amplify last-bit rounding differences between
        # the two evaluation orders without bound, so the elementwise check
        # is meaningful only where orbits contract
        raw = RawQuadraticParams(a, scale * a)
        p = normalize_quadratic(raw)
        x = y0 / scale
        y = y0
        for _ in range(100):
            x = raw_step(raw, x)
            y = step(p, y)
            assert abs(y - scale * x) < 1e-12


class TestParamsDomain:
    def test_checked_constructor_rejects(self):
        with pytest.raises(DegenerateParameter):
            MapParams(4.5)
        with pytest.raises(DegenerateParameter):
            MapParams(-0.1)

    def test_unchecked_tags(self):
        p = MapParams.unchecked(4.5)
        assert p.out_of_domain
        assert not MapParams.unchecked(3.9).out_of_domain

    def test_critical_point(self):
        assert MapParams(1.7).critical_point == 0.5
