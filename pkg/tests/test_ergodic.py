import math

import numpy as np
import pytest

from logimap import cycles, ergodic
from logimap.ergodic import (
    attractor_cardinality,
    bifurcation_scan,
    lyapunov,
)
from logimap.errors import EscapedOrbit
from logimap.map_core import MapParams, orbit


class TestLyapunov:
    def test_attracting_fixed_point(self):
        # exponent at an attracting fixed point is ln|2-a|
        res = lyapunov(MapParams(2.5), 0.3, n=100_000)
        assert abs(res.exponent - math.log(0.5)) < 1e-3
        assert res.n_used == 100_000

    def test_two_cycle(self):
        # half the log of the 2-cycle slope product -a^2+2a+4 = 0.16
        res = lyapunov(MapParams(3.2), 0.3, n=100_000)
        assert abs(res.exponent - 0.5 * math.log(0.16)) < 1e-3

    def test_full_chaos_matches_tent_conjugacy(self):
        res = lyapunov(MapParams(4.0), 0.3, n=1_000_000)
        assert abs(res.exponent - math.log(2.0)) < 1e-2

    def test_attracting_four_cycle_matches_multiplier(self):
        p = MapParams(3.5)
        cyc = cycles.refine_cycle(p, 0.5, 4)
        expected = math.log(abs(cyc.multiplier)) / 4.0
        res = lyapunov(p, 0.3, n=100_000)
        assert abs(res.exponent - expected) < 1e-3

    def test_superstable_marker(self):
        # starting on the critical point makes the first slope exactly zero
        res = lyapunov(MapParams(3.2), 0.5, n=1000, transient=0)
        assert res.superstable
        assert res.exponent is None
        assert res.n_used == 0

    def test_sign_trichotomy(self):
        for a in (2.5, 3.2, 3.5):
            orb = orbit(MapParams(a), 0.3, 1024, transient=8192)
            cyc = cycles.detect_cycle(orb, 1e-8, 64)
            assert abs(cyc.multiplier) < 1.0
            assert lyapunov(MapParams(a), 0.3, n=20_000).exponent < 0.0
        assert lyapunov(MapParams(3.99), 0.3, n=50_000).exponent > 0.0
        assert lyapunov(MapParams(4.0), 0.3, n=50_000).exponent > 0.0

    def test_escape_raises(self):
        with pytest.raises(EscapedOrbit):
            lyapunov(MapParams.unchecked(4.5), 0.3, n=1000, transient=0)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            lyapunov(MapParams(2.5), 0.0, n=1000)
        with pytest.raises(ValueError):
            lyapunov(MapParams(2.5), 0.3, n=999)


class TestBifurcationScan:
    def test_equilibrium_band(self):
        # interior fixed point regime: every sample sits on (a-1)/a
        data = bifurcation_scan(2.0, 2.9, 10, keep=64)
        for a, samples in zip(data.a_values, data.samples):
            assert len(samples) == 64
            assert np.max(np.abs(samples - (a - 1.0) / a)) < 1e-6

    def test_two_cluster_band(self):
        data = bifurcation_scan(3.1, 3.4, 7, keep=64)
        for samples in data.samples:
            assert attractor_cardinality(samples, 1e-4) == 2

    def test_chaotic_band_is_spread_out(self):
        data = bifurcation_scan(3.6, 4.0, 41, keep=256)
        i = int(np.argmin(np.abs(data.a_values - 3.99)))
        assert abs(data.a_values[i] - 3.99) < 1e-9
        assert attractor_cardinality(data.samples[i], 1e-4) >= 200

    def test_doubling_ladder_cardinalities(self):
        data = bifurcation_scan(1.5, 3.5, 5, keep=256)
        cards = [attractor_cardinality(s, 1e-4) for s in data.samples]
        # grid: 1.5, 2.0, 2.5, 3.0(+), 3.5 -- the last lands on the 4-cycle
        assert cards[0] == cards[1] == cards[2] == 1
        assert cards[4] == 4
        for a, expected in [(2.2, 1), (3.1, 2), (3.42, 2), (3.47, 4), (3.53, 4)]:
            d = bifurcation_scan(a, a + 0.001, 2, keep=256)
            assert attractor_cardinality(d.samples[0], 1e-4) == expected

    def test_grid_is_uniform_and_inclusive(self):
        data = bifurcation_scan(2.8, 4.0, 7, transient=10, keep=2)
        assert data.a_values[0] == 2.8
        assert data.a_values[-1] == 4.0
        gaps = np.diff(data.a_values)
        assert np.allclose(gaps, gaps[0], rtol=0, atol=1e-15)

    def test_worker_count_does_not_change_bits(self):
        one = bifurcation_scan(2.8, 4.0, 101, transient=3000, keep=32, workers=1)
        four = bifurcation_scan(2.8, 4.0, 101, transient=3000, keep=32, workers=4)
        assert np.array_equal(one.a_values, four.a_values)
        assert one.escaped == four.escaped
        for s1, s4 in zip(one.samples, four.samples):
            assert np.array_equal(s1, s4)

    def test_matches_scalar_orbit_bits(self):
        data = bifurcation_scan(3.7, 3.9, 3, transient=500, keep=16)
        for a, samples in zip(data.a_values, data.samples):
            orb = orbit(MapParams(float(a)), 0.5, 16, transient=500)
            assert tuple(samples) == orb.states

    def test_out_of_interval_start_escapes(self):
        data = bifurcation_scan(3.8, 3.9, 3, transient=100, keep=8, x0=1.5)
        assert all(data.escaped)
        assert all(len(s) == 0 for s in data.samples)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            bifurcation_scan(3.0, 2.0, 5)
        with pytest.raises(ValueError):
            bifurcation_scan(0.0, 4.5, 5)
        with pytest.raises(ValueError):
            bifurcation_scan(2.0, 3.0, 1)
        with pytest.raises(ValueError):
            bifurcation_scan(2.0, 3.0, 5, keep=0)


class TestCardinality:
    def test_single_cluster(self):
        assert attractor_cardinality([0.6875] * 64, 1e-4) == 1

    def test_two_point_cycle(self):
        lo, hi = 0.513045, 0.799455
        samples = [lo, hi] * 32
        assert attractor_cardinality(samples, 1e-4) == 2

    def test_spacing_twice_tol_never_merges(self):
        tol = 1e-3
        samples = [k * 2.0 * tol for k in range(25)]
        assert attractor_cardinality(samples, tol) == 25

    def test_preconditions(self):
        with pytest.raises(ValueError):
            attractor_cardinality([], 1e-4)
        with pytest.raises(ValueError):
            attractor_cardinality([0.5], 0.0)
