import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.constants import mu_0

from micg.circuit import (
    CoilSpec,
    ResonantNetwork,
    coil_inductance_air,
    coil_resistance,
    impedance,
    reactance,
    synthesize,
    synthesize_hz,
    target_reactance,
)
from micg.errors import DuplicateResonance, InputError, InvalidInterleaving, PoleProximity


def eq2(L, C, branches, w):
    # straight transcription, independent of micg.circuit.reactance
    x = (w * w * L * C - 1.0) / (w * C)
    for li, ci in branches:
        x += w * li / (1.0 - w * w * li * ci)
    return x


def bisect_root(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


resonance_sets = st.integers(2, 5).flatmap(
    lambda n: st.tuples(
        st.floats(1e3, 1e7),
        st.lists(st.floats(1.5, 6.0), min_size=n - 1, max_size=n - 1),
    )
).map(lambda t: tuple(np.cumprod([t[0], *t[1]])))


class TestCoil:
    def test_air_inductance_one_turn(self):
        coil = CoilSpec(1.0, 1, 1e-3)
        assert coil_inductance_air(coil) == pytest.approx(mu_0 * (math.log(8000) - 2), rel=1e-12)
        assert coil_inductance_air(coil) == pytest.approx(8.78e-6, rel=1e-3)

    def test_air_inductance_turns_squared(self):
        one = coil_inductance_air(CoilSpec(1.0, 1, 1e-3))
        assert coil_inductance_air(CoilSpec(1.0, 10, 1e-3)) == pytest.approx(100 * one, rel=1e-12)

    def test_thick_wire_rejected(self):
        # ln(8a/b) must exceed 2
        with pytest.raises(InputError):
            CoilSpec(1.0, 1, 8 / math.e**2 + 1e-3)

    def test_copper_resistance(self):
        r = coil_resistance(CoilSpec(1.0, 10, 1e-3, resistivity=1.68e-8))
        assert r == pytest.approx(1.68e-8 * 20 * math.pi / (math.pi * 1e-6), rel=1e-12)
        assert r == pytest.approx(0.336, rel=1e-9)

    def test_zero_turns_forbidden(self):
        with pytest.raises(InputError):
            CoilSpec(1.0, 0, 1e-3)

    def test_double_wire_radius_quarters_resistance(self):
        r1 = coil_resistance(CoilSpec(0.5, 7, 1e-3))
        r2 = coil_resistance(CoilSpec(0.5, 7, 2e-3))
        assert r2 == pytest.approx(r1 / 4, rel=1e-12)

    @pytest.mark.parametrize("field,value", [("radius", -1.0), ("wire_radius", 0.0),
                                             ("resistivity", 0.0)])
    def test_invariants(self, field, value):
        kw = dict(radius=1.0, turns=3, wire_radius=1e-3)
        kw[field] = value
        with pytest.raises(InputError):
            CoilSpec(**kw)


class TestReactance:
    def test_series_lc_resonance(self):
        net = ResonantNetwork(0.0, 1.0, 1.0, (), (1.0,), ())
        assert reactance(net, 1.0) == pytest.approx(0.0, abs=1e-15)

    def test_one_branch_value(self):
        f1 = 1 / math.sqrt(1e-3 * 1e-9)
        net = ResonantNetwork(0.0, 1e-3, 1e-9, ((1e-3, 1e-9),), (1e5, 1e7), (f1,))
        # (0.25 - 1)/5e-4 + 500/0.75
        assert reactance(net, 5e5) == pytest.approx(-1500 + 2000 / 3, rel=1e-12)
        assert reactance(net, 5e5) == pytest.approx(-833.333, abs=1e-3)

    def test_pole_raises(self):
        f1 = 1 / math.sqrt(1e-3 * 1e-9)
        net = ResonantNetwork(0.0, 1e-3, 1e-9, ((1e-3, 1e-9),), (1e5, 1e7), (f1,))
        with pytest.raises(PoleProximity):
            reactance(net, f1)
        with pytest.raises(PoleProximity):
            reactance(net, f1 * (1 + 5e-10))
        with pytest.raises(PoleProximity):
            reactance(net, 0.0)

    def test_impedance_series_lc_zero(self):
        net = synthesize(2e-6, 0.0, [1e6])
        z = impedance(net, 1e6)
        assert abs(z) <= 1e-9 * 1e6 * 2e-6

    def test_impedance_at_resonance_is_resistance(self):
        net = synthesize_hz(8.78e-4, 0.336, [1e6, 5e6])
        for w in net.resonances:
            z = impedance(net, w)
            assert z.real == 0.336
            assert abs(z.imag) < 1e-9 * w * 8.78e-4

    def test_capacitive_below_first_resonance(self):
        net = synthesize_hz(8.78e-4, 0.336, [1e6, 5e6])
        assert impedance(net, 2 * math.pi * 1e4).imag < -1e4


class TestTargetReactance:
    def test_zero_at_resonances(self):
        res, poles = (1.0, 3.0, 9.0), (2.0, 5.0)
        for w in res:
            assert target_reactance(1e-3, res, poles, w) == 0.0

    def test_single_resonance_value(self):
        assert target_reactance(1.0, (1.0,), (), 2.0) == pytest.approx(1.5, rel=1e-15)

    def test_high_frequency_slope(self):
        w = 1e9
        assert target_reactance(2e-3, (1.0, 3.0), (2.0,), w) / w == pytest.approx(2e-3, rel=1e-12)

    def test_bad_interleaving(self):
        with pytest.raises(InvalidInterleaving):
            target_reactance(1.0, (1.0, 3.0), (4.0,), 2.0)


class TestSynthesize:
    def test_single_resonance_is_series_lc(self):
        net = synthesize(3e-6, 0.1, [2e6])
        assert net.branches == ()
        assert net.series_capacitance == 1 / ((2e6) ** 2 * 3e-6)

    def test_bundled_frequencies(self):
        L = coil_inductance_air(CoilSpec(1.0, 10, 1e-3))
        net = synthesize_hz(L, 0.336, [1e6, 5e6])
        assert len(net.branches) == 1
        assert net.poles_hz[0] == pytest.approx(math.sqrt(5) * 1e6, rel=1e-12)
        for w in net.resonances:
            assert abs(reactance(net, w)) <= 1e-9 * w * L

    def test_three_resonances_bisection_oracle(self):
        rng = np.random.default_rng(7)
        base = 2 * math.pi * 1e5
        res = base * 2.0 ** np.arange(3) * rng.uniform(0.98, 1.02, 3)
        net = synthesize(5e-5, 0.2, res)
        L, C, br = net.series_inductance, net.series_capacitance, net.branches
        edges = [res[0] * 1e-6, *net.poles, res[-1] * 1e3]
        roots = []
        for lo, hi in zip(edges, edges[1:]):
            g = 1e-7 * (hi - lo)
            roots.append(bisect_root(lambda w: eq2(L, C, br, w), lo + g, hi - g))
        np.testing.assert_allclose(roots, res, rtol=1e-10)

    def test_custom_poles_respected(self):
        net = synthesize(1e-3, 0.0, [1.0, 4.0], poles=[3.0])
        assert net.poles == (3.0,)
        assert abs(reactance(net, 4.0)) < 1e-9 * 4.0 * 1e-3

    def test_errors(self):
        with pytest.raises(DuplicateResonance):
            synthesize(1e-3, 0.0, [1.0, 1.0])
        with pytest.raises(InvalidInterleaving):
            synthesize(1e-3, 0.0, [4.0, 1.0])
        with pytest.raises(InvalidInterleaving):
            synthesize(1e-3, 0.0, [1.0, 4.0], poles=[5.0])

    def test_network_invariant_checked(self):
        with pytest.raises(InputError):
            ResonantNetwork(0.0, 1.0, 1.0, ((1.0, 2.0),), (1.0, 4.0), (2.0,))

    @settings(max_examples=60, deadline=None)
    @given(resonance_sets, st.floats(1e-7, 1e-2))
    def test_zero_placement(self, res, L):
        net = synthesize(L, 0.0, res)
        for w in res:
            assert abs(reactance(net, w)) <= 1e-9 * w * L

    @settings(max_examples=40, deadline=None)
    @given(resonance_sets, st.floats(1e-7, 1e-2))
    def test_foster_equivalence(self, res, L):
        net = synthesize(L, 0.0, res)
        w = np.geomspace(res[0] / 10, res[-1] * 10, 400)
        for f in net.poles:
            w = w[np.abs(w - f) > 1e-6 * f]
        x = reactance(net, w)
        t = target_reactance(L, res, net.poles, w)
        # relative to the size of the terms that cancel near each zero
        np.testing.assert_array_less(np.abs(x - t), 1e-6 * (np.abs(t) + 1e-6 * w * L))

    @settings(max_examples=40, deadline=None)
    @given(resonance_sets)
    def test_monotone_between_poles(self, res):
        net = synthesize(1e-4, 0.0, res)
        edges = [res[0] * 1e-3, *net.poles, res[-1] * 1e3]
        for lo, hi in zip(edges, edges[1:]):
            w = np.geomspace(lo * (1 + 1e-6), hi * (1 - 1e-6), 300)
            assert np.all(np.diff(reactance(net, w)) > 0)

    @settings(max_examples=40, deadline=None)
    @given(resonance_sets)
    def test_interleaving_preserved(self, res):
        net = synthesize(1e-4, 0.0, res)
        for i, f in enumerate(net.poles):
            assert net.resonances[i] < f < net.resonances[i + 1]
        for (li, ci), f in zip(net.branches, net.poles):
            assert ci * f * f * li == pytest.approx(1.0, rel=1e-12)
