import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from micg import multiuser
from micg.circuit import synthesize_hz
from micg.errors import InputError, OverlapWarning, TargetOutOfRange, TooManyUsers
from micg.multiuser import (
    UserLink,
    allocate_bands,
    ber_bpsk,
    effective_snr,
    monte_carlo_ber,
    required_snr,
    snr_at_ber,
)

SCHEME_PAIR = ("multi_frequency", "single_resonant")


@pytest.fixture
def two_band():
    return synthesize_hz(7.4e-4, 0.0373, [1e6, 5e6])


class TestAllocation:
    def test_identity(self):
        net = synthesize_hz(1e-4, 0.1, [2e6])
        assert allocate_bands(["a"], net) == {"a": 2e6}

    def test_two_users(self, two_band):
        assert allocate_bands(["user2", "user1"], two_band) == {"user1": 1e6, "user2": 5e6}

    def test_too_many(self, two_band):
        with pytest.raises(TooManyUsers):
            allocate_bands(["a", "b", "c"], two_band)

    def test_duplicate_ids(self, two_band):
        with pytest.raises(InputError):
            allocate_bands(["a", "a"], two_band)

    def test_overlap_warning(self, two_band):
        with pytest.warns(OverlapWarning):
            allocate_bands(["a", "b"], two_band, bands={1e6: (0.9e6, 3.1e6), 5e6: (3e6, 6e6)})

    def test_disjoint_bands_silent(self, two_band):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            allocate_bands(["a", "b"], two_band, bands={1e6: (0.99e6, 1.01e6), 5e6: (4.8e6, 5.2e6)})

    def test_user_links(self, bundled_link):
        lk = bundled_link()
        users = [UserLink("u2", lk, 5e6), UserLink("u1", lk, 1e6)]
        assert allocate_bands(users, lk.tx_network) == {"u1": 1e6, "u2": 5e6}

    def test_user_link_resonance_check(self, bundled_link):
        UserLink("u", bundled_link(), 5e6 + 0.5)
        with pytest.raises(InputError):
            UserLink("u", bundled_link(), 3e6)


class TestSnr:
    @pytest.mark.parametrize("scheme", SCHEME_PAIR)
    def test_single_user(self, scheme):
        assert effective_snr(scheme, 1, 7.5) == 7.5

    def test_two_user_penalty(self):
        s = effective_snr("single_resonant", 2, 10.0)
        assert s == 5.0
        assert 10 * math.log10(10.0 / s) == pytest.approx(3.0103, abs=1e-4)

    def test_four_users(self):
        s = effective_snr("single_resonant", 4, 8.0)
        assert 10 * math.log10(8.0 / s) == pytest.approx(6.0206, abs=1e-4)

    @given(st.integers(1, 64), st.floats(0, 1e6))
    def test_orthogonality(self, n, snr):
        assert effective_snr("multi_frequency", n, snr) == snr

    def test_bad_scheme(self):
        with pytest.raises(InputError):
            effective_snr("tdma", 2, 1.0)


class TestBer:
    def test_zero_snr(self):
        assert ber_bpsk(0.0) == 0.5

    def test_unit_snr(self):
        assert ber_bpsk(1.0) == pytest.approx(stats.norm.sf(math.sqrt(2)), rel=1e-12)
        assert ber_bpsk(1.0) == pytest.approx(0.0786, abs=5e-5)

    def test_monotone(self):
        s = np.geomspace(1e-3, 30, 200)
        assert np.all(np.diff(ber_bpsk(s)) < 0)
        assert ber_bpsk(10.0) < ber_bpsk(1.0)

    def test_negative(self):
        with pytest.raises(InputError):
            ber_bpsk(-1.0)


class TestRequiredSnr:
    def test_boundary(self):
        with pytest.raises(TargetOutOfRange):
            required_snr("multi_frequency", 2, 0.5)
        with pytest.raises(TargetOutOfRange):
            required_snr("multi_frequency", 2, 0.0)

    def test_1e3(self):
        # independent inversion: Q(sqrt(2 s)) = t  =>  s = isf(t)^2 / 2
        s = stats.norm.isf(1e-3) ** 2 / 2
        assert required_snr("multi_frequency", 2, 1e-3) == pytest.approx(10 * math.log10(s), abs=1e-4)
        assert required_snr("multi_frequency", 2, 1e-3) == pytest.approx(6.79, abs=0.01)

    @given(st.floats(1e-9, 0.49), st.integers(1, 16))
    def test_exact_gap(self, target, n):
        gap = required_snr("single_resonant", n, target) - required_snr("multi_frequency", n, target)
        assert gap == pytest.approx(10 * math.log10(n), abs=1e-4)


class TestMonteCarlo:
    def test_noise_off(self):
        est = monte_carlo_ber("single_resonant", 2, math.inf, 1000, 1)
        assert est.ber == 0

    def test_zero_db(self):
        est = monte_carlo_ber("multi_frequency", 1, 0.0, 10**6, 7)
        assert abs(est.ber - ber_bpsk(1.0)) <= 3 * est.ci95
        assert 0 < est.ci95 < 1e-3

    def test_determinism(self):
        a = monte_carlo_ber("single_resonant", 2, 3.0, 200_000, 42)
        b = monte_carlo_ber("single_resonant", 2, 3.0, 200_000, 42)
        c = monte_carlo_ber("single_resonant", 2, 3.0, 200_000, 42, workers=4)
        assert a == b == c

    def test_seed_matters(self):
        a = monte_carlo_ber("multi_frequency", 1, 3.0, 100_000, 1)
        b = monte_carlo_ber("multi_frequency", 1, 3.0, 100_000, 2)
        assert a.ber != b.ber

    def test_too_few_symbols(self):
        with pytest.raises(InputError):
            monte_carlo_ber("multi_frequency", 1, 0.0, 999, 1)

    def test_wilson_against_closed_form(self):
        e, n = 786, 10_000
        p, z = e / n, stats.norm.isf(0.025)
        half = z / (1 + z**2 / n) * math.sqrt(p * (1 - p) / n + z**2 / (4 * n**2))
        assert multiuser.wilson_halfwidth(e, n) == pytest.approx(half, rel=1e-9)

    @pytest.mark.slow
    def test_consistency_over_seeds(self):
        analytic = ber_bpsk(effective_snr("single_resonant", 2, 10 ** 0.4))
        hits = 0
        for seed in range(100):
            est = monte_carlo_ber("single_resonant", 2, 4.0, 10**6, seed)
            hits += abs(est.ber - analytic) <= 3 * est.ci95
        assert hits >= 99

    def test_gap_at_1e3(self):
        snr = np.arange(0, 12.5, 0.5)
        curves = {}
        for scheme in SCHEME_PAIR:
            curves[scheme] = [monte_carlo_ber(scheme, 2, s, 10**6, 5).ber for s in snr]
        gap = snr_at_ber(snr, curves["single_resonant"], 1e-3) - snr_at_ber(
            snr, curves["multi_frequency"], 1e-3)
        assert gap == pytest.approx(3.0, abs=0.5)

    def test_snr_at_ber_unbracketed(self):
        with pytest.raises(TargetOutOfRange):
            snr_at_ber([0, 1, 2], [0.1, 0.05, 0.02], 1e-3)
