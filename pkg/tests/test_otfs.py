import numpy as np
import pytest

from otfsradar.config import SystemConfig, derive
from otfsradar.otfs import (QPSK, DelayDopplerFrame, Pulse, cross_ambiguity,
                            isfft, random_frame, rect_ambiguity,
                            rect_ambiguity_dnu, rect_ambiguity_dtau, sfft)

DESK = SystemConfig.desk()


def test_isfft_of_impulse_is_flat():
    x = np.zeros((4, 8), dtype=complex)
    x[0, 0] = 1.0
    np.testing.assert_allclose(isfft(x), np.ones((4, 8)), atol=1e-12)


def test_isfft_of_zero_is_zero():
    np.testing.assert_allclose(isfft(np.zeros((4, 8))), 0.0, atol=0)


def test_sfft_of_flat_is_impulse():
    X = np.ones((4, 8), dtype=complex)
    x = sfft(X)
    expect = np.zeros((4, 8), dtype=complex)
    expect[0, 0] = 1.0
    np.testing.assert_allclose(x, expect, atol=1e-12)


def test_transform_pair_roundtrip():
    rng = np.random.default_rng(7)
    for _ in range(100):
        x = rng.standard_normal((4, 64)) + 1j * rng.standard_normal((4, 64))
        err = np.max(np.abs(sfft(isfft(x)) - x))
        assert err < 1e-12 * np.max(np.abs(x))
        err2 = np.max(np.abs(isfft(sfft(x)) - x))
        assert err2 < 1e-12 * np.max(np.abs(x))


def test_sfft_linearity():
    rng = np.random.default_rng(3)
    X = rng.standard_normal((4, 8)) + 1j * rng.standard_normal((4, 8))
    Y = rng.standard_normal((4, 8)) + 1j * rng.standard_normal((4, 8))
    a, b = 1.3 - 0.2j, -0.7 + 2.1j
    np.testing.assert_allclose(sfft(a * X + b * Y), a * sfft(X) + b * sfft(Y),
                               atol=1e-12)


def test_parseval_with_this_normalization():
    rng = np.random.default_rng(11)
    x = rng.standard_normal((6, 16)) + 1j * rng.standard_normal((6, 16))
    X = isfft(x)
    n, m = x.shape
    assert np.sum(np.abs(x) ** 2) == pytest.approx(
        np.sum(np.abs(X) ** 2) / (n * m), rel=1e-12)


# --- cross ambiguity ------------------------------------------------------

T = 2.5e-6
PULSE = Pulse("rect", T)


def _quad_ambiguity(tau, nu, n_points=10_000):
    """Independent oracle: trapezoid quadrature of the defining integral for
    identical unit-energy rectangular pulses."""
    a, b = max(0.0, tau), T + min(0.0, tau)
    if b <= a:
        return 0.0 + 0.0j
    s = np.linspace(a, b, n_points)
    f = (1.0 / T) * np.exp(-2j * np.pi * nu * s)
    return np.trapezoid(f, s)


def test_ambiguity_peak_is_unity():
    assert cross_ambiguity(PULSE, PULSE, 0.0, 0.0) == pytest.approx(1.0)


def test_ambiguity_half_symbol_overlap():
    assert cross_ambiguity(PULSE, PULSE, T / 2, 0.0) == pytest.approx(0.5)


def test_ambiguity_null_at_inverse_duration():
    assert abs(cross_ambiguity(PULSE, PULSE, 0.0, 1.0 / T)) < 1e-12


def test_ambiguity_zero_outside_support():
    assert cross_ambiguity(PULSE, PULSE, T, 123.0) == 0
    assert cross_ambiguity(PULSE, PULSE, -1.5 * T, 0.0) == 0


def test_ambiguity_bounded_by_one():
    rng = np.random.default_rng(5)
    tau = rng.uniform(-1.5 * T, 1.5 * T, 400)
    nu = rng.uniform(-4 / T, 4 / T, 400)
    vals = np.abs(rect_ambiguity(tau, nu, T))
    assert np.all(vals <= 1.0 + 1e-12)
    assert np.max(vals) < 1.0  # strict away from the origin


def test_ambiguity_continuous_at_zero_doppler():
    # the nu -> 0 division is removable: for tiny nu the value must match the
    # limit magnitude (T-|tau|)/T times the linear phase factor to 1e-9
    tau = 0.3 * T
    lim_mag = (T - tau) / T
    for nu in (1e-7 / T, -1e-7 / T, 1e-9 / T, 0.99e-6 / T):
        got = rect_ambiguity(tau, nu, T)
        ref = lim_mag * np.exp(-1j * np.pi * nu * (T + tau))
        assert abs(got - ref) < 1e-9
        assert abs(abs(got) - lim_mag) < 1e-9


def test_ambiguity_matches_quadrature():
    # 21 x 21 grid, offsets chosen to avoid exact pattern nulls
    taus = np.linspace(-0.93, 0.93, 21) * T
    nus = np.linspace(-2.63, 2.63, 21) / T
    worst = 0.0
    for tau in taus:
        for nu in nus:
            closed = rect_ambiguity(tau, nu, T)
            quad = _quad_ambiguity(tau, nu, 40_000)
            err = abs(closed - quad) / max(abs(quad), 1e-2)
            worst = max(worst, err)
    assert worst < 1e-6


def test_ambiguity_tau_derivative_matches_differences():
    rng = np.random.default_rng(9)
    for _ in range(50):
        tau = rng.uniform(-0.9 * T, 0.9 * T)
        if abs(tau) < 0.02 * T:
            continue  # derivative has a kink at tau = 0
        nu = rng.uniform(-3 / T, 3 / T)
        h = 1e-7 * T
        fd = (rect_ambiguity(tau + h, nu, T) - rect_ambiguity(tau - h, nu, T)) / (2 * h)
        an = rect_ambiguity_dtau(tau, nu, T)
        assert abs(an - fd) < 1e-5 * max(abs(an), 1 / T)


def test_ambiguity_nu_derivative_matches_differences():
    rng = np.random.default_rng(13)
    for _ in range(50):
        tau = rng.uniform(-0.9 * T, 0.9 * T)
        nu = rng.uniform(-3 / T, 3 / T)
        h = 1e-7 / T
        fd = (rect_ambiguity(tau, nu + h, T) - rect_ambiguity(tau, nu - h, T)) / (2 * h)
        an = rect_ambiguity_dnu(tau, nu, T)
        assert abs(an - fd) < 1e-5 * max(abs(an), T)


def test_ambiguity_nu_derivative_series_branch():
    # series branch near nu=0 must agree with the exact branch at the switch
    tau = 0.37 * T
    for nu in (0.9e-4 / (2 * np.pi * T), 1.1e-4 / (2 * np.pi * T)):
        fd = (rect_ambiguity(tau, nu + 1e-9 / T, T)
              - rect_ambiguity(tau, nu - 1e-9 / T, T)) / (2e-9 / T)
        assert abs(rect_ambiguity_dnu(tau, nu, T) - fd) < 1e-6 * T


def test_pulse_validation():
    with pytest.raises(NotImplementedError):
        Pulse("gaussian", 1.0)
    with pytest.raises(ValueError):
        Pulse("rect", 0.0)
    with pytest.raises(NotImplementedError):
        cross_ambiguity(Pulse("rect", 1.0), Pulse("rect", 2.0), 0, 0)


# --- random frames --------------------------------------------------------

def test_random_frame_deterministic():
    a = random_frame(DESK, rng_seed=42).symbols
    b = random_frame(DESK, rng_seed=42).symbols
    np.testing.assert_array_equal(a, b)
    c = random_frame(DESK, rng_seed=43).symbols
    assert np.any(a != c)


def test_random_frame_power_constraint():
    f = random_frame(DESK, rng_seed=0)
    n, m = f.shape
    per_cell = np.sum(np.abs(f.symbols) ** 2, axis=0)  # summed over streams
    np.testing.assert_allclose(per_cell, DESK.avg_power_w / (n * m), rtol=1e-12)


def test_random_frame_trivial_constellation():
    f = random_frame(DESK, constellation=[1.0], rng_seed=1)
    mags = np.abs(f.symbols)
    assert np.ptp(mags) < 1e-15


def test_frame_shape_checks():
    with pytest.raises(ValueError):
        DelayDopplerFrame(np.zeros(5))
