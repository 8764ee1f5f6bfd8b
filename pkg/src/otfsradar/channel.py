"""Target generation, the matrix-free delay-Doppler forward operator and
noisy received-signal synthesis.

The modeled delay support is one symbol, 0 <= tau < T. With rectangular
pulses the time-index coupling then involves only the current and previous
symbol, which the fast path exploits exactly (no truncation error); the
frequency-index coupling is kept in full because the detection logic depends
on accurate sidelobes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import matmul_toeplitz

from .beams import BeamformerSet
from .config import SystemConfig, derive
from .otfs import (DelayDopplerFrame, rect_ambiguity, rect_ambiguity_dnu,
                   rect_ambiguity_dtau, sfft)


@dataclass(frozen=True)
class Target:
    """Ground truth for one point scatterer."""

    gain: complex            # h' = h * e^{j 2 pi nu tau}, pathloss included in h
    delay_s: float
    doppler_hz: float
    aoa_rad: float
    range_m: float
    velocity_mps: float


@dataclass
class ReceivedSignal:
    """Reduced-domain received signal: one N x M time-frequency grid per RF
    chain. samples has shape (n_rf, N, M); ravelling it in C order gives the
    documented RF-chain-major vector layout."""

    samples: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.complex128)
        if s.ndim != 3:
            raise ValueError(f"expected (n_rf, N, M) samples, got shape {s.shape}")
        self.samples = s

    @property
    def vector(self) -> np.ndarray:
        return self.samples.ravel()

    def norm(self) -> float:
        return float(np.linalg.norm(self.samples))


def make_target(range_m: float, velocity_mps: float, aoa_rad: float,
                config: SystemConfig, rng: np.random.Generator) -> Target:
    """Draw a target with pathloss-consistent gain magnitude and uniform
    random phase: |h|^2 = lambda^2 rcs / ((4 pi)^3 r^4)."""
    d = derive(config)
    if not 0 < range_m < d.range_max_m:
        raise ValueError(
            f"range {range_m} m outside the modeled window (0, {d.range_max_m}) m")
    if abs(aoa_rad) > np.pi / 2:
        raise ValueError(f"AoA {aoa_rad} outside [-pi/2, pi/2]")
    c = config.speed_of_light_mps
    tau = 2.0 * range_m / c
    nu = 2.0 * velocity_mps * config.carrier_hz / c
    if abs(nu) >= d.subcarrier_hz / 2:
        raise ValueError(
            f"velocity {velocity_mps} m/s aliases: |doppler| must stay below "
            f"{d.subcarrier_hz / 2:.3g} Hz")
    mag = np.sqrt(d.wavelength_m ** 2 * config.rcs_m2
                  / ((4.0 * np.pi) ** 3 * range_m ** 4))
    h = mag * np.exp(2j * np.pi * rng.uniform())
    return Target(
        gain=complex(h * np.exp(2j * np.pi * nu * tau)),
        delay_s=tau,
        doppler_hz=nu,
        aoa_rad=float(aoa_rad),
        range_m=float(range_m),
        velocity_mps=float(velocity_mps),
    )


def _toeplitz_pair(values_pos: np.ndarray, values_neg: np.ndarray):
    """(first column, first row) for a Toeplitz kernel given values at
    d = 0..M-1 (column) and d = 0, -1, .., -(M-1) (row)."""
    return values_pos, values_neg


def tf_target_image(x_tf: np.ndarray, tau: float, nu: float,
                    config: SystemConfig) -> np.ndarray:
    """Unit-gain time-frequency echo of a target at (tau, nu) for the
    transmitted grid x_tf of shape (..., N, M).

    Y[n,m] = sum_{d in {0,1}} sum_{m'} C(dT - tau, (m-m')df - nu)
             * e^{j2pi(n-d)T nu} * X[n-d, m'] * e^{-j2pi m df tau}
    """
    y, _, _ = _tf_image_core(x_tf, tau, nu, config, derivs=False)
    return y


def tf_target_image_with_derivs(x_tf: np.ndarray, tau: float, nu: float,
                                config: SystemConfig):
    """Echo image together with its partial derivatives w.r.t. tau and nu."""
    return _tf_image_core(x_tf, tau, nu, config, derivs=True)


def _tf_image_core(x_tf, tau, nu, config, derivs):
    d = derive(config)
    T, df = d.symbol_time_s, d.subcarrier_hz
    if not 0 <= tau < T:
        raise ValueError(f"delay {tau} outside the modeled support [0, {T})")
    x_tf = np.asarray(x_tf, dtype=np.complex128)
    squeeze = x_tf.ndim == 2
    if squeeze:
        x_tf = x_tf[None]
    ns, n, m = x_tf.shape
    dgrid = np.arange(-(m - 1), m)          # kernel lags m - m'
    nu_args = dgrid * df - nu
    mod_m = np.exp(-2j * np.pi * np.arange(m) * df * tau)
    out = np.zeros_like(x_tf)
    dtau_out = np.zeros_like(x_tf) if derivs else None
    dnu_out = np.zeros_like(x_tf) if derivs else None

    flat = x_tf.reshape(ns * n, m)
    for delta in (0, 1):
        kern = rect_ambiguity(delta * T - tau, nu_args, T)
        col, row = kern[m - 1:], kern[m - 1::-1]
        conv = matmul_toeplitz((col, row), flat.T).T.reshape(ns, n, m)
        tphase = np.exp(2j * np.pi * (np.arange(n) - delta) * T * nu)
        if delta == 0:
            contrib = conv * tphase[:, None]
        else:
            contrib = np.zeros_like(out)
            contrib[:, 1:] = conv[:, :-1] * tphase[1:, None]
        out += contrib
        if derivs:
            # d/dtau hits the kernel's first slot with a sign flip
            kt = -rect_ambiguity_dtau(delta * T - tau, nu_args, T)
            convt = matmul_toeplitz((kt[m - 1:], kt[m - 1::-1]), flat.T).T.reshape(ns, n, m)
            if delta == 0:
                dtau_out += convt * tphase[:, None]
            else:
                dtau_out[:, 1:] += convt[:, :-1] * tphase[1:, None]
            # d/dnu hits the kernel's second slot (sign flip) and the time phase
            kn = -rect_ambiguity_dnu(delta * T - tau, nu_args, T)
            convn = matmul_toeplitz((kn[m - 1:], kn[m - 1::-1]), flat.T).T.reshape(ns, n, m)
            tfac = 2j * np.pi * (np.arange(n) - delta) * T
            if delta == 0:
                dnu_out += convn * tphase[:, None] + conv * (tfac * tphase)[:, None]
            else:
                dnu_out[:, 1:] += convn[:, :-1] * tphase[1:, None] \
                    + conv[:, :-1] * (tfac[1:] * tphase[1:])[:, None]

    out *= mod_m
    if not derivs:
        return (out[0] if squeeze else out), None, None
    dtau_out = dtau_out * mod_m + out * (-2j * np.pi * np.arange(m) * df)
    dnu_out *= mod_m
    if squeeze:
        out, dtau_out, dnu_out = out[0], dtau_out[0], dnu_out[0]
    return out, dtau_out, dnu_out


def apply_target(tau: float, nu: float, phi: float, beams: BeamformerSet,
                 frame, config: SystemConfig,
                 column: int | None = None) -> np.ndarray:
    """Noiseless unit-gain received component of one target: the spatial
    chain/stream mixing applied to the per-stream echo images. Returns an
    (n_rf, N, M) array.

    frame may be a DelayDopplerFrame or its precomputed time-frequency image
    of shape (n_streams, N, M). With column=p only beam/stream p is used.
    """
    x_tf = frame.time_frequency() if isinstance(frame, DelayDopplerFrame) \
        else np.asarray(frame, dtype=np.complex128)
    spatial = beams.spatial_factor(phi, column)
    if column is not None:
        y = tf_target_image(x_tf[column], tau, nu, config)
        return spatial[:, None, None] * y
    imgs = tf_target_image(x_tf, tau, nu, config)
    return np.einsum("is,snm->inm", spatial, imgs)


def synthesize(targets, beams: BeamformerSet, frame, config: SystemConfig,
               noise_var: float, rng: np.random.Generator) -> ReceivedSignal:
    """Sum of target echoes plus circularly-symmetric white Gaussian noise of
    the given per-sample variance, in the reduced n_rf-chain domain."""
    x_tf = frame.time_frequency() if isinstance(frame, DelayDopplerFrame) \
        else np.asarray(frame, dtype=np.complex128)
    n_rf = beams.n_rf
    _, n, m = x_tf.shape
    out = np.zeros((n_rf, n, m), dtype=np.complex128)
    for t in targets:
        out += t.gain * apply_target(t.delay_s, t.doppler_hz, t.aoa_rad,
                                     beams, x_tf, config)
    if noise_var > 0:
        s = np.sqrt(noise_var / 2.0)
        out += s * (rng.standard_normal(out.shape)
                    + 1j * rng.standard_normal(out.shape))
    return ReceivedSignal(out)


def delay_doppler_receive(y: ReceivedSignal) -> np.ndarray:
    """Per-chain SFFT of the received grids: shape (n_rf, N, M) in the
    Doppler-delay domain."""
    return sfft(y.samples)
