"""OTFS symbol grids, the ISFFT/SFFT transform pair and the pulse
cross-ambiguity function.

Grid convention: frames are (n_streams, N, M) complex arrays where axis 1 is
the Doppler/time index (k or n) and axis 2 the delay/subcarrier index (l or
m). The ISFFT is unnormalized and the SFFT carries the 1/(N*M) factor, so
sfft(isfft(x)) == x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import SystemConfig, derive

QPSK = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2.0)


@dataclass(frozen=True)
class Pulse:
    """Transmit/receive shaping pulse. Only the unit-energy rectangular
    pulse on [0, T) is implemented; the kind field leaves room for more."""

    kind: str = "rect"
    duration_s: float = 1.0

    def __post_init__(self):
        if self.kind != "rect":
            raise NotImplementedError(f"unsupported pulse kind {self.kind!r}")
        if self.duration_s <= 0:
            raise ValueError("pulse duration must be positive")


@dataclass
class DelayDopplerFrame:
    """Data symbols on the N x M Doppler-delay grid, one layer per stream.

    symbols has shape (n_streams, N, M). The per-cell symbol power summed
    over streams equals avg_power / (N*M).
    """

    symbols: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.symbols, dtype=np.complex128)
        if s.ndim == 2:
            s = s[None, :, :]
        if s.ndim != 3:
            raise ValueError(f"expected (streams, N, M) grid, got shape {s.shape}")
        self.symbols = s

    @property
    def n_streams(self) -> int:
        return self.symbols.shape[0]

    @property
    def shape(self):
        return self.symbols.shape[1:]

    def time_frequency(self) -> np.ndarray:
        """ISFFT image of every stream, shape (n_streams, N, M)."""
        return isfft(self.symbols)


def isfft(dd: np.ndarray) -> np.ndarray:
    """Doppler-delay -> time-frequency: X[n,m] = sum_kl x[k,l] e^{j2pi(nk/N - ml/M)}.

    Accepts (..., N, M); transforms the last two axes.
    """
    dd = np.asarray(dd, dtype=np.complex128)
    if dd.ndim < 2:
        raise ValueError("grid must have at least 2 dimensions")
    n = dd.shape[-2]
    return np.fft.fft(np.fft.ifft(dd, axis=-2), axis=-1) * n


def sfft(tf: np.ndarray) -> np.ndarray:
    """Time-frequency -> Doppler-delay, exact inverse of isfft (carries 1/(N*M))."""
    tf = np.asarray(tf, dtype=np.complex128)
    if tf.ndim < 2:
        raise ValueError("grid must have at least 2 dimensions")
    n = tf.shape[-2]
    return np.fft.fft(np.fft.ifft(tf, axis=-1), axis=-2) / n


def cross_ambiguity(pulse_rx: Pulse, pulse_tx: Pulse, tau, nu):
    """Cross-ambiguity C(tau, nu) = int u(s) v*(s - tau) e^{-j2pi nu s} ds of
    two identical unit-energy rectangular pulses of duration T.

    Closed form: for |tau| < T,
        C = e^{-j pi nu (T + tau)} * (T - |tau|)/T * sinc(nu (T - |tau|)),
    zero otherwise. Broadcasts over array tau/nu.
    """
    if pulse_rx.kind != "rect" or pulse_tx.kind != "rect":
        raise NotImplementedError("only rectangular pulses are supported")
    if pulse_rx.duration_s != pulse_tx.duration_s:
        raise NotImplementedError("pulses must share the same duration")
    return rect_ambiguity(tau, nu, pulse_tx.duration_s)


def rect_ambiguity(tau, nu, T: float):
    """Closed-form ambiguity of the unit-energy rectangular pulse, vectorized."""
    tau = np.asarray(tau, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    tau, nu = np.broadcast_arrays(tau, nu)
    overlap = T - np.abs(tau)
    inside = overlap > 0
    ov = np.where(inside, overlap, 0.0)
    # (T-|tau|)/T * sinc(nu*(T-|tau|)) with numpy's normalized sinc
    mag = ov / T * np.sinc(nu * ov)
    phase = np.exp(-1j * np.pi * nu * (T + tau))
    out = np.where(inside, mag * phase, 0.0 + 0.0j)
    return out if out.ndim else complex(out)


def rect_ambiguity_dtau(tau, nu, T: float):
    """d/dtau of rect_ambiguity. Piecewise smooth; not defined at tau = 0 or
    |tau| = T where the one-sided (tau<0 resp. interior) limit is returned."""
    tau = np.asarray(tau, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    tau, nu = np.broadcast_arrays(tau, nu)
    inside = np.abs(tau) < T
    # overlap window [a, b]: a = max(0, tau), b = T + min(0, tau)
    a = np.maximum(0.0, tau)
    b = T + np.minimum(0.0, tau)
    pos = tau > 0
    d = np.where(pos,
                 -np.exp(-2j * np.pi * nu * a) / T,
                 np.exp(-2j * np.pi * nu * b) / T)
    out = np.where(inside, d, 0.0 + 0.0j)
    return out if out.ndim else complex(out)


def rect_ambiguity_dnu(tau, nu, T: float):
    """d/dnu of rect_ambiguity: -(j2pi/T) * int_a^b s e^{-j2pi nu s} ds.

    Uses the analytic antiderivative away from nu=0 and a series expansion
    near the removable singularity to avoid catastrophic cancellation.
    """
    tau = np.asarray(tau, dtype=np.float64)
    nu = np.asarray(nu, dtype=np.float64)
    tau, nu = np.broadcast_arrays(tau, nu)
    inside = np.abs(tau) < T
    a = np.maximum(0.0, tau)
    b = T + np.minimum(0.0, tau)
    w = 2.0 * np.pi * nu
    scale = np.maximum(np.abs(a), np.abs(b))
    small = np.abs(w) * scale < 1e-4

    # series: int_a^b s e^{-jws} ds = sum_q (-jw)^q (b^{q+2}-a^{q+2})/(q! (q+2))
    def series(a_, b_, w_):
        acc = np.zeros(np.broadcast(a_, w_).shape, dtype=np.complex128)
        term = np.ones_like(acc)
        fact = 1.0
        for q in range(6):
            if q > 0:
                term = term * (-1j * w_)
                fact *= q
            acc = acc + term * (b_ ** (q + 2) - a_ ** (q + 2)) / (fact * (q + 2))
        return acc

    w_safe = np.where(small, 1.0, w)
    eb = np.exp(-1j * w_safe * b)
    ea = np.exp(-1j * w_safe * a)
    exact = (b * eb - a * ea) / (-1j * w_safe) - (eb - ea) / (-w_safe ** 2)
    integral = np.where(small, series(a, b, w), exact)
    out = np.where(inside, -2j * np.pi / T * integral, 0.0 + 0.0j)
    return out if out.ndim else complex(out)


def random_frame(config: SystemConfig, constellation=None, rng_seed=0) -> DelayDopplerFrame:
    """I.i.d. uniform symbols from a constellation, scaled so the per-cell
    power summed over streams is avg_power/(N*M). Deterministic given seed."""
    if constellation is None:
        constellation = QPSK
    constellation = np.asarray(constellation, dtype=np.complex128)
    if constellation.size == 0:
        raise ValueError("constellation must be non-empty")
    rng = rng_seed if isinstance(rng_seed, np.random.Generator) \
        else np.random.default_rng(rng_seed)
    n, m, ns = config.n_doppler, config.n_delay, config.n_streams
    idx = rng.integers(0, constellation.size, size=(ns, n, m))
    rms = np.sqrt(np.mean(np.abs(constellation) ** 2))
    amp = np.sqrt(config.avg_power_w / (n * m * ns)) / rms
    return DelayDopplerFrame(constellation[idx] * amp)


def frame_pulse(config: SystemConfig) -> Pulse:
    """The rectangular symbol pulse matching the configured symbol time."""
    return Pulse("rect", derive(config).symbol_time_s)
