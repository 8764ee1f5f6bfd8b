"""System parameters, derived physical quantities and config-file ingestion.

All quantities are SI unless the field name says otherwise. The default
constructor corresponds to the full-scale 24.25 GHz / 150 MHz setup; the
``desk()`` preset is a small grid intended for fast tests and CI runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from pathlib import Path


class ConfigError(Exception):
    """Base class for configuration problems."""


class ConfigFileError(ConfigError):
    """Config file missing or unreadable."""


class ConfigParseError(ConfigError):
    """Config file present but malformed (bad syntax, unknown or bad-typed key)."""


class ConfigInvariantError(ConfigError):
    """Parsed values violate a physical or structural invariant."""


_INT_FIELDS = {"n_doppler", "n_delay", "n_antennas", "n_rf", "n_streams"}


@dataclass(frozen=True)
class SystemConfig:
    """Radar/communication system parameters.

    Immutable after construction; safe to share between worker processes.
    """

    n_doppler: int = 6              # Doppler bins / time symbols per frame
    n_delay: int = 512              # delay bins / subcarriers per frame
    carrier_hz: float = 24.25e9
    bandwidth_hz: float = 150e6
    avg_power_w: float = 40e-3
    rcs_m2: float = 1.0
    noise_psd_w_per_hz: float = 2e-21
    noise_figure_db: float = 3.0
    n_antennas: int = 128
    n_rf: int = 8
    n_streams: int = 1
    speed_of_light_mps: float = 3e8

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name in _INT_FIELDS:
                if not isinstance(v, int) or isinstance(v, bool):
                    raise ConfigInvariantError(f"{f.name} must be an integer, got {v!r}")
            if f.name == "noise_figure_db":
                continue  # 0 dB is a valid noise figure
            if v <= 0:
                raise ConfigInvariantError(f"{f.name} must be strictly positive, got {v!r}")
        if self.noise_figure_db < 0:
            raise ConfigInvariantError("noise_figure_db must be >= 0")
        if self.n_rf > self.n_antennas:
            raise ConfigInvariantError(
                f"n_rf={self.n_rf} exceeds n_antennas={self.n_antennas}")
        if self.n_streams > self.n_rf:
            raise ConfigInvariantError(
                f"n_streams={self.n_streams} exceeds n_rf={self.n_rf}")

    @classmethod
    def desk(cls, **overrides) -> "SystemConfig":
        """Small bench-scale preset for fast tests.

        Grid and array are shrunk and the transmit power is reduced so that
        the single-target detection limit falls inside the unambiguous range
        window (about 30 m out of 64 m), giving the same qualitative
        detection/estimation regimes as the full-scale setup at a tiny
        fraction of the cost.
        """
        base = dict(
            n_doppler=4,
            n_delay=64,
            n_antennas=16,
            n_rf=4,
            n_streams=1,
            avg_power_w=4e-5,
        )
        base.update(overrides)
        return cls(**base)


@dataclass(frozen=True)
class DerivedQuantities:
    wavelength_m: float
    symbol_time_s: float
    subcarrier_hz: float
    noise_var_w: float
    range_res_m: float
    vel_res_mps: float
    range_max_m: float
    vel_max_mps: float


def derive(config: SystemConfig) -> DerivedQuantities:
    """Compute all derived physical quantities for a configuration.

    Pure and deterministic. Subcarrier spacing is bandwidth/n_delay and the
    symbol time is its reciprocal (unit time-bandwidth product).
    """
    if config.bandwidth_hz <= 0 or config.carrier_hz <= 0:
        raise ConfigInvariantError("bandwidth and carrier must be positive")
    c = config.speed_of_light_mps
    subcarrier = config.bandwidth_hz / config.n_delay
    symbol_time = 1.0 / subcarrier
    range_res = c / (2.0 * config.bandwidth_hz)
    vel_res = (config.bandwidth_hz * c
               / (2.0 * config.n_doppler * config.n_delay * config.carrier_hz))
    noise_var = (config.noise_psd_w_per_hz
                 * 10.0 ** (config.noise_figure_db / 10.0)
                 * config.bandwidth_hz)
    return DerivedQuantities(
        wavelength_m=c / config.carrier_hz,
        symbol_time_s=symbol_time,
        subcarrier_hz=subcarrier,
        noise_var_w=noise_var,
        range_res_m=range_res,
        vel_res_mps=vel_res,
        range_max_m=config.n_delay * range_res,
        vel_max_mps=config.n_doppler * vel_res,
    )


def two_way_pathloss(r_m: float, wavelength_m: float) -> float:
    """Round-trip free-space pathloss (4*pi)^3 r^4 / lambda^2, linear ratio."""
    if r_m <= 0:
        raise ValueError(f"range must be positive, got {r_m}")
    return (4.0 * math.pi) ** 3 * r_m ** 4 / wavelength_m ** 2


def radar_snr(r_m: float, g_tx: float, g_rx: float, config: SystemConfig) -> float:
    """Single-target radar SNR at range r, linear ratio.

    lambda^2 * rcs * Gtx * Grx / ((4 pi)^3 r^4) * Pavg / noise_var.
    """
    if r_m <= 0:
        raise ValueError(f"range must be positive, got {r_m}")
    if g_tx < 0 or g_rx < 0:
        raise ValueError("antenna gains must be non-negative")
    d = derive(config)
    lam = d.wavelength_m
    return (lam ** 2 * config.rcs_m2 * g_tx * g_rx
            / ((4.0 * math.pi) ** 3 * r_m ** 4)
            * config.avg_power_w / d.noise_var_w)


def load_config(path: str | Path) -> SystemConfig:
    """Load a SystemConfig from a flat key=value text file.

    Keys are the SystemConfig field names; absent keys keep their defaults.
    Blank lines and '#' comments are ignored. Unknown keys are an error so
    that typos fail fast.
    """
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError as e:
        raise ConfigFileError(f"config file not found: {path}") from e
    except OSError as e:
        raise ConfigFileError(f"cannot read config file {path}: {e}") from e

    known = {f.name for f in fields(SystemConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        val = val.strip()
        if key not in known:
            raise ConfigParseError(f"{path}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigParseError(f"{path}:{lineno}: duplicate key {key!r}")
        try:
            if key in _INT_FIELDS:
                values[key] = int(val)
            else:
                values[key] = float(val)
        except ValueError as e:
            raise ConfigParseError(f"{path}:{lineno}: bad value for {key}: {val!r}") from e

    return SystemConfig(**values)
