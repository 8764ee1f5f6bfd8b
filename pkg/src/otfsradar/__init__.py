"""Monostatic MIMO radar simulation with OTFS signalling: forward model,
hybrid beamforming, ML+SIC detection, CRLB benchmarks and Monte Carlo
scenario drivers."""

from .config import (ConfigError, ConfigFileError, ConfigInvariantError,
                     ConfigParseError, DerivedQuantities, SystemConfig,
                     derive, load_config, radar_snr, two_way_pathloss)
from .otfs import (QPSK, DelayDopplerFrame, Pulse, cross_ambiguity, isfft,
                   random_frame, sfft)
from .beams import (BeamformerSet, detection_beamformers, steering,
                    three_db_beamwidth, tracking_beamformers, tx_beam_gain)
from .channel import (ReceivedSignal, Target, apply_target,
                      delay_doppler_receive, make_target, synthesize)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConfigFileError", "ConfigInvariantError",
    "ConfigParseError", "DerivedQuantities", "SystemConfig", "derive",
    "load_config", "radar_snr", "two_way_pathloss",
    "QPSK", "DelayDopplerFrame", "Pulse", "cross_ambiguity", "isfft",
    "random_frame", "sfft",
    "BeamformerSet", "detection_beamformers", "steering",
    "three_db_beamwidth", "tracking_beamformers", "tx_beam_gain",
    "ReceivedSignal", "Target", "apply_target", "delay_doppler_receive",
    "make_target", "synthesize",
    "__version__",
]
