"""Uniform linear array steering and hybrid beamforming matrices.

Half-wavelength element spacing throughout. A "sector" of width S radians is
the interval [-S/2, S/2]; during detection the n_rf transmit beams are
steered at the midpoints of n_rf equal subsectors of the inner half
[-S/4, S/4] (the illuminated region), mirroring the reference construction.
The receive reduction matrix is the Hermitian transpose of the
detection-phase transmit matrix in both operating phases.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .config import SystemConfig

DETECTION = "detection"
TRACKING = "tracking"


def steering(phi: float, n_antennas: int) -> np.ndarray:
    """ULA response a_n(phi) = e^{j(n-1) pi sin(phi)}, n = 1..n_antennas."""
    if not -np.pi / 2 <= phi <= np.pi / 2:
        raise ValueError(f"steering angle {phi} outside [-pi/2, pi/2]")
    n = np.arange(n_antennas)
    return np.exp(1j * np.pi * np.sin(phi) * n)


def steering_dphi(phi: float, n_antennas: int) -> np.ndarray:
    """d/dphi of steering: j(n-1) pi cos(phi) times the entry."""
    n = np.arange(n_antennas)
    return 1j * np.pi * np.cos(phi) * n * steering(phi, n_antennas)


def three_db_beamwidth(n_antennas: int) -> float:
    """Approximate 3-dB beamwidth of an n-element half-wavelength ULA, rad.

    0.886 * lambda / (N d) with d = lambda/2, i.e. 1.772/N. Used only to
    bound angle search windows; not a pattern model.
    """
    if n_antennas < 2:
        raise ValueError("need at least 2 antennas")
    return 1.772 / n_antennas


@dataclass(frozen=True)
class BeamformerSet:
    """Transmit matrix F (n_antennas x n_rf), receive reduction U
    (n_rf x n_antennas) and stream mapping V (n_rf x n_streams) for one
    operating phase. trace(F V V^H F^H) equals n_antennas."""

    f_matrix: np.ndarray
    u_matrix: np.ndarray
    v_matrix: np.ndarray
    phase: str
    beam_centers_rad: np.ndarray
    sector_width_rad: float

    def __post_init__(self):
        for a in (self.f_matrix, self.u_matrix, self.v_matrix, self.beam_centers_rad):
            a.setflags(write=False)

    @property
    def n_antennas(self) -> int:
        return self.f_matrix.shape[0]

    @property
    def n_rf(self) -> int:
        return self.f_matrix.shape[1]

    @property
    def n_streams(self) -> int:
        return self.v_matrix.shape[1]

    @property
    def fv(self) -> np.ndarray:
        return self.f_matrix @ self.v_matrix

    def spatial_factor(self, phi: float, column: int | None = None) -> np.ndarray:
        """U b(phi) a^H(phi) F V, the n_rf x n_streams chain/stream mixing
        toward angle phi.

        With column=p the transmit side keeps only beam column p and stream
        p (the reduced per-target model used in the tracking phase); the
        result is then an n_rf vector.
        """
        a = steering(phi, self.n_antennas)
        ub = self.u_matrix @ a          # b(phi) = a(phi) for a mono-static array
        if column is None:
            return np.outer(ub, np.conj(a) @ self.fv)
        w = (np.conj(a) @ self.f_matrix[:, column]) * self.v_matrix[column].sum()
        return ub * w


def _detection_fv(sector_width_rad: float, n_antennas: int, n_rf: int):
    half = sector_width_rad / 2.0
    k = np.arange(n_rf // 2)
    pos = half / (2 * n_rf) + k * half / n_rf
    centers = np.sort(np.concatenate([-pos, pos]))
    f0 = np.stack([steering(c, n_antennas) / np.sqrt(n_antennas) for c in centers],
                  axis=1)
    v0 = np.ones((n_rf, 1), dtype=np.complex128) / np.sqrt(n_rf)
    scale = np.sqrt(n_antennas / np.linalg.norm(f0 @ v0) ** 2)
    return f0 * scale, v0, centers


def detection_beamformers(sector_width_rad: float, config: SystemConfig) -> BeamformerSet:
    """Wide-sector beams for the search phase: one normalized steering
    column per RF chain at the subsector midpoints, a single stream mapped
    equally to all chains, and one global scale on F enforcing the total
    power constraint. U = F^H."""
    if sector_width_rad <= 0 or sector_width_rad > np.pi:
        raise ValueError("sector width must lie in (0, pi]")
    if config.n_rf % 2 != 0:
        raise ValueError(
            "detection beams need an even number of RF chains: the beam "
            f"angle set is symmetric about broadside (n_rf={config.n_rf})")
    f, v, centers = _detection_fv(sector_width_rad, config.n_antennas, config.n_rf)
    return BeamformerSet(
        f_matrix=f,
        u_matrix=f.conj().T,
        v_matrix=v,
        phase=DETECTION,
        beam_centers_rad=centers,
        sector_width_rad=sector_width_rad,
    )


def tracking_beamformers(aoa_estimates, config: SystemConfig,
                         sector_width_rad: float) -> BeamformerSet:
    """Narrow beams at the estimated AoAs: column p of F steers to target p
    and stream p rides chain p; unused columns are zero. U stays the
    detection-phase F^H for the same sector."""
    angles = np.atleast_1d(np.asarray(aoa_estimates, dtype=float))
    p = angles.size
    if p < 1:
        raise ValueError("need at least one AoA estimate")
    if p > config.n_rf:
        raise ValueError(f"{p} targets exceed n_rf={config.n_rf} beams")
    if np.any(np.abs(angles) > np.pi / 2):
        raise ValueError("AoA estimates must lie in [-pi/2, pi/2]")
    na, nrf = config.n_antennas, config.n_rf
    f = np.zeros((na, nrf), dtype=np.complex128)
    scale = np.sqrt(na / p)
    for i, ang in enumerate(angles):
        f[:, i] = steering(ang, na) / np.sqrt(na) * scale
    v = np.zeros((nrf, p), dtype=np.complex128)
    v[:p, :p] = np.eye(p)
    f_det, _, _ = _detection_fv(sector_width_rad, na, nrf)
    return BeamformerSet(
        f_matrix=f,
        u_matrix=f_det.conj().T,
        v_matrix=v,
        phase=TRACKING,
        beam_centers_rad=angles.copy(),
        sector_width_rad=sector_width_rad,
    )


def tx_beam_gain(beams: BeamformerSet, phi: float) -> float:
    """Transmit array gain toward phi per unit radiated power:
    ||a^H(phi) F V||^2 / trace(F V V^H F^H). Peaks at n_antennas for a
    single active beam steered at phi."""
    a = steering(phi, beams.n_antennas)
    row = np.conj(a) @ beams.fv
    total = np.linalg.norm(beams.fv) ** 2
    return float(np.linalg.norm(row) ** 2 / total)
