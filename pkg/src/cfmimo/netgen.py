"""AP/UE placement, large-scale fading and imperfect-CSI channel draws."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from cfmimo.config import NetworkConfig

# spawn-key stream tags, so each realization owns independent generators
STREAM_LARGE_SCALE = 0
STREAM_SMALL_SCALE = 1
STREAM_SYMBOLS = 2


def realization_rng(seed: int, index: int, stream: int) -> np.random.Generator:
    """Generator for one (realization, stream) pair, independent of run order."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(index, stream))
    return np.random.default_rng(ss)


@dataclass(frozen=True)
class Geometry:
    ap_pos: np.ndarray  # (L, 2) meters
    ue_pos: np.ndarray  # (K, 2) meters

    def distances(self) -> np.ndarray:
        """(L, K) AP-to-UE distances in meters."""
        diff = self.ap_pos[:, None, :] - self.ue_pos[None, :, :]
        return np.hypot(diff[..., 0], diff[..., 1])


@dataclass(frozen=True)
class ChannelSet:
    beta: np.ndarray  # (M, K) real, rows repeat per AP antenna
    g: np.ndarray  # (M, K) true channel
    g_hat: np.ndarray  # (M, K) estimate
    g_tilde: np.ndarray  # (M, K) estimation error

    @property
    def M(self) -> int:
        return self.g.shape[0]

    @property
    def K(self) -> int:
        return self.g.shape[1]

    def columns(self, ues) -> "ChannelSet":
        ues = np.asarray(ues, dtype=int)
        return ChannelSet(self.beta[:, ues], self.g[:, ues], self.g_hat[:, ues], self.g_tilde[:, ues])


def place_network(config: NetworkConfig, rng: np.random.Generator) -> Geometry:
    side = config.area_side_m
    ap = rng.uniform(0.0, side, size=(config.L, 2))
    ue = rng.uniform(0.0, side, size=(config.K, 2))
    return Geometry(ap_pos=ap, ue_pos=ue)


def pathloss_db(d_m, config: NetworkConfig) -> np.ndarray:
    """Three-slope path loss in dB (distances in meters, formula in km).

    Slope 0 below d0, 20 dB/decade between d0 and d1, 35 dB/decade beyond d1.
    """
    d_km = np.asarray(d_m, dtype=float) / 1000.0
    d0 = config.d0_m / 1000.0
    d1 = config.d1_m / 1000.0
    const = config.pl_const_db
    far = const + 35.0 * np.log10(np.maximum(d_km, d1))
    mid = const + 15.0 * np.log10(d1) + 20.0 * np.log10(np.clip(d_km, d0, d1))
    near = const + 15.0 * np.log10(d1) + 20.0 * np.log10(d0)
    return np.where(d_km > d1, far, np.where(d_km > d0, mid, near))


def large_scale_fading(geom: Geometry, config: NetworkConfig, rng: np.random.Generator) -> np.ndarray:
    """(M, K) large-scale gains; each AP's row is repeated for its N antennas."""
    d = geom.distances()
    gain_db = -pathloss_db(d, config)
    if config.gain_ref_m > 0:
        gain_db = gain_db + pathloss_db(config.gain_ref_m, config)
    # always draw so the stream layout does not depend on sigma
    z = rng.standard_normal(d.shape) * config.shadow_sigma_db
    gain_db = gain_db + np.where(d > config.d1_m, z, 0.0)
    beta_ap = 10.0 ** (gain_db / 10.0)
    return np.repeat(beta_ap, config.N, axis=0)


def _cn(shape, rng: np.random.Generator) -> np.ndarray:
    """Unit-variance circularly-symmetric complex Gaussian samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def draw_channel(beta: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    return np.sqrt(beta) * _cn(beta.shape, rng)


def split_csi(beta: np.ndarray, config: NetworkConfig, rng: np.random.Generator):
    """Draw independent estimate and error with variances (1-tau^2)beta and tau^2 beta.

    Returns ``(g_hat, g_tilde, g)`` with ``g = g_hat + g_tilde``.
    """
    tau2 = config.csi_tau ** 2
    g_hat = np.sqrt((1.0 - tau2) * beta) * _cn(beta.shape, rng)
    g_tilde = np.sqrt(tau2 * beta) * _cn(beta.shape, rng)
    return g_hat, g_tilde, g_hat + g_tilde


def realize(config: NetworkConfig, index: int, fixed_geometry: bool = False):
    """Geometry and channels for realization ``index`` of ``config.seed``.

    With ``fixed_geometry`` all realizations share the large-scale state
    (positions and shadowing) of realization 0 and only redraw fading.
    """
    ls_index = 0 if fixed_geometry else index
    ls_rng = realization_rng(config.seed, ls_index, STREAM_LARGE_SCALE)
    geom = place_network(config, ls_rng)
    beta = large_scale_fading(geom, config, ls_rng)
    g_hat, g_tilde, g = split_csi(beta, config, realization_rng(config.seed, index, STREAM_SMALL_SCALE))
    return geom, ChannelSet(beta=beta, g=g, g_hat=g_hat, g_tilde=g_tilde)
