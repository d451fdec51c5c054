"""Scenario configuration and the flat key/value config file format."""

from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class NetworkConfig:
    """All parameters of one simulated network.

    Powers are linear. ``rho_f`` is the transmit gain applied in the rate
    formulas and ``noise_var`` the receiver noise variance, so the plotted
    SNR is ``10*log10(rho_f/noise_var)``.
    """

    L: int = 16
    N: int = 4
    K: int = 128
    n: int = 20
    area_side_m: float = 400.0
    rho_f: float = 1.0
    noise_var: float = 1.0
    csi_tau: float = 0.1
    shadow_sigma_db: float = 8.0
    seed: int = 0
    T: Optional[int] = None

    # total precoder power, ||P||_F^2
    power_budget: float = 1.0

    # three-slope path loss
    d0_m: float = 10.0
    d1_m: float = 50.0
    pl_const_db: float = 140.7
    # beta is reported relative to the unshadowed gain at this distance;
    # 0 disables the normalization (raw physical gain)
    gain_ref_m: float = 50.0

    # exponent on rho_f in the per-link rate (0.5 or 1)
    rate_formula_power_exponent: float = 0.5

    def __post_init__(self):
        if self.L < 1 or self.N < 1 or self.K < 1:
            raise ConfigError("L, N and K must be >= 1")
        if not 1 <= self.n <= self.L * self.N:
            raise ConfigError(f"n must lie in [1, L*N={self.L * self.N}], got {self.n}")
        if self.area_side_m < 0:
            raise ConfigError("area_side_m must be >= 0")
        if not self.rho_f > 0 or not self.noise_var > 0:
            raise ConfigError("rho_f and noise_var must be > 0")
        if not 0.0 <= self.csi_tau <= 1.0:
            raise ConfigError("csi_tau must lie in [0, 1]")
        if self.shadow_sigma_db < 0:
            raise ConfigError("shadow_sigma_db must be >= 0")
        if not self.power_budget > 0:
            raise ConfigError("power_budget must be > 0")
        if not 0 < self.d0_m <= self.d1_m:
            raise ConfigError("need 0 < d0_m <= d1_m")
        if self.gain_ref_m < 0:
            raise ConfigError("gain_ref_m must be >= 0")
        if self.rate_formula_power_exponent not in (0.5, 1.0):
            raise ConfigError("rate_formula_power_exponent must be 0.5 or 1")
        if self.T is not None and self.T < 1:
            raise ConfigError("T must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be an unsigned 64-bit integer")

    @property
    def M(self) -> int:
        return self.L * self.N

    @property
    def slots(self) -> int:
        """Frame length, defaulting to ceil(K/n)."""
        return self.T if self.T is not None else math.ceil(self.K / self.n)

    @property
    def snr_db(self) -> float:
        return 10.0 * math.log10(self.rho_f / self.noise_var)

    def with_snr(self, snr_db: float) -> "NetworkConfig":
        return dataclasses.replace(self, rho_f=self.noise_var * 10.0 ** (snr_db / 10.0))

    def replace(self, **changes) -> "NetworkConfig":
        return dataclasses.replace(self, **changes)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(NetworkConfig)}
_INT_FIELDS = {"L", "N", "K", "n", "seed", "T"}


def _coerce(key: str, raw: str):
    raw = raw.strip()
    if key == "T" and raw.lower() in ("", "none", "auto"):
        return None
    if key in _INT_FIELDS:
        return int(raw, 0)
    return float(raw)


def parse_config(text: str) -> NetworkConfig:
    """Parse ``key = value`` lines (``#`` comments allowed) into a config."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str  # keys are case sensitive (L vs l)
    try:
        parser.read_string("[config]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(str(exc)) from exc
    values = {}
    for key, raw in parser["config"].items():
        if key not in _FIELD_TYPES:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            values[key] = _coerce(key, raw)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return NetworkConfig(**values)


def load_config(path) -> NetworkConfig:
    return parse_config(Path(path).read_text(encoding="utf-8"))


def dump_config(config: NetworkConfig) -> str:
    lines = []
    for f in dataclasses.fields(config):
        value = getattr(config, f.name)
        lines.append(f"{f.name} = {'auto' if value is None else value}")
    return "\n".join(lines) + "\n"
