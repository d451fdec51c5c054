"""Downlink cell-free massive MIMO simulator: LSF/BSR clustering and fair greedy scheduling."""

from cfmimo.config import NetworkConfig, load_config
from cfmimo.netgen import ChannelSet, Geometry, realize
from cfmimo.precode import Precoder, RankDeficient, zf_precoder
from cfmimo.rates import RateReport, per_link_rates, sum_rate
from cfmimo.cluster import ClusterAssignment

__all__ = [
    "ChannelSet",
    "ClusterAssignment",
    "Geometry",
    "NetworkConfig",
    "Precoder",
    "RankDeficient",
    "RateReport",
    "load_config",
    "per_link_rates",
    "realize",
    "sum_rate",
    "zf_precoder",
]
