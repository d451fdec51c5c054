"""Monte Carlo experiment runner: SNR sweeps, fairness counts, complexity tables, CSV."""

from __future__ import annotations

import csv
import dataclasses
import io
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from pathlib import Path
from typing import Optional

import numpy as np

from cfmimo.cluster import ClusterAssignment, apply_mask, bsr_clusters, lsf_clustering
from cfmimo.config import NetworkConfig
from cfmimo.metrics import complexity, fairness_histogram
from cfmimo.netgen import STREAM_SYMBOLS, ChannelSet, realization_rng, realize
from cfmimo.precode import pinv_precoder, zf_precoder
from cfmimo.rates import ber_monte_carlo, per_link_rates, sum_rate
from cfmimo.sched import average_sum_rate, fgr_schedule, gr_schedule, gr_schedule_frame

log = logging.getLogger(__name__)

SCENARIOS = ("sumrate", "ber", "schedule", "complexity", "fairness")
NETWORKS = ("cf", "lsf", "bsr")
RATE_COLUMNS = {"cf": "cf", "lsf": "lsf_uccf", "bsr": "bsr_uccf"}
BER_COLUMNS = {"cf": "ber_cf", "lsf": "ber_lsf", "bsr": "ber_bsr"}


def parse_grid(text: str) -> list:
    """``"min:step:max"`` (inclusive) or a comma list into a list of floats."""
    text = text.strip()
    if not text:
        return []
    if ":" not in text:
        return [float(v) for v in text.split(",") if v.strip()]
    parts = [float(v) for v in text.split(":")]
    if len(parts) != 3:
        raise ValueError(f"grid must be min:step:max, got {text!r}")
    lo, step, hi = parts
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {text!r}")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


@dataclass
class ExperimentSpec:
    scenario: str
    config: NetworkConfig = field(default_factory=NetworkConfig)
    snr_grid_db: list = field(default_factory=lambda: parse_grid("-10:5:30"))
    realizations: int = 100
    out_path: Optional[str] = None
    # None runs every network; otherwise only "lsf", "bsr" or "none" (CF)
    clustering: Optional[str] = None
    scheduler: str = "none"
    n_symbols: int = 500
    # shared positions/shadowing across realizations; defaults to True only
    # for the fairness scenario, whose histogram is per UE location
    fixed_geometry: Optional[bool] = None
    l_grid: list = field(default_factory=lambda: list(range(1, 26)))
    workers: int = 1

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}")
        if self.fixed_geometry is None:
            self.fixed_geometry = self.scenario == "fairness"
        if self.realizations < 1:
            raise ValueError("realizations must be >= 1")
        if self.scenario in ("sumrate", "ber", "schedule") and not self.snr_grid_db:
            raise ValueError("SNR grid is empty")
        if self.scenario == "complexity" and not self.l_grid:
            raise ValueError("L grid is empty")
        if self.clustering not in (None, "lsf", "bsr", "none"):
            raise ValueError(f"unknown clustering {self.clustering!r}")
        if self.scheduler not in ("none", "gr", "fgr"):
            raise ValueError(f"unknown scheduler {self.scheduler!r}")
        if self.n_symbols < 1:
            raise ValueError("n_symbols must be >= 1")

    @property
    def networks(self) -> tuple:
        if self.clustering is None:
            return NETWORKS
        return ("cf",) if self.clustering == "none" else (self.clustering,)


def network_clusters(channel: ChannelSet, config: NetworkConfig, networks) -> dict:
    """Cluster assignments over all K UEs; ``None`` stands for the unclustered CF network."""
    out = {}
    for net in networks:
        if net == "cf":
            out[net] = None
        elif net == "lsf":
            out[net] = lsf_clustering(channel.beta)
        else:
            # clustering precedes scheduling, so the per-link rates use a
            # provisional precoder over every UE on the unmasked estimate
            prov = pinv_precoder(channel.g_hat, config.power_budget)
            sr = per_link_rates(channel.g_hat, channel.g_tilde, prov, config.rho_f,
                                config.noise_var, config.rate_formula_power_exponent)
            out[net] = bsr_clusters(sr)
    return out


def _masked(channel: ChannelSet, clusters: Optional[ClusterAssignment]):
    if clusters is None:
        return channel.g_hat, channel.g_tilde
    return apply_mask(channel.g_hat, clusters), apply_mask(channel.g_tilde, clusters)


def network_rate(channel: ChannelSet, clusters, config: NetworkConfig, scheduler: str) -> float:
    """Sum-rate of one network; SR_Av of the frame when scheduling with F-Gr."""
    g_hat, g_tilde = _masked(channel, clusters)
    if scheduler == "fgr":
        return average_sum_rate(fgr_schedule(channel, clusters, config), config.n)
    if scheduler == "gr":
        _, rates = gr_schedule(g_hat, g_tilde, range(channel.K), config.n, config)
        return rates[-1]
    # no scheduling: serve UEs 0..n-1 (positions are i.i.d., so a random set)
    served = np.arange(config.n)
    prec = zf_precoder(g_hat[:, served], config.power_budget, regularize=True)
    return sum_rate(g_hat[:, served], g_tilde[:, served], prec, config.rho_f, config.noise_var).sum_rate


def sumrate_realization(spec: ExperimentSpec, index: int) -> np.ndarray:
    """(len(snr_grid), len(networks)) sum-rates of realization ``index``."""
    _, channel = realize(spec.config, index, spec.fixed_geometry)
    out = np.empty((len(spec.snr_grid_db), len(spec.networks)))
    for i, snr in enumerate(spec.snr_grid_db):
        cfg = spec.config.with_snr(snr)
        clusters = network_clusters(channel, cfg, spec.networks)
        for j, net in enumerate(spec.networks):
            out[i, j] = network_rate(channel, clusters[net], cfg, spec.scheduler)
    return out


def ber_realization(spec: ExperimentSpec, index: int) -> np.ndarray:
    """(len(snr_grid), len(networks), 2) bit-error and bit counts."""
    _, channel = realize(spec.config, index, spec.fixed_geometry)
    served = np.arange(spec.config.n)
    sub = channel.columns(served)
    out = np.empty((len(spec.snr_grid_db), len(spec.networks), 2), dtype=np.int64)
    for i, snr in enumerate(spec.snr_grid_db):
        cfg = spec.config.with_snr(snr)
        clusters = network_clusters(channel, cfg, spec.networks)
        for j, net in enumerate(spec.networks):
            cl = None if clusters[net] is None else clusters[net].subset(served)
            # same symbols and noise at every SNR and for every network
            rng = realization_rng(cfg.seed, index, STREAM_SYMBOLS)
            out[i, j] = ber_monte_carlo(sub, cl, cfg, rng, spec.n_symbols)
    return out


def fairness_realization(spec: ExperimentSpec, index: int):
    """UE sets served by the Gr baseline and by F-Gr in realization ``index``."""
    _, channel = realize(spec.config, index, spec.fixed_geometry)
    net = spec.networks[0]
    clusters = network_clusters(channel, spec.config, (net,))[net]
    gr = gr_schedule_frame(channel, clusters, spec.config)
    fgr = fgr_schedule(channel, clusters, spec.config)
    return gr.scheduled(), fgr.scheduled()


def _map(fn, spec: ExperimentSpec):
    task = partial(fn, spec)
    indices = range(spec.realizations)
    if spec.workers > 1:
        with ProcessPoolExecutor(max_workers=spec.workers) as pool:
            return list(pool.map(task, indices))
    return [task(i) for i in indices]


def run_sumrate(spec: ExperimentSpec) -> list:
    per_real = np.stack(_map(sumrate_realization, spec))
    mean = per_real.mean(axis=0)
    rows = []
    for i, snr in enumerate(spec.snr_grid_db):
        row = {"snr_db": snr}
        for j, net in enumerate(spec.networks):
            row[RATE_COLUMNS[net]] = float(mean[i, j])
        rows.append(row)
    _maybe_write(spec, rows)
    return rows


def run_schedule(spec: ExperimentSpec) -> list:
    if spec.scheduler == "none":
        spec = dataclasses.replace(spec, scheduler="fgr")
    return run_sumrate(spec)


def run_ber(spec: ExperimentSpec) -> list:
    totals = np.sum(np.stack(_map(ber_realization, spec)), axis=0)
    rows = []
    for i, snr in enumerate(spec.snr_grid_db):
        row = {"snr_db": snr}
        for j, net in enumerate(spec.networks):
            errors, bits = totals[i, j]
            row[BER_COLUMNS[net]] = float(errors / bits)
        rows.append(row)
    _maybe_write(spec, rows)
    return rows


def run_fairness(spec: ExperimentSpec) -> list:
    results = _map(fairness_realization, spec)
    K = spec.config.K
    gr = fairness_histogram([r[0] for r in results], K)
    fgr = fairness_histogram([r[1] for r in results], K)
    rows = [{"ue_id": k, "gr_count": int(gr.counts[k]), "fgr_count": int(fgr.counts[k])} for k in range(K)]
    _maybe_write(spec, rows)
    return rows


def run_complexity(spec: ExperimentSpec) -> list:
    rows = []
    for L in spec.l_grid:
        rep = complexity(int(L), spec.config.N, spec.config.K)
        rows.append({
            "L": int(L),
            "flops_cf": rep.flops_cf_gr,
            "flops_lsf": rep.flops_lsf_uccf,
            "flops_bsr": rep.flops_bsr_uccf,
            "sig_lsf": rep.signaling_lsf,
            "sig_bsr": rep.signaling_bsr,
        })
    _maybe_write(spec, rows)
    return rows


RUNNERS = {
    "sumrate": run_sumrate,
    "schedule": run_schedule,
    "ber": run_ber,
    "fairness": run_fairness,
    "complexity": run_complexity,
}


def run(spec: ExperimentSpec) -> list:
    log.info("running %s with %d realizations", spec.scenario, spec.realizations)
    return RUNNERS[spec.scenario](spec)


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(rows: list) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(rows[0]))
    for row in rows:
        writer.writerow([_fmt(v) for v in row.values()])
    return buf.getvalue()


def _maybe_write(spec: ExperimentSpec, rows: list):
    if spec.out_path:
        Path(spec.out_path).write_text(to_csv(rows), encoding="utf-8")
