"""Greedy (Gr) and fair greedy (F-Gr) multiuser scheduling."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cfmimo.cluster import ClusterAssignment, apply_mask
from cfmimo.config import NetworkConfig
from cfmimo.netgen import ChannelSet
from cfmimo.precode import zf_batch
from cfmimo.rates import sum_rate_batch

BEST = "best"
POOR = "poor"


class InfeasibleFrame(ValueError):
    pass


@dataclass(frozen=True)
class SlotRecord:
    ue_set: tuple
    klass: str
    achieved_rate: float

    @property
    def n_i(self) -> int:
        return len(self.ue_set)


@dataclass
class Schedule:
    slots: list = field(default_factory=list)
    flags: list = field(default_factory=list)

    @property
    def T(self) -> int:
        return len(self.slots)

    def scheduled(self) -> list:
        return [ue for slot in self.slots for ue in slot.ue_set]

    def is_partition_of(self, K: int) -> bool:
        ues = self.scheduled()
        return len(ues) == K and set(ues) == set(range(K))


@dataclass(frozen=True)
class WaitingStats:
    t_w: dict  # UE -> 1-based slot index
    mean_best: float
    mean_poor: float

    @property
    def gap(self) -> float:
        if np.isnan(self.mean_best) or np.isnan(self.mean_poor):
            return 0.0
        return self.mean_poor - self.mean_best


class SetRater:
    """Sum-rate of UE subsets under a ZF precoder recomputed per subset."""

    def __init__(self, g_hat, g_tilde, config: NetworkConfig):
        self.g_hat = g_hat
        self.g_tilde = g_tilde
        self.power_budget = config.power_budget
        self.rho_f = config.rho_f
        self.noise_var = config.noise_var

    def _rates(self, cols: np.ndarray) -> np.ndarray:
        # cols: (B, l) UE indices
        h = np.moveaxis(self.g_hat[:, cols], 0, -2)  # (B, M, l)
        e = np.moveaxis(self.g_tilde[:, cols], 0, -2)
        p, _ = zf_batch(h, self.power_budget)
        return sum_rate_batch(h, e, p, self.rho_f, self.noise_var)

    def rate(self, ues) -> float:
        return float(self._rates(np.asarray([list(ues)], dtype=int))[0])

    def extend(self, base, candidates) -> np.ndarray:
        """Rates of ``base + [c]`` for every candidate c."""
        candidates = np.asarray(candidates, dtype=int)
        cols = np.column_stack([np.tile(np.asarray(base, dtype=int), (len(candidates), 1)), candidates])
        return self._rates(cols)


def gr_schedule(g_hat, g_tilde, candidates, n: int, config: NetworkConfig, rater=None):
    """Greedy sum-rate UE selection.

    Seeds with the candidate of largest estimated channel power, then adds
    the UE giving the largest sum-rate until ``n`` are chosen or no addition
    improves the rate. Ties go to the lowest UE index.

    Returns ``(selected, rates)`` where ``rates[i]`` is the sum-rate after
    the (i+1)-th selection.
    """
    candidates = sorted(int(c) for c in candidates)
    if not candidates:
        raise ValueError("no candidate UEs")
    if n < 1:
        raise ValueError("n must be >= 1")
    rater = rater or SetRater(g_hat, g_tilde, config)
    power = np.sum(np.abs(g_hat[:, candidates]) ** 2, axis=0)
    selected = [candidates[int(np.argmax(power))]]
    rates = [rater.rate(selected)]
    remaining = [c for c in candidates if c != selected[0]]
    while len(selected) < n and remaining:
        trial = rater.extend(selected, remaining)
        j = int(np.argmax(trial))
        if trial[j] <= rates[-1]:
            break
        selected.append(remaining.pop(j))
        rates.append(float(trial[j]))
    return selected, rates


def _effective(channel: ChannelSet, clusters):
    if clusters is None:
        return channel.g_hat, channel.g_tilde, channel.g
    return (apply_mask(channel.g_hat, clusters), apply_mask(channel.g_tilde, clusters),
            apply_mask(channel.g, clusters))


def fgr_schedule(channel: ChannelSet, clusters, config: NetworkConfig) -> Schedule:
    """Fair greedy frame: odd slots greedy-best UEs, even slots poorest UEs.

    Scheduled UEs leave the pool, so each UE is served exactly once. A slot
    holding the last ``<= n`` UEs takes all of them. If greedy slots stop
    short of ``n`` and the pool outlasts ``config.slots``, the frame is
    extended (flagged ``frame-extended``) rather than dropping UEs.
    """
    K, n, T = channel.K, config.n, config.slots
    if T * n < K:
        raise InfeasibleFrame(f"T*n = {T * n} < K = {K}")
    g_hat, g_tilde, g = _effective(channel, clusters)
    rater = SetRater(g_hat, g_tilde, config)
    true_power = np.sum(np.abs(g) ** 2, axis=0)

    schedule = Schedule()
    pool = list(range(K))
    i = 0
    while pool:
        i += 1
        klass = BEST if i % 2 == 1 else POOR
        if len(pool) <= n:
            chosen = list(pool)
        elif klass == BEST:
            chosen, _ = gr_schedule(g_hat, g_tilde, pool, n, config, rater=rater)
        else:
            order = np.argsort(true_power[pool], kind="stable")
            chosen = [pool[j] for j in order[:n]]
        chosen = sorted(chosen)
        rate = rater.rate(chosen)
        schedule.slots.append(SlotRecord(tuple(chosen), klass, rate))
        taken = set(chosen)
        pool = [k for k in pool if k not in taken]
    if schedule.T > T:
        schedule.flags.append("frame-extended")
    return schedule


def gr_schedule_frame(channel: ChannelSet, clusters, config: NetworkConfig) -> Schedule:
    """Unfair baseline: greedy over all K UEs in every slot, without removal."""
    g_hat, g_tilde, _ = _effective(channel, clusters)
    rater = SetRater(g_hat, g_tilde, config)
    # the channel is constant over the frame, so every slot's pick is the same
    chosen, rates = gr_schedule(g_hat, g_tilde, range(channel.K), config.n, config, rater=rater)
    record = SlotRecord(tuple(sorted(chosen)), BEST, rates[-1])
    return Schedule(slots=[record] * config.slots)


def average_sum_rate(schedule: Schedule, n: int, T: int = None) -> float:
    """Frame average ``(1/T) sum_i (n_i/n) SR^i``; T defaults to the slot count."""
    T = schedule.T if T is None else T
    return sum(s.n_i / n * s.achieved_rate for s in schedule.slots) / T


def waiting_stats(schedule: Schedule) -> WaitingStats:
    t_w = {}
    by_class = {BEST: [], POOR: []}
    for idx, slot in enumerate(schedule.slots, start=1):
        for ue in slot.ue_set:
            t_w[ue] = idx
            by_class[slot.klass].append(idx)
    means = {c: float(np.mean(v)) if v else float("nan") for c, v in by_class.items()}
    return WaitingStats(t_w=t_w, mean_best=means[BEST], mean_poor=means[POOR])
