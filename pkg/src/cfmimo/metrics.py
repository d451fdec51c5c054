"""Analytic complexity/signaling counts and scheduling-fairness histograms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ComplexityReport:
    flops_cf_gr: float
    flops_lsf_uccf: float
    flops_bsr_uccf: float
    signaling_lsf: float
    signaling_bsr: float


def complexity(L: int, N: int, K: int) -> ComplexityReport:
    """FLOP and signaling-load models of greedy scheduling in CF, LSF and BSR networks."""
    if min(L, N, K) < 1:
        raise ValueError("L, N, K must be >= 1")
    M = L * N
    return ComplexityReport(
        flops_cf_gr=4 * M**3 + M * (2 * K + 6),
        flops_lsf_uccf=9 / 128 * M**3 + M * (3 / 8 * K + 7) + K + 1,
        flops_bsr_uccf=27 / 64 * M**3 + 27 / 32 * M**2 + 1179 / 256 * M + 19 / 8 * M * K,
        signaling_lsf=2 * N**2 * L**2 + N * L**2 + N * L,
        signaling_bsr=4 * N**2 * L**2 + 2 * N * L,
    )


@dataclass(frozen=True)
class FairnessHistogram:
    counts: np.ndarray  # (K,) realizations in which each UE was served

    @property
    def min(self) -> int:
        return int(self.counts.min())

    @property
    def max(self) -> int:
        return int(self.counts.max())

    @property
    def zero_count(self) -> int:
        return int(np.count_nonzero(self.counts == 0))


def fairness_histogram(schedules, K: int) -> FairnessHistogram:
    """Count, per UE, the runs in which it was scheduled at least once.

    ``schedules`` may mix :class:`~cfmimo.sched.Schedule` objects and plain
    iterables of UE indices.
    """
    counts = np.zeros(K, dtype=int)
    for sched in schedules:
        ues = sched.scheduled() if hasattr(sched, "scheduled") else sched
        counts[sorted(set(int(u) for u in ues))] += 1
    return FairnessHistogram(counts)
