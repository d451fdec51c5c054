"""Antenna clustering: LSF threshold, rate threshold, BSR coverage boost, masking."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ClusterAssignment:
    """Per-UE antenna selection; ``mask[k]`` is the diagonal of A_k."""

    mask: np.ndarray  # (K, M) bool

    def sizes(self) -> np.ndarray:
        return self.mask.sum(axis=1)

    def subset(self, ues) -> "ClusterAssignment":
        return ClusterAssignment(self.mask[np.asarray(ues, dtype=int)])

    @classmethod
    def full(cls, K: int, M: int) -> "ClusterAssignment":
        return cls(np.ones((K, M), dtype=bool))


def _threshold_sets(score: np.ndarray, alpha: float, all_maxima: bool = False) -> np.ndarray:
    """``{m : score[k,m] >= alpha} | {argmax_m score[k,m]}`` for each row k.

    The argmax is the lowest index, or every maximizing index with ``all_maxima``.
    """
    mask = score >= alpha
    if all_maxima:
        mask |= score == score.max(axis=1, keepdims=True)
    else:
        mask[np.arange(score.shape[0]), np.argmax(score, axis=1)] = True
    return mask


def lsf_threshold(beta: np.ndarray) -> float:
    return float(np.mean(beta))


def lsf_clusters(beta: np.ndarray, alpha_lsf: float) -> ClusterAssignment:
    """Select antennas with ``beta[m, k] >= alpha_lsf`` plus each UE's strongest AP.

    An AP's antennas share one beta, so the fallback keeps every antenna at
    the maximum, which is the whole block of the strongest AP.
    """
    return ClusterAssignment(_threshold_sets(np.asarray(beta, dtype=float).T, alpha_lsf, all_maxima=True))


def sr_threshold(sr: np.ndarray) -> float:
    return float(np.mean(sr))


def sr_clusters(sr: np.ndarray, alpha_src: float) -> ClusterAssignment:
    """Select antennas with ``sr[k, m] >= alpha_src`` plus each UE's best-rate one."""
    return ClusterAssignment(_threshold_sets(np.asarray(sr, dtype=float), alpha_src))


def coverage_target(clusters: ClusterAssignment) -> int:
    """Ceiling of the mean cluster size."""
    total = int(clusters.sizes().sum())
    K = clusters.mask.shape[0]
    return -(-total // K)


def bsr_augment(clusters: ClusterAssignment, sr: np.ndarray) -> ClusterAssignment:
    """Grow every under-supported UE's cluster to the ceiling of the mean size.

    Antennas are added in decreasing rate order (lowest index on ties) among
    those not yet selected. UEs already at or above the target are untouched.
    """
    target = coverage_target(clusters)
    mask = clusters.mask.copy()
    sizes = mask.sum(axis=1)
    for k in np.flatnonzero(sizes < target):
        order = np.argsort(-sr[k], kind="stable")
        free = order[~mask[k, order]]
        mask[k, free[: target - sizes[k]]] = True
    return ClusterAssignment(mask)


def bsr_clusters(sr: np.ndarray) -> ClusterAssignment:
    """Rate-threshold clustering followed by the coverage boost."""
    return bsr_augment(sr_clusters(sr, sr_threshold(sr)), sr)


def lsf_clustering(beta: np.ndarray) -> ClusterAssignment:
    return lsf_clusters(beta, lsf_threshold(beta))


def apply_mask(g: np.ndarray, clusters: ClusterAssignment) -> np.ndarray:
    """Zero column k of ``g`` (M x K) outside UE k's cluster."""
    return g * clusters.mask.T
