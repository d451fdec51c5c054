"""Zero-forcing precoding under a total (Frobenius) power budget."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

RANK_TOL = 1e-12
REG_SCALE = 1e-8


class RankDeficient(np.linalg.LinAlgError):
    """The effective channel is (numerically) rank deficient."""


@dataclass(frozen=True)
class Precoder:
    p: np.ndarray  # (M, n)
    power_budget: float
    regularized: bool = False

    @property
    def power(self) -> float:
        return float(np.sum(np.abs(self.p) ** 2))


def _normalize(p0: np.ndarray, power_budget: float) -> np.ndarray:
    fro2 = np.sum(np.abs(p0) ** 2, axis=(-2, -1), keepdims=True)
    return p0 * np.sqrt(power_budget / fro2)


def zf_batch(h: np.ndarray, power_budget: float, regularize: bool = True):
    """Zero-forcing precoders for a stack of effective channels.

    ``h`` has shape ``(..., M, n)`` with n <= M. Returns ``(p, deficient)``
    where ``deficient`` marks channels that needed the diagonal loading
    fallback. With ``regularize=False`` a deficient channel raises instead.
    """
    h = np.asarray(h, dtype=complex)
    m, n = h.shape[-2:]
    if n > m:
        raise ValueError(f"cannot zero-force {n} streams with {m} antennas")
    s = np.linalg.svd(h, compute_uv=False)
    deficient = ~(s[..., -1] > RANK_TOL * s[..., 0])
    if np.any(deficient) and not regularize:
        raise RankDeficient("effective channel is rank deficient")
    hc = h.conj()
    gram = np.swapaxes(h, -1, -2) @ hc  # H^T H^*
    if np.any(deficient):
        trace = np.real(np.trace(gram, axis1=-2, axis2=-1))
        delta = np.where(deficient, REG_SCALE * trace / n, 0.0)
        # an all-zero channel has zero trace; any positive loading will do
        delta = np.where(deficient & (delta <= 0), REG_SCALE, delta)
        gram = gram + delta[..., None, None] * np.eye(n)
    eye = np.broadcast_to(np.eye(n, dtype=complex), gram.shape)
    p0 = hc @ np.linalg.solve(gram, eye)
    return _normalize(p0, power_budget), deficient


def zf_precoder(g_hat_eff: np.ndarray, power_budget: float, regularize: bool = False) -> Precoder:
    """ZF precoder ``c * conj(H) (H^T conj(H))^{-1}`` with ``||P||_F^2 = power_budget``.

    Raises :class:`RankDeficient` for a singular effective channel unless
    ``regularize`` is set, in which case diagonal loading is applied and the
    result is flagged.
    """
    if not power_budget > 0:
        raise ValueError("power_budget must be positive")
    p, deficient = zf_batch(g_hat_eff, power_budget, regularize=regularize)
    return Precoder(p=p, power_budget=power_budget, regularized=bool(deficient))


def pinv_precoder(g_hat: np.ndarray, power_budget: float) -> Precoder:
    """Minimum-norm precoder ``pinv(H^T)`` scaled to the budget.

    Coincides with :func:`zf_precoder` when H has full column rank and
    remains defined when there are more UEs than antennas.
    """
    p0 = np.linalg.pinv(np.asarray(g_hat, dtype=complex).T)
    return Precoder(p=_normalize(p0, power_budget), power_budget=power_budget)
