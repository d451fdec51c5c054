"""Log-det sum-rates, per-link rates for clustering, and QPSK bit-error rates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from cfmimo.precode import Precoder, zf_precoder

LN2 = np.log(2.0)

# K x M array, sr[k, m] in bits/s/Hz
RateMatrix = np.ndarray


class NonFinite(ValueError):
    pass


@dataclass
class RateReport:
    sum_rate: float
    per_ue_rate: np.ndarray
    flags: list = field(default_factory=list)


def _check_finite(*arrays):
    for a in arrays:
        if not np.all(np.isfinite(a)):
            raise NonFinite("inputs contain NaN or Inf")


def _logdet_pd(a: np.ndarray) -> np.ndarray:
    """log det of Hermitian positive-definite (stacks of) matrices via Cholesky."""
    a = 0.5 * (a + np.conj(np.swapaxes(a, -1, -2)))
    chol = np.linalg.cholesky(a)
    diag = np.real(np.diagonal(chol, axis1=-2, axis2=-1))
    return 2.0 * np.sum(np.log(diag), axis=-1)


def _covariances(g_hat, g_tilde, p, rho_f, noise_var):
    s = np.swapaxes(g_hat, -1, -2) @ p  # G_hat^T P
    e = np.swapaxes(g_tilde, -1, -2) @ p
    n = s.shape[-1]
    sig = rho_f * (s @ np.conj(np.swapaxes(s, -1, -2)))
    dist = rho_f * (e @ np.conj(np.swapaxes(e, -1, -2))) + noise_var * np.eye(n)
    return s, e, sig, dist


def sum_rate_batch(g_hat, g_tilde, p, rho_f: float, noise_var: float) -> np.ndarray:
    """``log2 det(I + A B^{-1})`` over stacked ``(..., M, n)`` inputs.

    Evaluated as ``logdet(A + B) - logdet(B)`` with ``A`` the estimated-channel
    signal covariance and ``B`` the error-plus-noise covariance.
    """
    _, _, sig, dist = _covariances(g_hat, g_tilde, p, rho_f, noise_var)
    return (_logdet_pd(sig + dist) - _logdet_pd(dist)) / LN2


def sum_rate(g_hat, g_tilde, p, rho_f: float, noise_var: float) -> RateReport:
    """Sum-rate of one downlink transmission (CF, or UCCF with masked inputs).

    ``p`` is a :class:`Precoder` or an ``(M, n)`` array. ``per_ue_rate`` holds
    the treat-interference-as-noise rates of the individual UEs; it does not
    sum to ``sum_rate`` in general.
    """
    flags = []
    if isinstance(p, Precoder):
        if p.regularized:
            flags.append("regularized-precoder")
        p = p.p
    g_hat = np.asarray(g_hat, dtype=complex)
    g_tilde = np.asarray(g_tilde, dtype=complex)
    _check_finite(g_hat, g_tilde, p)
    if not noise_var > 0:
        raise ValueError("noise_var must be positive")
    s, e, sig, dist = _covariances(g_hat, g_tilde, p, rho_f, noise_var)
    total = float((_logdet_pd(sig + dist) - _logdet_pd(dist)) / LN2)
    if total < 0:
        # roundoff only; A is positive semidefinite
        if total < -1e-9:
            flags.append("negative-rate-roundoff")
        total = 0.0

    useful = rho_f * np.abs(np.diagonal(s)) ** 2
    leak = rho_f * (np.sum(np.abs(s) ** 2, axis=1) - np.abs(np.diagonal(s)) ** 2)
    err = rho_f * np.sum(np.abs(e) ** 2, axis=1)
    per_ue = np.log2(1.0 + useful / (leak + err + noise_var))
    return RateReport(sum_rate=total, per_ue_rate=per_ue, flags=flags)


def per_link_rates(g_hat, g_tilde, p_cols, rho_f: float, noise_var: float,
                   power_exponent: float = 0.5) -> RateMatrix:
    """Rate of every antenna-to-UE link, shape ``(K, M)``.

    ``SR[k, m] = log2(1 + r|g_hat[m,k]|^2 |p_k|^2 / (r|g_tilde[m,k]|^2 |p_k|^2 + noise_var))``
    with ``r = rho_f ** power_exponent``. ``p_cols`` is an ``(M, K)`` precoder
    whose column k serves UE k; only the column norms enter.
    """
    if isinstance(p_cols, Precoder):
        p_cols = p_cols.p
    _check_finite(g_hat, g_tilde, p_cols)
    r = rho_f ** power_exponent
    pk = np.sum(np.abs(p_cols) ** 2, axis=0)  # p_k^H p_k
    num = r * np.abs(g_hat) ** 2 * pk
    den = r * np.abs(g_tilde) ** 2 * pk + noise_var
    return np.log2(1.0 + num / den).T


def qpsk_modulate(bits: np.ndarray) -> np.ndarray:
    """Gray-mapped unit-energy QPSK; ``bits`` has a trailing axis of 2."""
    return ((1 - 2 * bits[..., 0]) + 1j * (1 - 2 * bits[..., 1])) / np.sqrt(2.0)


def qpsk_demodulate(z: np.ndarray) -> np.ndarray:
    return np.stack([z.real < 0, z.imag < 0], axis=-1).astype(np.int8)


def ber_monte_carlo(channel, clusters, config, rng: np.random.Generator, n_symbols: int):
    """Bit errors of QPSK through ``y = sqrt(rho_f) G^T P x + w``.

    ``channel`` holds the served UEs' columns (M x n); ``clusters`` is the
    matching :class:`~cfmimo.cluster.ClusterAssignment` or ``None`` for CF.
    The precoder is ZF on the (masked) estimate, and UE k equalizes with its
    estimated effective gain ``sqrt(rho_f) g_hat_k^T p_k``. Bits and noise are
    drawn from ``rng`` in a fixed order, so reusing a seed across SNR points
    gives common random numbers.

    Returns ``(bit_errors, bits)``.
    """
    if n_symbols < 1:
        raise ValueError("n_symbols must be >= 1")
    g_hat, g = channel.g_hat, channel.g
    if clusters is not None:
        from cfmimo.cluster import apply_mask

        g_hat = apply_mask(g_hat, clusters)
        g = apply_mask(g, clusters)
    n = g.shape[1]
    prec = zf_precoder(g_hat, config.power_budget, regularize=True)
    amp = np.sqrt(config.rho_f)

    bits = rng.integers(0, 2, size=(n_symbols, n, 2), dtype=np.int8)
    noise = np.sqrt(config.noise_var / 2.0) * (
        rng.standard_normal((n_symbols, n)) + 1j * rng.standard_normal((n_symbols, n))
    )
    x = qpsk_modulate(bits)  # (S, n)
    y = amp * x @ (g.T @ prec.p).T + noise
    gain = amp * np.einsum("mk,mk->k", g_hat, prec.p)
    with np.errstate(divide="ignore", invalid="ignore"):
        detected = qpsk_demodulate(y / gain)
    errors = int(np.count_nonzero(detected != bits))
    return errors, bits.size
