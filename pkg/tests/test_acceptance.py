"""Exit criteria at full network scale (L=16, N=4, K=128, n=20)."""

import math
import time

import numpy as np
import pytest

from cfmimo.cluster import ClusterAssignment, apply_mask, lsf_clusters, sr_clusters
from cfmimo.config import NetworkConfig
from cfmimo.metrics import fairness_histogram
from cfmimo.netgen import realize
from cfmimo.precode import zf_precoder
from cfmimo.rates import per_link_rates, sum_rate
from cfmimo.sched import fgr_schedule, gr_schedule, waiting_stats
from cfmimo.xprun import ExperimentSpec, run, run_complexity, fairness_realization

from conftest import crandn, record
from oracles import best_singleton, exhaustive_best, greedy_reference

pytestmark = pytest.mark.slow

FULL = NetworkConfig(L=16, N=4, K=128, n=20, csi_tau=0.1, seed=2024)
SNRS = [0.0, 10.0, 20.0]


@pytest.fixture(scope="module")
def sumrate_rows():
    start = time.perf_counter()
    rows = run(ExperimentSpec("sumrate", FULL, SNRS, realizations=100))
    return rows, time.perf_counter() - start


def test_c1_rate_ordering(sumrate_rows):
    rows, elapsed = sumrate_rows
    ok = all(r["cf"] >= r["bsr_uccf"] >= r["lsf_uccf"] for r in rows) and elapsed < 300
    detail = "; ".join(f"{r['snr_db']:g} dB cf={r['cf']:.2f} bsr={r['bsr_uccf']:.2f} lsf={r['lsf_uccf']:.2f}" for r in rows)
    assert record("C1 CF >= BSR >= LSF", ok, f"{detail}; {elapsed:.1f} s")


def test_c2_bsr_gain_over_lsf(sumrate_rows):
    rows, _ = sumrate_rows
    gains = {r["snr_db"]: r["bsr_uccf"] / r["lsf_uccf"] - 1 for r in rows}
    best = max(rows, key=lambda r: r["snr_db"])["snr_db"]
    ok = gains[best] >= 0.10
    detail = ", ".join(f"{s:g} dB {100 * g:+.1f}%" for s, g in gains.items())
    assert record("C2 BSR >= 1.10 x LSF at top SNR", ok, detail)


def test_c3_fairness():
    spec = ExperimentSpec("fairness", FULL.with_snr(20.0), realizations=100)
    rows = run(spec)
    fgr = np.array([r["fgr_count"] for r in rows])
    gr = np.array([r["gr_count"] for r in rows])
    ok = bool(np.all(fgr == 100)) and int(np.sum(gr == 0)) >= 1
    detail = f"F-Gr counts in [{fgr.min()}, {fgr.max()}]; Gr zero-count UEs {int(np.sum(gr == 0))}/128"
    assert record("C3 fairness histogram", ok, detail)


def test_c4_waiting_time_balance():
    even = FULL.replace(K=120).with_snr(20.0)
    _, ch = realize(even, 0)
    sched = fgr_schedule(ch, None, even)
    full = sched.T == 6 and all(s.n_i == 20 for s in sched.slots)
    gap_even = waiting_stats(sched).gap

    frame = FULL.with_snr(20.0)
    _, ch = realize(frame, 0)
    sched7 = fgr_schedule(ch, None, frame)
    gap7 = waiting_stats(sched7).gap
    ok = full and abs(gap_even) == 1.0 and sched7.T == 7 and abs(gap7) <= 1.5
    assert record("C4 waiting-time gap", ok, f"T=6 full={full} gap={gap_even:g}; T={sched7.T} gap={gap7:.3f}")


def test_c5_table_reproduction():
    row = run_complexity(ExperimentSpec("complexity", FULL, l_grid=[16]))[0]
    got = (row["flops_cf"], row["flops_lsf"], row["flops_bsr"], row["sig_lsf"], row["sig_bsr"])
    ok = got == (1_065_344, 22_081, 133_798.75, 9_280, 16_512)
    assert record("C5 complexity table", ok, " / ".join(f"{v:,}" for v in got))


def test_c6_greedy_oracle_equivalence():
    rng = np.random.default_rng(6)
    mismatches = upper = lower = 0
    for _ in range(100):
        K = int(rng.integers(2, 7))
        n = int(rng.integers(1, 4))
        M = 6
        # one effective channel per instance, no estimation error
        g = np.sqrt(rng.exponential(size=(M, K))) * crandn(rng, M, K)
        zero = np.zeros_like(g)
        cfg = NetworkConfig(L=M, N=1, K=K, n=n, csi_tau=0.0).with_snr(float(rng.choice([-10, 0, 10, 20])))
        chosen, rates = gr_schedule(g, zero, range(K), n, cfg)
        ref, ref_rate = greedy_reference(g, zero, range(K), n, cfg)
        mismatches += chosen != ref or abs(rates[-1] - ref_rate) > 1e-9
        upper += rates[-1] > exhaustive_best(g, zero, range(K), n, cfg) + 1e-9
        lower += rates[-1] < best_singleton(g, zero, range(K), cfg) - 1e-9
    ok = mismatches == upper == lower == 0
    detail = f"100 instances: {mismatches} oracle mismatches, {upper} above optimum, {lower} below best singleton"
    assert record("C6 greedy vs oracles", ok, detail)


def test_c7_numerical_identities():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 6))
        a = rng.uniform(0.1, 3.0, n)
        rho, s2 = rng.uniform(0.1, 100.0), rng.uniform(0.1, 2.0)
        gh = np.zeros((n + 2, n), dtype=complex)
        gh[:n, :n] = np.diag(a)
        p = np.zeros((n + 2, n), dtype=complex)
        p[:n, :n] = np.eye(n)
        got = sum_rate(gh, np.zeros_like(gh), p, rho, s2).sum_rate
        worst = max(worst, abs(got - np.sum(np.log2(1 + rho * a**2 / s2))))

    _, ch = realize(FULL.with_snr(10.0), 0)
    served = np.arange(20)
    gh, gt = ch.g_hat[:, served], ch.g_tilde[:, served]
    full = ClusterAssignment.full(20, FULL.M)
    gha, gta = apply_mask(gh, full), apply_mask(gt, full)
    cf = sum_rate(gh, gt, zf_precoder(gh, 1.0), 10.0, 1.0).sum_rate
    uc = sum_rate(gha, gta, zf_precoder(gha, 1.0), 10.0, 1.0).sum_rate
    mask_err = abs(cf - uc)
    ok = worst < 1e-9 and mask_err < 1e-9
    assert record("C7 numerical identities", ok, f"diagonal max err {worst:.1e}; all-ones mask err {mask_err:.1e}")


def test_c8_ber_sanity():
    grid = [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0]
    # 13 symbols x 20 UEs x 2 bits x 200 realizations = 104,000 bits per point
    spec = ExperimentSpec("ber", FULL, grid, realizations=200, n_symbols=13)
    rows = run(spec)
    bits = 13 * 20 * 2 * 200
    monotone = True
    for col in ("ber_cf", "ber_lsf", "ber_bsr"):
        for prev, cur in zip(rows, rows[1:]):
            p = prev[col]
            slack = 3 * math.sqrt(2 * max(p * (1 - p), 1.0 / bits) / bits)
            monotone &= cur[col] <= p + slack
    top = rows[-1]
    ok = monotone and top["ber_bsr"] <= top["ber_lsf"]
    detail = f"monotone={monotone}; at {top['snr_db']:g} dB BSR {top['ber_bsr']:.2e} vs LSF {top['ber_lsf']:.2e}"
    assert record("C8 BER sanity", ok, detail)


def test_c9_lsf_bsr_disagreement():
    g_hat = np.array([[1.00], [1.05]], dtype=complex)  # link i = 0, link j = 1
    g_tilde = np.array([[0.01], [1.00]], dtype=complex)
    gain = np.abs(g_hat) ** 2
    sr = per_link_rates(g_hat, g_tilde, np.ones((2, 1)), rho_f=100.0, noise_var=1.0)
    by_gain = int(np.flatnonzero(lsf_clusters(gain, np.inf).mask[0])[0])
    by_rate = int(np.flatnonzero(sr_clusters(sr, np.inf).mask[0])[0])
    ok = by_gain == 1 and by_rate == 0
    assert record("C9 gain vs rate link choice", ok, f"gain picks link {by_gain}, rate picks link {by_rate}")
