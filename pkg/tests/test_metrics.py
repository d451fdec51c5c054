import numpy as np
import pytest
from hypothesis import given, strategies as st

from cfmimo.metrics import complexity, fairness_histogram
from cfmimo.sched import BEST, Schedule, SlotRecord


def test_table_values_at_section_five_scale():
    rep = complexity(16, 4, 128)
    assert rep.flops_cf_gr == 1_065_344
    assert rep.flops_lsf_uccf == 22_081
    assert rep.flops_bsr_uccf == 133_798.75
    assert rep.signaling_lsf == 9_280
    assert rep.signaling_bsr == 16_512


def test_unit_scale():
    rep = complexity(1, 1, 1)
    assert rep.flops_cf_gr == 12
    assert rep.flops_lsf_uccf == pytest.approx(9 / 128 + 3 / 8 + 7 + 2)
    assert rep.signaling_lsf == 4 and rep.signaling_bsr == 6


def test_rejects_zero_sizes():
    with pytest.raises(ValueError):
        complexity(0, 4, 128)


@given(st.integers(1, 40), st.integers(1, 8), st.integers(1, 300))
def test_counts_positive_and_increasing_in_L(L, N, K):
    a, b = complexity(L, N, K), complexity(L + 1, N, K)
    for name in ("flops_cf_gr", "flops_lsf_uccf", "flops_bsr_uccf", "signaling_lsf", "signaling_bsr"):
        assert 0 <= getattr(a, name) < getattr(b, name)


def test_histogram_counts_runs_not_slots():
    frame = Schedule([SlotRecord((0, 1), BEST, 1.0)] * 3)
    hist = fairness_histogram([frame, [1, 2]], K=4)
    assert hist.counts.tolist() == [1, 2, 1, 0]
    assert (hist.min, hist.max, hist.zero_count) == (0, 2, 1)


def test_partitions_give_flat_histogram():
    rng = np.random.default_rng(0)
    runs = [list(rng.permutation(10)) for _ in range(7)]
    hist = fairness_histogram(runs, K=10)
    assert hist.min == hist.max == 7
