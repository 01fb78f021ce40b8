import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcuwidth import (
    DimensionMismatch,
    EmptyScan,
    IndexOutOfRange,
    McuSequence,
    MinimizerSet,
    candidate_widths,
    distance_row,
    estimate_width,
    histogram_to_csv,
    minimizers,
    pairwise_distance,
    report_to_json,
)
from reference import brute_force_estimate


def make_seq(tops, bottoms, k_px, n_comp):
    return McuSequence(
        tops=np.asarray(tops, dtype=np.uint8),
        bottoms=np.asarray(bottoms, dtype=np.uint8),
        mcu_width=k_px,
        component_count=n_comp,
    )


def random_seq(rng, n, k_px, n_comp):
    shape = (n, k_px, n_comp)
    return make_seq(rng.integers(0, 256, shape), rng.integers(0, 256, shape),
                    k_px, n_comp)


# -- pairwise distance -------------------------------------------------------

def test_distance_identity():
    row = np.arange(16, dtype=np.uint8).reshape(8, 2)
    assert pairwise_distance(row, row) == 0.0


def test_distance_hand_example_k2():
    b = np.array([[0], [4]])
    t = np.array([[3], [0]])
    assert pairwise_distance(b, t) == (3 + 4) / 2


def test_distance_hand_example_k8_c3():
    b = np.zeros((8, 3))
    t = np.full((8, 3), 3)
    assert pairwise_distance(b, t) == pytest.approx(math.sqrt(27), abs=1e-12)


def test_distance_shape_mismatch():
    with pytest.raises(DimensionMismatch):
        pairwise_distance(np.zeros((8, 1)), np.zeros((8, 3)))
    with pytest.raises(DimensionMismatch):
        pairwise_distance(np.zeros(8), np.zeros(8))


@given(st.lists(st.integers(0, 255), min_size=8, max_size=8),
       st.lists(st.integers(0, 255), min_size=8, max_size=8))
def test_distance_nonnegative_and_identity(b, t):
    bb = np.array(b).reshape(8, 1)
    tt = np.array(t).reshape(8, 1)
    d = pairwise_distance(bb, tt)
    assert d >= 0.0
    assert (d == 0.0) == (b == t)


@given(st.lists(st.integers(0, 200), min_size=24, max_size=24),
       st.lists(st.integers(0, 200), min_size=24, max_size=24),
       st.integers(-50, 55))
def test_distance_translation_invariance(b, t, delta):
    bb = np.array(b, dtype=np.float64).reshape(8, 3)
    tt = np.array(t, dtype=np.float64).reshape(8, 3)
    assert pairwise_distance(bb, tt) == pairwise_distance(bb + delta, tt + delta)


# -- distance rows and minimizers --------------------------------------------

def test_distance_row_boundaries():
    rng = np.random.default_rng(0)
    seq = random_seq(rng, 5, 8, 1)
    assert len(distance_row(seq, 1).values) == 4
    assert len(distance_row(seq, 4).values) == 1
    seq3 = random_seq(rng, 3, 8, 1)
    assert len(distance_row(seq3, 2).values) == 1
    for bad in (0, 5, -1):
        with pytest.raises(IndexOutOfRange):
            distance_row(seq, bad)


def test_distance_row_constant_sequence_is_zero():
    row = np.full((6, 8, 1), 55, np.uint8)
    seq = make_seq(row, row, 8, 1)
    assert (distance_row(seq, 1).values == 0.0).all()


def test_minimizers_unique_tie_flat():
    from mcuwidth import DistanceRow

    assert minimizers(DistanceRow(1, np.array([2.0, 1.0, 3.0]))).indices == {3}
    assert minimizers(DistanceRow(1, np.array([1.0, 1.0]))).indices == {2, 3}
    assert minimizers(DistanceRow(1, np.zeros(4))).indices == {2, 3, 4, 5}


def test_candidate_widths_examples():
    assert candidate_widths(MinimizerSet(1, frozenset({25})), 16) == {384}
    assert candidate_widths(MinimizerSet(4, frozenset({5})), 8) == {8}
    assert candidate_widths(MinimizerSet(2, frozenset({6, 10})), 8) == {32, 64}


# -- estimate_width ----------------------------------------------------------

def test_constant_sequence_counting():
    n, k_px = 12, 8
    row = np.full((n, k_px, 1), 100, np.uint8)
    seq = make_seq(row, row, k_px, 1)
    rep = estimate_width(seq)
    assert rep.estimated_width == k_px
    assert rep.mode_frequency == n - 1
    assert not rep.tie_broken
    for width, freq in zip(rep.histogram.widths, rep.histogram.freqs):
        m = width // k_px
        assert freq == n - m
    assert rep.histogram.total_votes == sum(n - i for i in range(1, n))


def test_needs_two_mcus():
    row = np.zeros((1, 8, 1), np.uint8)
    with pytest.raises(EmptyScan):
        estimate_width(make_seq(row, row, 8, 1))


def test_deliberate_tie_resolves_to_smallest():
    A = np.full((8, 1), 10, np.uint8)
    B = np.full((8, 1), 200, np.uint8)
    C = np.full((8, 1), 90, np.uint8)
    # bottoms of 1 and 2 both exactly match top of 3
    tops = np.stack([A, C, B])
    bottoms = np.stack([B, B, A])
    rep = estimate_width(make_seq(tops, bottoms, 8, 1))
    assert rep.tie_broken
    assert rep.estimated_width == 8
    assert rep.mode_frequency == 1


def test_brute_force_equivalence_quick():
    rng = np.random.default_rng(1234)
    for _ in range(30):
        n = int(rng.integers(2, 21))
        k_px = int(rng.choice([8, 16]))
        n_comp = int(rng.choice([1, 3]))
        seq = random_seq(rng, n, k_px, n_comp)
        rep = estimate_width(seq)
        widths, freqs, w_star, tie = brute_force_estimate(
            seq.tops.tolist(), seq.bottoms.tolist(), k_px)
        assert rep.histogram.widths.tolist() == widths
        assert rep.histogram.freqs.tolist() == freqs
        assert rep.estimated_width == w_star
        assert rep.tie_broken == tie


def test_result_width_is_multiple_of_k():
    rng = np.random.default_rng(77)
    for k_px in (8, 16):
        seq = random_seq(rng, 15, k_px, 3)
        rep = estimate_width(seq)
        assert rep.estimated_width % k_px == 0
        assert 1 <= rep.estimated_width // k_px <= seq.n - 1
        assert rep.histogram.total_votes >= seq.n - 1


def test_estimate_deterministic():
    rng = np.random.default_rng(5)
    seq = random_seq(rng, 25, 16, 3)
    a = estimate_width(seq)
    b = estimate_width(seq)
    assert a.histogram.widths.tolist() == b.histogram.widths.tolist()
    assert a.histogram.freqs.tolist() == b.histogram.freqs.tolist()
    assert a.estimated_width == b.estimated_width


def test_scaling_argmax_invariance_power_of_two():
    # doubling every sample is an exact float scaling, so the whole
    # histogram must be identical
    rng = np.random.default_rng(6)
    tops = rng.integers(0, 64, (20, 8, 3)).astype(np.float64)
    bottoms = rng.integers(0, 64, (20, 8, 3)).astype(np.float64)

    def run(scale):
        seq = McuSequence(tops * scale, bottoms * scale, 8, 3)
        return estimate_width(seq)

    base = run(1.0)
    for scale in (2.0, 4.0, 0.5):
        rep = run(scale)
        assert rep.histogram.widths.tolist() == base.histogram.widths.tolist()
        assert rep.histogram.freqs.tolist() == base.histogram.freqs.tolist()
        assert rep.estimated_width == base.estimated_width


def test_max_width_cap():
    rng = np.random.default_rng(8)
    seq = random_seq(rng, 20, 8, 1)
    capped = estimate_width(seq, max_width=8)   # only lag 1 allowed
    assert capped.estimated_width == 8
    assert capped.mode_frequency == seq.n - 1
    uncapped = estimate_width(seq)
    generous = estimate_width(seq, max_width=8 * (seq.n - 1))
    assert generous.histogram.freqs.tolist() == uncapped.histogram.freqs.tolist()
    with pytest.raises(ValueError):
        estimate_width(seq, max_width=4)


# -- exports -----------------------------------------------------------------

def test_csv_format():
    n, k_px = 6, 8
    row = np.full((n, k_px, 1), 42, np.uint8)
    rep = estimate_width(make_seq(row, row, k_px, 1))
    csv = histogram_to_csv(rep.histogram, rep.n, rep.mcu_width)
    lines = csv.strip().split("\n")
    assert lines[0] == "width,frequency,normalized_frequency"
    first = lines[1].split(",")
    assert first[0] == "8" and first[1] == "5"
    assert float(first[2]) == pytest.approx(1.0)
    assert len(lines) == 1 + len(rep.histogram.widths)


def test_report_json_fields():
    rng = np.random.default_rng(9)
    seq = random_seq(rng, 10, 16, 3)
    rep = estimate_width(seq)
    payload = json.loads(report_to_json(rep))
    assert set(payload) == {"estimated_width", "mode_frequency", "n", "K",
                            "tie_broken", "elapsed_ms", "histogram"}
    assert payload["n"] == 10
    assert payload["K"] == 16
    assert payload["estimated_width"] == rep.estimated_width
    assert all(set(h) == {"width", "frequency"} for h in payload["histogram"])
    total = sum(h["frequency"] for h in payload["histogram"])
    assert total == rep.histogram.total_votes
