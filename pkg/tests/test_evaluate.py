import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcuwidth import (
    EmptyCorpus,
    InvalidRange,
    estimate_bytes,
    evaluate_corpus,
    generate_synthetic_corpus,
    is_correct_estimate,
    parse_stream,
    summary_to_json,
    summary_to_table,
    width_target,
)


# -- correctness criterion ----------------------------------------------------

def test_criterion_anchors():
    assert is_correct_estimate(384, 375, 16)
    assert is_correct_estimate(512, 512, 8)
    assert is_correct_estimate(504, 500, 8)
    assert not is_correct_estimate(500, 500, 8)
    assert not is_correct_estimate(368, 375, 16)


def test_criterion_validates_inputs():
    with pytest.raises(ValueError):
        is_correct_estimate(0, 100, 8)
    with pytest.raises(ValueError):
        is_correct_estimate(100, -5, 8)
    with pytest.raises(ValueError):
        is_correct_estimate(100, 100, 12)


@given(st.integers(1, 10000), st.sampled_from([8, 16]))
def test_target_is_unique_multiple(w_true, k_px):
    target = width_target(w_true, k_px)
    assert target % k_px == 0
    assert 0 <= target - w_true <= k_px - 1
    assert target == math.ceil(w_true / k_px) * k_px
    # the only accepted value among nearby multiples of K
    accepted = [m for m in range(k_px, w_true + 2 * k_px, k_px)
                if is_correct_estimate(m, w_true, k_px)]
    assert accepted == [target]


# -- synthetic corpus ---------------------------------------------------------

def test_generator_is_deterministic(tmp_path):
    a = generate_synthetic_corpus(tmp_path / "a", 3, seed=11)
    b = generate_synthetic_corpus(tmp_path / "b", 3, seed=11)
    assert [p.name for p in a] == [p.name for p in b]
    for pa, pb in zip(a, b):
        assert pa.read_bytes() == pb.read_bytes()
    c = generate_synthetic_corpus(tmp_path / "c", 3, seed=12)
    assert any(pa.read_bytes() != pc.read_bytes() for pa, pc in zip(a, c))


def test_generator_respects_width_range(tmp_path):
    paths = generate_synthetic_corpus(tmp_path, 6, width_range=(174, 500), seed=3)
    for p in paths:
        w = parse_stream(p.read_bytes()).declared_width
        assert 174 <= w <= 500


def test_generator_rejects_bad_params(tmp_path):
    with pytest.raises(InvalidRange):
        generate_synthetic_corpus(tmp_path, 0, seed=1)
    with pytest.raises(InvalidRange):
        generate_synthetic_corpus(tmp_path, 1, width_range=(500, 174), seed=1)
    with pytest.raises(InvalidRange):
        generate_synthetic_corpus(tmp_path, 1, width_range=(4, 10), seed=1)


# -- corpus evaluation ---------------------------------------------------------

@pytest.fixture(scope="module")
def small_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    return generate_synthetic_corpus(root, 5, width_range=(174, 400), seed=21)


def test_smooth_corpus_all_correct(small_corpus):
    summary = evaluate_corpus(small_corpus)
    assert summary.total == 5
    assert summary.correct == 5
    assert summary.accuracy == 1.0
    for v in summary.verdicts:
        assert v.correct and v.error is None
        assert v.target == width_target(v.w_true, v.mcu_width)


def test_periodic_corpus_fails(tmp_path):
    paths = generate_synthetic_corpus(tmp_path, 2, width_range=(200, 400),
                                      seed=4, periodic=True)
    summary = evaluate_corpus(paths)
    assert summary.correct == 0
    for v in summary.verdicts:
        assert not v.correct
        # failure mode: votes flood the smallest widths, all divisors-of-target
        assert v.w_estimated == v.mcu_width


def test_strip_does_not_change_estimates(small_corpus):
    plain = evaluate_corpus(small_corpus, strip=False)
    stripped = evaluate_corpus(small_corpus, strip=True)
    for a, b in zip(plain.verdicts, stripped.verdicts):
        assert a.w_estimated == b.w_estimated
        assert a.correct == b.correct


def test_decode_failures_count_as_incorrect(tmp_path, small_corpus):
    bad = tmp_path / "broken.jpg"
    bad.write_bytes(b"\xFF\xD8 this is not a real scan")
    summary = evaluate_corpus(list(small_corpus) + [bad])
    assert summary.total == 6
    assert summary.correct == 5
    broken = [v for v in summary.verdicts if v.path.endswith("broken.jpg")]
    assert len(broken) == 1
    assert broken[0].error is not None
    assert not broken[0].correct
    assert summary.accuracy == 5 / 6


def test_accuracy_exact_ratio(small_corpus):
    summary = evaluate_corpus(small_corpus)
    assert summary.accuracy * summary.total == summary.correct


def test_order_insensitive(small_corpus):
    forward = evaluate_corpus(small_corpus)
    backward = evaluate_corpus(list(reversed(small_corpus)))
    assert summary_to_json(forward) == summary_to_json(backward)


def test_empty_corpus():
    with pytest.raises(EmptyCorpus):
        evaluate_corpus([])


def test_report_formats(small_corpus):
    import json

    summary = evaluate_corpus(small_corpus)
    payload = json.loads(summary_to_json(summary))
    assert set(payload) == {"N", "M", "acc", "verdicts"}
    assert payload["N"] == 5 and payload["M"] == 5
    for v in payload["verdicts"]:
        assert set(v) == {"path", "w_true", "K", "w_estimated", "target",
                          "correct", "tie_broken", "error"}
    table = summary_to_table(summary)
    assert "acc(%)" in table
    assert "100.00" in table


def test_estimate_ignores_header_width_field(small_corpus):
    """Same estimate when the header lies about the width entirely."""
    data = small_corpus[0].read_bytes()
    honest = estimate_bytes(data)
    ctx = parse_stream(data)
    from mcuwidth import scan_segments

    segments, _ = scan_segments(data)
    sof = next(s for s in segments if s.marker in (0xFFC0, 0xFFC1))
    lying = bytearray(data)
    lying[sof.offset + 7:sof.offset + 9] = (1999).to_bytes(2, "big")
    assert parse_stream(bytes(lying)).declared_width == 1999
    assert estimate_bytes(bytes(lying)).estimated_width == honest.estimated_width
