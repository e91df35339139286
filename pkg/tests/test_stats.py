import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats as sps

from balancemkt.fluctuations import truncated_normal
from balancemkt.rng import RngStream
from balancemkt.stats import (EmptySampleError, freedman_diaconis_edges, histogram, histogram_mode, skewness,
                              summarize, tail_prob)


def test_summarize_symmetric():
    b = summarize([1, 2, 3, 4, 5])
    assert (b.median, b.q1, b.q3) == (3, 2, 4)
    assert b.outliers == () and (b.whisker_low, b.whisker_high) == (1, 5)


def test_summarize_flags_outlier_with_zero_iqr():
    b = summarize([1, 1, 1, 1, 100])
    assert b.iqr == 0 and b.outliers == (100.0,)
    assert b.whisker_high == 1


def test_summarize_constant():
    b = summarize([7.0] * 6)
    assert b.q1 == b.q3 == b.median == 7 and b.outliers == ()


def test_empty_inputs():
    for f in (summarize, histogram, skewness, lambda x: tail_prob(x, 0.0)):
        with pytest.raises(EmptySampleError):
            f([])


def test_histogram_examples():
    h = histogram([0.5, 1.5], np.array([0.0, 1.0, 2.0]))
    np.testing.assert_array_equal(h.frequencies, [0.5, 0.5])
    h = histogram([0.2, 0.3, 0.4], np.array([0.0, 1.0, 2.0]))
    np.testing.assert_array_equal(h.frequencies, [1.0, 0.0])


def test_histogram_edge_convention():
    h = histogram([1.0, 2.0], np.array([0.0, 1.0, 2.0]))
    # inner edge goes right, the last edge stays in the closed last bin
    np.testing.assert_array_equal(h.frequencies, [0.0, 1.0])


def test_histogram_width_and_bad_bins():
    h = histogram([0.1, 0.2, 0.35], 0.1)
    assert abs(h.frequencies.sum() - 1) < 1e-12
    assert np.allclose(np.diff(h.edges), 0.1)
    with pytest.raises(ValueError):
        histogram([1.0], 0.0)
    with pytest.raises(ValueError):
        histogram([1.0], np.array([1.0, 1.0]))


def test_histogram_normalisation_large_sample():
    x = truncated_normal(10.0, 2.0, 0.0, 20.0, RngStream(1), 10_000)
    h = histogram(x)
    assert abs(h.frequencies.sum() - 1.0) < 1e-12
    assert np.all(np.diff(h.edges) > 0) and np.all(h.frequencies >= 0)


def test_tail_prob_examples():
    assert tail_prob([1, 2, 3], 0.0) == 1.0
    assert tail_prob([1, 2, 3], 5.0) == 0.0
    assert tail_prob([1, 2, 3, 4], 2.5) == 0.5
    assert tail_prob([1, 2, 3], 3.0) == 0.0


def test_skewness_examples():
    assert skewness([-1, 0, 1]) == 0.0
    assert skewness([0, 0, 0, 10]) > 0
    x = np.random.default_rng(3).exponential(1.0, 100_000)
    assert abs(skewness(x) - 2.0) < 0.1
    with pytest.raises(ValueError):
        skewness([1.0, 1.0, 1.0])
    with pytest.raises(ValueError):
        skewness([1.0, 2.0])


def test_mode_of_histogram():
    assert histogram_mode([0.1, 0.2, 0.25, 0.9], np.array([0.0, 0.5, 1.0])) == 0.25


def test_freedman_diaconis_degenerate():
    np.testing.assert_array_equal(freedman_diaconis_edges([3.0, 3.0]), [2.5, 3.5])
    e = freedman_diaconis_edges([0.0, 0.0, 0.0, 0.0, 1.0])
    assert e[0] == 0.0 and e[-1] == 1.0


def _reference_box(x):
    q1, med, q3 = np.percentile(x, [25, 50, 75])
    iqr = q3 - q1
    inside = x[(x >= q1 - 1.5 * iqr) & (x <= q3 + 1.5 * iqr)]
    out = np.sort(x[(x < q1 - 1.5 * iqr) | (x > q3 + 1.5 * iqr)])
    return q1, med, q3, inside.min(), inside.max(), out


def test_cross_check_against_numpy_scipy():
    rng = np.random.default_rng(99)
    for k in range(100):
        n = int(rng.integers(3, 400))
        x = rng.choice([rng.normal(size=n), rng.exponential(size=n), rng.standard_t(2, size=n),
                        rng.integers(0, 5, size=n).astype(float)])
        b = summarize(x)
        q1, med, q3, lo, hi, out = _reference_box(x)
        assert (b.q1, b.median, b.q3) == pytest.approx((q1, med, q3), rel=1e-12, abs=1e-12)
        assert (b.whisker_low, b.whisker_high) == (lo, hi)
        np.testing.assert_array_equal(np.sort(b.outliers), out)
        if np.var(x) > 0:
            assert skewness(x) == pytest.approx(sps.skew(x, bias=True), rel=1e-9, abs=1e-12)
        edges = np.linspace(x.min() - 0.5, x.max() + 0.5, int(rng.integers(2, 30)))
        counts, _ = np.histogram(x, edges)
        np.testing.assert_allclose(histogram(x, edges).frequencies, counts / n, rtol=0, atol=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=200))
def test_summary_invariants(values):
    b = summarize(values)
    assert b.q1 <= b.median <= b.q3
    assert min(values) <= b.whisker_low <= b.whisker_high <= max(values)
    h = histogram(values)
    assert abs(h.frequencies.sum() - 1.0) < 1e-12
    assert np.all(np.diff(h.edges) > 0)
