import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fschannel.capacity import (bounds_additive, bounds_erasure, c0f_erasure_dp, c0f_exact,
                                format_report, format_value, lifted_block_confusability,
                                max_erasures, report, shannon_uniform_lower, sw_erasure_lower,
                                sw_symmetric_bounds)
from fschannel.channels import (SlidingWindowSpec, build_guard_space, build_no_consecutive,
                                build_noiseless, build_sliding_window_erasure,
                                build_sliding_window_symmetric)
from fschannel.errors import KindMismatch
from fschannel.graph import Kind, adjacency, maximal_ratio, topological_entropy

from conftest import example_machines, machines
from oracles import hamming_volume, max_errors_bruteforce


def sw(w, d, q=2):
    return build_sliding_window_erasure(SlidingWindowSpec(w, d, q))


# ---------------------------------------------------------------- feedback capacity

@pytest.mark.parametrize("w,d", [(3, 1), (5, 2), (7, 3)])
def test_c0f_sliding_window(w, d):
    m = sw(w, d)
    assert c0f_exact(m) == 1 - Fraction(d, w)
    assert abs(c0f_erasure_dp(m, 3000) - (1 - d / w)) < 1e-3


def test_c0f_examples(fig2, noiseless):
    assert c0f_exact(noiseless) == 1
    for k in (1, 7, 100):
        assert c0f_erasure_dp(noiseless, k) == 1.0
    assert c0f_exact(fig2) == Fraction(1, 2)
    assert abs(c0f_erasure_dp(fig2, 3000) - 0.5) < 1e-3
    assert c0f_exact(build_guard_space(2, 3)) == Fraction(3, 5)


def test_kind_checks(fig5):
    with pytest.raises(KindMismatch):
        c0f_exact(fig5)
    with pytest.raises(KindMismatch):
        bounds_erasure(fig5)
    with pytest.raises(KindMismatch):
        bounds_additive(sw(3, 1))
    with pytest.raises(TypeError):
        c0f_erasure_dp(fig5, 10)
    with pytest.raises(ValueError):
        c0f_erasure_dp(sw(3, 1), 0)


@given(machines(kinds=(Kind.ERASURE,)), st.sampled_from([10, 50, 200, 1000]))
def test_dp_envelope(m, k):
    stats = maximal_ratio(m)
    envelope = (stats.length + 2 * m.num_states) / k
    assert abs(c0f_erasure_dp(m, k) - float(1 - stats.tau)) <= envelope + 1e-12


# ---------------------------------------------------------------- erasure counts

def test_max_erasures_examples(fig2, fig4, noiseless):
    assert max_erasures(fig4, 0, 9) == 3
    assert max_erasures(noiseless, 0, 20) == 0
    assert max_erasures(fig2, 0, 6) == 3


@given(machines(max_states=12, kinds=(Kind.ERASURE,), qs=(2,)), st.integers(0, 14))
def test_erasure_count_sandwich(m, n):
    stats = maximal_ratio(m)
    size = m.num_states
    for s0 in range(size):
        e = max_erasures(m, s0, n)
        assert stats.tau * n - stats.length - size < e <= stats.tau * n + size


@pytest.mark.parametrize("machine", example_machines(), ids=lambda m: m.family)
def test_erasure_count_dp_vs_walks(machine):
    for s0 in range(machine.num_states):
        for n in (0, 1, 5, 9):
            assert max_erasures(machine, s0, n) == max_errors_bruteforce(machine, s0, n)


# ---------------------------------------------------------------- closed forms

def test_bounds_erasure_examples(fig2, noiseless):
    lo, hi = bounds_erasure(sw(3, 1))
    assert hi == Fraction(2, 3)
    assert lo == pytest.approx(2 / 3 - 0.5515, abs=1e-4)
    assert bounds_erasure(noiseless) == (1.0, 1)
    lo, hi = bounds_erasure(fig2)
    assert lo == 0.0 and hi == Fraction(1, 2)


def test_bounds_additive_examples(fig5):
    assert bounds_additive(build_noiseless(2, Kind.ADDITIVE)) == (1.0, 1.0)
    lo, hi = bounds_additive(build_no_consecutive(2, Kind.ADDITIVE))
    assert lo == 0.0 and hi == pytest.approx(0.3058, abs=1e-4)
    lam = max(abs(np.linalg.eigvals(adjacency(fig5).astype(float))))
    h = math.log(lam, 3)
    lo, hi = bounds_additive(fig5)
    assert lo == pytest.approx(max(0.0, 1 - 2 * h), abs=1e-9)
    assert hi == pytest.approx(1 - h, abs=1e-9)


@given(machines())
def test_bounds_ordered(m):
    h = topological_entropy(m)
    if m.kind is Kind.ERASURE:
        lo, hi = bounds_erasure(m)
        # lo is a float; float(4/5) sits just above Fraction(4, 5), so compare as floats
        assert 0 <= lo <= float(hi) <= 1
        # equal exactly when the walk entropy vanishes, or the upper bound is already 0
        assert (lo == float(hi)) == (h < 1e-12 or hi == 0)
    else:
        lo, hi = bounds_additive(m)
        assert 0 <= lo <= hi <= 1


def test_sw_erasure_lower_examples():
    assert sw_erasure_lower(SlidingWindowSpec(3, 1)) == pytest.approx(1 / 3, abs=1e-15)
    assert sw_erasure_lower(SlidingWindowSpec(5, 0)) == 1.0
    assert sw_erasure_lower(SlidingWindowSpec(7, 3)) == pytest.approx(1 / 7, abs=1e-15)
    assert hamming_volume(7, 3, 2) == 64


@pytest.mark.parametrize("w", range(1, 8))
def test_sw_erasure_lower_below_upper(w):
    for d in range(w + 1):
        spec = SlidingWindowSpec(w, d)
        assert sw_erasure_lower(spec) <= float(bounds_erasure(sw(w, d))[1]) + 1e-12


def test_sw_symmetric_examples():
    lo, hi = sw_symmetric_bounds(SlidingWindowSpec(3, 1, 3))
    assert lo == pytest.approx(1 - math.log(19, 3) / 3, abs=1e-12)
    assert lo == pytest.approx(0.1066, abs=1e-4)
    assert hi == pytest.approx(1 - math.log(2, 3) / 3, abs=1e-12)
    assert hi == pytest.approx(0.7897, abs=1e-4)
    for q in (2, 3, 5):
        assert sw_symmetric_bounds(SlidingWindowSpec(2, 1, q)) == (0.0, 0.0)
        assert sw_symmetric_bounds(SlidingWindowSpec(4, 0, q)) == (1.0, 1.0)


@given(st.integers(1, 9), st.integers(0, 9), st.integers(2, 6))
def test_sw_symmetric_zero_case(w, d, q):
    d = min(d, w)
    lo, hi = sw_symmetric_bounds(SlidingWindowSpec(w, d, q))
    assert ((lo, hi) == (0.0, 0.0)) == (2 * d >= w)
    assert 0 <= lo <= hi <= 1


def test_shannon_bound_examples():
    for m in (1, 2, 7):
        assert shannon_uniform_lower(np.eye(m), 2) == pytest.approx(math.log2(m), abs=1e-12)
    assert shannon_uniform_lower(np.ones((5, 5)), 2) == 0.0
    adj = lifted_block_confusability(SlidingWindowSpec(3, 1))
    assert adj.sum(axis=1).tolist() == [4] * 8
    assert shannon_uniform_lower(adj, 2) / 3 == pytest.approx(1 / 3, abs=1e-12)


def test_shannon_bound_rejects():
    with pytest.raises(ValueError):
        shannon_uniform_lower(np.array([[1, 1], [0, 1]]), 2)
    with pytest.raises(ValueError):
        shannon_uniform_lower(np.zeros((2, 2)), 2)
    with pytest.raises(ValueError):
        shannon_uniform_lower(np.ones((2, 3)), 2)


LIFT_CASES = [(w, d, 2) for w in range(1, 6) for d in range(w + 1)] + \
    [(w, d, 3) for w in range(1, 4) for d in range(w + 1)]


@pytest.mark.parametrize("w,d,q", LIFT_CASES)
def test_lifted_shannon_matches_closed_form(w, d, q):
    spec = SlidingWindowSpec(w, d, q)
    erasure = lifted_block_confusability(spec, Kind.ERASURE)
    assert shannon_uniform_lower(erasure, q) / w == pytest.approx(sw_erasure_lower(spec),
                                                                   abs=1e-12)
    additive = lifted_block_confusability(spec, Kind.ADDITIVE)
    assert max(0.0, shannon_uniform_lower(additive, q) / w) == pytest.approx(
        sw_symmetric_bounds(spec)[0] if 2 * d < w else 0.0, abs=1e-12)


# ---------------------------------------------------------------- reports

def test_report_sw31():
    rep = report(sw(3, 1))
    assert rep.tau == Fraction(1, 3) and rep.c0f == Fraction(2, 3)
    assert rep.c0_upper == Fraction(2, 3)
    assert rep.c0_lower == pytest.approx(0.1152, abs=1e-4)
    assert rep.extras["sw_lower"] == pytest.approx(1 / 3)
    assert rep.best_lower() == pytest.approx(1 / 3)


def test_report_noiseless_and_sw73(noiseless):
    rep = report(noiseless)
    assert rep.tau == 0 and rep.c0f == 1 and rep.c0_lower == 1.0 and rep.c0_upper == 1
    rep = report(sw(7, 3))
    assert rep.c0_upper == Fraction(4, 7)
    assert rep.extras["sw_lower"] == pytest.approx(1 / 7)


def test_report_with_bruteforce():
    rep = report(sw(3, 1), bruteforce_n=3)
    assert rep.bruteforce_rate == pytest.approx(2 / 3)
    assert rep.best_lower() == pytest.approx(2 / 3)
    text = format_report(rep)
    assert "c0f = 2/3 = 0.666666666667 (1 - tau)" in text
    assert "bruteforce_rate = 0.666666666667 (brute-force, n <= 3)" in text
    assert "tau = 1/3 = 0.333333333333 (max cycle ratio)" in text
    # every printed line names where the number came from
    for line in text.splitlines():
        assert line.endswith(")") and "(None)" not in line


def test_report_symmetric_zero_case():
    rep = report(build_sliding_window_symmetric(SlidingWindowSpec(2, 1, 2)))
    assert rep.extras["sw_upper"] == 0.0
    assert rep.method_tags["sw_upper"] == "2d >= w"
    assert rep.best_upper() == 0.0


def test_format_value():
    assert format_value(Fraction(2, 3)) == "2/3 = 0.666666666667"
    assert format_value(Fraction(1)) == "1"
    assert format_value(0.5) == "0.5"
    assert format_value(0.5, q=4, rate=True) == "0.5 [1 bits/use]"
