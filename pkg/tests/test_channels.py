import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fschannel.channels import (ERASED, GilbertElliotSpec, SlidingWindowSpec, build_bursty,
                                build_gilbert_elliot, build_guard_space, build_no_consecutive,
                                build_noiseless, build_sliding_window_erasure,
                                build_sliding_window_symmetric, family_params, format_word,
                                hamming_ball, output_set, output_union, parse_family, parse_word,
                                transfer, transmit)
from fschannel.errors import NoSuchNoiseEdge
from fschannel.graph import Kind, enumerate_noise_sequences, maximal_ratio, validate

from conftest import example_machines, machines
from oracles import hamming_volume


def named_edges(m):
    return sorted((m.names[a], m.names[b], v) for a, b, v in m.edges)


# Golden edge sets, read off the figures.
FIG4 = sorted([("ooo", "ooo", 0), ("ooo", "oo*", 1), ("oo*", "o*o", 0), ("o*o", "*oo", 0),
               ("*oo", "ooo", 0), ("*oo", "oo*", 1)])
FIG5 = sorted([("ooo", "ooo", 0), ("ooo", "oo1", 1), ("ooo", "oo2", 2),
               ("oo1", "o1o", 0), ("o1o", "1oo", 0), ("oo2", "o2o", 0), ("o2o", "2oo", 0),
               ("1oo", "ooo", 0), ("1oo", "oo1", 1), ("1oo", "oo2", 2),
               ("2oo", "ooo", 0), ("2oo", "oo1", 1), ("2oo", "oo2", 2)])
FIG6A = sorted([("ooo", "ooo", 0), ("ooo", "oo*", 1), ("oo*", "o**", 1), ("oo*", "o*o", 0),
                ("o**", "**o", 0), ("**o", "*oo", 0), ("o*o", "*oo", 0), ("*oo", "ooo", 0)])
FIG6B = sorted([("idle", "idle", 0), ("idle", "e1", 1), ("e1", "e2", 1), ("e1", "g1", 0),
                ("e2", "g1", 0), ("g1", "g2", 0), ("g2", "g3", 0), ("g3", "idle", 0)])
FIG6C = sorted([("oooo", "oooo", 0), ("oooo", "ooo*", 1), ("ooo*", "oo**", 1),
                ("ooo*", "oo*o", 0), ("oo**", "o***", 1), ("oo**", "o**o", 0),
                ("oo*o", "o*oo", 0), ("o***", "***o", 0), ("o**o", "**oo", 0),
                ("o*oo", "*ooo", 0), ("***o", "**oo", 0), ("**oo", "*ooo", 0),
                ("*ooo", "oooo", 0), ("*ooo", "ooo*", 1)])


def test_fig4_graph():
    m = build_sliding_window_erasure(SlidingWindowSpec(3, 1, 2))
    assert m.num_states == 4 and len(m.edges) == 6
    assert named_edges(m) == FIG4
    assert maximal_ratio(m).tau == Fraction(1, 3)


def test_fig5_graph():
    m = build_sliding_window_symmetric(SlidingWindowSpec(3, 1, 3))
    assert m.kind is Kind.ADDITIVE and m.num_states == 7
    assert named_edges(m) == FIG5


def test_fig6_graphs():
    a = build_bursty(3, 2)
    assert a.num_states == 6 and named_edges(a) == FIG6A
    assert maximal_ratio(a).tau == Fraction(2, 5)
    b = build_guard_space(2, 4)
    assert b.num_states == 6 and named_edges(b) == FIG6B
    c = build_gilbert_elliot(GilbertElliotSpec(1, 3, 4))
    assert c.num_states == 10 and named_edges(c) == FIG6C
    # burst of three then three clear uses; see the decisions ledger
    assert maximal_ratio(c).tau == Fraction(1, 2)


def test_guard_space_examples():
    m = build_guard_space(2, 3)
    assert m.num_states == 5
    assert maximal_ratio(m).tau == Fraction(2, 5)
    fig2 = build_no_consecutive(2)
    g11 = build_guard_space(1, 1)
    assert g11.edges == fig2.edges and g11.num_states == 2
    additive = build_guard_space(1, 1, 3, Kind.ADDITIVE)
    assert additive.kind is Kind.ADDITIVE
    with pytest.raises(ValueError):
        build_guard_space(0, 1)


def test_trivial_builds():
    for m in (build_sliding_window_erasure(SlidingWindowSpec(4, 0)),
              build_sliding_window_symmetric(SlidingWindowSpec(2, 0, 5)),
              build_bursty(3, 0), build_gilbert_elliot(GilbertElliotSpec(0, 0, 3)),
              build_noiseless(3)):
        assert m.num_states == 1 and m.edges == ((0, 0, 0),)
    assert build_sliding_window_symmetric(SlidingWindowSpec(3, 1, 2)).num_states == 4


def test_spec_validation():
    with pytest.raises(ValueError):
        SlidingWindowSpec(3, 4)
    with pytest.raises(ValueError):
        GilbertElliotSpec(2, 1, 4)
    with pytest.raises(ValueError):
        build_bursty(3, 3)


@pytest.mark.parametrize("w", range(1, 8))
def test_sliding_window_state_counts(w):
    for d in range(w + 1):
        m = build_sliding_window_erasure(SlidingWindowSpec(w, d))
        assert m.num_states == hamming_volume(w, d, 2) == hamming_ball(w, d, 2)
        assert maximal_ratio(m).tau == Fraction(d, w)
        for q in range(2, 6):
            if hamming_volume(w, d, q) > 5000:
                continue  # the larger symmetric machines are covered by the slow check below
            sym = build_sliding_window_symmetric(SlidingWindowSpec(w, d, q))
            assert sym.num_states == hamming_volume(w, d, q)


def test_sliding_window_symmetric_counts_large():
    for w, d, q in itertools.product(range(1, 8), range(8), range(2, 6)):
        if d <= w and hamming_volume(w, d, q) > 5000:
            sym = build_sliding_window_symmetric(SlidingWindowSpec(w, d, q))
            assert sym.num_states == hamming_volume(w, d, q)


WINDOW_CASES = [(w, d) for w in range(1, 6) for d in range(w + 1)]


@pytest.mark.parametrize("w,d", WINDOW_CASES)
def test_window_property(w, d):
    for m in (build_sliding_window_erasure(SlidingWindowSpec(w, d)),
              build_sliding_window_symmetric(SlidingWindowSpec(w, d, 2))):
        n = min(12, 2 * w + 4)
        for s0 in range(m.num_states):
            for seq in enumerate_noise_sequences(m, s0, n):
                for i in range(n - w + 1):
                    assert sum(1 for v in seq[i:i + w] if v) <= d


def test_bursty_and_ge_window_shapes():
    for seq in enumerate_noise_sequences(build_bursty(3, 2), 0, 12):
        for i in range(10):
            win = seq[i:i + 3]
            marks = [j for j, v in enumerate(win) if v]
            assert len(marks) <= 2
            assert not marks or marks == list(range(marks[0], marks[-1] + 1))
    for seq in enumerate_noise_sequences(build_gilbert_elliot(GilbertElliotSpec(1, 3, 4)), 0, 12):
        for i in range(9):
            win = seq[i:i + 4]
            marks = [j for j, v in enumerate(win) if v]
            burst = marks == list(range(marks[0], marks[-1] + 1)) if marks else True
            assert len(marks) <= 1 or (burst and len(marks) <= 3)


@pytest.mark.parametrize("machine", example_machines(), ids=lambda m: m.family)
def test_builders_validate(machine):
    assert validate(machine) is machine


# ---------------------------------------------------------------- transfer

def test_transfer_examples(fig2, fig5):
    assert transfer(fig2, 0, 1, 1) == (ERASED, 1)
    assert transfer(fig2, 0, 1, 0) == (1, 0)
    assert transfer(fig5, 0, 2, 0) == (2, 0)
    y, _ = transfer(fig5, 0, 2, 2)
    assert y == 1


def test_transfer_errors(fig2):
    with pytest.raises(NoSuchNoiseEdge):
        transfer(fig2, 1, 0, 1)
    with pytest.raises(ValueError):
        transfer(fig2, 0, 2, 0)
    with pytest.raises(ValueError):
        transmit(fig2, 0, (0, 1), (0,))


def test_output_set_examples(fig2, fig4, noiseless):
    assert output_set(fig2, 0, (0, 0)) == {(0, 0), (0, ERASED), (ERASED, 0)}
    assert output_set(noiseless, 0, (1, 0, 1)) == {(1, 0, 1)}
    assert output_set(fig4, 1, (1, 1)) == {(1, 1)}


@given(machines(max_states=4), st.data())
def test_output_set_bijection(m, data):
    n = data.draw(st.integers(0, 5))
    s0 = data.draw(st.integers(0, m.num_states - 1))
    size = len(enumerate_noise_sequences(m, s0, n))
    for word in itertools.islice(itertools.product(range(m.q), repeat=n), 12):
        assert len(output_set(m, s0, word)) == size


def test_output_union_covers_all_states(fig4):
    word = (0, 1, 1)
    union = output_union(fig4, word)
    for s0 in range(4):
        assert output_set(fig4, s0, word) <= union


# ---------------------------------------------------------------- strings

def test_word_format_round_trip():
    assert format_word((0, ERASED, 1)) == "0*1"
    assert parse_word("0*1") == (0, ERASED, 1)


@pytest.mark.parametrize("text,states", [
    ("sw-erasure:w=3,d=1,q=2", 4), ("sw-symmetric:w=3,d=1,q=3", 7), ("bursty:w=3,d=2,q=2", 6),
    ("guard:b=2,g=3,q=2", 5), ("ge:N=1,B=3,W=4,q=2", 10), ("noiseless:q=2", 1),
    ("no-consecutive", 2), ("guard:b=1,g=1,kind=additive", 2)])
def test_parse_family(text, states):
    m = parse_family(text)
    assert m.num_states == states
    assert parse_family(m.family) == m


@pytest.mark.parametrize("text", ["", "sw-erasure", "sw-erasure:w=3", "foo:w=1",
                                  "sw-erasure:w=3,d=1,z=2", "sw-erasure:w=3,w=3,d=1",
                                  "sw-erasure:w=x,d=1", "guard:b=1,g=1,kind=bogus"])
def test_parse_family_rejects(text):
    with pytest.raises(ValueError):
        parse_family(text)


def test_family_params():
    assert family_params("sw-erasure:w=3,d=1,q=2") == ("sw-erasure", {"w": "3", "d": "1", "q": "2"})
    assert family_params(None) == (None, {})
