import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from powerlife.rainflow import PEAK, VALLEY, CycleTable, Extrema, count_cycles, find_extrema, rainflow, turning_points
from rainflow_oracle import brute_rainflow, reversals

ASTM = [-2, 1, -3, 5, -1, 3, -4, 4, -2]


def multiset(table):
    return sorted(zip(np.round(table.dtj, 9).tolist(), table.count.tolist()))


def seq_extrema(values):
    v = np.asarray(values, dtype=float)
    return Extrema(np.arange(v.size, dtype=float), v)


def test_monotone_series_has_two_extrema():
    e = find_extrema(np.linspace(20, 80, 50))
    assert list(e.value) == [20, 80]
    assert list(e.kinds) == [VALLEY, PEAK]


@pytest.mark.parametrize("n", [1, 3, 10])
def test_cosine_extrema_count(n):
    t = np.linspace(0, n, 400 * n + 1)
    e = find_extrema(50 + 10 * np.cos(2 * np.pi * t), t)
    assert len(e) == 2 * n + 1
    assert np.all(np.diff(e.kinds) != 0)


def test_ripple_removed_by_hysteresis():
    t = np.linspace(0, 20, 20001)
    macro = np.interp(t, [0, 10, 20], [40, 60, 40])
    noisy = macro + 0.1 * np.sin(2 * np.pi * 7 * t)  # 0.2 K peak-to-peak
    e = find_extrema(noisy, t, hysteresis=0.5)
    assert len(e) == 3
    np.testing.assert_allclose(e.value, [40, 60, 40], atol=0.11)
    assert len(find_extrema(noisy, t, hysteresis=0.0)) > 100


def test_hysteresis_must_be_non_negative():
    with pytest.raises(ValueError):
        find_extrema([1.0, 2.0], hysteresis=-1)


def test_turning_points_plateaus():
    assert list(turning_points(np.array([1, 1, 2, 2, 2, 1, 1, 3]))) == [0, 2, 5, 7]
    assert list(turning_points(np.full(5, 3.0))) == [0]


def test_triangle_wave_is_one_cycle():
    tab = rainflow([40, 50, 60, 50, 40], hysteresis=0)
    # an open valley-peak-valley is residue: two halves worth one cycle
    assert list(tab.count) == [0.5, 0.5]
    assert tab.total_count == 1.0
    assert all(c.dtj == 20 and c.tjmax == 60 and c.tjm == 50 for c in tab)


def test_closed_triangle_counts_one_full_cycle():
    tab = rainflow([40, 60, 40, 60, 30], hysteresis=0)
    full = [c for c in tab if c.count == 1.0]
    assert len(full) == 1
    assert (full[0].dtj, full[0].tjmax, full[0].tjm) == (20, 60, 50)


def test_astm_sequence_by_hand_and_oracle():
    tab = count_cycles(seq_extrema(ASTM))
    hand = sorted([(4.0, 1.0)] + [(float(r), 0.5) for r in (3, 4, 8, 9, 8, 6)])
    assert multiset(tab) == hand
    assert multiset(tab) == [(float(r), c) for r, c in brute_rainflow(ASTM)]
    full = [c for c in tab if c.count == 1.0][0]
    assert full.ton == 1.0 and full.tjmax == 3 and full.tjm == 1


def test_constant_series_is_empty():
    assert len(rainflow(np.full(100, 55.0))) == 0
    assert len(rainflow(np.array([]))) == 0


def test_table_helpers(tmp_path):
    tab = count_cycles(seq_extrema(ASTM), label="x")
    both = CycleTable.concatenate([tab, tab])
    assert both.total_count == 2 * tab.total_count
    counts, _ = tab.histogram([0, 5, 10])
    assert counts.sum() == tab.total_count
    tab.to_csv(tmp_path / "c.csv")
    lines = (tmp_path / "c.csv").read_text().splitlines()
    assert lines[0] == "dTj_K,Tjmax_C,Tjm_C,ton_s,count"
    assert len(lines) == len(tab) + 1
    assert CycleTable.concatenate([]).total_count == 0


@st.composite
def reversal_sequences(draw, min_size=2, max_size=60):
    n = draw(st.integers(min_size, max_size))
    steps = draw(st.lists(st.integers(1, 40), min_size=n - 1, max_size=n - 1))
    start = draw(st.integers(-50, 50))
    sign = draw(st.sampled_from([1, -1]))
    v = [start]
    for k, s in enumerate(steps):
        v.append(v[-1] + sign * (-1) ** k * s)
    return v


@settings(max_examples=300)
@given(reversal_sequences())
def test_matches_oracle_and_conserves(seq):
    tab = count_cycles(seq_extrema(seq))
    assert multiset(tab) == [(float(r), c) for r, c in brute_rainflow(seq)]
    assert abs(tab.total_count - (len(seq) - 1) / 2) <= 0.5
    assert set(tab.count.tolist()) <= {0.5, 1.0}
    assert np.all(tab.tjmax >= tab.tjm)


@settings(max_examples=200)
@given(st.lists(st.integers(-30, 30), min_size=1, max_size=80))
def test_raw_series_reduces_like_oracle(raw):
    tab = rainflow(np.asarray(raw, dtype=float), hysteresis=0)
    assert multiset(tab) == [(float(r), c) for r, c in brute_rainflow(reversals(raw))]


@given(reversal_sequences(min_size=2), st.floats(-100, 100), st.floats(-1e3, 1e3))
def test_offset_and_time_shift(seq, c, shift):
    v = np.asarray(seq, dtype=float)
    t = np.arange(v.size, dtype=float) * 0.5
    base = rainflow(v, t, hysteresis=0)
    moved = rainflow(v + c, t + shift, hysteresis=0)
    np.testing.assert_allclose(moved.dtj, base.dtj, atol=1e-9)
    np.testing.assert_allclose(moved.tjmax, base.tjmax + c, atol=1e-9)
    np.testing.assert_allclose(moved.tjm, base.tjm + c, atol=1e-9)
    np.testing.assert_allclose(moved.ton, base.ton, atol=1e-6)
    np.testing.assert_array_equal(moved.count, base.count)


@given(reversal_sequences(min_size=2))
def test_amplitude_bound(seq):
    tab = count_cycles(seq_extrema(seq))
    assert tab.dtj.max() == max(seq) - min(seq)


@given(st.lists(st.floats(0, 100, allow_subnormal=False), min_size=2, max_size=200), st.floats(0, 5))
def test_extrema_alternate_and_respect_gate(values, h):
    e = find_extrema(np.asarray(values), hysteresis=h)
    d = np.diff(e.value)
    assert np.all(d != 0)
    assert np.all(np.sign(d[1:]) != np.sign(d[:-1]))
    if len(e) > 2:
        assert np.all(np.abs(d[:-1]) >= h)
