import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ucbvi_lab.bonuses import (
    BonusConfig,
    bf_terms,
    bonus_bf,
    bonus_ch,
    bonus_table,
    bprime,
    log_term,
)
from ucbvi_lab.stats import VisitCounts


def cfg(variant, H=5, S=3, A=3, T=100, delta=0.05, L=None):
    return BonusConfig.from_variant(variant, delta=delta, H=H, S=S, A=A, T=T, L=L)


def random_counts(rng, S, A, H, episodes=40):
    c = VisitCounts(S, A, H)
    for _ in range(episodes):
        x = 0
        for h in range(H):
            a, y = int(rng.integers(A)), int(rng.integers(S))
            c.update(x, a, y, h)
            x = y
    return c


def test_log_term_unit_construction():
    # delta = 5HSAT / e^3 forces L = 3; L = 1 would need delta > 1
    assert log_term(1, 1, 1, 1, 5 / math.e**3) == pytest.approx(3.0, abs=1e-12)
    assert log_term(2, 1, 3, 4, 120 / math.e**5) == pytest.approx(5.0, abs=1e-12)
    assert log_term(2, 3, 3, 20, 0.1) == pytest.approx(9.7981270368783017443, abs=1e-12)


def test_log_term_increasing_and_validated():
    vals = [log_term(2, 3, 3, T, 0.1) for T in range(1, 100)]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    for d in (0.0, 1.0, 2.0):
        with pytest.raises(ValueError):
            log_term(2, 3, 3, 20, d)


def test_config_recomputes_L():
    c = cfg("bf-refined", H=4, S=3, A=2, T=400, delta=0.05)
    assert abs(c.L - math.log(5 * 4 * 3 * 2 * 400 / 0.05)) <= 1e-12
    assert cfg("ch-refined").ch_constant == 2 and cfg("ch-original").ch_constant == 7
    assert cfg("bf-refined").bf_constants == (4, 7 / 3, 4, 84**2)
    assert cfg("bf-original").bf_constants == (8, 14 / 3, 8, 100**2)
    with pytest.raises(ValueError):
        cfg("ucb-whatever")


def test_bonus_ch_values():
    c = cfg("ch-refined", H=5, L=1.0)
    assert bonus_ch(0, c) == 10.0
    assert bonus_ch(4, c) == 5.0
    assert bonus_ch(4, c, h=4) == 0.0
    assert bonus_ch(4, c) / bonus_ch(4, cfg("ch-original", H=5, L=1.0)) == pytest.approx(2 / 7, abs=1e-15)


def test_bf_hand_example():
    c = cfg("bf-refined", H=2, S=2, A=1, L=1.0)
    a, b, cc = bf_terms(4, 1.0, [1.0, 0.0], [1, 0], c)
    assert a == pytest.approx(1.0, abs=1e-15)
    assert b == pytest.approx(14 / 9, abs=1e-15)
    assert cc == pytest.approx(2.0, abs=1e-15)  # the b' minimum clips at H^2 = 4
    assert a + b + cc == pytest.approx(41 / 9, abs=1e-14)


def test_bf_zero_at_last_stage():
    rng = np.random.default_rng(1)
    c = cfg("bf-original", H=4)
    counts = random_counts(rng, 3, 3, 4)
    assert bonus_bf(counts, rng.uniform(0, 1, 3), 0, 0, 3, c) == 0.0
    np.testing.assert_array_equal(bonus_table(c, counts, counts.transition_table(), np.zeros(3), 3), 0.0)


def test_bf_variance_term_ratio():
    ref = bf_terms(10, 2.0, [0.5, 0.5], [5, 5], cfg("bf-refined", L=2.0))[0]
    orig = bf_terms(10, 2.0, [0.5, 0.5], [5, 5], cfg("bf-original", L=2.0))[0]
    assert ref / orig == pytest.approx(1 / math.sqrt(2), abs=1e-15)


def test_bprime():
    c = cfg("bf-refined", H=5)
    assert bprime(0, c) == 25.0
    vals = [bprime(n, c) for n in np.logspace(0, 14, 40).astype(np.int64)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert bprime(10**30, c) < 1e-10


def test_term_b_guard_for_small_counts():
    c = cfg("bf-refined", H=3, L=1.0)
    assert bf_terms(0, 0.0, [0, 0, 0], [0, 0, 0], c)[1] == 7.0
    assert bf_terms(1, 0.0, [1, 0, 0], [0, 0, 0], c)[1] == 7.0
    assert bf_terms(3, 0.0, [1, 0, 0], [0, 0, 0], c)[1] == 3.5


def test_bf_tends_to_term_b():
    c = cfg("bf-refined", H=5)
    a, b, cc = bf_terms(50, 0.0, [0.5, 0.5, 0.0], [10**40] * 3, c)
    assert a == 0.0 and cc < 1e-10
    assert a + b + cc == pytest.approx(b, rel=1e-9)


@pytest.mark.parametrize("variant", ["ch-refined", "ch-original", "bf-refined", "bf-original"])
def test_vectorized_table_matches_scalar(variant):
    rng = np.random.default_rng(3)
    S, A, H = 4, 3, 5
    c = cfg(variant, H=H, S=S, A=A, T=1000)
    counts = random_counts(rng, S, A, H, episodes=25)
    p_hat = counts.transition_table()
    for h in range(H):
        v = rng.uniform(0, H - h - 1 if h < H - 1 else 0, size=S)
        table = bonus_table(c, counts, p_hat, v, h)
        for x in range(S):
            for a in range(A):
                if c.family == "chernoff_hoeffding":
                    want = bonus_ch(counts.n_sa[x, a], c, h=h)
                else:
                    want = bonus_bf(counts, v, x, a, h, c)
                assert table[x, a] == pytest.approx(want, rel=1e-12, abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    n=st.integers(0, 10**6),
    var=st.floats(0, 25),
    w=st.lists(st.floats(0.01, 1), min_size=3, max_size=3),
    nn=st.lists(st.integers(0, 10**9), min_size=3, max_size=3),
    H=st.integers(1, 10),
)
def test_refined_never_exceeds_original(n, var, w, nn, H):
    p = np.array(w) / sum(w)
    ref = bf_terms(n, var, p, nn, cfg("bf-refined", H=H))
    orig = bf_terms(n, var, p, nn, cfg("bf-original", H=H))
    assert all(r <= o for r, o in zip(ref, orig))
    assert all(t >= 0 for t in ref)
    assert bonus_ch(n, cfg("ch-refined", H=H)) <= bonus_ch(n, cfg("ch-original", H=H))


@settings(max_examples=100, deadline=None)
@given(var=st.floats(0, 25), nn=st.integers(0, 10**6), H=st.integers(2, 10))
def test_bonuses_nonincreasing_in_visits(var, nn, H):
    p = [0.3, 0.7]
    for variant in ("bf-refined", "bf-original"):
        c = cfg(variant, H=H, S=2)
        vals = [sum(bf_terms(n, var, p, [nn, nn], c)) for n in range(0, 60)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))
    c = cfg("ch-refined", H=H)
    vals = [bonus_ch(n, c) for n in range(0, 60)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
