import numpy as np
import pytest
from scipy import stats

from cnoma_ihs.channel import (
    ChannelRealization,
    SeedSpec,
    draw,
    draw_block,
    uniform_block,
    unit_exponentials,
)

LAMS = (1 / 0.36, 1.0, 6.25)


def test_mean_matches_variance_parameter():
    n = 1_000_000
    ch = draw_block(SeedSpec(7), 0, n, LAMS)
    lam = LAMS[0]
    # std of an exponential equals its mean
    assert abs(ch.g_s1.mean() - lam) < 3 * lam / np.sqrt(n)


def test_unit_squared_coefficient_of_variation():
    ch = draw_block(SeedSpec(8), 0, 1_000_000, LAMS)
    for g in (ch.g_s1, ch.g_s2, ch.g_12):
        assert g.var() / g.mean() ** 2 == pytest.approx(1.0, abs=0.015)
        assert (g >= 0).all()


def test_same_seed_same_index_bitwise():
    a = draw(SeedSpec(3), 12345, LAMS)
    b = draw(SeedSpec(3), 12345, LAMS)
    assert a == b
    c = draw(SeedSpec(4), 12345, LAMS)
    assert a != c


def test_single_draw_equals_block_entry():
    blk = draw_block(SeedSpec(5), 100, 200, LAMS)
    for i in (100, 137, 199):
        one = draw(SeedSpec(5), i, LAMS)
        assert one.g_s1 == blk.g_s1[i - 100]
        assert one.g_12 == blk.g_12[i - 100]


@pytest.mark.parametrize("split", [1, 3, 4, 5, 65536, 99_999])
def test_partition_invariance(split):
    n = 100_000
    whole = unit_exponentials(SeedSpec(11), 0, n)
    left = unit_exponentials(SeedSpec(11), 0, split)
    right = unit_exponentials(SeedSpec(11), split, n)
    for w, a, b in zip(whole, left, right):
        assert np.array_equal(w, np.concatenate([a, b]))


def test_partitioned_mean_matches_single_pass():
    import math
    n = 200_000
    whole = draw_block(SeedSpec(2), 0, n, LAMS).g_s2
    parts = [draw_block(SeedSpec(2), s, min(s + 30_000, n), LAMS).g_s2 for s in range(0, n, 30_000)]
    assert math.fsum(whole) == math.fsum(np.concatenate(parts))


def test_ks_against_unit_exponential():
    e = unit_exponentials(SeedSpec(13), 0, 100_000)
    for x in e:
        assert stats.kstest(x, "expon").pvalue > 0.01


def test_fields_uncorrelated():
    ch = draw_block(SeedSpec(17), 0, 1_000_000, LAMS)
    c = np.corrcoef([ch.g_s1, ch.g_s2, ch.g_12])
    off = c[np.triu_indices(3, 1)]
    assert np.all(np.abs(off) < 0.005)


def test_uniforms_in_half_open_unit_interval():
    u = uniform_block(SeedSpec(1), "g_s1", 0, 200_000)
    assert u.min() > 0 and u.max() <= 1


def test_stream_labels_decorrelate():
    a = unit_exponentials(SeedSpec(1, "a"), 0, 1000)[0]
    b = unit_exponentials(SeedSpec(1, "b"), 0, 1000)[0]
    assert not np.array_equal(a, b)


def test_rejects_nonpositive_variance():
    with pytest.raises(ValueError):
        draw(SeedSpec(0), 0, (1.0, 0.0, 1.0))


def test_realization_is_plain_container():
    ch = ChannelRealization(1.0, 2.0, 3.0)
    assert (ch.g_s1, ch.g_s2, ch.g_12) == (1.0, 2.0, 3.0)
