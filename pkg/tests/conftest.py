import numpy as np
import pytest

from tonefuse import Params, RoiStats


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def params():
    return Params()


def random_frame(rng, height=32, width=32):
    return rng.integers(0, 256, (height, width, 3), dtype=np.uint8)


def gray_frame(values):
    """Stack a 2-D uint8 plane into an R=G=B frame."""
    values = np.asarray(values, dtype=np.uint8)
    return np.repeat(values[..., None], 3, axis=2)


def constant_frame(level, height=4, width=4):
    return np.full((height, width, 3), level, dtype=np.uint8)


def stats_of(mean, std, count=1000, label=""):
    """RoiStats with the same statistics in all three channels."""
    return RoiStats(
        mean=np.full(3, float(mean)),
        std=np.full(3, float(std)),
        pixel_count=count,
        label=label,
    )


def piecewise_pair(rng, band_sigma=3.0):
    """Random stat pair whose bands are separable -> piecewise routing."""
    while True:
        s_lo, s_hi = rng.uniform(2.0, 12.0, 2)
        gap = rng.uniform(5.0, 60.0)
        m_lo = rng.uniform(band_sigma * s_lo + 2.0, 140.0)
        m_hi = m_lo + band_sigma * (s_lo + s_hi) + gap
        if m_hi + band_sigma * s_hi <= 253.0:
            return stats_of(m_lo, s_lo), stats_of(m_hi, s_hi)


def factor_pair(rng):
    """Random stat pair with heavily overlapping bands -> factor routing."""
    m_lo = rng.uniform(40.0, 200.0)
    m_hi = m_lo + rng.uniform(0.0, 40.0)
    s_lo, s_hi = rng.uniform(15.0, 45.0, 2)
    return stats_of(m_lo, s_lo), stats_of(m_hi, s_hi)


def piecewise_pair_integer(rng, band_sigma=3):
    """Separable pair with integer stats and an integer crossover point.

    The crossover of a disjoint pair is the midpoint of the facing band
    edges, so its abscissa is integral when their sum is even; that lets
    anchor tests read exact curve samples instead of interpolating
    across the crossover's slope corner.
    """
    while True:
        s_lo, s_hi = int(rng.integers(2, 13)), int(rng.integers(2, 13))
        gap = int(rng.integers(5, 61))
        m_lo = int(rng.integers(band_sigma * s_lo + 2, 140))
        m_hi = m_lo + band_sigma * (s_lo + s_hi) + gap
        if (m_lo + band_sigma * s_lo + m_hi - band_sigma * s_hi) % 2:
            m_hi += 1
        if m_hi + band_sigma * s_hi <= 253:
            return stats_of(m_lo, s_lo), stats_of(m_hi, s_hi)
