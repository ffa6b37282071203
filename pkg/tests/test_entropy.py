import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import entropy_direct
from wheeltrace.entropy import (
    DEFAULT_BINS,
    DEFAULT_HORIZON,
    EntropyEstimate,
    entropy_bits,
    entropy_sweep,
    q_grid,
    radius_histogram,
)
from wheeltrace.wheel_model import SystemConfig, positions

prob_vectors = st.lists(st.floats(0.0, 1.0), min_size=1, max_size=40).filter(lambda v: sum(v) > 0).map(
    lambda v: (np.asarray(v) / sum(v)).tolist()
)


def test_entropy_examples():
    assert entropy_bits([1.0]) == 0.0
    assert entropy_bits([0.25] * 4) == 2.0
    assert entropy_bits([0.5, 0.5]) == 1.0
    assert entropy_bits([0.5, 0.0, 0.5, 0.0]) == 1.0


@pytest.mark.parametrize("m", range(1, 11))
def test_uniform_power_of_two(m):
    assert entropy_bits(np.full(2**m, 2.0**-m)) == m


@settings(max_examples=200)
@given(prob_vectors)
def test_matches_direct_sum_and_bounds(p):
    e = entropy_bits(p)
    assert e == pytest.approx(entropy_direct(p), abs=1e-12)
    assert 0.0 <= e <= math.log2(len(p)) + 1e-12


@settings(max_examples=100)
@given(prob_vectors, st.randoms(use_true_random=False))
def test_permutation_invariant(p, rnd):
    shuffled = list(p)
    rnd.shuffle(shuffled)
    assert entropy_bits(shuffled) == pytest.approx(entropy_bits(p), abs=1e-12)


def test_single_wheel_histogram():
    hist = radius_histogram(SystemConfig(1, 2.0), 1000, 8, (0.0, 10.0))
    assert hist.probabilities.sum() == pytest.approx(1.0, abs=1e-12)
    # |R| == 1 == max_radius lands in the last (right-closed) bin
    assert hist.probabilities[-1] == 1.0
    assert entropy_bits(hist) == 0.0


def test_cardioid_two_bins_both_populated():
    cfg = SystemConfig(2, 2.0)
    hist = radius_histogram(cfg, 100_000, 2, (0.0, 2 * math.pi))
    assert np.all(hist.probabilities > 0)
    # direct scan: |R| spans [0.5, 1.5], split at 0.75
    t = np.linspace(0.0, 2 * math.pi, 100_000, endpoint=False)
    r = np.abs(np.exp(1j * t) + 0.5 * np.exp(2j * t))
    assert hist.probabilities[0] == pytest.approx(np.mean(r < 0.75), abs=1e-12)


def test_histogram_normalized_and_shaped():
    hist = radius_histogram(SystemConfig(20, 1.8), 5000, 64, (0.0, 30.0))
    assert len(hist.probabilities) == len(hist.bin_edges) - 1 == 64
    assert hist.probabilities.sum() == pytest.approx(1.0, abs=1e-12)
    assert hist.bin_edges[0] == 0.0
    assert hist.sample_count == 5000


@pytest.mark.parametrize("kwargs", [dict(horizon=10, bins=20), dict(horizon=100, bins=1), dict(t_window=(1.0, 1.0))])
def test_histogram_rejects(kwargs):
    with pytest.raises(ValueError):
        radius_histogram(SystemConfig(3, 2.0), **{"horizon": 100, "bins": 8, **kwargs})


def test_coarse_graining_never_increases_entropy():
    for q in (1.3, 1.8, 2.5, 4.0):
        p = radius_histogram(SystemConfig(20, q), 2**14, 64).probabilities
        for i in range(len(p) - 1):
            merged = np.concatenate([p[:i], [p[i] + p[i + 1]], p[i + 2:]])
            assert entropy_bits(merged) <= entropy_bits(p) + 1e-12


@pytest.mark.parametrize("q", [1.2, 1.8, 3.0])
def test_horizon_convergence(q):
    cfg = SystemConfig(20, q)
    a = entropy_bits(radius_histogram(cfg, DEFAULT_HORIZON, DEFAULT_BINS))
    b = entropy_bits(radius_histogram(cfg, 2 * DEFAULT_HORIZON, DEFAULT_BINS))
    assert abs(a - b) < 0.05


def test_q_grid():
    grid = q_grid(1.1, 5.0, 0.05)
    assert len(grid) == 79 and grid[0] == 1.1 and grid[-1] == 5.0 and 1.8 in grid
    with pytest.raises(ValueError):
        q_grid(1.0, 2.0, 0.1)


def test_single_q_sweep():
    estimates, argmax = entropy_sweep(2.0, 2.0, 0.1, n=5, horizon=4096, bins=16)
    assert len(estimates) == 1 and argmax == 2.0
    e = estimates[0]
    assert isinstance(e, EntropyEstimate) and 0 <= e.entropy_bits <= 4


def test_sweep_marks_gaps(monkeypatch):
    import wheeltrace.entropy as ent

    real = ent.radius_histogram

    def flaky(cfg, *args):
        if cfg.q_r == 1.5:
            raise ValueError("boom")
        return real(cfg, *args)

    monkeypatch.setattr(ent, "radius_histogram", flaky)
    estimates, argmax = entropy_sweep(1.4, 1.6, 0.1, n=5, horizon=2048, bins=8)
    assert [e.is_gap for e in estimates] == [False, True, False]
    assert estimates[1].error == "boom"
    assert argmax in (1.4, 1.6)


def test_sweep_deterministic_and_bounded():
    a, qa = entropy_sweep(1.5, 2.5, 0.25, n=10, horizon=4096, bins=32)
    b, qb = entropy_sweep(1.5, 2.5, 0.25, n=10, horizon=4096, bins=32)
    assert a == b and qa == qb
    assert all(0 <= e.entropy_bits <= 5 for e in a)
    assert [e.q for e in a] == sorted(e.q for e in a)


def test_histogram_counts_match_direct_binning():
    cfg = SystemConfig(6, 2.2)
    hist = radius_histogram(cfg, 3000, 10, (0.0, 12.0))
    t = np.linspace(0.0, 12.0, 3000, endpoint=False)
    x, y = positions(cfg, t)
    r = np.hypot(x, y)
    edges = hist.bin_edges
    manual = [np.sum((r >= lo) & ((r < hi) if i < 9 else (r <= hi))) for i, (lo, hi) in enumerate(zip(edges, edges[1:]))]
    assert np.allclose(hist.probabilities, np.array(manual) / 3000, atol=1e-15)
