import random
import statistics

import pytest

from curvescore.curves import LearningCurve
from curvescore.errors import EmptyIntersection, MissingModel
from curvescore.ranking import (
    K_WINDOW_DEFAULT,
    P_WINDOW_DEFAULT,
    aggregate_consistency,
    baseline_rank,
    consistency_score,
    ranking_consistency_aggregate,
    ranking_pair,
)

from conftest import FULL_GRID, make_paper_shaped_dataset


def grid_curve(scores, grid=None):
    grid = grid if grid is not None else FULL_GRID[: len(scores)]
    return LearningCurve(tuple(zip(grid, scores)), "acc")


def offset_pair(offset, grid=FULL_GRID, seed=3):
    rng = random.Random(seed)
    base = [0.3 + 0.0002 * t + rng.uniform(-0.001, 0.001) for t in grid]
    a1 = grid_curve([s + offset for s in base], grid)
    a2 = grid_curve(base, grid)
    return a1, a2


class TestBaselineRank:
    def test_constant_offset(self):
        a1, a2 = offset_pair(0.02)
        r, rank = baseline_rank(a1, a2)
        assert r == pytest.approx(0.02, abs=1e-12)
        assert rank == 1

    def test_identical_curves_tie_rule(self):
        a1, _ = offset_pair(0.0)
        r, rank = baseline_rank(a1, a1)
        assert r == 0.0
        assert rank == 0

    def test_negative_offset(self):
        a1, a2 = offset_pair(-0.02)
        _, rank = baseline_rank(a1, a2)
        assert rank == 0

    def test_matches_brute_force_mean(self):
        rng = random.Random(19)
        grid = FULL_GRID
        a1 = grid_curve([rng.random() for _ in grid], grid)
        a2 = grid_curve([rng.random() for _ in grid], grid)
        r, _ = baseline_rank(a1, a2)
        in_k = [
            (s1, s2)
            for (t, s1), (_, s2) in zip(a1.points, a2.points)
            if 100 <= t < 200
        ]
        expected = statistics.fmean(s1 - s2 for s1, s2 in in_k)
        assert r == pytest.approx(expected, abs=1e-12)

    def test_empty_window_raises(self):
        short = grid_curve([0.1, 0.2], [20.0, 40.0])
        with pytest.raises(EmptyIntersection):
            baseline_rank(short, short, K_WINDOW_DEFAULT)


class TestConsistency:
    def test_full_agreement(self):
        a1, a2 = offset_pair(0.02)
        result = consistency_score(a1, a2, baseline=1)
        assert result.tau == 1.0

    def test_half_flipped(self):
        grid = [220.0 + 20 * i for i in range(10)]
        a2 = grid_curve([0.5] * 10, grid)
        # arch1 above at 5 points, below at 5
        a1 = grid_curve([0.6] * 5 + [0.4] * 5, grid)
        result = consistency_score(a1, a2, baseline=1, p_window=P_WINDOW_DEFAULT)
        assert result.tau == 0.5

    def test_tie_points_rank_zero(self):
        grid = [220.0, 240.0]
        a1 = grid_curve([0.5, 0.6], grid)
        a2 = grid_curve([0.5, 0.5], grid)
        result = consistency_score(a1, a2, baseline=0)
        ranks = [rank for _, rank, _ in result.per_point]
        assert ranks == [0, 1]
        assert result.tau == 0.5

    def test_swap_with_flipped_baseline_strict_points(self):
        rng = random.Random(7)
        grid = [220.0 + 20 * i for i in range(20)]
        a1 = grid_curve([0.5 + rng.uniform(-0.1, 0.1) for _ in grid], grid)
        a2 = grid_curve([0.5 + rng.uniform(-0.1, 0.1) for _ in grid], grid)
        fwd = consistency_score(a1, a2, baseline=1)
        rev = consistency_score(a2, a1, baseline=0)
        for (t, _, agrees_fwd), (_, _, agrees_rev) in zip(fwd.per_point, rev.per_point):
            sa = a1.scores[a1.tokens.index(t)]
            sb = a2.scores[a2.tokens.index(t)]
            if sa != sb:
                assert agrees_fwd == agrees_rev

    def test_affine_transform_invariance(self):
        rng = random.Random(13)
        for trial in range(20):
            grid = FULL_GRID
            a1 = grid_curve([rng.random() for _ in grid], grid)
            a2 = grid_curve([rng.random() for _ in grid], grid)
            r, base = baseline_rank(a1, a2)
            tau = consistency_score(a1, a2, base).tau
            a, b = rng.uniform(0.1, 5.0), rng.uniform(-2, 2)
            t1 = grid_curve([a * s + b for s in a1.scores], grid)
            t2 = grid_curve([a * s + b for s in a2.scores], grid)
            r2, base2 = baseline_rank(t1, t2)
            assert base2 == base
            assert consistency_score(t1, t2, base2).tau == tau


class TestAggregate:
    def test_paper_mean(self):
        assert aggregate_consistency([1.0, 0.5106, 1.0]) == pytest.approx(0.8368, abs=1e-4)

    def test_single_size_identity(self):
        assert aggregate_consistency([0.77]) == 0.77

    def test_all_perfect(self):
        assert aggregate_consistency([1.0, 1.0, 1.0]) == 1.0

    def test_dataset_aggregate(self, dataset):
        value = ranking_consistency_aggregate(dataset, ("0.5B", "1B", "3B"))
        assert 0.0 <= value <= 1.0
        per_size = [
            ranking_pair(dataset, size).tau for size in ("0.5B", "1B", "3B")
        ]
        assert value == pytest.approx(statistics.fmean(per_size), abs=1e-15)

    def test_missing_model(self, dataset):
        ds = make_paper_shaped_dataset()
        trimmed = type(ds)(
            ds.benchmark_name,
            ds.metric_name,
            {mid: c for mid, c in ds.curves.items() if mid.size != "3B"},
        )
        with pytest.raises(MissingModel):
            ranking_consistency_aggregate(trimmed, ("0.5B", "1B", "3B"))
