"""Contiguous clustering: initialization, exact DP, coordinate descent."""

import numpy as np
import pytest

from mofa_select import (
    FeatureSequence,
    SegmenterConfig,
    cluster_objective,
    dp_optimal_partition,
    init_partition,
    segment,
)
from oracles import best_partition_bruteforce, enumerate_partitions


def random_seq(rng, n, dim):
    feats = rng.standard_normal((n, dim))
    feats /= np.linalg.norm(feats, axis=1, keepdims=True)
    return FeatureSequence(np.arange(n, dtype=np.float64), feats.astype(np.float32))


class TestInitPartition:
    def test_equal_split(self):
        assert init_partition(6, 3).boundaries == (0, 2, 4, 6)

    def test_remainder_goes_to_earliest(self):
        assert init_partition(7, 3).boundaries == (0, 3, 5, 7)

    def test_singletons(self):
        assert init_partition(5, 5).boundaries == (0, 1, 2, 3, 4, 5)

    def test_sizes_differ_by_at_most_one(self):
        for n in range(1, 40):
            for u in range(1, n + 1):
                sizes = init_partition(n, u).sizes()
                assert max(sizes) - min(sizes) <= 1
                assert sum(sizes) == n
                assert sizes == sorted(sizes, reverse=True)

    def test_errors(self):
        with pytest.raises(ValueError):
            init_partition(3, 4)
        with pytest.raises(ValueError):
            init_partition(3, 0)


class TestDpOptimalPartition:
    def test_two_blocks(self):
        seq = FeatureSequence([0, 1, 2, 3], [[1, 0], [1, 0], [0, 1], [0, 1]])
        assert dp_optimal_partition(seq, 2).boundaries == (0, 2, 4)

    def test_single_cluster(self):
        rng = np.random.default_rng(0)
        seq = random_seq(rng, 9, 3)
        assert dp_optimal_partition(seq, 1).boundaries == (0, 9)

    def test_all_singletons(self):
        rng = np.random.default_rng(1)
        seq = random_seq(rng, 5, 3)
        assert dp_optimal_partition(seq, 5).boundaries == (0, 1, 2, 3, 4, 5)

    def test_matches_bruteforce_12_frames(self):
        rng = np.random.default_rng(2)
        seq = random_seq(rng, 12, 4)
        assert sum(1 for _ in enumerate_partitions(12, 3)) == 55
        expected, _ = best_partition_bruteforce(seq, 3)
        assert dp_optimal_partition(seq, 3).boundaries == expected.boundaries

    def test_matches_bruteforce_sweep(self):
        rng = np.random.default_rng(3)
        for _ in range(25):
            n = int(rng.integers(4, 13))
            u = int(rng.integers(2, min(4, n) + 1))
            seq = random_seq(rng, n, int(rng.integers(2, 6)))
            expected, exp_obj = best_partition_bruteforce(seq, u)
            got = dp_optimal_partition(seq, u)
            assert got.boundaries == expected.boundaries
            assert cluster_objective(seq, got) == pytest.approx(exp_obj, abs=1e-9)

    def test_tie_breaks_lexicographic(self):
        seq = FeatureSequence([0, 1, 2, 3], [[1, 0]] * 4)
        # every partition costs 0; smallest boundary list wins
        assert dp_optimal_partition(seq, 2).boundaries == (0, 1, 4)
        assert dp_optimal_partition(seq, 3).boundaries == (0, 1, 2, 4)

    def test_too_many_clusters(self):
        seq = FeatureSequence([0, 1], [[1, 0], [0, 1]])
        with pytest.raises(ValueError, match="exceeds"):
            dp_optimal_partition(seq, 3)


class TestSegment:
    def test_perfect_split(self):
        seq = FeatureSequence([0, 1, 2, 3], [[1, 0], [1, 0], [0, 1], [0, 1]])
        part = segment(seq, SegmenterConfig(num_clusters=2))
        assert part.boundaries == (0, 2, 4)
        assert cluster_objective(seq, part) == pytest.approx(0.0, abs=1e-9)

    def test_all_singletons(self):
        rng = np.random.default_rng(4)
        seq = random_seq(rng, 6, 3)
        part = segment(seq, SegmenterConfig(num_clusters=6))
        assert part.boundaries == tuple(range(7))
        assert cluster_objective(seq, part) == pytest.approx(0.0, abs=1e-9)

    def test_30_random_vectors(self):
        rng = np.random.default_rng(5)
        seq = random_seq(rng, 30, 8)
        cfg = SegmenterConfig(num_clusters=4)
        part = segment(seq, cfg)
        init_obj = cluster_objective(seq, init_partition(30, 4))
        dp_obj = cluster_objective(seq, dp_optimal_partition(seq, 4))
        obj = cluster_objective(seq, part)
        assert obj <= init_obj + 1e-9
        assert obj == pytest.approx(dp_obj, abs=1e-9)

    def test_descent_improves_on_init(self):
        rng = np.random.default_rng(6)
        seq = random_seq(rng, 60, 6)
        cfg = SegmenterConfig(num_clusters=4, exact_threshold=0)  # force descent
        part = segment(seq, cfg)
        init_obj = cluster_objective(seq, init_partition(60, 4))
        dp_obj = cluster_objective(seq, dp_optimal_partition(seq, 4))
        obj = cluster_objective(seq, part)
        assert dp_obj - 1e-9 <= obj <= init_obj + 1e-9

    def test_descent_finds_planted_boundaries(self):
        rng = np.random.default_rng(7)
        blocks = []
        for _ in range(3):
            base = rng.standard_normal(8)
            base /= np.linalg.norm(base)
            blocks.append(np.tile(base, (40, 1)))
        feats = np.concatenate(blocks).astype(np.float32)
        seq = FeatureSequence(np.arange(120, dtype=np.float64), feats)
        part = segment(seq, SegmenterConfig(num_clusters=3, exact_threshold=0))
        assert part.boundaries == (0, 40, 80, 120)

    def test_deterministic(self):
        rng = np.random.default_rng(8)
        seq = random_seq(rng, 50, 5)
        cfg = SegmenterConfig(num_clusters=5)
        assert segment(seq, cfg).boundaries == segment(seq, cfg).boundaries

    def test_coordinate_permutation_invariance(self):
        rng = np.random.default_rng(9)
        feats = rng.standard_normal((24, 6)).astype(np.float32)
        perm = rng.permutation(6)
        seq1 = FeatureSequence(np.arange(24), feats)
        seq2 = FeatureSequence(np.arange(24), feats[:, perm])
        cfg = SegmenterConfig(num_clusters=3)
        assert segment(seq1, cfg).boundaries == segment(seq2, cfg).boundaries

    def test_cluster_count_exceeds_frames(self):
        rng = np.random.default_rng(10)
        seq = random_seq(rng, 4, 3)
        with pytest.raises(ValueError, match="exceeds"):
            segment(seq, SegmenterConfig(num_clusters=5))

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SegmenterConfig(num_clusters=0)
        with pytest.raises(ValueError):
            SegmenterConfig(max_iters=0)
