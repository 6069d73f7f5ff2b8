"""Positional-embedding table extension."""

import numpy as np
import pytest

from mofa_select import EmbeddingTable, extend_interpolate, extend_periodic


def table(rows):
    return EmbeddingTable(np.asarray(rows, dtype=np.float32))


class TestPeriodic:
    def test_wraps_cyclically(self):
        t = table([[0, 0], [1, 1], [2, 2], [3, 3]])
        out = extend_periodic(t, 6)
        expect = np.array([[0, 0], [1, 1], [2, 2], [3, 3], [0, 0], [1, 1]], dtype=np.float32)
        assert out.values.tobytes() == expect.tobytes()

    def test_identity_at_same_length(self):
        t = table([[1, 2], [3, 4], [5, 6]])
        out = extend_periodic(t, 3)
        assert out.values.tobytes() == t.values.tobytes()

    def test_prefix_when_shorter(self):
        t = table([[0, 0], [1, 1], [2, 2], [3, 3]])
        out = extend_periodic(t, 2)
        assert out.values.tobytes() == t.values[:2].tobytes()

    def test_modular_rows_bitwise_randomized(self):
        rng = np.random.default_rng(0)
        for _ in range(30):
            rows = int(rng.integers(1, 20))
            dim = int(rng.integers(1, 12))
            vals = rng.standard_normal((rows, dim)).astype(np.float32)
            t = EmbeddingTable(vals)
            new_len = int(rng.integers(1, 64))
            out = extend_periodic(t, new_len)
            for i in range(new_len):
                assert out.values[i].tobytes() == vals[i % rows].tobytes()

    def test_zero_length_rejected(self):
        with pytest.raises(ValueError, match=">= 1"):
            extend_periodic(table([[1.0]]), 0)


class TestInterpolate:
    def test_linear_midpoint(self):
        out = extend_interpolate(table([[0.0], [2.0]]), 3)
        np.testing.assert_allclose(out.values, [[0.0], [1.0], [2.0]])

    def test_identity_at_same_length(self):
        rng = np.random.default_rng(1)
        vals = rng.standard_normal((7, 3)).astype(np.float32)
        out = extend_interpolate(EmbeddingTable(vals), 7)
        np.testing.assert_allclose(out.values, vals, atol=1e-6)

    def test_uniform_resampling(self):
        out = extend_interpolate(table([[0.0], [3.0]]), 4)
        np.testing.assert_allclose(out.values, [[0.0], [1.0], [2.0], [3.0]])

    def test_endpoints_exact(self):
        rng = np.random.default_rng(2)
        vals = rng.standard_normal((5, 4)).astype(np.float32)
        t = EmbeddingTable(vals)
        for new_len in (2, 3, 9, 40):
            out = extend_interpolate(t, new_len)
            assert out.values[0].tobytes() == vals[0].tobytes()
            assert out.values[-1].tobytes() == vals[-1].tobytes()

    def test_rows_stay_inside_adjacent_hulls(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            rows = int(rng.integers(2, 12))
            dim = int(rng.integers(1, 8))
            vals = rng.standard_normal((rows, dim)).astype(np.float32)
            t = EmbeddingTable(vals)
            new_len = int(rng.integers(2, 50))
            out = extend_interpolate(t, new_len)
            lo = vals.min(axis=0)
            hi = vals.max(axis=0)
            assert np.all(out.values >= lo[None, :])
            assert np.all(out.values <= hi[None, :])

    def test_needs_two_rows(self):
        with pytest.raises(ValueError, match="at least 2 rows"):
            extend_interpolate(table([[1.0]]), 4)
        with pytest.raises(ValueError, match=">= 2"):
            extend_interpolate(table([[1.0], [2.0]]), 1)


class TestEmbeddingTable:
    def test_rejects_non_finite(self):
        with pytest.raises(ValueError, match="non-finite"):
            EmbeddingTable(np.array([[np.inf, 0.0]]))

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            EmbeddingTable(np.zeros((0, 3), dtype=np.float32))

    def test_shape_accessors(self):
        t = table([[1, 2, 3], [4, 5, 6]])
        assert t.rows == 2
        assert t.dim == 3
