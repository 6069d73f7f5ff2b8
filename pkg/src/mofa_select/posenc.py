"""Positional-embedding table extension.

Two constructions for stretching a pretrained length-L table to a new
length: periodic replication (rows repeat cyclically, bit-exact) and
endpoint-aligned linear interpolation (rows resampled on a uniform
grid, first and last rows preserved exactly).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EmbeddingTable:
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float32)
        if vals.ndim != 2:
            raise ValueError(f"table must be 2-D, got shape {vals.shape}")
        if vals.shape[0] < 1 or vals.shape[1] < 1:
            raise ValueError("table must have at least one row and one column")
        if not np.all(np.isfinite(vals)):
            raise ValueError("table has non-finite values")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def rows(self) -> int:
        return int(self.values.shape[0])

    @property
    def dim(self) -> int:
        return int(self.values.shape[1])


def extend_periodic(table: EmbeddingTable, new_len: int) -> EmbeddingTable:
    """Cyclic replication: row i of the output is row (i mod L) of the input."""
    if new_len < 1:
        raise ValueError("new_len must be >= 1")
    idx = np.arange(new_len) % table.rows
    return EmbeddingTable(table.values[idx])


def extend_interpolate(table: EmbeddingTable, new_len: int) -> EmbeddingTable:
    """Per-dimension linear resampling on an endpoint-aligned grid.

    Output row j samples position j*(L-1)/(new_len-1); rows 0 and
    new_len-1 copy the original endpoints exactly, and every other row
    is a convex combination of two adjacent input rows.
    """
    if table.rows < 2:
        raise ValueError("interpolation needs at least 2 rows")
    if new_len < 2:
        raise ValueError("new_len must be >= 2")
    src = table.values.astype(np.float64)
    l = table.rows
    out = np.empty((new_len, table.dim), dtype=np.float32)
    for j in range(new_len):
        x = j * (l - 1) / (new_len - 1)
        i = min(int(x), l - 2)
        frac = x - i
        if frac == 0.0:
            out[j] = table.values[i]
        else:
            out[j] = (src[i] + frac * (src[i + 1] - src[i])).astype(np.float32)
    out[new_len - 1] = table.values[l - 1]
    return EmbeddingTable(out)
