"""Exact integer matrices as numpy object arrays holding Python ints."""
import numpy as np


def zeros(m, n):
    return np.zeros((m, n), dtype=object)


def identity(n):
    out = zeros(n, n)
    for i in range(n):
        out[i, i] = 1
    return out


def as_matrix(data, shape=None):
    """Coerce nested lists (or an array) to an exact object matrix."""
    if isinstance(data, np.ndarray) and data.dtype == object and data.ndim == 2:
        return data
    arr = np.array(data, dtype=object)
    if arr.ndim != 2:
        if shape is not None and arr.size == 0:
            return zeros(*shape)
        if arr.ndim == 1 and arr.size == 0:
            return zeros(0, 0)
        raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
    out = zeros(*arr.shape)
    for idx, v in np.ndenumerate(arr):
        out[idx] = int(v)
    return out


def to_rows(mat):
    return [[int(v) for v in row] for row in mat.tolist()] if mat.size else [[] for _ in range(mat.shape[0])]


def from_rows(rows, ncols):
    out = zeros(len(rows), ncols)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            if v:
                out[i, j] = int(v)
    return out


def is_zero(mat):
    return not any(v != 0 for v in mat.flat)


def vstack(mats, ncols):
    if not mats:
        return zeros(0, ncols)
    return np.vstack(mats).astype(object)


def matmul(a, b):
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return a @ b


def nonzero_entries(col):
    return [(i, int(v)) for i, v in enumerate(col) if v != 0]
