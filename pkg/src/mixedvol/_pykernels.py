"""Pure numpy implementations of the monomial kernels.

Exponent sets are int64 arrays of shape (n, d). These mirror ``_ckernels``
exactly and serve as the fallback when the extension is not built.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"
_INF = np.iinfo(np.int64).max // 4
_BOX_LIMIT = 4_000_000


def _as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("expected an (n, d) exponent array")
    return arr


def _sort_lex(arr: np.ndarray) -> np.ndarray:
    if len(arr) == 0:
        return arr
    order = np.lexsort(arr.T[::-1])
    return arr[order]


def _minimal_in_box(pts: np.ndarray) -> np.ndarray:
    shape = tuple(int(x) + 1 for x in pts.max(axis=0))
    up = np.zeros(shape, dtype=bool)
    up[tuple(pts.T)] = True
    for ax in range(pts.shape[1]):
        np.logical_or.accumulate(up, axis=ax, out=up)
    minimal = up.copy()
    for ax in range(pts.shape[1]):
        src = [slice(None)] * up.ndim
        dst = [slice(None)] * up.ndim
        src[ax] = slice(0, -1)
        dst[ax] = slice(1, None)
        minimal[tuple(dst)] &= ~up[tuple(src)]
    return np.argwhere(minimal).astype(np.int64)


def _minimal_pairwise(pts: np.ndarray) -> np.ndarray:
    pts = pts[np.argsort(pts.sum(axis=1), kind="stable")]
    keep: list[np.ndarray] = []
    kept = np.empty((0, pts.shape[1]), dtype=np.int64)
    for p in pts:
        if len(kept) and (kept <= p).all(axis=1).any():
            continue
        keep.append(p)
        kept = np.asarray(keep)
    return kept


def minimalize(points) -> np.ndarray:
    """Minimal elements (under divisibility) of a set of exponent vectors."""
    pts = _as_points(points)
    if len(pts) == 0:
        return pts.reshape(0, pts.shape[1] if pts.ndim == 2 else 0)
    if (pts < 0).any():
        raise ValueError("negative exponent")
    pts = np.unique(pts, axis=0)
    if pts.shape[1] == 0:
        return pts[:1]
    box = int(np.prod(pts.max(axis=0).astype(np.float64) + 1))
    if box <= _BOX_LIMIT:
        out = _minimal_in_box(pts)
    else:
        out = _minimal_pairwise(pts)
    return _sort_lex(out)


def _homogeneous_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # all sums share one degree, so the last coordinate is implied
    deg = int(a[0].sum() + b[0].sum())
    if len(a) < len(b):
        a, b = b, a
    pa, pb = a[:, :-1], b[:, :-1]
    shape = tuple(int(x) for x in pa.max(axis=0) + pb.max(axis=0) + 1)
    mask = np.zeros(shape, dtype=bool)
    for row in pb:
        mask[tuple((pa + row).T)] = True
    head = np.argwhere(mask).astype(np.int64)
    last = deg - head.sum(axis=1, keepdims=True)
    return np.hstack([head, last])


def product(a, b) -> np.ndarray:
    """Minimal generators of the product of two monomial ideals."""
    a = _as_points(a)
    b = _as_points(b)
    if len(a) == 0 or len(b) == 0:
        return np.empty((0, max(a.shape[1], b.shape[1])), dtype=np.int64)
    da, db = a.sum(axis=1), b.sum(axis=1)
    if a.shape[1] > 1 and (da == da[0]).all() and (db == db[0]).all():
        return _homogeneous_product(a, b)
    sums = (a[:, None, :] + b[None, :, :]).reshape(-1, a.shape[1])
    deg = sums.sum(axis=1)
    if (deg == deg[0]).all():
        # equal degrees cannot divide one another
        return _sort_lex(np.unique(sums, axis=0))
    return minimalize(sums)


def depth_histogram(gens, lo: int, hi: int, max_depth: int) -> np.ndarray:
    """Count ideal monomials by degree and depth.

    For a monomial ``m`` in the ideal, depth(m) = |m| - min{|g| : g | m}, so
    ``m`` lies in ``m^k * J`` exactly when depth(m) >= k. Row ``t - lo`` of
    the result counts degree-``t`` monomials with depth ``0..max_depth``; the
    last column collects every depth >= max_depth.
    """
    g = _as_points(gens)
    out = np.zeros((max(hi - lo + 1, 0), max_depth + 1), dtype=np.int64)
    if hi < lo or len(g) == 0:
        return out
    d = g.shape[1]
    degs = g.sum(axis=1)
    if d == 1:
        a = int(g.min())
        for t in range(max(lo, a), hi + 1):
            out[t - lo, min(t - a, max_depth)] = 1
        return out
    keep = degs <= hi
    g, degs = g[keep], degs[keep]
    if len(g) == 0:
        return out
    n = hi + 1
    shape = (n,) * (d - 1)
    prev = np.full(shape, _INF, dtype=np.int64)
    start = int(degs.min())
    by_degree: dict[int, np.ndarray] = {}
    for t in np.unique(degs):
        by_degree[int(t)] = g[degs == t][:, : d - 1]
    for t in range(start, hi + 1):
        cur = prev.copy()
        for ax in range(d - 1):
            src = [slice(None)] * (d - 1)
            dst = [slice(None)] * (d - 1)
            src[ax] = slice(0, -1)
            dst[ax] = slice(1, None)
            np.minimum(cur[tuple(dst)], prev[tuple(src)], out=cur[tuple(dst)])
        if t in by_degree:
            cur[tuple(by_degree[t].T)] = t
        if t >= lo:
            low = cur[cur < _INF]
            depth = np.minimum(t - low, max_depth)
            out[t - lo] = np.bincount(depth, minlength=max_depth + 1)
        prev = cur
    return out
