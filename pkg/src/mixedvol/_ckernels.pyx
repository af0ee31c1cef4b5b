# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled monomial kernels. Same contract as ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()

BACKEND = "cython"
cdef int64_t INF = 0x0fffffffffffffff


def _sort_lex(arr):
    if len(arr) == 0:
        return arr
    return arr[np.lexsort(arr.T[::-1])]


cdef object _minimal_sorted(const int64_t[:, ::1] pts):
    # pts sorted by degree and duplicate-free
    cdef Py_ssize_t n = pts.shape[0], d = pts.shape[1]
    cdef Py_ssize_t i, j, k, nkeep = 0
    cdef bint dominated, le
    keep_arr = np.empty((n, d), dtype=np.int64)
    cdef int64_t[:, ::1] keep = keep_arr
    for i in range(n):
        dominated = False
        for j in range(nkeep):
            le = True
            for k in range(d):
                if keep[j, k] > pts[i, k]:
                    le = False
                    break
            if le:
                dominated = True
                break
        if not dominated:
            for k in range(d):
                keep[nkeep, k] = pts[i, k]
            nkeep += 1
    return keep_arr[:nkeep]


def minimalize(points):
    pts = np.asarray(points, dtype=np.int64)
    if pts.ndim != 2:
        raise ValueError("expected an (n, d) exponent array")
    if len(pts) == 0:
        return pts
    if (pts < 0).any():
        raise ValueError("negative exponent")
    pts = np.unique(pts, axis=0)
    pts = np.ascontiguousarray(pts[np.argsort(pts.sum(axis=1), kind="stable")])
    return _sort_lex(_minimal_sorted(pts))


def product(a, b):
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("expected an (n, d) exponent array")
    if len(a) == 0 or len(b) == 0:
        return np.empty((0, max(a.shape[1], b.shape[1])), dtype=np.int64)
    da, db = a.sum(axis=1), b.sum(axis=1)
    if a.shape[1] > 1 and (da == da[0]).all() and (db == db[0]).all():
        return _homogeneous_product(np.ascontiguousarray(a), np.ascontiguousarray(b))
    sums = (a[:, None, :] + b[None, :, :]).reshape(-1, a.shape[1])
    deg = sums.sum(axis=1)
    if (deg == deg[0]).all():
        return _sort_lex(np.unique(sums, axis=0))
    return minimalize(sums)


cdef object _homogeneous_product(const int64_t[:, ::1] a, const int64_t[:, ::1] b):
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0], d = a.shape[1], e = d - 1
    cdef Py_ssize_t i, j, k, idx
    cdef int64_t deg = 0
    for k in range(d):
        deg += a[0, k] + b[0, k]
    ext_arr = np.asarray(a)[:, :e].max(axis=0) + np.asarray(b)[:, :e].max(axis=0) + 1
    strides_arr = np.ones(e, dtype=np.int64)
    for k in range(e - 2, -1, -1):
        strides_arr[k] = strides_arr[k + 1] * ext_arr[k + 1]
    cdef int64_t[::1] strides = strides_arr
    mask_arr = np.zeros(int(np.prod(ext_arr)), dtype=np.uint8)
    cdef cnp.uint8_t[::1] mask = mask_arr
    for i in range(na):
        for j in range(nb):
            idx = 0
            for k in range(e):
                idx += (a[i, k] + b[j, k]) * strides[k]
            mask[idx] = 1
    flat = np.flatnonzero(mask_arr)
    head = np.stack(np.unravel_index(flat, tuple(int(x) for x in ext_arr)), axis=1).astype(np.int64)
    last = deg - head.sum(axis=1, keepdims=True)
    return np.hstack([head, last])


def depth_histogram(gens, long lo, long hi, long max_depth):
    g_arr = np.asarray(gens, dtype=np.int64)
    if g_arr.ndim != 2:
        raise ValueError("expected an (n, d) exponent array")
    out_arr = np.zeros((max(hi - lo + 1, 0), max_depth + 1), dtype=np.int64)
    if hi < lo or len(g_arr) == 0:
        return out_arr
    cdef int64_t[:, ::1] out = out_arr
    cdef Py_ssize_t d = g_arr.shape[1]
    cdef long t, a, dep
    degs_arr = g_arr.sum(axis=1)
    if d == 1:
        a = int(g_arr.min())
        for t in range(max(lo, a), hi + 1):
            out[t - lo, min(t - a, max_depth)] = 1
        return out_arr
    keep = degs_arr <= hi
    g_arr = np.ascontiguousarray(g_arr[keep])
    degs_arr = np.ascontiguousarray(degs_arr[keep])
    if len(g_arr) == 0:
        return out_arr

    cdef Py_ssize_t e = d - 1, n = hi + 1
    cdef Py_ssize_t size = n ** e
    cdef Py_ssize_t i, k, idx, ng = g_arr.shape[0]
    strides_arr = np.array([n ** (e - 1 - k) for k in range(e)], dtype=np.int64)
    cdef int64_t[::1] strides = strides_arr
    # generators bucketed by degree as flat indices
    order = np.argsort(degs_arr, kind="stable")
    cdef int64_t[::1] gdeg = np.ascontiguousarray(degs_arr[order])
    cdef int64_t[::1] gflat = np.ascontiguousarray((g_arr[order][:, :e] * strides_arr).sum(axis=1))
    prev_arr = np.full(size, INF, dtype=np.int64)
    cur_arr = np.full(size, INF, dtype=np.int64)
    cdef int64_t[::1] prev = prev_arr
    cdef int64_t[::1] cur = cur_arr
    cdef int64_t[::1] tmp
    coord_arr = np.zeros(e, dtype=np.int64)
    cdef int64_t[::1] coord = coord_arr
    cdef long s, gp = 0
    cdef int64_t v, w
    cdef long start = gdeg[0]

    for t in range(start, hi + 1):
        # walk the simplex {c : sum(c) <= t} with an odometer
        for k in range(e):
            coord[k] = 0
        idx = 0
        s = 0
        while True:
            v = prev[idx]
            for k in range(e):
                if coord[k] > 0:
                    w = prev[idx - strides[k]]
                    if w < v:
                        v = w
            cur[idx] = v
            # advance
            k = e - 1
            while k >= 0:
                if s < t:
                    coord[k] += 1
                    s += 1
                    idx += strides[k]
                    break
                s -= coord[k]
                idx -= coord[k] * strides[k]
                coord[k] = 0
                k -= 1
            if k < 0:
                break
        while gp < ng and gdeg[gp] == t:
            cur[gflat[gp]] = t
            gp += 1
        if t >= lo:
            for k in range(e):
                coord[k] = 0
            idx = 0
            s = 0
            while True:
                v = cur[idx]
                if v < INF:
                    dep = t - v
                    if dep > max_depth:
                        dep = max_depth
                    out[t - lo, dep] += 1
                k = e - 1
                while k >= 0:
                    if s < t:
                        coord[k] += 1
                        s += 1
                        idx += strides[k]
                        break
                    s -= coord[k]
                    idx -= coord[k] * strides[k]
                    coord[k] = 0
                    k -= 1
                if k < 0:
                    break
        tmp = prev
        prev = cur
        cur = tmp
    return out_arr
