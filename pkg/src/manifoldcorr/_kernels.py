"""Hot geometry kernels: nearest-node assignment and face projection.

Every kernel exists twice: a numba @njit version (parallel over query
rows) and a pure-numpy chunked version. The active backend is chosen at
import time from the MANIFOLD_CORR_NUMBA environment variable: unset or
truthy selects numba when importable, "0"/"false"/"off" forces the numpy
path. Both paths return identical faces and agree on coordinates to
~1e-15; per-row outputs are independent of partitioning.

Ties between faces are broken toward the lowest face index (strict "<"
comparisons keep the first minimum in both paths).
"""

from __future__ import annotations

import os

import numpy as np

_CHUNK = 2048


def _env_wants_numba() -> bool:
    val = os.environ.get("MANIFOLD_CORR_NUMBA", "").strip().lower()
    return val not in ("0", "false", "off", "no")


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def assign_nearest_numpy(points: np.ndarray, nodes: np.ndarray):
    """Index of the nearest node per point, with squared distance."""
    n = points.shape[0]
    idx = np.empty(n, dtype=np.int64)
    dist2 = np.empty(n, dtype=np.float64)
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        diff = points[lo:hi, None, :] - nodes[None, :, :]
        d2 = np.einsum("pmd,pmd->pm", diff, diff)
        idx[lo:hi] = np.argmin(d2, axis=1)
        dist2[lo:hi] = d2[np.arange(hi - lo), idx[lo:hi]]
    return idx, dist2


def project_polyline_numpy(points: np.ndarray, nodes: np.ndarray):
    """Closest point on a piecewise-linear chain per query point.

    Returns (foot, segment_index, local_t, dist2); local_t in [0, 1] is
    the position within the carrying segment.
    """
    starts = nodes[:-1]
    dirs = nodes[1:] - nodes[:-1]
    len2 = np.einsum("sd,sd->s", dirs, dirs)
    len2_safe = np.where(len2 > 0.0, len2, 1.0)
    n = points.shape[0]
    d = points.shape[1]
    foot = np.empty((n, d), dtype=np.float64)
    seg = np.empty(n, dtype=np.int64)
    tloc = np.empty(n, dtype=np.float64)
    dist2 = np.empty(n, dtype=np.float64)
    for lo in range(0, n, _CHUNK):
        hi = min(lo + _CHUNK, n)
        rel = points[lo:hi, None, :] - starts[None, :, :]
        t = np.einsum("psd,sd->ps", rel, dirs) / len2_safe
        np.clip(t, 0.0, 1.0, out=t)
        feet = starts[None, :, :] + t[:, :, None] * dirs[None, :, :]
        diff = points[lo:hi, None, :] - feet
        d2 = np.einsum("psd,psd->ps", diff, diff)
        best = np.argmin(d2, axis=1)
        rows = np.arange(hi - lo)
        seg[lo:hi] = best
        tloc[lo:hi] = t[rows, best]
        dist2[lo:hi] = d2[rows, best]
        foot[lo:hi] = feet[rows, best]
    return foot, seg, tloc, dist2


def _triangle_uv(d1, d2, d3, d4, d5, d6):
    """Barycentric (v, w) of the closest point, vectorized Ericson regions."""
    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4
    with np.errstate(divide="ignore", invalid="ignore"):
        t_ab = d1 / (d1 - d3)
        t_ac = d2 / (d2 - d6)
        t_bc = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        denom = va + vb + vc
        v_in = vb / denom
        w_in = vc / denom
    conds = [
        (d1 <= 0.0) & (d2 <= 0.0),                 # vertex a
        (d3 >= 0.0) & (d4 <= d3),                  # vertex b
        (vc <= 0.0) & (d1 >= 0.0) & (d3 <= 0.0),   # edge ab
        (d6 >= 0.0) & (d5 <= d6),                  # vertex c
        (vb <= 0.0) & (d2 >= 0.0) & (d6 <= 0.0),   # edge ac
        (va <= 0.0) & (d4 - d3 >= 0.0) & (d5 - d6 >= 0.0),  # edge bc
    ]
    v = np.select(conds, [0.0, 1.0, t_ab, 0.0, 0.0, 1.0 - t_bc], default=v_in)
    w = np.select(conds, [0.0, 0.0, 0.0, 1.0, t_ac, t_bc], default=w_in)
    return v, w


def project_triangles_numpy(points: np.ndarray, tris: np.ndarray):
    """Closest point over a triangle soup per query point.

    tris has shape (T, 3, d). Returns (foot, triangle_index, dist2).
    """
    a = tris[:, 0, :]
    ab = tris[:, 1, :] - a
    ac = tris[:, 2, :] - a
    n, d = points.shape
    foot = np.empty((n, d), dtype=np.float64)
    tri = np.empty(n, dtype=np.int64)
    dist2 = np.empty(n, dtype=np.float64)
    chunk = max(1, _CHUNK // max(1, tris.shape[0] // 8))
    for lo in range(0, n, chunk):
        hi = min(lo + chunk, n)
        ap = points[lo:hi, None, :] - a[None, :, :]
        bp = ap - ab[None, :, :]
        cp = ap - ac[None, :, :]
        d1 = np.einsum("td,ptd->pt", ab, ap)
        d2 = np.einsum("td,ptd->pt", ac, ap)
        d3 = np.einsum("td,ptd->pt", ab, bp)
        d4 = np.einsum("td,ptd->pt", ac, bp)
        d5 = np.einsum("td,ptd->pt", ab, cp)
        d6 = np.einsum("td,ptd->pt", ac, cp)
        v, w = _triangle_uv(d1, d2, d3, d4, d5, d6)
        feet = a[None, :, :] + v[:, :, None] * ab[None, :, :] + w[:, :, None] * ac[None, :, :]
        diff = points[lo:hi, None, :] - feet
        dd = np.einsum("ptd,ptd->pt", diff, diff)
        best = np.argmin(dd, axis=1)
        rows = np.arange(hi - lo)
        tri[lo:hi] = best
        dist2[lo:hi] = dd[rows, best]
        foot[lo:hi] = feet[rows, best]
    return foot, tri, dist2


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

NUMBA_AVAILABLE = False
if _env_wants_numba():
    try:
        from numba import njit, prange

        NUMBA_AVAILABLE = True
    except ImportError:
        NUMBA_AVAILABLE = False

if NUMBA_AVAILABLE:

    @njit(cache=True, parallel=True)
    def assign_nearest_numba(points, nodes):
        n = points.shape[0]
        m = nodes.shape[0]
        d = points.shape[1]
        idx = np.empty(n, dtype=np.int64)
        dist2 = np.empty(n, dtype=np.float64)
        for p in prange(n):
            best = 0
            best_d2 = np.inf
            for j in range(m):
                acc = 0.0
                for c in range(d):
                    diff = points[p, c] - nodes[j, c]
                    acc += diff * diff
                if acc < best_d2:
                    best_d2 = acc
                    best = j
            idx[p] = best
            dist2[p] = best_d2
        return idx, dist2

    @njit(cache=True, parallel=True)
    def project_polyline_numba(points, nodes):
        n = points.shape[0]
        d = points.shape[1]
        nseg = nodes.shape[0] - 1
        foot = np.empty((n, d), dtype=np.float64)
        seg = np.empty(n, dtype=np.int64)
        tloc = np.empty(n, dtype=np.float64)
        dist2 = np.empty(n, dtype=np.float64)
        len2 = np.empty(nseg, dtype=np.float64)
        for s in range(nseg):
            acc = 0.0
            for c in range(d):
                diff = nodes[s + 1, c] - nodes[s, c]
                acc += diff * diff
            len2[s] = acc if acc > 0.0 else 1.0
        for p in prange(n):
            best = 0
            best_t = 0.0
            best_d2 = np.inf
            for s in range(nseg):
                t = 0.0
                for c in range(d):
                    t += (points[p, c] - nodes[s, c]) * (nodes[s + 1, c] - nodes[s, c])
                t /= len2[s]
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                acc = 0.0
                for c in range(d):
                    f = nodes[s, c] + t * (nodes[s + 1, c] - nodes[s, c])
                    diff = points[p, c] - f
                    acc += diff * diff
                if acc < best_d2:
                    best_d2 = acc
                    best = s
                    best_t = t
            seg[p] = best
            tloc[p] = best_t
            dist2[p] = best_d2
            for c in range(d):
                foot[p, c] = nodes[best, c] + best_t * (nodes[best + 1, c] - nodes[best, c])
        return foot, seg, tloc, dist2

    @njit(cache=True, parallel=True)
    def project_triangles_numba(points, tris):
        n = points.shape[0]
        d = points.shape[1]
        ntri = tris.shape[0]
        foot = np.empty((n, d), dtype=np.float64)
        tri = np.empty(n, dtype=np.int64)
        dist2 = np.empty(n, dtype=np.float64)
        for p in prange(n):
            best = 0
            best_d2 = np.inf
            best_v = 0.0
            best_w = 0.0
            for t in range(ntri):
                d1 = 0.0
                d2_ = 0.0
                d3 = 0.0
                d4 = 0.0
                d5 = 0.0
                d6 = 0.0
                for c in range(d):
                    ab = tris[t, 1, c] - tris[t, 0, c]
                    ac = tris[t, 2, c] - tris[t, 0, c]
                    ap = points[p, c] - tris[t, 0, c]
                    bp = points[p, c] - tris[t, 1, c]
                    cp = points[p, c] - tris[t, 2, c]
                    d1 += ab * ap
                    d2_ += ac * ap
                    d3 += ab * bp
                    d4 += ac * bp
                    d5 += ab * cp
                    d6 += ac * cp
                vc = d1 * d4 - d3 * d2_
                vb = d5 * d2_ - d1 * d6
                va = d3 * d6 - d5 * d4
                if d1 <= 0.0 and d2_ <= 0.0:
                    v = 0.0
                    w = 0.0
                elif d3 >= 0.0 and d4 <= d3:
                    v = 1.0
                    w = 0.0
                elif vc <= 0.0 and d1 >= 0.0 and d3 <= 0.0:
                    v = d1 / (d1 - d3)
                    w = 0.0
                elif d6 >= 0.0 and d5 <= d6:
                    v = 0.0
                    w = 1.0
                elif vb <= 0.0 and d2_ >= 0.0 and d6 <= 0.0:
                    v = 0.0
                    w = d2_ / (d2_ - d6)
                elif va <= 0.0 and d4 - d3 >= 0.0 and d5 - d6 >= 0.0:
                    u = (d4 - d3) / ((d4 - d3) + (d5 - d6))
                    v = 1.0 - u
                    w = u
                else:
                    denom = va + vb + vc
                    v = vb / denom
                    w = vc / denom
                acc = 0.0
                for c in range(d):
                    ab = tris[t, 1, c] - tris[t, 0, c]
                    ac = tris[t, 2, c] - tris[t, 0, c]
                    f = tris[t, 0, c] + v * ab + w * ac
                    diff = points[p, c] - f
                    acc += diff * diff
                if acc < best_d2:
                    best_d2 = acc
                    best = t
                    best_v = v
                    best_w = w
            tri[p] = best
            dist2[p] = best_d2
            for c in range(d):
                ab = tris[best, 1, c] - tris[best, 0, c]
                ac = tris[best, 2, c] - tris[best, 0, c]
                foot[p, c] = tris[best, 0, c] + best_v * ab + best_w * ac
        return foot, tri, dist2

    assign_nearest = assign_nearest_numba
    project_polyline = project_polyline_numba
    project_triangles = project_triangles_numba
else:
    assign_nearest = assign_nearest_numpy
    project_polyline = project_polyline_numpy
    project_triangles = project_triangles_numpy


def backend() -> str:
    """Name of the active kernel backend: "numba" or "numpy"."""
    return "numba" if NUMBA_AVAILABLE else "numpy"


def set_num_threads(n: int) -> None:
    """Cap the width of the parallel kernels (no-op on the numpy path)."""
    if NUMBA_AVAILABLE and n > 0:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))
