"""Elastic-map fitting of smooth principal manifolds and projection onto them.

A manifold is discretized as a chain of nodes (intrinsic dimension 1) or a
rectangular node grid (dimension 2). Fitting alternates two exact steps:
assign every sample to its nearest node, then solve the quadratic
node-position system for

    U = U_approx + stretch * U_stretch + bend * U_bend

where U_approx is the mean squared sample-to-node distance, U_stretch sums
squared edge lengths, and U_bend sums squared second differences along the
chain / grid rows and columns. Both steps minimize U exactly for their
block, so the energy trace is non-increasing.

Projection is piecewise: onto chain segments (optionally onto a C1
centripetal Catmull-Rom spline through the nodes) for curves, onto the two
triangles of every grid cell for surfaces. Ties go to the lowest face
index.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .dataset import Dataset
from .errors import DimensionUnsupported, SingularSystem
from .pca import LinearPrincipalManifold, VarianceDecomposition, fit_linear, _column_variance


@dataclass
class ElasticManifold:
    """Discretized principal manifold: node embeddings plus grid topology."""

    nodes: np.ndarray                 # (m, d)
    intrinsic_dim: int                # 1 or 2
    grid: tuple[int, ...]             # (m,) for chains, (m1, m2) for grids
    stretch_penalty: float
    bend_penalty: float
    spline_smoothing: bool = False
    energy_trace: list = field(default_factory=list, repr=False, compare=False)
    converged: bool = field(default=True, repr=False, compare=False)
    n_iter: int = field(default=0, repr=False, compare=False)

    def __post_init__(self):
        self.nodes = np.asarray(self.nodes, dtype=np.float64)
        if self.nodes.ndim != 2:
            raise ValueError("nodes must be an m x d matrix")
        if not np.all(np.isfinite(self.nodes)):
            raise ValueError("node coordinates must be finite")
        if self.intrinsic_dim not in (1, 2):
            raise DimensionUnsupported(
                f"intrinsic dimension {self.intrinsic_dim} not supported (chains and grids only)"
            )
        grid = tuple(int(g) for g in self.grid)
        if len(grid) != self.intrinsic_dim or any(g < 2 for g in grid):
            raise ValueError(f"grid {grid} inconsistent with intrinsic_dim {self.intrinsic_dim}")
        if int(np.prod(grid)) != self.nodes.shape[0]:
            raise ValueError(f"grid {grid} does not match {self.nodes.shape[0]} nodes")
        if self.stretch_penalty < 0 or self.bend_penalty < 0:
            raise ValueError("penalties must be non-negative")
        if self.spline_smoothing and self.intrinsic_dim != 1:
            raise ValueError("spline smoothing applies to curves only")
        self.grid = grid

    @property
    def m(self) -> int:
        return self.nodes.shape[0]

    @property
    def d(self) -> int:
        return self.nodes.shape[1]

    def to_json(self) -> dict:
        return {
            "kind": "elastic",
            "intrinsic_dim": self.intrinsic_dim,
            "grid": list(self.grid),
            "nodes": [[float(v) for v in row] for row in self.nodes],
            "stretch_penalty": float(self.stretch_penalty),
            "bend_penalty": float(self.bend_penalty),
            "spline_smoothing": bool(self.spline_smoothing),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "ElasticManifold":
        if obj.get("kind") != "elastic":
            raise ValueError(f"expected kind 'elastic', got {obj.get('kind')!r}")
        return cls(
            nodes=np.asarray(obj["nodes"], dtype=np.float64),
            intrinsic_dim=int(obj["intrinsic_dim"]),
            grid=tuple(obj["grid"]),
            stretch_penalty=float(obj["stretch_penalty"]),
            bend_penalty=float(obj["bend_penalty"]),
            spline_smoothing=bool(obj["spline_smoothing"]),
        )


def manifold_from_json(obj: dict):
    """Dispatch a serialized manifold to its dataclass."""
    kind = obj.get("kind")
    if kind == "elastic":
        return ElasticManifold.from_json(obj)
    if kind == "linear":
        return LinearPrincipalManifold.from_json(obj)
    raise ValueError(f"unknown manifold kind {kind!r}")


@dataclass(frozen=True)
class ProjectionResult:
    """Foot points, residuals, tangent frames and carrying-face indices."""

    foot_points: np.ndarray   # (n, d)
    residuals: np.ndarray     # (n, d)
    tangents: np.ndarray      # (n, d, k), orthonormal columns per row
    face_index: np.ndarray    # (n,)


@dataclass(frozen=True)
class NodeConsistency:
    """Self-consistency diagnostic: per-node normal deviation and support."""

    deviation: np.ndarray  # (m,), in units of the data's RMS scale
    support: np.ndarray    # (m,) int
    scale: float

    @property
    def weighted_mean(self) -> float:
        total = int(self.support.sum())
        if total == 0:
            return 0.0
        return float(np.sum(self.deviation * self.support) / total)


# ---------------------------------------------------------------------------
# topology
# ---------------------------------------------------------------------------

def _edges(grid: tuple[int, ...]) -> np.ndarray:
    if len(grid) == 1:
        m = grid[0]
        return np.column_stack([np.arange(m - 1), np.arange(1, m)])
    m1, m2 = grid
    idx = np.arange(m1 * m2).reshape(m1, m2)
    horiz = np.column_stack([idx[:, :-1].ravel(), idx[:, 1:].ravel()])
    vert = np.column_stack([idx[:-1, :].ravel(), idx[1:, :].ravel()])
    return np.vstack([horiz, vert])


def _ribs(grid: tuple[int, ...]) -> np.ndarray:
    if len(grid) == 1:
        m = grid[0]
        if m < 3:
            return np.empty((0, 3), dtype=np.int64)
        return np.column_stack([np.arange(m - 2), np.arange(1, m - 1), np.arange(2, m)])
    m1, m2 = grid
    idx = np.arange(m1 * m2).reshape(m1, m2)
    rows = []
    if m2 >= 3:
        rows.append(np.column_stack([idx[:, :-2].ravel(), idx[:, 1:-1].ravel(), idx[:, 2:].ravel()]))
    if m1 >= 3:
        rows.append(np.column_stack([idx[:-2, :].ravel(), idx[1:-1, :].ravel(), idx[2:, :].ravel()]))
    if not rows:
        return np.empty((0, 3), dtype=np.int64)
    return np.vstack(rows)


def _triangle_indices(grid: tuple[int, int]) -> np.ndarray:
    """Two triangles per grid cell, split along the low-to-high diagonal."""
    m1, m2 = grid
    idx = np.arange(m1 * m2).reshape(m1, m2)
    n00 = idx[:-1, :-1].ravel()
    n01 = idx[:-1, 1:].ravel()
    n10 = idx[1:, :-1].ravel()
    n11 = idx[1:, 1:].ravel()
    tris = np.empty((2 * n00.size, 3), dtype=np.int64)
    tris[0::2] = np.column_stack([n00, n10, n11])
    tris[1::2] = np.column_stack([n00, n11, n01])
    return tris


def _penalty_matrices(grid: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    m = int(np.prod(grid))
    e_mat = np.zeros((m, m))
    for a, b in _edges(grid):
        e_mat[a, a] += 1.0
        e_mat[b, b] += 1.0
        e_mat[a, b] -= 1.0
        e_mat[b, a] -= 1.0
    r_mat = np.zeros((m, m))
    for a, b, c in _ribs(grid):
        w = np.zeros(m)
        w[a] += 1.0
        w[b] -= 2.0
        w[c] += 1.0
        r_mat += np.outer(w, w)
    return e_mat, r_mat


def _stretch_energy(nodes: np.ndarray, edges: np.ndarray) -> float:
    diff = nodes[edges[:, 0]] - nodes[edges[:, 1]]
    return float(np.einsum("ed,ed->", diff, diff))


def _bend_energy(nodes: np.ndarray, ribs: np.ndarray) -> float:
    if ribs.shape[0] == 0:
        return 0.0
    second = nodes[ribs[:, 0]] - 2.0 * nodes[ribs[:, 1]] + nodes[ribs[:, 2]]
    return float(np.einsum("rd,rd->", second, second))


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _initial_nodes(data: Dataset, k: int, grid: tuple[int, ...]) -> np.ndarray:
    """Regular grid spanning +-2 sqrt(lambda_i) along the top-k components."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lm = fit_linear(data, k)
    spans = 2.0 * np.sqrt(lm.eigenvalues)
    if k == 1:
        coords = np.linspace(-spans[0], spans[0], grid[0])
        return lm.mean + coords[:, None] * lm.basis[:, 0]
    c1 = np.linspace(-spans[0], spans[0], grid[0])
    c2 = np.linspace(-spans[1], spans[1], grid[1])
    nodes = (
        lm.mean
        + np.repeat(c1, grid[1])[:, None] * lm.basis[:, 0]
        + np.tile(c2, grid[0])[:, None] * lm.basis[:, 1]
    )
    return nodes


def fit_elastic(
    data: Dataset,
    k: int = 1,
    node_count=None,
    stretch_penalty: float = 0.01,
    bend_penalty: float = 0.1,
    max_iter: int = 200,
    tol: float = 1e-6,
    spline_smoothing: bool | None = None,
) -> ElasticManifold:
    """Fit an elastic chain (k=1) or grid (k=2) by alternating minimization.

    node_count defaults to max(10, round(sqrt(n))) for chains and (8, 8)
    for grids. spline_smoothing defaults to True for chains, so downstream
    finite differences see a C1 curve.
    """
    if k not in (1, 2):
        raise DimensionUnsupported(f"k={k} not supported; chains (k=1) and grids (k=2) only")
    if k == 2 and data.d < 3:
        raise DimensionUnsupported("a 2-d grid manifold needs ambient dimension >= 3")
    if node_count is None:
        grid = (max(10, round(data.n ** 0.5)),) if k == 1 else (8, 8)
    elif isinstance(node_count, int):
        if k != 1:
            raise ValueError("k=2 needs node_count as a pair (m1, m2)")
        grid = (node_count,)
    else:
        grid = tuple(int(g) for g in node_count)
        if len(grid) != k:
            raise ValueError(f"node_count {grid} inconsistent with k={k}")
    m = int(np.prod(grid))
    if any(g < 2 for g in grid):
        raise ValueError("need at least 2 nodes per grid axis")
    if data.n < m:
        raise ValueError(f"need n >= m, got n={data.n}, m={m}")
    if stretch_penalty < 0 or bend_penalty < 0:
        raise ValueError("penalties must be non-negative")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if spline_smoothing is None:
        spline_smoothing = k == 1

    x = data.values
    n = data.n
    nodes = _initial_nodes(data, k, grid)
    edges = _edges(grid)
    ribs = _ribs(grid)
    e_mat, r_mat = _penalty_matrices(grid)
    penalty = stretch_penalty * e_mat + bend_penalty * r_mat

    def energy(nds, dist2):
        return (
            float(dist2.mean())
            + stretch_penalty * _stretch_energy(nds, edges)
            + bend_penalty * _bend_energy(nds, ribs)
        )

    idx, dist2 = _kernels.assign_nearest(x, nodes)
    u_cur = energy(nodes, dist2)
    trace = [u_cur]
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        counts = np.bincount(idx, minlength=m).astype(np.float64)
        if stretch_penalty == 0.0 and bend_penalty == 0.0 and np.any(counts == 0):
            empty = int(np.argmin(counts))
            raise SingularSystem(
                f"node {empty} has no assigned samples and both penalties are zero"
            )
        rhs = np.zeros((m, x.shape[1]))
        np.add.at(rhs, idx, x)
        rhs /= n
        system = np.diag(counts / n) + penalty
        try:
            new_nodes = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem(f"node-position system is singular: {exc}") from None
        if not np.all(np.isfinite(new_nodes)):
            raise SingularSystem("node-position system produced non-finite nodes")
        idx, dist2 = _kernels.assign_nearest(x, new_nodes)
        u_new = energy(new_nodes, dist2)
        trace.append(u_new)
        nodes = new_nodes
        delta = u_cur - u_new
        u_cur = u_new
        if abs(delta) <= tol * max(u_cur, 1e-300):
            converged = True
            break

    return ElasticManifold(
        nodes=nodes,
        intrinsic_dim=k,
        grid=grid,
        stretch_penalty=stretch_penalty,
        bend_penalty=bend_penalty,
        spline_smoothing=spline_smoothing,
        energy_trace=trace,
        converged=converged,
        n_iter=it,
    )


def straight_chain(lm: LinearPrincipalManifold, data: Dataset, node_count: int = 16) -> ElasticManifold:
    """Degenerate chain representation of a 1-d linear manifold.

    Nodes are placed collinearly along the first principal direction,
    spanning the full range of the data's projection coordinates, so
    projecting onto the chain coincides with projecting onto the line.
    """
    if lm.k != 1:
        raise ValueError("straight_chain needs a 1-dimensional linear manifold")
    coords = (data.values - lm.mean) @ lm.basis[:, 0]
    lo, hi = float(coords.min()), float(coords.max())
    if hi <= lo:
        hi = lo + 1.0
    ts = np.linspace(lo, hi, node_count)
    nodes = lm.mean + ts[:, None] * lm.basis[:, 0]
    return ElasticManifold(
        nodes=nodes,
        intrinsic_dim=1,
        grid=(node_count,),
        stretch_penalty=0.0,
        bend_penalty=0.0,
        spline_smoothing=False,
    )


# ---------------------------------------------------------------------------
# Catmull-Rom spline (centripetal) through chain nodes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Spline:
    knots: np.ndarray   # (m,)
    coeffs: np.ndarray  # (m-1, 4, d): monomial coefficients per segment

    def evaluate(self, seg: np.ndarray, s: np.ndarray) -> np.ndarray:
        c = self.coeffs[seg]
        return c[:, 0] + s[:, None] * (c[:, 1] + s[:, None] * (c[:, 2] + s[:, None] * c[:, 3]))

    def derivative(self, seg: np.ndarray, s: np.ndarray) -> np.ndarray:
        c = self.coeffs[seg]
        return c[:, 1] + s[:, None] * (2.0 * c[:, 2] + s[:, None] * (3.0 * c[:, 3]))

    def second_derivative(self, seg: np.ndarray, s: np.ndarray) -> np.ndarray:
        c = self.coeffs[seg]
        return 2.0 * c[:, 2] + s[:, None] * (6.0 * c[:, 3])


def _build_spline(nodes: np.ndarray) -> _Spline:
    m = nodes.shape[0]
    seg_len = np.linalg.norm(np.diff(nodes, axis=0), axis=1)
    dt = np.sqrt(np.maximum(seg_len, 1e-24))  # centripetal alpha = 1/2
    knots = np.concatenate([[0.0], np.cumsum(dt)])
    # reflected ghost points keep endpoint tangents finite
    p_prev = np.vstack([2.0 * nodes[0] - nodes[1], nodes[:-1]])
    p_next = np.vstack([nodes[1:], 2.0 * nodes[-1] - nodes[-2]])
    t_prev = np.concatenate([[knots[0] - dt[0]], knots[:-1]])
    t_next = np.concatenate([knots[1:], [knots[-1] + dt[-1]]])
    # non-uniform Catmull-Rom tangents (d/dt) at each node
    left = (nodes - p_prev) / (knots - t_prev)[:, None]
    right = (p_next - nodes) / (t_next - knots)[:, None]
    tangents = (
        left * (t_next - knots)[:, None] + right * (knots - t_prev)[:, None]
    ) / (t_next - t_prev)[:, None]
    # cubic Hermite per segment in local s in [0, 1]
    p0 = nodes[:-1]
    p1 = nodes[1:]
    m0 = tangents[:-1] * dt[:, None]
    m1 = tangents[1:] * dt[:, None]
    coeffs = np.empty((m - 1, 4, nodes.shape[1]))
    coeffs[:, 0] = p0
    coeffs[:, 1] = m0
    coeffs[:, 2] = -3.0 * p0 - 2.0 * m0 + 3.0 * p1 - m1
    coeffs[:, 3] = 2.0 * p0 + m0 - 2.0 * p1 + m1
    return _Spline(knots=knots, coeffs=coeffs)


_SPLINE_SUBDIV = 16
_NEWTON_ITER = 30


def _densify_spline(spline: _Spline):
    nseg = spline.coeffs.shape[0]
    s = np.linspace(0.0, 1.0, _SPLINE_SUBDIV, endpoint=False)
    seg = np.repeat(np.arange(nseg), s.size)
    ss = np.tile(s, nseg)
    pts = spline.evaluate(seg, ss)
    last = spline.evaluate(np.array([nseg - 1]), np.array([1.0]))
    dense = np.vstack([pts, last])
    dense_seg = np.concatenate([seg, [nseg - 1]])
    dense_s = np.concatenate([ss, [1.0]])
    return dense, dense_seg, dense_s


def _project_spline(points: np.ndarray, spline: _Spline):
    """Nearest point on the C1 spline per query: dense bracket + Newton."""
    dense, dense_seg, dense_s = _densify_spline(spline)
    _, didx, tloc, _ = _kernels.project_polyline(points, dense)
    # map the dense polyline hit to a global curve parameter
    knots = spline.knots
    seg0 = dense_seg[didx]
    s_lo = dense_s[didx]
    seg_next = dense_seg[np.minimum(didx + 1, dense.shape[0] - 1)]
    s_hi = np.where(seg_next == seg0, dense_s[np.minimum(didx + 1, dense.shape[0] - 1)], 1.0)
    s_init = s_lo + tloc * (s_hi - s_lo)
    foot_init = spline.evaluate(seg0, s_init)
    dist2_init = np.einsum("nd,nd->n", points - foot_init, points - foot_init)
    dt = np.diff(knots)
    t = knots[seg0] + s_init * dt[seg0]
    t_min, t_max = knots[0], knots[-1]
    nseg = spline.coeffs.shape[0]
    for _ in range(_NEWTON_ITER):
        seg = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, nseg - 1)
        s = (t - knots[seg]) / dt[seg]
        p = spline.evaluate(seg, s)
        dp = spline.derivative(seg, s) / dt[seg, None]
        d2p = spline.second_derivative(seg, s) / (dt[seg, None] ** 2)
        diff = p - points
        g = np.einsum("nd,nd->n", diff, dp)
        gp = np.einsum("nd,nd->n", dp, dp) + np.einsum("nd,nd->n", diff, d2p)
        step = np.where(gp > 1e-300, g / np.maximum(gp, 1e-300), 0.0)
        t = np.clip(t - step, t_min, t_max)
    seg = np.clip(np.searchsorted(knots, t, side="right") - 1, 0, nseg - 1)
    s = (t - knots[seg]) / dt[seg]
    foot = spline.evaluate(seg, s)
    dist2 = np.einsum("nd,nd->n", points - foot, points - foot)
    # safety net: fall back to the on-spline bracket point if Newton diverged
    worse = dist2 > dist2_init * (1.0 + 1e-9) + 1e-300
    if np.any(worse):
        foot[worse] = foot_init[worse]
        seg[worse] = seg0[worse]
        s[worse] = s_init[worse]
    tangent = spline.derivative(seg, s)
    return foot, seg, s, tangent


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------

def _orthonormal_tangent(vectors: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    return vectors / np.maximum(norms, 1e-300)


def project(manifold: ElasticManifold, points: np.ndarray) -> ProjectionResult:
    """Minimal orthogonal projection of each row onto the manifold."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] != manifold.d:
        raise ValueError(f"points must be n x {manifold.d}")
    if manifold.intrinsic_dim == 1:
        if manifold.spline_smoothing:
            spline = _build_spline(manifold.nodes)
            foot, seg, _, tangent = _project_spline(points, spline)
            tangents = _orthonormal_tangent(tangent)[:, :, None]
            face = seg.astype(np.int64)
        else:
            foot, seg, _, _ = _kernels.project_polyline(points, manifold.nodes)
            dirs = manifold.nodes[1:] - manifold.nodes[:-1]
            tangents = _orthonormal_tangent(dirs[seg])[:, :, None]
            face = seg
    else:
        tri_idx = _triangle_indices(manifold.grid)
        tris = np.ascontiguousarray(manifold.nodes[tri_idx])
        foot, face, _ = _kernels.project_triangles(points, tris)
        # orthonormal in-plane frame per carrying triangle
        e1 = tris[:, 1] - tris[:, 0]
        e2 = tris[:, 2] - tris[:, 0]
        u1 = e1 / np.maximum(np.linalg.norm(e1, axis=1, keepdims=True), 1e-300)
        e2p = e2 - np.einsum("td,td->t", e2, u1)[:, None] * u1
        u2 = e2p / np.maximum(np.linalg.norm(e2p, axis=1, keepdims=True), 1e-300)
        frames = np.stack([u1, u2], axis=2)  # (T, d, 2)
        tangents = frames[face]
    return ProjectionResult(
        foot_points=foot,
        residuals=points - foot,
        tangents=tangents,
        face_index=face,
    )


def boundary_distance(manifold: ElasticManifold, result: ProjectionResult) -> np.ndarray:
    """Distance from each foot point to the boundary of its carrying face.

    For splines the curve is C1 across interior knots, so only the two
    curve endpoints count as boundary.
    """
    foot = result.foot_points
    face = result.face_index
    if manifold.intrinsic_dim == 1:
        if manifold.spline_smoothing:
            ends = manifold.nodes[[0, -1]]
            d0 = np.linalg.norm(foot - ends[0], axis=1)
            d1 = np.linalg.norm(foot - ends[1], axis=1)
            return np.minimum(d0, d1)
        a = manifold.nodes[face]
        b = manifold.nodes[face + 1]
        d0 = np.linalg.norm(foot - a, axis=1)
        d1 = np.linalg.norm(foot - b, axis=1)
        return np.minimum(d0, d1)
    tri_idx = _triangle_indices(manifold.grid)
    tris = manifold.nodes[tri_idx[face]]  # (n, 3, d)
    out = np.full(foot.shape[0], np.inf)
    for e0, e1 in ((0, 1), (1, 2), (2, 0)):
        a = tris[:, e0]
        ab = tris[:, e1] - a
        len2 = np.maximum(np.einsum("nd,nd->n", ab, ab), 1e-300)
        t = np.clip(np.einsum("nd,nd->n", foot - a, ab) / len2, 0.0, 1.0)
        proj = a + t[:, None] * ab
        out = np.minimum(out, np.linalg.norm(foot - proj, axis=1))
    return out


# ---------------------------------------------------------------------------
# diagnostics
# ---------------------------------------------------------------------------

def rms_scale(data: Dataset) -> float:
    """Root-mean-square per-coordinate spread of the data."""
    return float(np.sqrt(np.mean(_column_variance(data.values))))


def self_consistency(manifold: ElasticManifold, data: Dataset) -> NodeConsistency:
    """Per-node conditional-mean diagnostic.

    Bins samples by nearest node, projects each bin mean back onto the
    manifold, and reports the normal-space distance in RMS-scale units.
    Empty bins report (0, 0).
    """
    idx, _ = _kernels.assign_nearest(data.values, manifold.nodes)
    m = manifold.m
    counts = np.bincount(idx, minlength=m)
    sums = np.zeros((m, data.d))
    np.add.at(sums, idx, data.values)
    scale = rms_scale(data)
    deviation = np.zeros(m)
    occupied = np.nonzero(counts > 0)[0]
    if occupied.size:
        means = sums[occupied] / counts[occupied, None]
        res = project(manifold, means)
        dev = means - res.foot_points
        tang = res.tangents
        tangential = np.einsum("ndk,nd->nk", tang, dev)
        normal = dev - np.einsum("ndk,nk->nd", tang, tangential)
        deviation[occupied] = np.linalg.norm(normal, axis=1) / max(scale, 1e-300)
    return NodeConsistency(deviation=deviation, support=counts, scale=scale)


def explained_variance_split(manifold: ElasticManifold, data: Dataset) -> VarianceDecomposition:
    """Per-coordinate total / explained / unexplained variance of the fit.

    The defect property of the result (total - explained - unexplained)
    is twice the projection/residual cross-covariance and need not vanish
    for imperfect fits.
    """
    res = project(manifold, data.values)
    return VarianceDecomposition(
        total=_column_variance(data.values),
        explained=_column_variance(res.foot_points),
        unexplained=_column_variance(res.residuals),
    )
