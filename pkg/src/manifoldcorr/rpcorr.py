"""Manifold-normalized correlation: reliabilities, sensitivities, integral.

The squared correlation of a column pair over a fitted manifold is

    rho_sq(i, j) = R_i * R_j * integral of S_ij * S_ji over the manifold

where R_i is the fraction of column i's variance the manifold explains
and S_ij is the local sensitivity of the i-th residual coordinate to the
j-th input coordinate. The integral is taken against the empirical
pushforward measure: each sample contributes weight 1/n at its foot
point.

Two sensitivity modes ship. residual_jacobian takes central finite
differences of the residual map x - pi(x) at the foot points, matching
the sensitivity definition literally. tangent_graph (curves only) reads
slopes off the unit tangent at the foot point, S_ij = t_i / t_j, which
makes the integrand telescope to exactly 1 and reproduces the
L-correlation on straight manifolds. tangent_graph is the default for
curves, residual_jacobian otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .elastic import ElasticManifold, ProjectionResult, boundary_distance, project
from .errors import AllSamplesFlagged, DegenerateVariance, ModeUnsupported
from .pca import LinearPrincipalManifold, project_linear, _column_variance
from .stats import pearson_matrix

RESIDUAL_JACOBIAN = "residual_jacobian"
TANGENT_GRAPH = "tangent_graph"
_TANGENT_EPS = 1e-8


@dataclass(frozen=True)
class SensitivityField:
    """Per-sample d x d sensitivity values plus exclusion bookkeeping.

    flags marks entries whose graph representation is undefined (near-zero
    tangent component); boundary marks samples whose foot point sits within
    2 fd steps of a face boundary or curve endpoint.
    """

    mode: str
    values: np.ndarray    # (n, d, d)
    fd_step: float
    flags: np.ndarray     # (n, d, d) bool
    boundary: np.ndarray  # (n,) bool


@dataclass(frozen=True)
class RPCorrelationReport:
    rho_sq: np.ndarray                # (d, d), symmetric
    reliabilities: np.ndarray         # (d,)
    sensitivity_integrals: np.ndarray  # (d, d)
    mode: str
    sample_count: int
    excluded_samples: int
    columns: tuple[str, ...]
    signed_rho_heuristic: np.ndarray  # sign(pearson) * sqrt(rho_sq), heuristic only

    def to_json(self, manifold_ref) -> dict:
        return {
            "method": "riemann_pearson",
            "mode": self.mode,
            "rho_sq": [[float(v) for v in row] for row in self.rho_sq],
            "reliabilities": [float(v) for v in self.reliabilities],
            "sensitivity_integrals": [
                [float(v) for v in row] for row in self.sensitivity_integrals
            ],
            "excluded_samples": int(self.excluded_samples),
            "n": int(self.sample_count),
            "manifold_ref": manifold_ref,
            "columns": list(self.columns),
            "signed_rho_heuristic": [
                [float(v) for v in row] for row in self.signed_rho_heuristic
            ],
            "signed_rho_note": "sign(pearson) * sqrt(rho_sq); heuristic extension, "
            "not part of the manifold correlation definition",
        }


def _intrinsic_dim(manifold) -> int:
    if isinstance(manifold, ElasticManifold):
        return manifold.intrinsic_dim
    if isinstance(manifold, LinearPrincipalManifold):
        return manifold.k
    raise TypeError(f"unsupported manifold type {type(manifold).__name__}")


def project_any(manifold, points: np.ndarray) -> ProjectionResult:
    """Uniform projection interface over elastic and linear manifolds."""
    if isinstance(manifold, ElasticManifold):
        return project(manifold, points)
    points = np.asarray(points, dtype=np.float64)
    foot = project_linear(manifold, points)
    n = points.shape[0]
    tangents = np.broadcast_to(manifold.basis, (n,) + manifold.basis.shape).copy()
    return ProjectionResult(
        foot_points=foot,
        residuals=points - foot,
        tangents=tangents,
        face_index=np.zeros(n, dtype=np.int64),
    )


def reliability(data: Dataset, residuals: np.ndarray, i) -> float:
    """Fraction of column i's variance explained: 1 - Var_i(res)/Var_i(data).

    Not clamped; a fit worse than the mean yields a negative value.
    """
    i = data.column_index(i)
    total = _column_variance(data.values)
    if total[i] <= 0.0:
        raise DegenerateVariance(data.column_names[i])
    resid_var = _column_variance(np.asarray(residuals, dtype=np.float64))
    return float(1.0 - resid_var[i] / total[i])


def _fd_scales(data: Dataset) -> np.ndarray:
    sd = np.sqrt(_column_variance(data.values))
    return np.where(sd > 0.0, sd, 1.0)


def sensitivity_field(manifold, data: Dataset, mode: str | None = None,
                      fd_step: float = 1e-4) -> SensitivityField:
    """Evaluate the local sensitivity matrix at every sample's foot point."""
    if mode is None:
        mode = TANGENT_GRAPH if _intrinsic_dim(manifold) == 1 else RESIDUAL_JACOBIAN
    if mode not in (RESIDUAL_JACOBIAN, TANGENT_GRAPH):
        raise ModeUnsupported(f"unknown sensitivity mode {mode!r}")
    if mode == TANGENT_GRAPH and _intrinsic_dim(manifold) != 1:
        raise ModeUnsupported("tangent_graph mode needs an intrinsic dimension of 1")
    if not 0.0 < fd_step <= 1e-1:
        raise ValueError(f"fd_step must be in (0, 0.1], got {fd_step}")
    n, d = data.n, data.d
    proj = project_any(manifold, data.values)

    if mode == TANGENT_GRAPH:
        t = proj.tangents[:, :, 0]
        small = np.abs(t) < _TANGENT_EPS
        denom = np.where(small, 1.0, t)
        values = t[:, :, None] / denom[:, None, :]
        flags = np.broadcast_to(small[:, None, :], (n, d, d)).copy()
        values = np.where(flags, 0.0, values)
        boundary = np.zeros(n, dtype=bool)
        return SensitivityField(mode=mode, values=values, fd_step=0.0,
                                flags=flags, boundary=boundary)

    feet = proj.foot_points
    scales = _fd_scales(data)
    steps = fd_step * scales
    values = np.empty((n, d, d))
    for j in range(d):
        h = steps[j]
        plus = feet.copy()
        plus[:, j] += h
        minus = feet.copy()
        minus[:, j] -= h
        r_plus = plus - project_any(manifold, plus).foot_points
        r_minus = minus - project_any(manifold, minus).foot_points
        values[:, :, j] = (r_plus - r_minus) / (2.0 * h)
    if isinstance(manifold, ElasticManifold):
        boundary = boundary_distance(manifold, proj) < 2.0 * float(steps.max())
    else:
        boundary = np.zeros(n, dtype=bool)
    flags = np.zeros((n, d, d), dtype=bool)
    return SensitivityField(mode=mode, values=values, fd_step=fd_step,
                            flags=flags, boundary=boundary)


def rp_correlation(data: Dataset, manifold, mode: str | None = None,
                   mc_weights: str = "empirical_pushforward",
                   fd_step: float = 1e-4) -> RPCorrelationReport:
    """Manifold-normalized squared correlation matrix over all column pairs."""
    if mc_weights != "empirical_pushforward":
        raise ValueError(f"unsupported mc_weights {mc_weights!r}")
    total = _column_variance(data.values)
    for idx in range(data.d):
        if total[idx] <= 0.0:
            raise DegenerateVariance(data.column_names[idx])
    proj = project_any(manifold, data.values)
    resid_var = _column_variance(proj.residuals)
    rel = 1.0 - resid_var / total

    field = sensitivity_field(manifold, data, mode=mode, fd_step=fd_step)
    d = data.d
    integrals = np.empty((d, d))
    rho_sq = np.empty((d, d))
    for a in range(d):
        for b in range(a, d):
            included = ~(field.boundary | field.flags[:, a, b] | field.flags[:, b, a])
            count = int(included.sum())
            if count == 0:
                raise AllSamplesFlagged(
                    f"every sample excluded for column pair ({data.column_names[a]}, "
                    f"{data.column_names[b]})"
                )
            if field.mode == TANGENT_GRAPH:
                # S_ab * S_ba = (t_a/t_b) * (t_b/t_a) telescopes to 1 for every
                # unflagged sample; evaluate the product algebraically so the
                # straight-manifold reduction is exact.
                integral = 1.0
            else:
                prod = field.values[included, a, b] * field.values[included, b, a]
                integral = float(np.mean(prod))
            integrals[a, b] = integral
            integrals[b, a] = integral
            val = float(rel[a] * rel[b] * integral)
            rho_sq[a, b] = val
            rho_sq[b, a] = val

    signed = np.sign(pearson_matrix(data)) * np.sqrt(np.maximum(rho_sq, 0.0))
    return RPCorrelationReport(
        rho_sq=rho_sq,
        reliabilities=rel,
        sensitivity_integrals=integrals,
        mode=field.mode,
        sample_count=data.n,
        excluded_samples=int(field.boundary.sum()),
        columns=data.column_names,
        signed_rho_heuristic=signed,
    )


def l_reduction_check(data: Dataset, k: int = 1):
    """Compare the manifold correlation on a straight chain with the
    L-correlation on the underlying linear manifold.

    Fits the 1-d linear manifold, realizes it as a degenerate collinear
    chain spanning the data's projection range, and evaluates both paths.
    Returns (rp_rho_sq, l_rho_sq, max_abs_diff).
    """
    from .elastic import straight_chain
    from .pca import fit_linear, l_correlation_matrix

    if k != 1:
        raise ModeUnsupported("the tangent-graph reduction is defined for k=1 chains")
    lm = fit_linear(data, k)
    l_rho, _ = l_correlation_matrix(data, lm)
    chain = straight_chain(lm, data)
    report = rp_correlation(data, chain, mode=TANGENT_GRAPH)
    diff = float(np.max(np.abs(report.rho_sq - l_rho)))
    return report.rho_sq, l_rho, diff
