"""Seeded synthetic data: elliptical clouds, curve/surface samples, dilution.

All generators draw through the Philox counter-based generator in
``rng.py``; identical (spec, n, seed) reproduce bit-identical output.
Stream split: stream 0 carries the primary draws (radial factor /
curve parameters / latent regressor), stream 1 the noise, stream 2
auxiliary draws (radii, chi-square denominators).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dataset import Dataset
from .errors import RankDeficientA
from .rng import make_rng

RADIAL_LAWS = ("gaussian", "uniform_ball", "student_t")


@dataclass(frozen=True)
class EllipticalSpec:
    """Affine image A S + b of a rotation-invariant random vector S."""

    A: np.ndarray
    b: np.ndarray
    radial: str = "gaussian"
    nu: float | None = None  # student_t degrees of freedom, > 2

    def __post_init__(self):
        a = np.asarray(self.A, dtype=np.float64)
        bvec = np.asarray(self.b, dtype=np.float64)
        if a.ndim != 2:
            raise ValueError("A must be a d x k matrix")
        d, k = a.shape
        if bvec.shape != (d,):
            raise ValueError(f"b must have length {d}")
        if k < 1 or k > d:
            raise ValueError(f"need 1 <= k <= d, got k={k}, d={d}")
        sv = np.linalg.svd(a, compute_uv=False)
        if sv[0] == 0.0 or np.sum(sv > 1e-10 * sv[0]) < k:
            raise RankDeficientA(f"A has rank < {k}")
        if self.radial not in RADIAL_LAWS:
            raise ValueError(f"radial must be one of {RADIAL_LAWS}, got {self.radial!r}")
        if self.radial == "student_t":
            if self.nu is None or self.nu <= 2:
                raise ValueError("student_t needs nu > 2 so the covariance exists")
        object.__setattr__(self, "A", a)
        object.__setattr__(self, "b", bvec)

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def k(self) -> int:
        return self.A.shape[1]

    @property
    def radial_second_moment(self) -> float:
        """c with Cov(AS + b) = c * A A^T for the chosen radial law."""
        if self.radial == "gaussian":
            return 1.0
        if self.radial == "uniform_ball":
            return 1.0 / (self.k + 2)
        return self.nu / (self.nu - 2.0)

    @property
    def analytic_covariance(self) -> np.ndarray:
        return self.radial_second_moment * (self.A @ self.A.T)

    def to_json(self) -> dict:
        out = {
            "kind": "elliptical",
            "A": [[float(v) for v in row] for row in self.A],
            "b": [float(v) for v in self.b],
            "radial": self.radial,
        }
        if self.nu is not None:
            out["nu"] = float(self.nu)
        return out


def _draw_radial(spec: EllipticalSpec, n: int, rng, rng_aux) -> np.ndarray:
    k = spec.k
    if spec.radial == "gaussian":
        return rng.standard_normal((n, k))
    if spec.radial == "uniform_ball":
        direction = rng.standard_normal((n, k))
        norms = np.linalg.norm(direction, axis=1, keepdims=True)
        norms[norms == 0.0] = 1.0
        radius = rng_aux.uniform(0.0, 1.0, n) ** (1.0 / k)
        return direction / norms * radius[:, None]
    z = rng.standard_normal((n, k))
    w = rng_aux.chisquare(spec.nu, n) / spec.nu
    return z / np.sqrt(w)[:, None]


def sample_elliptical(spec: EllipticalSpec, n: int, seed: int) -> Dataset:
    """n i.i.d. draws of A S + b, deterministic in (spec, n, seed)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    s = _draw_radial(spec, n, make_rng(seed, 0), make_rng(seed, 2))
    values = s @ spec.A.T + spec.b
    return Dataset(values, tuple(f"x{i}" for i in range(spec.d)))


# ---------------------------------------------------------------------------
# curve / surface presets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Preset:
    name: str
    d: int
    k: int
    domain: tuple  # ((a, b),) for curves, ((a1, b1), (a2, b2)) for surfaces
    gamma: callable
    tangent: callable  # analytic tangent vectors for oracle use


def _line_gamma(t):
    return np.column_stack([t, 0.5 * t])


def _line_tangent(t):
    out = np.empty((t.shape[0], 2))
    out[:, 0] = 1.0
    out[:, 1] = 0.5
    return out


def _parabola_gamma(t):
    return np.column_stack([t, t * t])


def _parabola_tangent(t):
    return np.column_stack([np.ones_like(t), 2.0 * t])


def _sine_gamma(t):
    return np.column_stack([t, np.sin(t)])


def _sine_tangent(t):
    return np.column_stack([np.ones_like(t), np.cos(t)])


def _arc_gamma(t):
    return np.column_stack([np.cos(t), np.sin(t)])


def _arc_tangent(t):
    return np.column_stack([-np.sin(t), np.cos(t)])


def _helix_gamma(t):
    return np.column_stack([np.cos(t), np.sin(t), 0.3 * t])


def _helix_tangent(t):
    return np.column_stack([-np.sin(t), np.cos(t), np.full_like(t, 0.3)])


def _saddle_gamma(uv):
    u, v = uv[:, 0], uv[:, 1]
    return np.column_stack([u, v, 0.5 * (u * u - v * v)])


def _saddle_tangent(uv):
    u, v = uv[:, 0], uv[:, 1]
    n = uv.shape[0]
    frames = np.zeros((n, 3, 2))
    frames[:, 0, 0] = 1.0
    frames[:, 2, 0] = u
    frames[:, 1, 1] = 1.0
    frames[:, 2, 1] = -v
    return frames


PRESETS = {
    "line": Preset("line", 2, 1, ((-2.0, 2.0),), _line_gamma, _line_tangent),
    "parabola": Preset("parabola", 2, 1, ((-1.0, 1.0),), _parabola_gamma, _parabola_tangent),
    "sine": Preset("sine", 2, 1, ((-math.pi, math.pi),), _sine_gamma, _sine_tangent),
    "circle_arc": Preset(
        "circle_arc", 2, 1, ((-0.75 * math.pi, 0.75 * math.pi),), _arc_gamma, _arc_tangent
    ),
    "helix": Preset(
        "helix", 3, 1, ((-2.0 * math.pi, 2.0 * math.pi),), _helix_gamma, _helix_tangent
    ),
    "saddle": Preset(
        "saddle", 3, 2, ((-1.0, 1.0), (-1.0, 1.0)), _saddle_gamma, _saddle_tangent
    ),
}

PARAM_DISTRIBUTIONS = ("uniform", "truncated_gaussian")


@dataclass(frozen=True)
class ManifoldSpec:
    """A preset curve/surface plus a parameter law and an optional noise law."""

    generator: str
    parameter_distribution: str = "uniform"
    noise: EllipticalSpec | None = None

    def __post_init__(self):
        if self.generator not in PRESETS:
            raise ValueError(f"unknown generator {self.generator!r}; presets: {sorted(PRESETS)}")
        if self.parameter_distribution not in PARAM_DISTRIBUTIONS:
            raise ValueError(
                f"parameter_distribution must be one of {PARAM_DISTRIBUTIONS}"
            )
        if self.noise is not None and self.noise.d != PRESETS[self.generator].d:
            raise ValueError(
                f"noise dimension {self.noise.d} does not match "
                f"preset dimension {PRESETS[self.generator].d}"
            )

    @property
    def preset(self) -> Preset:
        return PRESETS[self.generator]

    def to_json(self) -> dict:
        return {
            "kind": "manifold",
            "generator": self.generator,
            "parameter_distribution": self.parameter_distribution,
            "noise": None if self.noise is None else self.noise.to_json(),
        }


def _draw_params(preset: Preset, distribution: str, n: int, rng) -> np.ndarray:
    cols = []
    for a, b in preset.domain:
        if distribution == "uniform":
            cols.append(rng.uniform(a, b, n))
        else:
            center = 0.5 * (a + b)
            sd = 0.25 * (b - a)
            draw = rng.normal(center, sd, n)
            bad = (draw < a) | (draw > b)
            while np.any(bad):  # rejection keeps the law truncated, stays seeded
                draw[bad] = rng.normal(center, sd, int(bad.sum()))
                bad = (draw < a) | (draw > b)
            cols.append(draw)
    params = np.column_stack(cols)
    return params[:, 0] if preset.k == 1 else params


def sample_manifold(spec: ManifoldSpec, n: int, seed: int):
    """Draw (noisy data, on-manifold ground truth, parameters)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    preset = spec.preset
    params = _draw_params(preset, spec.parameter_distribution, n, make_rng(seed, 0))
    ground_truth = preset.gamma(params)
    if spec.noise is None:
        noise = np.zeros_like(ground_truth)
    else:
        s = _draw_radial(spec.noise, n, make_rng(seed, 1), make_rng(seed, 2))
        noise = s @ spec.noise.A.T + spec.noise.b
    values = ground_truth + noise
    data = Dataset(values, tuple(f"x{i}" for i in range(preset.d)))
    return data, ground_truth, params


# ---------------------------------------------------------------------------
# regression-dilution scenario
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DilutionSample:
    """Observed 2-column data plus the analytic moments of the generator."""

    data: Dataset
    sigma_x_sq: float
    sigma_y_sq: float
    rho_sq_limit: float


def dilution_scenario(beta: float, sigma_star_sq: float, noise, n: int, seed: int) -> DilutionSample:
    """Line y* = beta x* observed with independent Gaussian errors.

    noise is a NoiseModel with the two error variances. The analytic
    variances sigma_x_sq = sigma*^2 + eta_x^2 and
    sigma_y_sq = beta^2 sigma*^2 + eta_y^2 and the limiting squared
    correlation are recorded alongside the sample.
    """
    if sigma_star_sq <= 0.0:
        raise ValueError("sigma_star_sq must be positive")
    if n < 2:
        raise ValueError("n must be >= 2")
    x_star = make_rng(seed, 0).standard_normal(n) * math.sqrt(sigma_star_sq)
    rng_noise = make_rng(seed, 1)
    eps_x = rng_noise.standard_normal(n) * math.sqrt(noise.eta_x_sq)
    eps_y = rng_noise.standard_normal(n) * math.sqrt(noise.eta_y_sq)
    x = x_star + eps_x
    y = beta * x_star + eps_y
    sigma_x_sq = sigma_star_sq + noise.eta_x_sq
    sigma_y_sq = beta * beta * sigma_star_sq + noise.eta_y_sq
    rho_sq_limit = (1.0 - noise.eta_x_sq / sigma_x_sq) * (1.0 - noise.eta_y_sq / sigma_y_sq)
    return DilutionSample(
        data=Dataset(np.column_stack([x, y]), ("x", "y")),
        sigma_x_sq=sigma_x_sq,
        sigma_y_sq=sigma_y_sq,
        rho_sq_limit=rho_sq_limit,
    )


# ---------------------------------------------------------------------------
# spec (de)serialization for the CLI
# ---------------------------------------------------------------------------

def elliptical_spec_from_json(obj: dict) -> EllipticalSpec:
    return EllipticalSpec(
        A=np.asarray(obj["A"], dtype=np.float64),
        b=np.asarray(obj["b"], dtype=np.float64),
        radial=obj.get("radial", "gaussian"),
        nu=obj.get("nu"),
    )


def manifold_spec_from_json(obj: dict) -> ManifoldSpec:
    noise = obj.get("noise")
    return ManifoldSpec(
        generator=obj["generator"],
        parameter_distribution=obj.get("parameter_distribution", "uniform"),
        noise=None if noise is None else elliptical_spec_from_json(noise),
    )
