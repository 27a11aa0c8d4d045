"""Command-line pipeline: generate -> fit-manifold -> correlate -> plot.

Exit codes: 0 success, 1 IO/parse error, 2 domain error (degenerate
variance, unsupported mode/dimension, bad spec values), 3 fit finished
without reaching the convergence tolerance. Outputs carry no timestamps
and embed the resolved configuration, so identical flags and seed produce
byte-identical files.

MANIFOLD_CORR_THREADS caps the width of the parallel kernels (0 or unset
means auto); MANIFOLD_CORR_NUMBA=0 selects the pure-numpy kernel path.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import _kernels
from .dataset import Dataset, read_csv, write_csv
from .datagen import (
    elliptical_spec_from_json,
    manifold_spec_from_json,
    dilution_scenario,
    sample_elliptical,
    sample_manifold,
)
from .elastic import ElasticManifold, fit_elastic, manifold_from_json, _build_spline, _densify_spline
from .errors import CsvFormatError, DimensionUnsupported, ManifoldCorrError
from .linear import NoiseModel
from .pca import LinearPrincipalManifold, fit_linear
from .report import dump_json, l_correlation_report, pearson_report, rp_report
from .svg import render_scatter


def _configure_threads() -> None:
    raw = os.environ.get("MANIFOLD_CORR_THREADS", "").strip()
    if raw:
        try:
            cap = int(raw)
        except ValueError:
            print(f"warning: ignoring MANIFOLD_CORR_THREADS={raw!r}", file=sys.stderr)
            return
        if cap > 0:
            _kernels.set_num_threads(cap)


def _sidecar_path(output: str) -> str:
    base, _ = os.path.splitext(output)
    return base + ".meta.json"


def _load_json(path: str) -> dict:
    with open(path, "r") as fh:
        return json.load(fh)


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------

def cmd_generate(args) -> int:
    spec_obj = _load_json(args.spec)
    kind = spec_obj.get("kind")
    config = {
        "command": "generate",
        "spec": args.spec,
        "n": args.n,
        "seed": args.seed,
        "output": args.output,
    }
    if kind == "elliptical":
        spec = elliptical_spec_from_json(spec_obj)
        data = sample_elliptical(spec, args.n, args.seed)
        analytic = {"covariance": [[float(v) for v in row] for row in spec.analytic_covariance]}
    elif kind == "manifold":
        spec = manifold_spec_from_json(spec_obj)
        data, _, _ = sample_manifold(spec, args.n, args.seed)
        preset = spec.preset
        analytic = {
            "ambient_dim": preset.d,
            "intrinsic_dim": preset.k,
            "domain": [list(pair) for pair in preset.domain],
        }
        if spec.noise is not None:
            analytic["noise_covariance"] = [
                [float(v) for v in row] for row in spec.noise.analytic_covariance
            ]
    elif kind == "dilution":
        noise = NoiseModel(eta_x_sq=float(spec_obj["eta_x_sq"]),
                           eta_y_sq=float(spec_obj["eta_y_sq"]))
        sample = dilution_scenario(
            beta=float(spec_obj["beta"]),
            sigma_star_sq=float(spec_obj["sigma_star_sq"]),
            noise=noise,
            n=args.n,
            seed=args.seed,
        )
        data = sample.data
        analytic = {
            "sigma_x_sq": sample.sigma_x_sq,
            "sigma_y_sq": sample.sigma_y_sq,
            "rho_sq_limit": sample.rho_sq_limit,
        }
    else:
        raise KeyError(f"spec key 'kind' must be elliptical|manifold|dilution, got {kind!r}")
    write_csv(args.output, data)
    dump_json(
        {"spec": spec_obj, "seed": args.seed, "n": args.n, "analytic": analytic,
         "config": config},
        _sidecar_path(args.output),
    )
    return 0


# ---------------------------------------------------------------------------
# correlate
# ---------------------------------------------------------------------------

def _write_matrix_csv(path: str, columns, matrix) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in np.asarray(matrix):
            writer.writerow([repr(float(v)) for v in row])


def cmd_correlate(args) -> int:
    data = read_csv(args.input)
    config = {
        "command": "correlate",
        "input": args.input,
        "output": args.output,
        "method": args.method,
        "format": args.format,
    }
    if args.method == "pearson":
        report = pearson_report(data, config=config)
        matrix_key = "rho"
    elif args.method == "lcorr":
        k = args.k if args.k is not None else 1
        config["k"] = k
        report = l_correlation_report(data, k, config=config)
        matrix_key = "rho_sq"
    else:  # rpcorr
        if args.manifold:
            manifold = manifold_from_json(_load_json(args.manifold))
            manifold_ref = args.manifold
            config["manifold"] = args.manifold
        else:
            k = args.k if args.k is not None else 1
            node_count = _parse_nodes(args.nodes, k)
            config.update({
                "k": k,
                "nodes": node_count,
                "lambda": args.stretch_penalty,
                "mu": args.bend_penalty,
            })
            manifold = fit_elastic(
                data, k=k, node_count=node_count,
                stretch_penalty=args.stretch_penalty, bend_penalty=args.bend_penalty,
            )
            manifold_ref = None
        config["mode"] = args.mode
        config["fd_step"] = args.fd_step
        report = rp_report(data, manifold, mode=args.mode, fd_step=args.fd_step,
                           manifold_ref=manifold_ref, config=config)
        matrix_key = "rho_sq"
    if args.format == "json":
        dump_json(report, args.output)
    else:
        _write_matrix_csv(args.output, report["columns"], report[matrix_key])
        dump_json(report, _sidecar_path(args.output))
    return 0


# ---------------------------------------------------------------------------
# fit-manifold
# ---------------------------------------------------------------------------

def _parse_nodes(raw, k: int):
    if raw is None:
        return None
    parts = [p for p in str(raw).split(",") if p]
    values = [int(p) for p in parts]
    if len(values) == 1 and k == 1:
        return values[0]
    return tuple(values)


def cmd_fit_manifold(args) -> int:
    data = read_csv(args.input)
    node_count = _parse_nodes(args.nodes, args.k)
    config = {
        "command": "fit-manifold",
        "input": args.input,
        "output": args.output,
        "k": args.k,
        "nodes": node_count,
        "lambda": args.stretch_penalty,
        "mu": args.bend_penalty,
        "max_iter": args.max_iter,
        "tol": args.tol,
    }
    manifold = fit_elastic(
        data,
        k=args.k,
        node_count=node_count,
        stretch_penalty=args.stretch_penalty,
        bend_penalty=args.bend_penalty,
        max_iter=args.max_iter,
        tol=args.tol,
        spline_smoothing=args.spline,
    )
    out = manifold.to_json()
    out["config"] = config
    dump_json(out, args.output)
    if args.trace:
        with open(args.trace, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "energy"])
            for i, u in enumerate(manifold.energy_trace):
                writer.writerow([i, repr(float(u))])
    if not manifold.converged:
        print(
            f"warning: fit stopped at max_iter={args.max_iter} without reaching "
            f"tol={args.tol}",
            file=sys.stderr,
        )
        return 3
    return 0


# ---------------------------------------------------------------------------
# plot
# ---------------------------------------------------------------------------

def _manifold_polylines(manifold, data: Dataset) -> list:
    if isinstance(manifold, LinearPrincipalManifold):
        if manifold.k < 1:
            return []
        coords = (data.values - manifold.mean) @ manifold.basis[:, 0]
        ts = np.array([coords.min(), coords.max()])
        return [manifold.mean + ts[:, None] * manifold.basis[:, 0]]
    if manifold.intrinsic_dim == 1:
        if manifold.spline_smoothing:
            dense, _, _ = _densify_spline(_build_spline(manifold.nodes))
            return [dense]
        return [manifold.nodes]
    m1, m2 = manifold.grid
    grid = manifold.nodes.reshape(m1, m2, -1)
    return [grid[i] for i in range(m1)] + [grid[:, j] for j in range(m2)]


def cmd_plot(args) -> int:
    data = read_csv(args.input)
    manifold = None
    if args.manifold:
        manifold = manifold_from_json(_load_json(args.manifold))
    config = {
        "command": "plot",
        "input": args.input,
        "manifold": args.manifold,
        "output": args.output,
        "project": args.project,
    }
    polylines = _manifold_polylines(manifold, data) if manifold is not None else []
    if data.d == 2 and args.project is None:
        points2d = data.values
        lines2d = polylines
    elif data.d == 3 and args.project == "pca":
        lm = fit_linear(data, 2)
        points2d = (data.values - lm.mean) @ lm.basis
        lines2d = [(poly - lm.mean) @ lm.basis for poly in polylines]
    else:
        raise DimensionUnsupported(
            f"plotting needs d=2, or d=3 with --project=pca (got d={data.d}, "
            f"project={args.project})"
        )
    svg = render_scatter(points2d, lines2d, comment=f"config: {json.dumps(config)}")
    with open(args.output, "w") as fh:
        fh.write(svg)
    return 0


# ---------------------------------------------------------------------------
# parser / entry
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="manifoldcorr",
        description="Correlation measures over fitted linear and elastic principal manifolds",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="sample a synthetic dataset from a spec file")
    gen.add_argument("--spec", required=True, help="JSON spec (kind: elliptical|manifold|dilution)")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", required=True, help="CSV path; a .meta.json sidecar is written")
    gen.set_defaults(func=cmd_generate)

    cor = sub.add_parser("correlate", help="compute a correlation report")
    cor.add_argument("--input", required=True)
    cor.add_argument("--output", required=True)
    cor.add_argument("--method", choices=["pearson", "lcorr", "rpcorr"], required=True)
    cor.add_argument("--k", type=int, default=None)
    cor.add_argument("--manifold", default=None, help="pre-fitted manifold JSON (rpcorr)")
    cor.add_argument("--nodes", default=None, help="node count m, or m1,m2 for grids")
    cor.add_argument("--lambda", dest="stretch_penalty", type=float, default=0.01)
    cor.add_argument("--mu", dest="bend_penalty", type=float, default=0.1)
    cor.add_argument("--mode", choices=["tangent_graph", "residual_jacobian"], default=None)
    cor.add_argument("--fd-step", dest="fd_step", type=float, default=1e-4)
    cor.add_argument("--seed", type=int, default=0)
    cor.add_argument("--format", choices=["json", "csv"], default="json")
    cor.set_defaults(func=cmd_correlate)

    fit = sub.add_parser("fit-manifold", help="fit an elastic chain or grid")
    fit.add_argument("--input", required=True)
    fit.add_argument("--output", required=True)
    fit.add_argument("--k", type=int, default=1)
    fit.add_argument("--nodes", default=None)
    fit.add_argument("--lambda", dest="stretch_penalty", type=float, default=0.01)
    fit.add_argument("--mu", dest="bend_penalty", type=float, default=0.1)
    fit.add_argument("--max-iter", dest="max_iter", type=int, default=200)
    fit.add_argument("--tol", type=float, default=1e-6)
    fit.add_argument("--spline", dest="spline", action="store_true", default=None,
                     help="force spline smoothing on (default: on for k=1)")
    fit.add_argument("--no-spline", dest="spline", action="store_false")
    fit.add_argument("--trace", default=None, help="write iteration,energy CSV")
    fit.set_defaults(func=cmd_fit_manifold)

    plot = sub.add_parser("plot", help="scatter SVG with optional manifold overlay")
    plot.add_argument("--input", required=True)
    plot.add_argument("--manifold", default=None)
    plot.add_argument("--output", required=True)
    plot.add_argument("--project", choices=["pca"], default=None)
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    _configure_threads()
    try:
        return args.func(args)
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON: {exc}", file=sys.stderr)
        return 1
    except KeyError as exc:
        print(f"error: missing or invalid spec key {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ManifoldCorrError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
