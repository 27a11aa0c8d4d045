"""Serializable correlation reports shared by the library and the CLI.

Every report dict embeds the resolved configuration under "config" so a
written file fully identifies the run that produced it. Serialization is
plain json.dumps with indent=2; float formatting is shortest round-trip.
"""

from __future__ import annotations

import json

import numpy as np

from .dataset import Dataset
from .pca import fit_linear, l_correlation_matrix
from .stats import pearson_matrix


def _mat(values) -> list:
    return [[float(v) for v in row] for row in np.asarray(values)]


def pearson_report(data: Dataset, config: dict | None = None) -> dict:
    rho = pearson_matrix(data)
    return {
        "method": "pearson",
        "columns": list(data.column_names),
        "n": data.n,
        "rho": _mat(rho),
        "rho_sq": _mat(rho * rho),
        "config": config or {},
    }


def l_correlation_report(data: Dataset, k: int, config: dict | None = None) -> dict:
    manifold = fit_linear(data, k)
    rho_sq, reliabilities = l_correlation_matrix(data, manifold)
    return {
        "method": "l_correlation",
        "columns": list(data.column_names),
        "n": data.n,
        "k": k,
        "rho_sq": _mat(rho_sq),
        "reliabilities": [float(v) for v in reliabilities],
        "manifold_ref": manifold.to_json(),
        "config": config or {},
    }


def rp_report(data: Dataset, manifold, mode: str | None = None, fd_step: float = 1e-4,
              manifold_ref=None, config: dict | None = None) -> dict:
    from .rpcorr import rp_correlation

    result = rp_correlation(data, manifold, mode=mode, fd_step=fd_step)
    ref = manifold_ref if manifold_ref is not None else manifold.to_json()
    out = result.to_json(manifold_ref=ref)
    out["config"] = config or {}
    return out


def dump_json(obj: dict, path) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
