"""Plain-text formats.

* density matrices: JSON with ``dim`` and row-major ``[re, im]`` pairs;
* tomograms and symbols: CSV with ``#``-prefixed metadata lines and the
  columns theta, X, T (symbols add an imaginary column);
* kernels: JSON tensor plus an optional dense CSV view.
"""

from __future__ import annotations

import io
import json
from pathlib import Path

import numpy as np

from ..basis import DensityMatrix
from ..errors import ValidationError
from ..kernels import ProcessKernel
from ..tomography import RayGrid, TomogramGrid
from .config import canonical, dumps

FLOAT = "%.12e"


def _open_text(path):
    return open(path, "w", newline="\n", encoding="utf-8")


def density_to_dict(rho: DensityMatrix) -> dict:
    m = rho.matrix
    return {
        "dim": int(rho.dim),
        "label": rho.label,
        "leakage": float(rho.leakage),
        "matrix": [[[float(v.real), float(v.imag)] for v in row] for row in m],
    }


def write_density_json(path, rho: DensityMatrix) -> None:
    # full repr precision: the file must reload as a valid state
    text = json.dumps(density_to_dict(rho), sort_keys=True, indent=1) + "\n"
    if path is None or str(path) == "-":
        print(text, end="")
        return
    with _open_text(path) as fh:
        fh.write(text)


def read_density_json(path) -> DensityMatrix:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        dim = int(data["dim"])
        arr = np.asarray(data["matrix"], dtype=float)
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise ValidationError(f"cannot read density matrix from {path}: {exc}") from exc
    if arr.shape != (dim, dim, 2):
        raise ValidationError(f"density file {path}: matrix shape {arr.shape} does not match dim {dim}")
    mat = arr[..., 0] + 1j * arr[..., 1]
    return DensityMatrix(mat, leakage=float(data.get("leakage", 0.0)), label=str(data.get("label", "")))


def _csv_text(grid: RayGrid, values: np.ndarray, meta: dict, complex_values: bool) -> str:
    buf = io.StringIO()
    for key in sorted(meta):
        buf.write(f"# {key}: {json.dumps(canonical(meta[key]), sort_keys=True)}\n")
    buf.write("theta,X,re,im\n" if complex_values else "theta,X,T\n")
    th = np.repeat(grid.theta, grid.n_x)
    x = np.tile(grid.x, grid.n_theta)
    vals = np.asarray(values).ravel()
    cols = [th, x, vals.real, vals.imag] if complex_values else [th, x, vals.real]
    np.savetxt(buf, np.column_stack(cols), fmt=FLOAT, delimiter=",")
    return buf.getvalue()


def write_tomogram_csv(path, tomogram: TomogramGrid, extra: dict | None = None) -> None:
    meta = {"grid": tomogram.grid.as_dict(), "provenance": tomogram.provenance}
    meta.update(extra or {})
    text = _csv_text(tomogram.grid, tomogram.values, meta, False)
    if path is None or str(path) == "-":
        print(text, end="")
        return
    with _open_text(path) as fh:
        fh.write(text)


def read_tomogram_csv(path) -> TomogramGrid:
    meta = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = json.loads(value)
        elif line and not line[0].isalpha():
            body.append(line)
    if "grid" not in meta:
        raise ValidationError(f"{path}: missing '# grid:' metadata line")
    grid = RayGrid(**meta["grid"])
    data = np.loadtxt(body, delimiter=",", ndmin=2)
    if data.shape != (grid.n_theta * grid.n_x, 3):
        raise ValidationError(f"{path}: expected {grid.n_theta * grid.n_x} rows of theta,X,T")
    if np.max(np.abs(data[:, 1] - np.tile(grid.x, grid.n_theta))) > 1e-9:
        raise ValidationError(f"{path}: X column does not match the grid metadata")
    return TomogramGrid(grid, data[:, 2].reshape(grid.n_theta, grid.n_x), provenance=meta.get("provenance", {}))


def kernel_to_dict(kernel: ProcessKernel) -> dict:
    c = kernel.coefficients
    return {
        "name": kernel.name,
        "dim": kernel.dim,
        "kind": kernel.kind,
        "index_order": "M[j][k][l][i] = sum_a w_a A_a[i][j] conj(A_a[l][k])",
        "identity_weight": float(kernel.identity_weight),
        "coefficients": [[[[[float(v.real), float(v.imag)] for v in row] for row in blk] for blk in slab]
                         for slab in c],
        "partials": [{"label": str(p.label), "weight": float(p.weight),
                      "identity_weight": float(p.identity_weight)} for p in kernel.partials],
        "metadata": kernel.metadata,
    }


def write_kernel_json(path, kernel_dict: dict) -> None:
    text = dumps(kernel_dict)
    if path is None or str(path) == "-":
        print(text, end="")
        return
    with _open_text(path) as fh:
        fh.write(text)


def write_dense_kernel_csv(path, kernel: ProcessKernel, grid: RayGrid) -> int:
    """Regular part of the kernel with xb and x both on the unit-circle grid nodes."""
    tt, xx = np.meshgrid(grid.theta, grid.x, indexing="ij")
    pts = np.stack([xx.ravel(), np.cos(tt).ravel(), np.sin(tt).ravel()], axis=1)
    vals = kernel.evaluate(pts, pts, regular_only=True)
    n = len(pts)
    table = np.column_stack([np.repeat(pts, n, axis=0), np.tile(pts, (n, 1)), vals.real.ravel(), vals.imag.ravel()])
    buf = io.StringIO()
    buf.write(f"# grid: {json.dumps(grid.as_dict(), sort_keys=True)}\n")
    buf.write(f"# kernel: {json.dumps(kernel.name)}\n")
    buf.write("Xb,mub,nub,X,mu,nu,re,im\n")
    np.savetxt(buf, table, fmt=FLOAT, delimiter=",")
    with _open_text(path) as fh:
        fh.write(buf.getvalue())
    return n * n
