"""On-disk formats.

Grid functions: raw row-major little-endian float64 in ``<name>.f64`` with a
JSON sidecar ``<name>.json`` holding {d, L, M, eps, axis_order}.  Density
matrices: interleaved re/im float64 (row-major over the kernel, innermost
axis [re, im]) with {kind, N, grid} in the sidecar.  Wigner functions reuse
the grid-function format with axis_order "xv".
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .phasespace import PhaseSpaceGrid
from .quantum import DensityMatrix, WignerFunction


def _grid_meta(grid: PhaseSpaceGrid, axis_order: str) -> dict:
    return {"d": grid.d, "L": grid.L, "M": grid.M, "eps": grid.eps,
            "axis_order": axis_order}


def _grid_from_meta(meta: dict) -> PhaseSpaceGrid:
    return PhaseSpaceGrid(d=meta["d"], L=meta["L"], M=meta["M"], eps=meta["eps"])


def save_grid_function(path_base, grid: PhaseSpaceGrid, values: np.ndarray,
                       axis_order: str = "x") -> None:
    base = Path(path_base)
    base.parent.mkdir(parents=True, exist_ok=True)
    np.ascontiguousarray(values, dtype="<f8").tofile(base.with_suffix(".f64"))
    with open(base.with_suffix(".json"), "w") as fh:
        json.dump(_grid_meta(grid, axis_order), fh, indent=2, sort_keys=True)


def load_grid_function(path_base) -> tuple[PhaseSpaceGrid, np.ndarray, str]:
    base = Path(path_base)
    with open(base.with_suffix(".json")) as fh:
        meta = json.load(fh)
    grid = _grid_from_meta(meta)
    data = np.fromfile(base.with_suffix(".f64"), dtype="<f8")
    shape = (grid.M,) * len(meta["axis_order"])
    return grid, data.reshape(shape), meta["axis_order"]


def save_wigner(path_base, W: WignerFunction) -> None:
    save_grid_function(path_base, W.grid, W.values, axis_order="xv")


def load_wigner(path_base) -> WignerFunction:
    grid, values, axis_order = load_grid_function(path_base)
    if axis_order != "xv":
        raise ValueError(f"not a Wigner dump (axis_order={axis_order!r})")
    return WignerFunction(grid, values)


def save_density_matrix(path_base, omega: DensityMatrix) -> None:
    base = Path(path_base)
    base.parent.mkdir(parents=True, exist_ok=True)
    M = omega.grid.M
    interleaved = np.empty((M, M, 2), dtype="<f8")
    interleaved[..., 0] = omega.kernel.real
    interleaved[..., 1] = omega.kernel.imag
    interleaved.tofile(base.with_suffix(".f64"))
    meta = {"kind": "density_matrix", "N": omega.N,
            "grid": _grid_meta(omega.grid, "xx'")}
    with open(base.with_suffix(".json"), "w") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)


def load_density_matrix(path_base) -> DensityMatrix:
    base = Path(path_base)
    with open(base.with_suffix(".json")) as fh:
        meta = json.load(fh)
    if meta.get("kind") != "density_matrix":
        raise ValueError("not a density-matrix dump")
    grid = _grid_from_meta(meta["grid"])
    data = np.fromfile(base.with_suffix(".f64"), dtype="<f8").reshape(grid.M, grid.M, 2)
    kernel = data[..., 0] + 1j * data[..., 1]
    return DensityMatrix(grid, kernel, meta["N"])
