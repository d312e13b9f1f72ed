"""Gridded spatial fields: storage, ESRI ASCII I/O, bilinear interpolation.

Values live at cell *centers*; the lower-left center is ``(x_min, y_min)``
and cells are square with side ``cell_size``.  The interpolation domain is
the convex hull of the centers,

    [x_min, x_min + (n_x - 1) * cell_size] x [y_min, y_min + (n_y - 1) * cell_size].

Within each cell the interpolant is bilinear through the four surrounding
center values, so it is exact at the centers, continuous across cell edges,
and has a closed-form gradient that is affine in each coordinate inside a
cell.  The gradient is discontinuous across cell edges; a point lying
exactly on an interior edge is assigned to the cell above/right of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import GridParseError, NoDataError, NonFiniteError, OutOfDomainError

__all__ = [
    "Extent",
    "GridGeometry",
    "GridRaster",
    "interpolate",
    "interpolate_gradient",
    "read_ascii_grid",
    "write_ascii_grid",
]

#: Sentinel written to the NODATA_value header field.  Values equal to it are
#: rejected on both read and write (missing data is unsupported).
NODATA_SENTINEL = -9999.0


@dataclass(frozen=True)
class Extent:
    """Axis-aligned rectangle ``[x_lo, x_hi] x [y_lo, y_hi]``."""

    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def contains(self, x: float, y: float) -> bool:
        return self.x_lo <= x <= self.x_hi and self.y_lo <= y <= self.y_hi

    def clamp(self, x: float, y: float) -> tuple[float, float]:
        """Project a point onto the rectangle."""
        return (
            min(max(x, self.x_lo), self.x_hi),
            min(max(y, self.y_lo), self.y_hi),
        )

    def intersect(self, other: "Extent") -> "Extent":
        ext = Extent(
            max(self.x_lo, other.x_lo),
            min(self.x_hi, other.x_hi),
            max(self.y_lo, other.y_lo),
            min(self.y_hi, other.y_hi),
        )
        if ext.x_lo > ext.x_hi or ext.y_lo > ext.y_hi:
            raise ValueError("extents do not overlap")
        return ext


@dataclass(frozen=True)
class GridGeometry:
    """Geometry of a regular grid of square cells.

    Parameters
    ----------
    x_min, y_min : float
        Coordinates of the lower-left cell center.
    cell_size : float
        Side length of each (square) cell; must be positive.
    n_x, n_y : int
        Cell counts along x and y; at least 2 each so that bilinear
        interpolation has a full 2x2 node set.
    """

    x_min: float
    y_min: float
    cell_size: float
    n_x: int
    n_y: int

    def __post_init__(self):
        object.__setattr__(self, "x_min", float(self.x_min))
        object.__setattr__(self, "y_min", float(self.y_min))
        object.__setattr__(self, "cell_size", float(self.cell_size))
        object.__setattr__(self, "n_x", int(self.n_x))
        object.__setattr__(self, "n_y", int(self.n_y))
        if not (math.isfinite(self.x_min) and math.isfinite(self.y_min)):
            raise ValueError("grid origin must be finite")
        if not (self.cell_size > 0 and math.isfinite(self.cell_size)):
            raise ValueError(f"cell_size must be positive, got {self.cell_size}")
        if self.n_x < 2 or self.n_y < 2:
            raise ValueError(f"need at least 2x2 cells, got {self.n_x}x{self.n_y}")

    @property
    def x_max(self) -> float:
        return self.x_min + (self.n_x - 1) * self.cell_size

    @property
    def y_max(self) -> float:
        return self.y_min + (self.n_y - 1) * self.cell_size

    @property
    def extent(self) -> Extent:
        """Interpolation domain (convex hull of cell centers)."""
        return Extent(self.x_min, self.x_max, self.y_min, self.y_max)

    def x_centers(self) -> np.ndarray:
        return self.x_min + self.cell_size * np.arange(self.n_x)

    def y_centers(self) -> np.ndarray:
        return self.y_min + self.cell_size * np.arange(self.n_y)


@dataclass(frozen=True, eq=False)
class GridRaster:
    """A grid geometry plus an ``(n_y, n_x)`` array of finite cell values.

    ``values[iy, ix]`` is the value at center
    ``(x_min + ix * cell_size, y_min + iy * cell_size)``.
    Instances are immutable; all query operations are pure.
    """

    geom: GridGeometry
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.geom.n_y, self.geom.n_x):
            raise ValueError(
                f"values shape {v.shape} does not match geometry "
                f"({self.geom.n_y}, {self.geom.n_x})"
            )
        if not np.all(np.isfinite(v)):
            raise NonFiniteError("raster contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def x_min(self) -> float:
        return self.geom.x_min

    @property
    def y_min(self) -> float:
        return self.geom.y_min

    @property
    def cell_size(self) -> float:
        return self.geom.cell_size

    @property
    def n_x(self) -> int:
        return self.geom.n_x

    @property
    def n_y(self) -> int:
        return self.geom.n_y

    @property
    def extent(self) -> Extent:
        return self.geom.extent


def _locate(geom: GridGeometry, x: float, y: float) -> tuple[int, int, float, float]:
    """Find the enclosing cell and local coordinates of a point.

    Returns ``(ix, iy, u, w)`` where ``(ix, iy)`` indexes the lower-left
    node of the cell and ``(u, w)`` in [0, 1] are the local offsets.
    Interior edge points go to the cell above/right (floor); the top and
    right domain edges fall back to the last cell.
    """
    if not (geom.x_min <= x <= geom.x_max and geom.y_min <= y <= geom.y_max):
        raise OutOfDomainError(x, y)
    u = (x - geom.x_min) / geom.cell_size
    w = (y - geom.y_min) / geom.cell_size
    ix = min(int(u), geom.n_x - 2)
    iy = min(int(w), geom.n_y - 2)
    return ix, iy, u - ix, w - iy


def interpolate(raster: GridRaster, p: Sequence[float]) -> float:
    """Bilinear interpolant of the raster at point ``p = (x, y)``.

    Exact at cell centers and continuous across cell edges.

    Raises
    ------
    OutOfDomainError
        If ``p`` lies outside the hull of cell centers.
    """
    x, y = float(p[0]), float(p[1])
    ix, iy, u, w = _locate(raster.geom, x, y)
    v = raster.values
    v00 = v[iy, ix]
    v10 = v[iy, ix + 1]
    v01 = v[iy + 1, ix]
    v11 = v[iy + 1, ix + 1]
    return float(
        (1.0 - u) * (1.0 - w) * v00
        + u * (1.0 - w) * v10
        + (1.0 - u) * w * v01
        + u * w * v11
    )


def interpolate_gradient(raster: GridRaster, p: Sequence[float]) -> tuple[float, float]:
    """Exact gradient ``(d/dx, d/dy)`` of the bilinear interpolant at ``p``.

    The interpolant is bilinear per cell, so its gradient is affine in each
    coordinate within the cell.  On a cell edge the cell above/right is used.

    Raises
    ------
    OutOfDomainError
        If ``p`` lies outside the hull of cell centers.
    """
    x, y = float(p[0]), float(p[1])
    ix, iy, u, w = _locate(raster.geom, x, y)
    v = raster.values
    v00 = v[iy, ix]
    v10 = v[iy, ix + 1]
    v01 = v[iy + 1, ix]
    v11 = v[iy + 1, ix + 1]
    h = raster.geom.cell_size
    gx = ((1.0 - w) * (v10 - v00) + w * (v11 - v01)) / h
    gy = ((1.0 - u) * (v01 - v00) + u * (v11 - v10)) / h
    return float(gx), float(gy)


_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize")


def read_ascii_grid(path: str | Path) -> GridRaster:
    """Read an ESRI ASCII grid (.asc) file.

    The header must provide ``ncols``, ``nrows``, ``xllcorner``,
    ``yllcorner`` and ``cellsize`` (``NODATA_value`` is optional); the body
    holds ``nrows`` lines of ``ncols`` whitespace-separated values with the
    top line at the highest y.  Corner coordinates refer to the lower-left
    cell *corner* and are shifted by ``cellsize / 2`` to this module's
    cell-center convention.

    Raises
    ------
    GridParseError
        On malformed header or body (carries the offending line number).
    NoDataError
        If any value equals the file's NODATA_value.
    """
    header: dict[str, float] = {}
    data: list[float] = []
    data_line_count = 0
    with open(path, "r") as fh:
        for line_no, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue
            if tokens[0][0].isalpha():
                if len(tokens) != 2:
                    raise GridParseError(line_no, f"bad header line {line.rstrip()!r}")
                key = tokens[0].lower()
                try:
                    header[key] = float(tokens[1])
                except ValueError:
                    raise GridParseError(line_no, f"bad header value {tokens[1]!r}") from None
            else:
                if data_line_count == 0:
                    for key in _HEADER_KEYS:
                        if key not in header:
                            raise GridParseError(line_no, f"missing header key {key!r}")
                data_line_count += 1
                try:
                    data.extend(float(t) for t in tokens)
                except ValueError:
                    raise GridParseError(line_no, f"bad value in row: {line.rstrip()!r}") from None
    if not data:
        raise GridParseError(data_line_count + len(header), "no data rows")
    n_x = int(header["ncols"])
    n_y = int(header["nrows"])
    if len(data) != n_x * n_y:
        raise GridParseError(
            line_no, f"expected {n_x * n_y} values ({n_y}x{n_x}), found {len(data)}"
        )
    cell_size = header["cellsize"]
    arr = np.asarray(data, dtype=float).reshape(n_y, n_x)
    # file rows run top to bottom; flip so row 0 is the lowest y
    arr = arr[::-1].copy()
    nodata = header.get("nodata_value")
    if nodata is not None and np.any(arr == nodata):
        raise NoDataError(f"grid contains NODATA cells (NODATA_value={nodata})")
    geom = GridGeometry(
        x_min=header["xllcorner"] + cell_size / 2.0,
        y_min=header["yllcorner"] + cell_size / 2.0,
        cell_size=cell_size,
        n_x=n_x,
        n_y=n_y,
    )
    return GridRaster(geom, arr)


def write_ascii_grid(raster: GridRaster, path: str | Path) -> None:
    """Write a raster as an ESRI ASCII grid (.asc) file.

    Values are written in scientific notation with 15 significant digits,
    top row first; cell-center origin is converted to the format's
    lower-left corner convention.

    Raises
    ------
    NoDataError
        If any value equals the NODATA sentinel (would be unreadable).
    """
    if np.any(raster.values == NODATA_SENTINEL):
        raise NoDataError(
            f"raster contains the NODATA sentinel value {NODATA_SENTINEL}"
        )
    g = raster.geom
    with open(path, "w") as fh:
        fh.write(f"ncols {g.n_x}\n")
        fh.write(f"nrows {g.n_y}\n")
        fh.write(f"xllcorner {g.x_min - g.cell_size / 2.0!r}\n")
        fh.write(f"yllcorner {g.y_min - g.cell_size / 2.0!r}\n")
        fh.write(f"cellsize {g.cell_size!r}\n")
        fh.write(f"NODATA_value {NODATA_SENTINEL!r}\n")
        for iy in range(g.n_y - 1, -1, -1):
            fh.write(" ".join(f"{v:.14e}" for v in raster.values[iy]))
            fh.write("\n")
