"""Uniform cell-centered grids and fields on the box domain (0, extent)^dims."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Grid:
    dims: int
    extent: float
    resolution: int

    def __post_init__(self):
        if self.dims not in (1, 2):
            raise ValueError("dims must be 1 or 2")
        if self.resolution < 8:
            raise ValueError("resolution must be at least 8")
        if not self.extent > 0:
            raise ValueError("extent must be positive")

    @property
    def spacing(self) -> float:
        return self.extent / self.resolution

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dims

    @property
    def domain_volume(self) -> float:
        return self.extent**self.dims

    @property
    def shape(self):
        return (self.resolution,) * self.dims

    def cell_centers(self):
        """Coordinate arrays of cell centers, one per dimension."""
        h = self.spacing
        x = (np.arange(self.resolution) + 0.5) * h
        if self.dims == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing="ij"))


@dataclass(frozen=True)
class Field:
    values: np.ndarray
    grid: Grid

    def __post_init__(self):
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )


def make_field(grid: Grid, values=None) -> Field:
    if values is None:
        arr = np.zeros(grid.shape)
    else:
        arr = np.asarray(values, dtype=float).reshape(grid.shape)
    return Field(values=arr, grid=grid)
