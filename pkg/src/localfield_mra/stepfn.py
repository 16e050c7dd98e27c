"""Step functions on finite quotient groups K_-Nw / K_M.

A :class:`QuotientGrid` enumerates the cosets of K_M inside K_-Nw by their
digit vectors (x_-Nw, ..., x_{M-1}).  Values live in a numpy array of shape
``(q,) * (Nw + M) + (p,)``: axis k holds digit index ``-Nw + k`` and the last
axis holds cyclotomic coefficients, all at one shared scale (see
:mod:`exactnum`).  Flattened in C order, the lowest-index digit varies
slowest.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

import numpy as np

from .exactnum import Cyclo, canonicalize_array, sesquilinear_sum
from .gf import GF


class GridMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class QuotientGrid:
    field: GF
    Nw: int
    M: int

    def __post_init__(self):
        if self.Nw < 0 or self.M < 0 or self.Nw + self.M < 1:
            raise ValueError("grid needs Nw, M >= 0 and at least one digit")

    @property
    def ndigits(self) -> int:
        return self.Nw + self.M

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.field.order,) * self.ndigits

    @property
    def size(self) -> int:
        return self.field.order**self.ndigits

    @property
    def cell_measure(self) -> Fraction:
        return Fraction(1, self.field.order**self.M)

    @property
    def indices(self) -> range:
        return range(-self.Nw, self.M)

    def axis(self, index: int) -> int:
        """Array axis holding digit ``index``."""
        if not -self.Nw <= index < self.M:
            raise IndexError(f"digit index {index} outside the grid")
        return index + self.Nw

    def points(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(self.field.elements(), repeat=self.ndigits)

    def zeros(self) -> np.ndarray:
        return np.zeros(self.shape + (self.field.p,), dtype=np.int64)


@dataclass
class StepFn:
    """Values ``coeffs * p^-scale`` on the cells of ``grid``."""

    grid: QuotientGrid
    coeffs: np.ndarray
    scale: int = 0

    def __post_init__(self):
        expected = self.grid.shape + (self.grid.field.p,)
        if self.coeffs.shape != expected:
            raise GridMismatchError(f"coefficient array shape {self.coeffs.shape} != {expected}")

    @property
    def field(self) -> GF:
        return self.grid.field

    def value(self, point: tuple[int, ...]) -> Cyclo:
        return Cyclo(self.field.p, self.coeffs[tuple(point)].tolist(), self.scale)

    def items(self) -> Iterator[tuple[tuple[int, ...], Cyclo]]:
        for pt in self.grid.points():
            yield pt, self.value(pt)

    def nonzero_points(self) -> list[tuple[int, ...]]:
        canon = canonicalize_array(self.coeffs.copy())
        nz = np.any(canon != 0, axis=-1)
        return [tuple(int(i) for i in idx) for idx in np.argwhere(nz)]

    def embed(self, Nw: int) -> StepFn:
        """The same function on a wider grid (zero outside the old window)."""
        if Nw < self.grid.Nw:
            raise ValueError("can only widen the grid")
        grid = QuotientGrid(self.field, Nw, self.grid.M)
        out = grid.zeros()
        lead = (0,) * (Nw - self.grid.Nw)
        out[lead] = self.coeffs
        return StepFn(grid, out, self.scale)

    def to_json(self) -> dict:
        f = self.field
        cells = []
        for pt, v in self.items():
            if not v.is_zero():
                cells.append({"digits": [f.label(d) for d in pt], "value": v.to_json()})
        return {
            "field": f.to_json(),
            "Nw": self.grid.Nw,
            "M": self.grid.M,
            "cells": cells,
        }

    @classmethod
    def from_json(cls, data: dict) -> StepFn:
        f = GF.from_json(data["field"])
        grid = QuotientGrid(f, int(data["Nw"]), int(data["M"]))
        scale = max((c["value"]["scale"] for c in data["cells"]), default=0)
        arr = grid.zeros()
        for c in data["cells"]:
            pt = tuple(f.parse(d) for d in c["digits"])
            v = Cyclo.from_json(f.p, c["value"])
            arr[pt] = [x * f.p ** (scale - v.scale) for x in v.coeffs]
        return cls(grid, arr, scale)


def inner_product(f: StepFn, g: StepFn) -> Cyclo:
    """cell_measure * sum over cells of f * conj(g)."""
    if f.grid != g.grid:
        raise GridMismatchError(f"{f.grid} vs {g.grid}")
    grid = f.grid
    raw = sesquilinear_sum(f.coeffs, g.coeffs)
    return Cyclo(grid.field.p, raw.tolist(), f.scale + g.scale + grid.field.s * grid.M)


def indicator(grid: QuotientGrid, cells) -> StepFn:
    """The 0/1 function on the given grid points."""
    arr = grid.zeros()
    for pt in cells:
        arr[tuple(pt) + (0,)] = 1
    return StepFn(grid, arr)
