"""From a spectrum to the scaling step function, and back; grid exports.

phi(x) = integral of phi-hat(chi) (chi, x) over the characters.  Each coset
(K_-1)^perp c contributes q^-1 (c, x) 1_{K_-1}(x), so on the quotient grid
K_-1 / K_M

    phi(x) = q^-1 * sum over nonzero cosets c of phi-hat(c) * zeta^<c, x>.

The forward transform is the cell-measure weighted character sum
f-hat(c) = q^-M * sum_x f(x) * zeta^-<c, x>.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .characters import character_transform, pairing_exponents
from .exactnum import Cyclo, canonicalize_array
from .gf import GF
from .mra import SpectrumTable
from .stepfn import QuotientGrid, StepFn


class GridViewError(ValueError):
    pass


def scaling_from_spectrum(spec: SpectrumTable) -> StepFn:
    """phi on the grid (Nw = 1, M = spec.M), exact."""
    f = spec.field
    p = f.p
    grid = QuotientGrid(f, 1, spec.M)
    out = grid.zeros()
    for digits, e in spec.values.items():
        exps = (pairing_exponents(f, digits, grid.shape) + e) % p
        for k in range(p):
            out[..., k] += exps == k
    return StepFn(grid, out, f.s)


def forward_transform(phi: StepFn) -> tuple[np.ndarray, int]:
    """Exact f-hat on every coset (K_-Nw)^perp c, c with digits -Nw..M-1.

    Returns a coefficient array with the grid's shape (axis k = index -Nw+k)
    and its scale.
    """
    g = phi.grid
    arr = character_transform(g.field, phi.coeffs, range(g.ndigits), -1)
    return arr, phi.scale + g.field.s * g.M


def spectrum_from_transform(field: GF, coeffs: np.ndarray, scale: int) -> SpectrumTable:
    """Read a transformed array (N = 1 layout) back as a root-of-unity table."""
    p = field.p
    M = coeffs.ndim - 2
    canon = canonicalize_array(np.array(coeffs, dtype=np.int64))
    values = {}
    for idx in np.argwhere(np.any(canon != 0, axis=-1)):
        idx = tuple(int(i) for i in idx)
        v = Cyclo(p, canon[idx].tolist(), scale)
        e = v.root_exponent()
        if e is None:
            raise ValueError(f"transform value {v} at {idx} is not a root of unity")
        values[idx] = e
    return SpectrumTable(field, M, values)


def transform_matches(spec: SpectrumTable, phi: StepFn) -> list[tuple[tuple[int, ...], str, str]]:
    """Cosets where the forward transform of phi differs from spec (empty = exact round trip)."""
    arr, scale = forward_transform(phi)
    target = spec.to_array()
    p = spec.field.p
    a = canonicalize_array(arr.copy())
    b = canonicalize_array(target.copy()) * p**scale
    bad = np.argwhere(np.any(a != b, axis=-1))
    out = []
    for idx in bad[:20]:
        idx = tuple(int(i) for i in idx)
        out.append((idx, str(Cyclo(p, arr[idx].tolist(), scale)), str(Cyclo(p, target[idx].tolist(), 0))))
    return out


# -- indicator sets --------------------------------------------------------------


@dataclass(frozen=True)
class IndicatorSet:
    """Disjoint cosets K_{L-1} + sum_k d_k g_k, each named by its digits
    d_-1 .. d_{L-2} (a prefix of length L of the grid digits)."""

    field: GF
    cosets: tuple[tuple[int, ...], ...]

    def measure(self) -> Fraction:
        q = self.field.order
        return sum((Fraction(1, q ** (len(c) - 1)) for c in self.cosets), Fraction(0))

    def describe(self, coset: tuple[int, ...]) -> str:
        f = self.field
        ball = f"K_{len(coset) - 1}"
        terms = [f"({f.label(d)})g_{k - 1}" for k, d in enumerate(coset) if d]
        return " + ".join([ball] + terms)

    def __str__(self):
        return " ⊔ ".join(self.describe(c) for c in self.cosets)

    def to_json(self) -> dict:
        f = self.field
        return {
            "cosets": [{"digits": [f.label(d) for d in c], "ball": len(c) - 1, "text": self.describe(c)} for c in self.cosets],
            "measure": str(self.measure()),
        }


@dataclass(frozen=True)
class NotIndicator:
    cell: tuple[int, ...]
    value: str

    def to_json(self) -> dict:
        return {"not_indicator": True, "cell": list(self.cell), "value": self.value}


def extract_indicator(phi: StepFn) -> IndicatorSet | NotIndicator:
    """The unit cells of a 0/1 function, with full sibling groups merged."""
    f = phi.field
    p = f.p
    q = f.order
    one = np.zeros(p, dtype=np.int64)
    one[0] = p**phi.scale
    canon = canonicalize_array(phi.coeffs.copy())
    is_zero = np.all(canon == 0, axis=-1)
    is_one = np.all(canon == one, axis=-1)
    bad = np.argwhere(~(is_zero | is_one))
    if len(bad):
        idx = tuple(int(i) for i in bad[0])
        return NotIndicator(idx, str(phi.value(idx)))
    # cell digits: grid indices -Nw..M-1; keep only those inside K_-1 naming
    Nw = phi.grid.Nw
    cells = set()
    for idx in np.argwhere(is_one):
        idx = tuple(int(i) for i in idx)
        if any(idx[: Nw - 1]):
            # outside K_-1: describe with the wider digits
            raise GridViewError("indicator extraction expects a function supported in K_-1")
        cells.add(idx[Nw - 1:])
    # merge q sibling cosets into their parent, finest level first
    changed = True
    while changed:
        changed = False
        groups: dict[tuple[int, ...], set[int]] = {}
        for c in cells:
            if c:
                groups.setdefault(c[:-1], set()).add(c[-1])
        for parent, kids in groups.items():
            if len(kids) == q:
                for k in range(q):
                    cells.discard(parent + (k,))
                cells.add(parent)
                changed = True
    return IndicatorSet(f, tuple(sorted(cells, key=lambda c: (len(c), c))))


# -- grid exports ----------------------------------------------------------------


def _coordinate_index(field: GF, digits: Sequence[int], coord: int) -> int:
    """Base-p integer of one coordinate of the digit sequence, first digit most significant."""
    p = field.p
    val = 0
    for d in digits:
        val = val * p + field.digits(d)[coord]
    return val


def grid_view(table: StepFn | SpectrumTable, origin: str = "bottom") -> list[list[str]]:
    """The 2-D view of a table over GF(p^2) as rows of cell strings, top row first.

    Rows come from coordinate (0) of every digit and columns from coordinate
    (1).  The coarsest digit is most significant: x_-Nw first for functions,
    the highest index first for spectra.  With ``origin="bottom"`` row index
    0 is printed last (Cartesian orientation); ``origin="top"`` prints it
    first.
    """
    if origin not in ("bottom", "top"):
        raise GridViewError("origin must be 'bottom' or 'top'")
    f = table.field
    if f.s != 2:
        raise GridViewError("the 2-D grid view needs s = 2")
    p = f.p
    if isinstance(table, StepFn):
        ndig = table.grid.ndigits
        cells = [(pt, str(table.value(pt))) for pt in table.grid.points()]
        order = lambda pt: pt  # noqa: E731 - lowest index is coarsest
    else:
        ndig = table.M + 1
        cells = []
        for pt in itertools.product(f.elements(), repeat=ndig):
            e = table.values.get(pt)
            cells.append((pt, str(Cyclo.root(p, e))))
        order = lambda pt: tuple(reversed(pt))  # noqa: E731 - highest index is coarsest
    side = p**ndig
    rows = [["0"] * side for _ in range(side)]
    for pt, text in cells:
        key = order(pt)
        r = _coordinate_index(f, key, 0)
        c = _coordinate_index(f, key, 1)
        rows[r][c] = text
    if origin == "bottom":
        rows.reverse()
    return rows


def grid_text(table: StepFn | SpectrumTable, origin: str = "bottom") -> str:
    return "\n".join(" ".join(r) for r in grid_view(table, origin)) + "\n"


def flat_rows(table: StepFn | SpectrumTable) -> list[tuple[str, str]]:
    """(digit vector, exact value) for every cell, in digit order; any s."""
    f = table.field
    out = []
    if isinstance(table, StepFn):
        for pt, v in table.items():
            out.append((" ".join(f.label(d) for d in pt), str(v)))
    else:
        for pt in itertools.product(f.elements(), repeat=table.M + 1):
            out.append((" ".join(f.label(d) for d in pt), str(Cyclo.root(f.p, table.values.get(pt)))))
    return out


def grid_export(table: StepFn | SpectrumTable, fmt: str = "text", origin: str = "bottom") -> str:
    """Serialize a table: ``text`` (2-D view), ``json`` (2-D view plus
    convention) or ``csv`` (flat rows, any s)."""
    if fmt == "text":
        return grid_text(table, origin)
    if fmt == "json":
        return json.dumps(
            {
                "rows": grid_view(table, origin),
                "convention": {
                    "rows": "coordinate 0 of each digit",
                    "columns": "coordinate 1 of each digit",
                    "most_significant": "coarsest digit",
                    "origin": origin,
                },
            },
            indent=2,
        )
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["digits", "value_re_exact"])
        w.writerows(flat_rows(table))
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")
