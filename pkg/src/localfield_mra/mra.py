"""Masks, spectra and refinement coefficients built from rooted trees.

All tables here use N = 1.  Values are p-th roots of unity carried as
exponents (``zeta^e``); a missing entry means zero.

* :class:`MaskTable` -- lambda(i, j) = m_0 on the coset
  (K_-1)^perp r_-1^i r_0^j.  The mask depends only on these two digits.
* :class:`SpectrumTable` -- phi-hat on the cosets (K_-1)^perp r_-1^{a_-1} ...
  r_{M-1}^{a_{M-1}}, keyed by the digit tuple (a_-1, ..., a_{M-1}).
* :class:`CoeffTable` -- beta_h for shifts h = a_-1 g_-1 + a_-2 g_-2.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterator, Mapping

import numpy as np

from .characters import CosetId, character_transform
from .exactnum import Cyclo, array_values, canonicalize_array
from .gf import GF
from .localfield import ShiftH0
from .trees import RootedTree


class MaskError(ValueError):
    pass


class MaskInvalidError(MaskError):
    """The telescoping mask product does not vanish on the annulus above M."""

    def __init__(self, message: str, witnesses: list):
        super().__init__(message)
        self.witnesses = witnesses


class TreeMaskMismatchError(MaskError):
    pass


# -- mask ---------------------------------------------------------------------


@dataclass(frozen=True)
class MaskTable:
    field: GF
    entries: Mapping[tuple[int, int], int]  # (i, j) -> exponent, nonzero entries only

    def __post_init__(self):
        q, p = self.field.order, self.field.p
        clean = {}
        for (i, j), e in self.entries.items():
            if not (0 <= i < q and 0 <= j < q):
                raise MaskError(f"mask index ({i}, {j}) is not a pair of field elements")
            if e is not None:
                clean[(i, j)] = int(e) % p
        object.__setattr__(self, "entries", clean)

    N = 1

    def value(self, i: int, j: int) -> int | None:
        return self.entries.get((i, j))

    @cached_property
    def columns(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """columns[j] = ((i, exponent), ...) over nonzero lambda(i, j)."""
        cols: list[list[tuple[int, int]]] = [[] for _ in range(self.field.order)]
        for (i, j), e in sorted(self.entries.items()):
            cols[j].append((i, e))
        return tuple(tuple(c) for c in cols)

    def row(self, i: int) -> dict[int, int]:
        return {j: e for (a, j), e in self.entries.items() if a == i}

    def to_array(self) -> np.ndarray:
        """(q, q, p) coefficient array indexed [i, j]."""
        q, p = self.field.order, self.field.p
        arr = np.zeros((q, q, p), dtype=np.int64)
        for (i, j), e in self.entries.items():
            arr[i, j, e] = 1
        return arr

    @classmethod
    def all_ones(cls, field: GF) -> MaskTable:
        q = field.order
        return cls(field, {(i, j): 0 for i in range(q) for j in range(q)})

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.to_json(),
            "entries": [
                {"i": f.label(i), "j": f.label(j), "exp": e} for (i, j), e in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data: dict, field: GF | None = None) -> MaskTable:
        f = field or GF.from_json(data["field"])
        return cls(f, {(f.parse(e["i"]), f.parse(e["j"])): int(e["exp"]) for e in data["entries"]})


def mask_from_tree(tree: RootedTree, assignment: Mapping[tuple[int, int], int] | None = None) -> MaskTable:
    """lambda(0, 0) = 1 and lambda(v, parent(v)) = zeta^assignment[(parent, v)].

    ``assignment`` maps tree edges (parent, child) to exponents; missing
    edges get exponent 0 (lambda = 1).
    """
    entries = {(0, 0): 0}
    assignment = dict(assignment or {})
    for (u, v) in assignment:
        if not (0 < v < len(tree.parent) and tree.parent[v] == u):
            raise MaskError(f"({u}, {v}) is not an edge of the tree")
    for v in range(1, len(tree.parent)):
        u = tree.parent[v]
        entries[(v, u)] = assignment.get((u, v), 0)
    return MaskTable(tree.field, entries)


def mask_eval(mask: MaskTable, coset: CosetId) -> int | None:
    """m_0 on a coset with N = 1: lambda of its digits at indices -1 and 0."""
    if coset.N != 1:
        raise MaskError("tree masks are defined for N = 1 cosets")
    return mask.value(coset.digit(-1), coset.digit(0))


# -- spectrum ------------------------------------------------------------------


@dataclass(frozen=True)
class SpectrumTable:
    field: GF
    M: int
    values: Mapping[tuple[int, ...], int]  # digits (a_-1 .. a_{M-1}) -> exponent

    def __post_init__(self):
        if self.M < 0:
            raise ValueError("M must be non-negative")
        p = self.field.p
        clean = {}
        for digits, e in self.values.items():
            digits = tuple(digits)
            if len(digits) != self.M + 1:
                raise ValueError(f"coset {digits} does not have {self.M + 1} digits")
            if e is not None:
                clean[digits] = int(e) % p
        object.__setattr__(self, "values", clean)

    N = 1

    def value(self, digits: tuple[int, ...]) -> int | None:
        return self.values.get(tuple(digits))

    def coset_value(self, coset: CosetId) -> int | None:
        if coset.N != 1:
            raise ValueError("spectra are tabulated on N = 1 cosets")
        if any(coset.digit(k) for k in range(self.M, coset.M)):
            return None
        return self.values.get(tuple(coset.digit(k) for k in range(-1, self.M)))

    def nonzero(self) -> list[tuple[tuple[int, ...], int]]:
        return sorted(self.values.items())

    def support_levels(self) -> list[int | None]:
        return [CosetId(1, self.M, d).level() for d in self.values]

    def restrict(self, M: int) -> SpectrumTable:
        """The same function tabulated with M digits above -1 (must fit)."""
        out = {}
        for d, e in self.values.items():
            if len(d) > M + 1 and any(d[M + 1:]):
                raise ValueError(f"coset {d} does not fit at M={M}")
            out[(d + (0,) * (M + 1 - len(d)))[: M + 1]] = e
        return SpectrumTable(self.field, M, out)

    def to_array(self) -> np.ndarray:
        q, p = self.field.order, self.field.p
        arr = np.zeros((q,) * (self.M + 1) + (p,), dtype=np.int64)
        for d, e in self.values.items():
            arr[d + (e,)] = 1
        return arr

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.to_json(),
            "M": self.M,
            "entries": [{"digits": [f.label(x) for x in d], "exp": e} for d, e in self.nonzero()],
        }

    @classmethod
    def from_json(cls, data: dict, field: GF | None = None) -> SpectrumTable:
        f = field or GF.from_json(data["field"])
        return cls(f, int(data["M"]), {tuple(f.parse(x) for x in e["digits"]): int(e["exp"]) for e in data["entries"]})


def _check_tree_mask(tree: RootedTree, mask: MaskTable):
    if mask.field != tree.field:
        raise TreeMaskMismatchError("mask and tree use different fields")
    expected = {(0, 0)} | {(v, tree.parent[v]) for v in range(1, len(tree.parent))}
    if set(mask.entries) != expected:
        raise TreeMaskMismatchError("mask nonzeros are not the edges of the tree")
    if mask.entries[(0, 0)] != 0:
        raise TreeMaskMismatchError("lambda(0, 0) must equal 1")


def spectrum_from_tree(tree: RootedTree, mask: MaskTable | None = None) -> SpectrumTable:
    """One nonzero coset per vertex v: digits (v, parent(v), ..., u_j, 0, ...)."""
    if mask is None:
        mask = mask_from_tree(tree)
    else:
        _check_tree_mask(tree, mask)
    p = tree.field.p
    M = tree.M
    width = M + 1
    parent = tree.parent
    ent = mask.entries
    values = {(0,) * width: 0}
    for v in range(1, len(parent)):
        digits = []
        exp = 0
        u = v
        while u:
            digits.append(u)
            exp += ent[(u, parent[u])]
            u = parent[u]
        digits.extend([0] * (width - len(digits)))
        values[tuple(digits)] = exp % p
    return SpectrumTable(tree.field, M, values)


def mask_chains(mask: MaskTable, M: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Every coset (a_-1, ..., a_M) of (K_{M+1})^perp where the product
    m_0(chi) m_0(chi A^-1) ... m_0(chi A^-(M+1)) is nonzero, with its exponent.

    The factors are lambda(a_{n-1}, a_n) for n = 0..M+1 with a_{M+1} = 0; the
    search runs from the top digit down through nonzero mask columns.
    """
    cols = mask.columns
    p = mask.field.p
    # chains grow from the top digit (a_{M+1} = 0) down, one mask column per step
    level: list[tuple[tuple[int, ...], int]] = [((0,), 0)]
    for _ in range(M + 2):
        level = [(chain + (i,), e + ei) for chain, e in level for i, ei in cols[chain[-1]]]
    for chain, e in level:
        yield tuple(reversed(chain[1:])), e % p


def spectrum_from_product(mask: MaskTable, M: int) -> SpectrumTable:
    """phi-hat = prod_n m_0(chi A^-n) tabulated on (K_M)^perp.

    Raises :class:`MaskInvalidError` if the product is nonzero on any coset of
    the annulus (K_{M+1})^perp minus (K_M)^perp.
    """
    if mask.value(0, 0) != 0:
        raise MaskError("m_0 must equal 1 on the trivial coset")
    values = {}
    bad = []
    for digits, e in mask_chains(mask, M):
        if digits[-1]:
            bad.append((digits, e))
        else:
            values[digits[:-1]] = e
    if bad:
        raise MaskInvalidError(f"mask product is nonzero on {len(bad)} annulus cosets above M={M}", bad)
    return SpectrumTable(mask.field, M, values)


# -- refinement coefficients ------------------------------------------------------


@dataclass(frozen=True)
class CoeffTable:
    """beta_h for h = a_-1 g_-1 + a_-2 g_-2, as ``coeffs[a_-1, a_-2] * p^-scale``."""

    field: GF
    coeffs: np.ndarray = dc_field(compare=False)
    scale: int = 0

    N = 1

    def value(self, h: ShiftH0) -> Cyclo:
        if h.depth > self.N + 1:
            return Cyclo.zero(self.field.p)
        a1, a2 = h.padded(self.N + 1)
        return Cyclo(self.field.p, self.coeffs[a1, a2].tolist(), self.scale)

    def items(self) -> Iterator[tuple[ShiftH0, Cyclo]]:
        q = self.field.order
        vals = array_values(self.coeffs, self.scale)
        for a2 in range(q):
            for a1 in range(q):
                yield ShiftH0(self.field, (a1, a2)), vals[a1 * q + a2]

    def to_json(self) -> dict:
        f = self.field
        return {
            "field": f.to_json(),
            "N": self.N,
            "entries": [
                {"shift": [f.label(a) for a in h.padded(self.N + 1)], "value": v.to_json()}
                for h, v in self.items()
                if not v.is_zero()
            ],
        }


def coefficients_from_mask_arrays(field: GF, masks: np.ndarray) -> tuple[np.ndarray, int]:
    """Batched beta solve: masks (..., q, q, p) indexed [a_-1, a_0] -> beta
    coefficients (..., q, q, p) indexed [h_-1, h_-2] at scale s.

    beta_h = q^-1 sum_{a_-1, a_0} zeta^(<a_0, h_-1> + <a_-1, h_-2>) m_0(a_-1, a_0).
    """
    nd = masks.ndim
    raw = character_transform(field, masks, [nd - 3, nd - 2], +1)  # [h_-2, h_-1]
    return np.swapaxes(raw, nd - 3, nd - 2), field.s


def masks_from_coefficient_arrays(field: GF, beta: np.ndarray, scale: int) -> tuple[np.ndarray, int]:
    """Inverse of :func:`coefficients_from_mask_arrays`:
    m_0(a_-1, a_0) = q^-1 sum_h beta_h conj(zeta^(<a_0, h_-1> + <a_-1, h_-2>))."""
    nd = beta.ndim
    raw = character_transform(field, beta, [nd - 3, nd - 2], -1)  # [a_0, a_-1]
    return np.swapaxes(raw, nd - 3, nd - 2), scale + field.s


def mask_to_coefficients(mask: MaskTable) -> CoeffTable:
    coeffs, scale = coefficients_from_mask_arrays(mask.field, mask.to_array())
    return CoeffTable(mask.field, coeffs, scale)


def reconstruct_mask(coeffs: CoeffTable) -> dict[tuple[int, int], Cyclo]:
    """m_0 on every (a_-1, a_0) coset from beta."""
    arr, scale = masks_from_coefficient_arrays(coeffs.field, coeffs.coeffs, coeffs.scale)
    q = coeffs.field.order
    vals = array_values(arr, scale)
    return {(i, j): vals[i * q + j] for i in range(q) for j in range(q)}


def masks_agree(field: GF, a: np.ndarray, a_scale: int, b: np.ndarray, b_scale: int) -> np.ndarray:
    """Exact per-entry equality of two coefficient arrays at (possibly) different scales."""
    p = field.p
    top = max(a_scale, b_scale)
    x = canonicalize_array(np.array(a, dtype=np.int64)) * p ** (top - a_scale)
    y = canonicalize_array(np.array(b, dtype=np.int64)) * p ** (top - b_scale)
    return np.all(x == y, axis=-1)
