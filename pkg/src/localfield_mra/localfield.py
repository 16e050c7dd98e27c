"""Truncated elements of the local field F^(s) = GF(p^s)((t)).

An element is a finite window of digits ``a_lo, ..., a_{hi-1}`` in GF(p^s);
every digit outside the window is zero.  Digit index n is the position of
the basis element g_n (a unit digit at index n), so non-negative indices
form the ring of integers K_0 and negative indices the "integer part".
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .gf import GF, FieldMismatchError


def _same_field(a: GF, b: GF):
    if a != b:
        raise FieldMismatchError(f"{a} vs {b}")


@dataclass(frozen=True)
class LocalElem:
    """Canonical form: the first and last window digits are nonzero; zero is
    the empty window with ``lo = 0``."""

    field: GF
    lo: int
    digits: tuple[int, ...]

    def __post_init__(self):
        d = list(self.digits)
        lo = self.lo
        while d and d[0] == 0:
            d.pop(0)
            lo += 1
        while d and d[-1] == 0:
            d.pop()
        if not d:
            lo = 0
        for x in d:
            self.field.check(x)
        object.__setattr__(self, "digits", tuple(d))
        object.__setattr__(self, "lo", lo)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, field: GF) -> LocalElem:
        return cls(field, 0, ())

    @classmethod
    def unit(cls, field: GF, n: int, value: int = 1) -> LocalElem:
        """``value * g_n``."""
        return cls(field, n, (value,))

    @classmethod
    def from_dict(cls, field: GF, digits: dict[int, int]) -> LocalElem:
        if not digits:
            return cls.zero(field)
        lo, hi = min(digits), max(digits) + 1
        return cls(field, lo, tuple(digits.get(k, 0) for k in range(lo, hi)))

    # -- access ------------------------------------------------------------

    @property
    def hi(self) -> int:
        return self.lo + len(self.digits)

    def is_zero(self) -> bool:
        return not self.digits

    def digit(self, n: int) -> int:
        if self.lo <= n < self.hi:
            return self.digits[n - self.lo]
        return 0

    def window(self, lo: int, hi: int) -> tuple[int, ...]:
        return tuple(self.digit(n) for n in range(lo, hi))

    # -- arithmetic -----------------------------------------------------------

    def _binary(self, other: LocalElem, op) -> LocalElem:
        _same_field(self.field, other.field)
        if self.is_zero():
            lo, hi = other.lo, other.hi
        elif other.is_zero():
            lo, hi = self.lo, self.hi
        else:
            lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return LocalElem(self.field, lo, tuple(op(self.digit(n), other.digit(n)) for n in range(lo, hi)))

    def __add__(self, other: LocalElem) -> LocalElem:
        return self._binary(other, self.field.add)

    def __sub__(self, other: LocalElem) -> LocalElem:
        return self._binary(other, self.field.sub)

    def __neg__(self) -> LocalElem:
        return LocalElem(self.field, self.lo, tuple(self.field.neg(x) for x in self.digits))

    def __mul__(self, other: LocalElem) -> LocalElem:
        _same_field(self.field, other.field)
        if self.is_zero() or other.is_zero():
            return LocalElem.zero(self.field)
        f = self.field
        out = [0] * (len(self.digits) + len(other.digits) - 1)
        for i, a in enumerate(self.digits):
            if a:
                for j, b in enumerate(other.digits):
                    if b:
                        out[i + j] = f.add(out[i + j], f.mul(a, b))
        return LocalElem(f, self.lo + other.lo, tuple(out))

    def scaled(self, lam: int) -> LocalElem:
        """Coordinate-wise product with a scalar of GF(p^s)."""
        f = self.field
        f.check(lam)
        return LocalElem(f, self.lo, tuple(f.mul(lam, x) for x in self.digits))

    def norm(self) -> Fraction:
        """``p^(-s*lo)`` for nonzero elements; 0 for zero."""
        if self.is_zero():
            return Fraction(0)
        return Fraction(self.field.order) ** (-self.lo)

    def dilate(self, times: int = 1) -> LocalElem:
        """A^times: every digit index is lowered by ``times``."""
        if self.is_zero():
            return self
        return LocalElem(self.field, self.lo - times, self.digits)

    def undilate(self, times: int = 1) -> LocalElem:
        return self.dilate(-times)

    def in_ball(self, n: int) -> bool:
        """Membership in K_n (all digits below index n vanish)."""
        return self.is_zero() or self.lo >= n

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"lo": self.lo, "digits": [list(self.field.digits(x)) for x in self.digits]}

    @classmethod
    def from_json(cls, field: GF, data: dict) -> LocalElem:
        return cls(field, int(data["lo"]), tuple(field.parse(d) for d in data["digits"]))

    def __repr__(self):
        if self.is_zero():
            return "LocalElem(0)"
        terms = [f"{self.field.label(x)}@{self.lo + k}" for k, x in enumerate(self.digits) if x]
        return "LocalElem(" + " + ".join(terms) + ")"


@dataclass(frozen=True)
class ShiftH0:
    """An element ``a_-1 g_-1 + ... + a_-L g_-L`` of the shift lattice H_0.

    ``digits[k]`` is the digit at index ``-(k+1)``; trailing zeros (towards
    more negative indices) are trimmed.
    """

    field: GF
    digits: tuple[int, ...]

    def __post_init__(self):
        d = list(self.digits)
        while d and d[-1] == 0:
            d.pop()
        for x in d:
            self.field.check(x)
        object.__setattr__(self, "digits", tuple(d))

    @property
    def depth(self) -> int:
        return len(self.digits)

    def digit(self, n: int) -> int:
        """Digit at (negative) index n."""
        k = -n - 1
        return self.digits[k] if 0 <= k < len(self.digits) else 0

    def as_local(self) -> LocalElem:
        return LocalElem.from_dict(self.field, {-(k + 1): x for k, x in enumerate(self.digits)})

    def padded(self, depth: int) -> tuple[int, ...]:
        if depth < self.depth:
            raise ValueError("shift deeper than requested depth")
        return self.digits + (0,) * (depth - self.depth)

    def to_json(self) -> list[str]:
        return [self.field.label(x) for x in self.digits]

    @classmethod
    def from_json(cls, field: GF, data: Sequence) -> ShiftH0:
        return cls(field, tuple(field.parse(d) for d in data))


def h0_enumerate(field: GF, depth: int) -> list[ShiftH0]:
    """All q^depth shifts of depth <= ``depth``.

    Ordered by the base-q integer of (a_-1, ..., a_-depth), with a_-1 the
    least significant digit.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    q = field.order
    return [ShiftH0(field, tuple(reversed(t))) for t in itertools.product(range(q), repeat=depth)]


def iter_window(field: GF, lo: int, hi: int) -> Iterator[LocalElem]:
    """Every element whose digits lie in indices lo..hi-1."""
    for t in itertools.product(field.elements(), repeat=hi - lo):
        yield LocalElem(field, lo, t)


def basis_expand(a: LocalElem, basic: dict[int, LocalElem]) -> dict[int, int]:
    """Coefficients c_n with ``sum_n c_n * basic[n]`` equal to ``a`` on its window.

    ``basic[n]`` must have leading index exactly n.  The leading digit of the
    remainder is eliminated one index at a time; contributions of ``basic[n]``
    beyond the window of ``a`` are ignored (they belong to the infinite tail).
    """
    f = a.field
    for n, b in basic.items():
        _same_field(f, b.field)
        if b.is_zero() or b.lo != n:
            raise ValueError(f"basic[{n}] must have leading index exactly {n}")
    coeffs: dict[int, int] = {}
    if a.is_zero():
        return coeffs
    lo, hi = a.lo, a.hi
    rem = a
    for n in range(lo, hi):
        d = rem.digit(n)
        if d == 0:
            coeffs[n] = 0
            continue
        if n not in basic:
            raise ValueError(f"no basic element for index {n}")
        c = f.mul(d, f.inv(basic[n].digit(n)))
        coeffs[n] = c
        rem = rem - basic[n].scaled(c)
    return coeffs


def basis_sum(coeffs: dict[int, int], basic: dict[int, LocalElem], lo: int, hi: int) -> LocalElem:
    """``sum c_n basic[n]`` truncated to indices lo..hi-1."""
    field = next(iter(basic.values())).field
    total = LocalElem.zero(field)
    for n, c in coeffs.items():
        if c:
            total = total + basic[n].scaled(c)
    return LocalElem.from_dict(field, {k: total.digit(k) for k in range(lo, hi) if total.digit(k)})
