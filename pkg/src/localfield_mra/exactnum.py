"""Exact values in Z[zeta_p][1/p].

A :class:`Cyclo` is ``p^-scale * sum_k coeffs[k] zeta^k`` with
``zeta = exp(2 pi i / p)``.  The canonical form pins ``coeffs[p-1] = 0``
(using ``1 + zeta + ... + zeta^(p-1) = 0``), so ``zeta^0 .. zeta^(p-2)`` is a
Z-basis, and takes the smallest ``scale >= 0``.  Equality is then equality of
canonical forms.

Roots of unity are carried around the package as bare exponents ``k``
(meaning ``zeta^k``); ``None`` stands for the value zero where a
"root-of-unity-or-zero" is expected.

The module also has a few helpers for numpy arrays whose last axis holds the
p coefficients of many values at one shared scale.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np


class CycloMismatchError(ValueError):
    pass


def _canonical(p: int, coeffs: Sequence[int], scale: int) -> tuple[tuple[int, ...], int]:
    c = [int(x) for x in coeffs]
    if len(c) < p:
        c += [0] * (p - len(c))
    elif len(c) > p:
        folded = [0] * p
        for k, x in enumerate(c):
            folded[k % p] += x
        c = folded
    last = c[p - 1]
    if last:
        c = [x - last for x in c]
    if not any(c):
        return tuple(c), 0
    while scale > 0 and all(x % p == 0 for x in c):
        c = [x // p for x in c]
        scale -= 1
    return tuple(c), scale


class Cyclo:
    __slots__ = ("p", "coeffs", "scale")

    def __init__(self, p: int, coeffs: Sequence[int] = (), scale: int = 0):
        if scale < 0:
            coeffs = [int(x) * p ** (-scale) for x in coeffs]
            scale = 0
        c, sc = _canonical(p, coeffs, scale)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "scale", sc)

    def __setattr__(self, name, value):
        raise AttributeError("Cyclo values are immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, p: int) -> Cyclo:
        return cls(p)

    @classmethod
    def one(cls, p: int) -> Cyclo:
        return cls(p, [1])

    @classmethod
    def root(cls, p: int, exponent: int | None) -> Cyclo:
        """zeta^exponent; ``None`` gives zero."""
        if exponent is None:
            return cls(p)
        c = [0] * p
        c[exponent % p] = 1
        return cls(p, c)

    @classmethod
    def from_rational(cls, p: int, q: Fraction | int) -> Cyclo:
        q = Fraction(q)
        den, scale = q.denominator, 0
        while den % p == 0:
            den //= p
            scale += 1
        if den != 1:
            raise ValueError(f"denominator of {q} is not a power of {p}")
        return cls(p, [q.numerator], scale)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> Cyclo:
        if isinstance(other, Cyclo):
            if other.p != self.p:
                raise CycloMismatchError(f"p={self.p} vs p={other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return Cyclo.from_rational(self.p, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        scale = max(self.scale, other.scale)
        fa = p ** (scale - self.scale)
        fb = p ** (scale - other.scale)
        return Cyclo(p, [a * fa + b * fb for a, b in zip(self.coeffs, other.coeffs)], scale)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.p, [-a for a in self.coeffs], self.scale)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[(i + j) % p] += a * b
        return Cyclo(p, out, self.scale + other.scale)

    __rmul__ = __mul__

    def times_root(self, exponent: int) -> Cyclo:
        """Multiply by zeta^exponent (a rotation of the coefficients)."""
        p = self.p
        k = exponent % p
        out = [0] * p
        for i, a in enumerate(self.coeffs):
            out[(i + k) % p] = a
        return Cyclo(p, out, self.scale)

    def scaled(self, power: int) -> Cyclo:
        """Multiply by p^-power."""
        return Cyclo(self.p, self.coeffs, self.scale + power)

    def conj(self) -> Cyclo:
        p = self.p
        out = [0] * p
        for k, a in enumerate(self.coeffs):
            out[(-k) % p] = a
        return Cyclo(p, out, self.scale)

    def abs2(self) -> Cyclo:
        return self * self.conj()

    # -- predicates -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def rational(self) -> Fraction | None:
        """The value as a Fraction when it is rational, else None."""
        if any(self.coeffs[1:]):
            return None
        return Fraction(self.coeffs[0], self.p**self.scale)

    def equals_rational(self, q: Fraction | int) -> bool:
        return self == Cyclo.from_rational(self.p, q)

    def root_exponent(self) -> int | None:
        """k if the value is exactly zeta^k, else None."""
        for k in range(self.p):
            if self == Cyclo.root(self.p, k):
                return k
        return None

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            try:
                other = Cyclo.from_rational(self.p, other)
            except ValueError:
                return False
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self.p == other.p and self.coeffs == other.coeffs and self.scale == other.scale

    def __hash__(self):
        return hash((self.p, self.coeffs, self.scale))

    def __complex__(self):
        z = cmath.exp(2j * cmath.pi / self.p)
        return sum(a * z**k for k, a in enumerate(self.coeffs)) / self.p**self.scale

    def __repr__(self):
        return f"Cyclo(p={self.p}, coeffs={list(self.coeffs)}, scale={self.scale})"

    def __str__(self):
        terms = []
        for k, a in enumerate(self.coeffs):
            if not a:
                continue
            base = "" if k == 0 else ("ζ" if k == 1 else f"ζ^{k}")
            if not base:
                terms.append(str(a))
            elif a == 1:
                terms.append(base)
            elif a == -1:
                terms.append("-" + base)
            else:
                terms.append(f"{a}{base}")
        if not terms:
            return "0"
        num = " + ".join(terms).replace("+ -", "- ")
        if self.scale == 0:
            return num
        den = self.p**self.scale
        return f"{num}/{den}" if len(terms) == 1 else f"({num})/{den}"

    def to_json(self) -> dict:
        return {"coeffs": list(self.coeffs), "scale": self.scale}

    @classmethod
    def from_json(cls, p: int, data: dict) -> Cyclo:
        return cls(p, data["coeffs"], data["scale"])


def cyclo_sum(p: int, values: Iterable[Cyclo]) -> Cyclo:
    total = Cyclo.zero(p)
    for v in values:
        total = total + v
    return total


# -- coefficient arrays -------------------------------------------------------


def canonicalize_array(arr: np.ndarray) -> np.ndarray:
    """Pin the last coefficient to zero, row-wise (in place, also returned)."""
    last = arr[..., -1:].copy()
    arr -= last
    return arr


def conj_array(arr: np.ndarray) -> np.ndarray:
    p = arr.shape[-1]
    return arr[..., [(-k) % p for k in range(p)]]


def roll_array(arr: np.ndarray, exponent: int) -> np.ndarray:
    """Multiply every value by zeta^exponent."""
    return np.roll(arr, exponent % arr.shape[-1], axis=-1)


def array_values(arr: np.ndarray, scale: int) -> list[Cyclo]:
    """Unpack a (n, p) coefficient array into canonical values."""
    p = arr.shape[-1]
    return [Cyclo(p, row, scale) for row in arr.reshape(-1, p).tolist()]


def sesquilinear_sum(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Coefficients of sum_n f[n] * conj(g[n]) for coefficient arrays (n, p)."""
    p = f.shape[-1]
    f2 = f.reshape(-1, p)
    g2 = g.reshape(-1, p)
    out = np.zeros(p, dtype=np.int64)
    for k in range(p):
        # zeta^i * zeta^-(i-k) = zeta^k
        out[k] = int(np.sum(f2 * np.roll(g2, k, axis=1)))
    return out


def array_equals(arr: np.ndarray, scale: int, other: np.ndarray, other_scale: int) -> np.ndarray:
    """Elementwise exact equality of two coefficient arrays at their scales.

    Returns a boolean array over all axes but the last.
    """
    p = arr.shape[-1]
    a = canonicalize_array(np.array(arr, dtype=object))
    b = canonicalize_array(np.array(other, dtype=object))
    top = max(scale, other_scale)
    a = a * p ** (top - scale)
    b = b * p ** (top - other_scale)
    return np.all(a == b, axis=-1)
