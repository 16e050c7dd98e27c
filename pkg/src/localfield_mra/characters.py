"""Characters of F^(s) as finite exponent windows.

A character is ``chi = prod_k r_k^{a_k}`` with finitely many nonzero
exponents ``a_k`` in GF(p^s).  Its value at x is ``zeta^e`` with
``e = sum_k <a_k, x_k> mod p`` (the GF(p) dot product of digit vectors), so
the pairing is carried as the integer exponent e.

A coset of the annihilator (K_-N)^perp inside (K_M)^perp is named by the
exponents at indices -N..M-1 (:class:`CosetId`, lowest index first).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .gf import GF, FieldMismatchError
from .localfield import LocalElem


class CosetError(ValueError):
    pass


@dataclass(frozen=True)
class Character:
    field: GF
    lo: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        e = list(self.exponents)
        lo = self.lo
        while e and e[0] == 0:
            e.pop(0)
            lo += 1
        while e and e[-1] == 0:
            e.pop()
        if not e:
            lo = 0
        for x in e:
            self.field.check(x)
        object.__setattr__(self, "exponents", tuple(e))
        object.__setattr__(self, "lo", lo)

    @classmethod
    def identity(cls, field: GF) -> Character:
        return cls(field, 0, ())

    @classmethod
    def rademacher(cls, field: GF, k: int, u: int = 1) -> Character:
        """r_k^u."""
        return cls(field, k, (u,))

    @classmethod
    def from_dict(cls, field: GF, exps: dict[int, int]) -> Character:
        if not exps:
            return cls.identity(field)
        lo, hi = min(exps), max(exps) + 1
        return cls(field, lo, tuple(exps.get(k, 0) for k in range(lo, hi)))

    @property
    def hi(self) -> int:
        return self.lo + len(self.exponents)

    def is_identity(self) -> bool:
        return not self.exponents

    def exponent(self, k: int) -> int:
        if self.lo <= k < self.hi:
            return self.exponents[k - self.lo]
        return 0

    def pair(self, x: LocalElem) -> int:
        """Exponent e of (chi, x) = zeta^e."""
        if self.field != x.field:
            raise FieldMismatchError(f"{self.field} vs {x.field}")
        f = self.field
        lo, hi = max(self.lo, x.lo), min(self.hi, x.hi)
        return sum(f.dot(self.exponent(k), x.digit(k)) for k in range(lo, hi)) % f.p

    def __call__(self, x: LocalElem) -> int:
        return self.pair(x)

    def __mul__(self, other: Character) -> Character:
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if self.is_identity():
            return other
        if other.is_identity():
            return self
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        f = self.field
        return Character(f, lo, tuple(f.add(self.exponent(k), other.exponent(k)) for k in range(lo, hi)))

    def inverse(self) -> Character:
        f = self.field
        return Character(f, self.lo, tuple(f.neg(a) for a in self.exponents))

    def power(self, b: int) -> Character:
        """chi^b for b in GF(p^s): every exponent multiplied by b."""
        f = self.field
        f.check(b)
        return Character(f, self.lo, tuple(f.mul(a, b) for a in self.exponents))

    def dilate(self, times: int = 1) -> Character:
        """chi A^times: every exponent index raised by ``times``."""
        if self.is_identity():
            return self
        return Character(self.field, self.lo + times, self.exponents)

    def level(self) -> float:
        """n with chi in (K_n)^perp but not in (K_{n-1})^perp; -inf for the identity."""
        if self.is_identity():
            return -math.inf
        return self.hi

    def in_annihilator(self, n: int) -> bool:
        """Membership in (K_n)^perp."""
        return self.level() <= n

    def coset(self, N: int, M: int) -> CosetId:
        if not self.in_annihilator(M):
            raise CosetError(f"character of level {self.level()} lies outside (K_{M})^perp")
        return CosetId(N, M, tuple(self.exponent(k) for k in range(-N, M)))

    def to_json(self) -> dict:
        return {"lo": self.lo, "exponents": [list(self.field.digits(a)) for a in self.exponents]}

    @classmethod
    def from_json(cls, field: GF, data: dict) -> Character:
        return cls(field, int(data["lo"]), tuple(field.parse(a) for a in data["exponents"]))


@dataclass(frozen=True)
class CosetId:
    """The coset (K_-N)^perp r_-N^{d_0} ... r_{M-1}^{d_{N+M-1}}."""

    N: int
    M: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.N < 1 or self.M < 0:
            raise CosetError("need N >= 1 and M >= 0")
        if len(self.digits) != self.N + self.M:
            raise CosetError(f"expected {self.N + self.M} digits, got {len(self.digits)}")

    def digit(self, k: int) -> int:
        """Exponent at index k (zero outside -N..M-1)."""
        j = k + self.N
        return self.digits[j] if 0 <= j < len(self.digits) else 0

    def level(self) -> int | None:
        """Highest index with a nonzero digit, plus one; None for the trivial coset."""
        for j in range(len(self.digits) - 1, -1, -1):
            if self.digits[j]:
                return j - self.N + 1
        return None

    def representative(self, field: GF) -> Character:
        return Character(field, -self.N, self.digits)

    def to_json(self, field: GF) -> dict:
        return {"N": self.N, "M": self.M, "digits": [field.label(d) for d in self.digits]}

    @classmethod
    def from_json(cls, field: GF, data: dict) -> CosetId:
        return cls(int(data["N"]), int(data["M"]), tuple(field.parse(d) for d in data["digits"]))


def enumerate_cosets(field: GF, N: int, M: int) -> Iterator[CosetId]:
    """All q^(N+M) cosets, in lexicographic order of their digit vectors."""
    for t in itertools.product(field.elements(), repeat=N + M):
        yield CosetId(N, M, t)


# -- vectorized pairing -------------------------------------------------------


@lru_cache(maxsize=64)
def _transform_operator(field: GF, sign: int) -> np.ndarray:
    """W[(c, j), (x, i)] = 1 iff i + sign * <c, x> = j (mod p).

    Applied to the stacked (digit, coefficient) index it performs one
    character sum along a digit axis, including the rotation of the
    cyclotomic coefficient vector.
    """
    q, p = field.order, field.p
    D = (sign * field.dot_table) % p  # [c, x]
    i = np.arange(p)
    hit = (i[None, None, :] + D[:, :, None]) % p  # [c, x, i] -> j
    W = np.zeros((q, p, q, p), dtype=np.int64)
    c, x, ii = np.meshgrid(np.arange(q), np.arange(q), i, indexing="ij")
    W[c, hit, x, ii] = 1
    W = W.reshape(q * p, q * p)
    W.setflags(write=False)
    return W


def character_transform(field: GF, coeffs: np.ndarray, axes: Sequence[int], sign: int) -> np.ndarray:
    """Exact separable character sum along the given digit axes.

    ``coeffs`` holds cyclotomic coefficient vectors on its last axis (length
    p).  Each listed axis of length q is replaced by
    ``out[..., c, ...] = sum_x zeta^(sign*<c, x>) in[..., x, ...]``.
    """
    q, p = field.order, field.p
    W = _transform_operator(field, sign)
    arr = np.asarray(coeffs, dtype=np.int64)
    for ax in axes:
        moved = np.moveaxis(arr, ax, 0)
        shape = moved.shape
        flat = moved.reshape(q, -1, p).transpose(0, 2, 1).reshape(q * p, -1)
        out = (W @ flat).reshape(q, p, -1).transpose(0, 2, 1)
        arr = np.moveaxis(out.reshape(shape), 0, ax)
    return arr


def pairing_exponents(field: GF, digits: np.ndarray, grid_shape: Sequence[int]) -> np.ndarray:
    """Exponents <c, x> summed over digit positions, for one character window.

    ``digits`` is a length-n vector of exponents c_k; the result has shape
    ``grid_shape`` (= (q,)*n) with entry x equal to ``sum_k <c_k, x_k> mod p``.
    """
    n = len(grid_shape)
    out = np.zeros(grid_shape, dtype=np.int64)
    D = field.dot_table
    for k, c in enumerate(digits):
        if c:
            shape = [1] * n
            shape[k] = grid_shape[k]
            out = out + D[c].reshape(shape)
    return out % field.p
