"""Arithmetic in GF(p^s).

Elements are encoded as integers ``0 .. p^s - 1``: the base-p digits of the
integer, least significant first, are the coefficients a^(0), ..., a^(s-1) of
the polynomial a^(0) + a^(1) t + ... + a^(s-1) t^(s-1).  Multiplication is
polynomial multiplication modulo a monic irreducible of degree s.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

# log/antilog tables are built up to this order; above it arithmetic is done
# on polynomials directly
LOG_TABLE_LIMIT = 1 << 20
# dense numpy tables (q x q) are only offered up to this order
ARRAY_TABLE_LIMIT = 4096


class FieldError(ValueError):
    pass


class FieldMismatchError(FieldError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _trim(poly: Sequence[int]) -> list[int]:
    out = list(poly)
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Schoolbook product over GF(p), constant coefficient first."""
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def poly_rem(num: Sequence[int], den: Sequence[int], p: int) -> list[int]:
    """Remainder of long division over GF(p)."""
    den = _trim(den)
    if not den:
        raise ZeroDivisionError("division by the zero polynomial")
    rem = _trim([c % p for c in num])
    lead_inv = pow(den[-1], p - 2, p)
    dd = len(den) - 1
    while len(rem) - 1 >= dd:
        coef = rem[-1] * lead_inv % p
        shift = len(rem) - 1 - dd
        for k, c in enumerate(den):
            rem[shift + k] = (rem[shift + k] - coef * c) % p
        rem = _trim(rem)
    return rem


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """True iff no monic polynomial of degree 1..deg/2 divides ``poly`` over GF(p)."""
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    poly = _trim(poly)
    deg = len(poly) - 1
    if deg < 1:
        raise FieldError("irreducibility is only defined for degree >= 1")
    if any(not 0 <= c < p for c in poly):
        raise FieldError(f"coefficients must lie in [0, {p})")
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not poly_rem(poly, list(low) + [1], p):
                return False
    return True


def find_irreducible(p: int, s: int) -> tuple[int, ...]:
    """Smallest monic irreducible of degree s.

    Candidates are ordered by the base-p integer of their coefficient
    sequence with the constant coefficient least significant.
    """
    if not is_prime(p):
        raise FieldError(f"{p} is not prime")
    if s < 1:
        raise FieldError("degree must be positive")
    for code in range(p**s):
        low = [(code // p**j) % p for j in range(s)]
        poly = low + [1]
        if is_irreducible(poly, p):
            return tuple(poly)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class GF:
    """The field GF(p^s) = GF(p)[t] / (modulus)."""

    p: int
    s: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"{self.p} is not prime")
        if self.s < 1:
            raise FieldError("s must be a positive integer")
        mod = tuple(int(c) for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != self.s + 1 or mod[-1] != 1:
            raise FieldError(f"modulus must be monic of degree {self.s}")
        if not is_irreducible(mod, self.p):
            raise FieldError(f"modulus {mod} is reducible over GF({self.p})")

    @classmethod
    def make(cls, p: int, s: int = 1, modulus: Sequence[int] | None = None) -> GF:
        if modulus is None:
            modulus = find_irreducible(p, s)
        return cls(p, s, tuple(modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.s}, modulus={list(self.modulus)})"

    @cached_property
    def order(self) -> int:
        return self.p**self.s

    def elements(self) -> range:
        """All elements in counting order of their digit vectors."""
        return range(self.order)

    def check(self, a: int) -> int:
        if not 0 <= a < self.order:
            raise FieldError(f"{a} is not an element of GF({self.p}^{self.s})")
        return a

    # -- digit conversion ------------------------------------------------

    def digits(self, a: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.s):
            a, r = divmod(a, p)
            out.append(r)
        return tuple(out)

    def from_digits(self, digits: Iterable[int]) -> int:
        digits = list(digits)
        if len(digits) != self.s or any(not 0 <= d < self.p for d in digits):
            raise FieldError(f"expected {self.s} digits in [0, {self.p})")
        value = 0
        for d in reversed(digits):
            value = value * self.p + d
        return value

    def label(self, a: int) -> str:
        """Comma-joined digits, a^(0) first (the serialized vertex form)."""
        return ",".join(map(str, self.digits(a)))

    def parse(self, label: str | Sequence[int] | int) -> int:
        if isinstance(label, (int, np.integer)):
            return self.check(int(label))
        if isinstance(label, str):
            label = [int(t) for t in label.split(",")]
        return self.from_digits(label)

    # -- tables ------------------------------------------------------------

    @cached_property
    def _log_tables(self) -> tuple[list[int], list[int]] | None:
        """(exp, log) for a primitive element, or None for huge fields."""
        q = self.order
        if q > LOG_TABLE_LIMIT:
            return None
        if q == 2:
            return [1], [0, 0]
        for g in range(2, q):
            exp = [1]
            x = 1
            for _ in range(q - 2):
                x = self._polymul(x, g)
                if x == 1:
                    break
                exp.append(x)
            if len(exp) == q - 1:
                log = [0] * q
                for k, v in enumerate(exp):
                    log[v] = k
                return exp, log
        raise AssertionError("no primitive element")  # unreachable for a field

    @cached_property
    def _add_rows(self) -> list[list[int]] | None:
        if self.order > 256:
            return None
        return self.add_table.tolist()

    @cached_property
    def digit_array(self) -> np.ndarray:
        """(q, s) array of digit vectors."""
        q = np.arange(self.order)
        return np.stack([(q // self.p**j) % self.p for j in range(self.s)], axis=1)

    def _encode_array(self, digits: np.ndarray) -> np.ndarray:
        weights = self.p ** np.arange(self.s)
        return digits @ weights

    def _require_array_tables(self):
        if self.order > ARRAY_TABLE_LIMIT:
            raise FieldError(f"dense tables are not built for order > {ARRAY_TABLE_LIMIT}")

    @cached_property
    def add_table(self) -> np.ndarray:
        self._require_array_tables()
        d = self.digit_array
        return self._encode_array((d[:, None, :] + d[None, :, :]) % self.p)

    @cached_property
    def sub_table(self) -> np.ndarray:
        self._require_array_tables()
        d = self.digit_array
        return self._encode_array((d[:, None, :] - d[None, :, :]) % self.p)

    @cached_property
    def neg_table(self) -> np.ndarray:
        return self._encode_array((-self.digit_array) % self.p)

    @cached_property
    def mul_table(self) -> np.ndarray:
        self._require_array_tables()
        exp, log = self._log_tables
        exp_a = np.array(exp + exp, dtype=np.int64)
        log_a = np.array(log, dtype=np.int64)
        table = exp_a[log_a[:, None] + log_a[None, :]]
        table[0, :] = 0
        table[:, 0] = 0
        return table

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv_table[0] is 0 by convention; use :meth:`inv` for checked inverses."""
        return np.array([0] + [self.inv(a) for a in range(1, self.order)], dtype=np.int64)

    @cached_property
    def dot_table(self) -> np.ndarray:
        """GF(p) dot product of digit vectors; the exponent of the character pairing."""
        self._require_array_tables()
        d = self.digit_array
        return (d @ d.T) % self.p

    # -- scalar arithmetic -------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        rows = self._add_rows
        if rows is not None:
            return rows[a][b]
        return self.from_digits((x + y) % self.p for x, y in zip(self.digits(a), self.digits(b)))

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.from_digits((-x) % self.p for x in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def _polymul(self, a: int, b: int) -> int:
        prod = poly_mul(self.digits(a), self.digits(b), self.p)
        rem = poly_rem(prod, self.modulus, self.p)
        return self.from_digits(rem + [0] * (self.s - len(rem)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        tables = self._log_tables
        if tables is None:
            return self._polymul(a, b)
        exp, log = tables
        return exp[(log[a] + log[b]) % (self.order - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in GF(p^s)")
        tables = self._log_tables
        if tables is None:
            return self.pow(a, self.order - 2)
        exp, log = tables
        return exp[(-log[a]) % (self.order - 1)]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def dot(self, a: int, b: int) -> int:
        if self.p == 2:
            return (a & b).bit_count() & 1
        return sum(x * y for x, y in zip(self.digits(a), self.digits(b))) % self.p

    def elem(self, value: int | str | Sequence[int]) -> GFElem:
        return GFElem(self, self.parse(value))

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        return {"p": self.p, "s": self.s, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, data: dict) -> GF:
        return cls.make(int(data["p"]), int(data["s"]), data.get("modulus"))


@dataclass(frozen=True)
class GFElem:
    """A field element bound to its field, for operator-style use."""

    field: GF
    value: int

    def __post_init__(self):
        self.field.check(self.value)

    def _other(self, other: GFElem) -> int:
        if not isinstance(other, GFElem):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other.value

    def __add__(self, other):
        b = self._other(other)
        return GFElem(self.field, self.field.add(self.value, b))

    def __sub__(self, other):
        b = self._other(other)
        return GFElem(self.field, self.field.sub(self.value, b))

    def __mul__(self, other):
        b = self._other(other)
        return GFElem(self.field, self.field.mul(self.value, b))

    def __truediv__(self, other):
        b = self._other(other)
        return GFElem(self.field, self.field.mul(self.value, self.field.inv(b)))

    def __neg__(self):
        return GFElem(self.field, self.field.neg(self.value))

    def __pow__(self, n: int):
        return GFElem(self.field, self.field.pow(self.value, n))

    def inverse(self) -> GFElem:
        return GFElem(self.field, self.field.inv(self.value))

    def __bool__(self):
        return self.value != 0

    @property
    def digits(self) -> tuple[int, ...]:
        return self.field.digits(self.value)

    def __repr__(self):
        return f"GFElem({self.digits})"
