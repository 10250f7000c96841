"""Finite fields GF(p^m) and exact linear algebra over them.

Elements are canonical integer indices in ``[0, q)``: the base-``p`` digits of
the index are the coefficients (low to high) of the polynomial representative.
Zero is index 0 and one is index 1 in every field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

MAX_ORDER = 1 << 16
MAX_MATRIX_DIM = 64

# Conway polynomials for p = 2, coefficients low-to-high.
CONWAY_P2 = {
    1: (1, 1),
    2: (1, 1, 1),
    3: (1, 1, 0, 1),
    4: (1, 1, 0, 0, 1),
    5: (1, 0, 1, 0, 0, 1),
    6: (1, 1, 0, 1, 1, 0, 1),
    7: (1, 1, 0, 0, 0, 0, 0, 1),
    8: (1, 0, 1, 1, 1, 0, 0, 0, 1),
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over GF(p), coefficient lists low-to-high -------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = a[-1] * inv_lead % p
        shift = len(a) - len(b)
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterable[list[int]]:
    for idx in range(p ** degree):
        coeffs = []
        for _ in range(degree):
            coeffs.append(idx % p)
            idx //= p
        yield coeffs + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    poly = _poly_trim(list(poly))
    m = len(poly) - 1
    if m < 1:
        return False
    for d in range(1, m // 2 + 1):
        for g in _monic_polys(p, d):
            if not _poly_mod(poly, g, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    for poly in _monic_polys(p, m):
        if poly[0] != 0 and is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """Characteristic ``p``, extension degree ``m`` and modulus (low-to-high)."""

    p: int
    m: int = 1
    modulus: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise FieldError(f"characteristic {self.p} is not prime")
        if self.m < 1:
            raise FieldError("extension degree must be >= 1")
        if self.p ** self.m > MAX_ORDER:
            raise FieldError(f"field order {self.p}^{self.m} exceeds {MAX_ORDER}")
        if self.m > 1:
            mod = self.modulus
            if mod is None:
                mod = CONWAY_P2[self.m] if self.p == 2 and self.m in CONWAY_P2 else smallest_irreducible(self.p, self.m)
            mod = tuple(int(c) % self.p for c in mod)
            if len(mod) != self.m + 1 or mod[-1] != 1:
                raise FieldError("modulus must be monic of degree m (coefficients low-to-high)")
            if not is_irreducible(mod, self.p):
                raise FieldError(f"modulus {mod} is reducible over GF({self.p})")
            object.__setattr__(self, "modulus", mod)
        else:
            object.__setattr__(self, "modulus", None)

    @property
    def q(self) -> int:
        return self.p ** self.m

    def to_json(self) -> dict:
        out = {"p": self.p, "m": self.m}
        if self.modulus is not None:
            out["modulus"] = list(self.modulus)
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        mod = obj.get("modulus")
        return cls(int(obj["p"]), int(obj.get("m", 1)), tuple(mod) if mod is not None else None)


class GF:
    """Arithmetic on canonical element indices of one finite field.

    Use :func:`get_field` rather than constructing directly so that tables are
    shared between callers.
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.p = spec.p
        self.m = spec.m
        self.q = spec.q
        self._digits = [self._to_digits(i) for i in range(self.q)] if self.m > 1 else None
        self.primitive = self._find_primitive()
        self._exp = [0] * (2 * (self.q - 1)) if self.q > 1 else []
        self._log = [0] * self.q
        x = 1
        for i in range(self.q - 1):
            self._exp[i] = x
            self._exp[i + self.q - 1] = x
            self._log[x] = i
            x = self._slow_mul(x, self.primitive)

    def __repr__(self):
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    # -- representation helpers
    def _to_digits(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            out.append(a % self.p)
            a //= self.p
        return tuple(out)

    def _from_digits(self, d: Sequence[int]) -> int:
        v = 0
        for c in reversed(d):
            v = v * self.p + c
        return v

    def _slow_mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        prod = [0] * (2 * self.m - 1)
        for i, ai in enumerate(self._to_digits(a)):
            if ai:
                for j, bj in enumerate(self._to_digits(b)):
                    prod[i + j] = (prod[i + j] + ai * bj) % self.p
        rem = _poly_mod(prod, self.spec.modulus, self.p)
        return self._from_digits(rem + [0] * (self.m - len(rem)))

    def _slow_pow(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _find_primitive(self) -> int:
        if self.q == 2:
            return 1
        order = self.q - 1
        factors = _prime_factors(order)
        for g in range(2, self.q):
            if all(self._slow_pow(g, order // r) != 1 for r in factors):
                return g
        raise FieldError("no primitive element found")  # unreachable for a field

    # -- arithmetic
    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise FieldError(f"{a} is not an element of {self}")
        return a

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        da, db = self._digits[a], self._digits[b]
        return self._from_digits([(x + y) % self.p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self._from_digits([(-x) % self.p for x in self._digits[a]])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.m == 1:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        if self.q == 2:
            return 1
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            a, e = self.inv(a), -e
        if a == 0:
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.q - 1)]

    def order(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise FieldError("zero has no multiplicative order")
        n = self.q - 1
        k = 1
        x = a
        while x != 1:
            x = self.mul(x, a)
            k += 1
            if k > n:
                break
        return k

    def elem(self, a: int) -> "FieldElement":
        return FieldElement(self, self.check(a))

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        s = 0
        for a, b in zip(u, v):
            if a and b:
                s = self.add(s, self.mul(a, b))
        return s


@lru_cache(maxsize=None)
def get_field(spec: FieldSpec) -> GF:
    return GF(spec)


def gf(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> GF:
    return get_field(FieldSpec(p, m, tuple(modulus) if modulus is not None else None))


def primitive_element(spec: FieldSpec) -> "FieldElement":
    """Smallest canonical index with multiplicative order q - 1."""
    F = get_field(spec)
    return FieldElement(F, F.primitive)


class FieldElement:
    """Immutable field value; equality is index equality within one field."""

    __slots__ = ("field", "value")

    def __init__(self, field: GF, value: int):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldError(f"mixed-field operands: {self.field} and {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.check(other % self.field.q if self.field.m == 1 else other)
        return NotImplemented

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.spec, self.value))

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElement(self.field, self.field.sub(self._other(other), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._other(other)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inv(self) -> "FieldElement":
        return FieldElement(self.field, self.field.inv(self.value))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.field}({self.value})"


# -- linear algebra ----------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    spec: FieldSpec
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise FieldError("entry count does not match shape")
        if self.rows > MAX_MATRIX_DIM or self.cols > MAX_MATRIX_DIM:
            raise FieldError(f"matrix larger than {MAX_MATRIX_DIM}x{MAX_MATRIX_DIM}")
        q = self.spec.q
        if any(not 0 <= e < q for e in self.entries):
            raise FieldError("matrix entry outside the field")

    @classmethod
    def from_rows(cls, spec: FieldSpec, rows: Sequence[Sequence[int]]) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise FieldError("ragged rows")
        return cls(spec, len(rows), ncols, tuple(e for r in rows for e in r))

    @classmethod
    def from_columns(cls, spec: FieldSpec, columns: Sequence[Sequence[int]]) -> "Matrix":
        if not columns:
            return cls(spec, 0, 0, ())
        k = len(columns[0])
        return cls.from_rows(spec, [[c[i] for c in columns] for i in range(k)])

    def row_list(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))


def _reduce(F: GF, rows: list[list[int]], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form in place; pivots restricted to the first ncols columns."""
    if not rows:
        return rows, []
    width = len(rows[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(width):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m: Matrix) -> int:
    F = get_field(m.spec)
    _, piv = _reduce(F, m.row_list())
    return len(piv)


def rank_of_columns(F: GF, columns: Sequence[Sequence[int]]) -> int:
    if not columns:
        return 0
    k = len(columns[0])
    _, piv = _reduce(F, [[c[i] for c in columns] for i in range(k)])
    return len(piv)


def solve(m: Matrix, rhs: Sequence[int]) -> list[int] | None:
    """Some x with m x = rhs, or None when the system is inconsistent."""
    if len(rhs) != m.rows:
        raise FieldError("dimension mismatch between matrix and right-hand side")
    F = get_field(m.spec)
    aug = [row + [rhs[i]] for i, row in enumerate(m.row_list())]
    red, piv = _reduce(F, aug, m.cols)
    for row in red[len(piv):]:
        if row[-1]:
            return None
    x = [0] * m.cols
    for r, c in enumerate(piv):
        x[c] = red[r][-1]
    return x


def in_span(spec: FieldSpec, basis: Sequence[Sequence[int]], target: Sequence[int]) -> bool:
    if not basis:
        return all(t == 0 for t in target)
    if any(len(b) != len(target) for b in basis):
        raise FieldError("dimension mismatch")
    return solve(Matrix.from_columns(spec, basis), list(target)) is not None
