"""Exact arithmetic in Z, Q, Z[sqrt(-2)] and Q(sqrt(-2)), plus rational lattices.

Everything here uses Python integers and :class:`fractions.Fraction`, so no
value can overflow.  ``w`` denotes sqrt(-2) in serialized output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence


class RankDeficientError(ValueError):
    """Raised when a generating set does not span a full-rank lattice."""


def format_rational(q) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


# ---------------------------------------------------------------------------
# Z[sqrt(-2)]
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class QInt:
    """The element ``a + b*sqrt(-2)`` of Z[sqrt(-2)]."""

    a: int = 0
    b: int = 0

    def __post_init__(self):
        if not (isinstance(self.a, int) and isinstance(self.b, int)):
            raise TypeError("QInt coefficients must be integers")

    @classmethod
    def coerce(cls, v) -> "QInt":
        if isinstance(v, QInt):
            return v
        if isinstance(v, int):
            return cls(v, 0)
        if isinstance(v, tuple) and len(v) == 2:
            return cls(int(v[0]), int(v[1]))
        raise TypeError(f"cannot interpret {v!r} as an element of Z[sqrt(-2)]")

    def __add__(self, other):
        o = QInt.coerce(other)
        return QInt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = QInt.coerce(other)
        return QInt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return QInt.coerce(other) - self

    def __neg__(self):
        return QInt(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, int):
            return QInt(self.a * other, self.b * other)
        o = QInt.coerce(other)
        return qi_mul(self, o)

    __rmul__ = __mul__

    def conj(self) -> "QInt":
        return QInt(self.a, -self.b)

    def norm(self) -> int:
        return self.a * self.a + 2 * self.b * self.b

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def __str__(self):
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*w"

    @classmethod
    def parse(cls, s: str) -> "QInt":
        s = s.replace(" ", "")
        if not s.endswith("*w"):
            return cls(int(s), 0)
        body = s[:-2]
        # split at the last sign that is not the leading one
        for k in range(len(body) - 1, 0, -1):
            if body[k] in "+-":
                return cls(int(body[:k]), int(body[k:]))
        return cls(0, int(body))


def qi_mul(p: QInt, q: QInt) -> QInt:
    """Product in Z[sqrt(-2)] using sqrt(-2)^2 = -2."""
    return QInt(p.a * q.a - 2 * p.b * q.b, p.a * q.b + p.b * q.a)


# ---------------------------------------------------------------------------
# Q(sqrt(-2)) with a single common denominator
# ---------------------------------------------------------------------------

class QRat:
    """``(a + b*sqrt(-2)) / d`` in lowest terms, ``d >= 1``."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int = 0, b: int = 0, d: int = 1):
        if d == 0:
            raise ZeroDivisionError("QRat with zero denominator")
        if d < 0:
            a, b, d = -a, -b, -d
        g = math.gcd(math.gcd(a, b), d)
        self.a, self.b, self.d = a // g, b // g, d // g

    @classmethod
    def from_parts(cls, re, im) -> "QRat":
        """Build ``re + im*sqrt(-2)`` from two rationals."""
        re, im = Fraction(re), Fraction(im)
        d = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        return cls(int(re * d), int(im * d), d)

    @classmethod
    def coerce(cls, v) -> "QRat":
        if isinstance(v, QRat):
            return v
        if isinstance(v, QInt):
            return cls(v.a, v.b, 1)
        if isinstance(v, int):
            return cls(v, 0, 1)
        if isinstance(v, Fraction):
            return cls(v.numerator, 0, v.denominator)
        raise TypeError(f"cannot interpret {v!r} as an element of Q(sqrt(-2))")

    @property
    def re(self) -> Fraction:
        return Fraction(self.a, self.d)

    @property
    def im(self) -> Fraction:
        """Rational coefficient of sqrt(-2)."""
        return Fraction(self.b, self.d)

    def __add__(self, other):
        o = QRat.coerce(other)
        return QRat(self.a * o.d + o.a * self.d, self.b * o.d + o.b * self.d, self.d * o.d)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-QRat.coerce(other))

    def __rsub__(self, other):
        return QRat.coerce(other) - self

    def __neg__(self):
        return QRat(-self.a, -self.b, self.d)

    def __mul__(self, other):
        o = QRat.coerce(other)
        return QRat(self.a * o.a - 2 * self.b * o.b, self.a * o.b + self.b * o.a, self.d * o.d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = QRat.coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(-2))")
        return self * o.conj() * QRat(n.denominator, 0, n.numerator)

    def conj(self) -> "QRat":
        return QRat(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return Fraction(self.a * self.a + 2 * self.b * self.b, self.d * self.d)

    def is_integral(self) -> bool:
        return self.d == 1

    def to_qint(self) -> QInt:
        if self.d != 1:
            raise ValueError(f"{self} is not in Z[sqrt(-2)]")
        return QInt(self.a, self.b)

    def _key(self):
        return (self.a, self.b, self.d)

    def __eq__(self, other):
        try:
            o = QRat.coerce(other)
        except TypeError:
            return NotImplemented
        return self._key() == o._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"QRat({self.a}, {self.b}, {self.d})"

    def __str__(self):
        s = f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*w"
        return s if self.d == 1 else f"({s})/{self.d}"


# ---------------------------------------------------------------------------
# 2x2 matrices over Q(sqrt(-2))
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Mat2:
    m11: QRat
    m12: QRat
    m21: QRat
    m22: QRat

    @classmethod
    def of(cls, m11, m12, m21, m22) -> "Mat2":
        return cls(*(QRat.coerce(v) for v in (m11, m12, m21, m22)))

    @classmethod
    def identity(cls) -> "Mat2":
        return cls.of(1, 0, 0, 1)

    def entries(self) -> tuple[QRat, QRat, QRat, QRat]:
        return (self.m11, self.m12, self.m21, self.m22)

    def __mul__(self, o):
        if not isinstance(o, Mat2):
            s = QRat.coerce(o)
            return Mat2(*(e * s for e in self.entries()))
        return Mat2(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )

    def __rmul__(self, s):
        return self * s

    def __add__(self, o: "Mat2"):
        return Mat2(*(x + y for x, y in zip(self.entries(), o.entries())))

    def __neg__(self):
        return Mat2(*(-e for e in self.entries()))

    def det(self) -> QRat:
        return self.m11 * self.m22 - self.m12 * self.m21

    def trace(self) -> QRat:
        return self.m11 + self.m22

    def adjugate(self) -> "Mat2":
        return Mat2(self.m22, -self.m12, -self.m21, self.m11)

    def inverse(self) -> "Mat2":
        d = self.det()
        return Mat2(*(e / d for e in self.adjugate().entries()))

    def conj_transpose(self) -> "Mat2":
        return Mat2(self.m11.conj(), self.m21.conj(), self.m12.conj(), self.m22.conj())

    def is_integral(self) -> bool:
        """True iff every entry lies in Z[sqrt(-2)]."""
        return all(e.is_integral() for e in self.entries())

    def __str__(self):
        return f"[[{self.m11}, {self.m12}], [{self.m21}, {self.m22}]]"


# ---------------------------------------------------------------------------
# elementary number theory
# ---------------------------------------------------------------------------

def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, primes ascending."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == [(n, 1)]


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytes(len(range(p * p, n + 1, p)))
    return [i for i, v in enumerate(sieve) if v]


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for an odd prime p, via Euler's criterion."""
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def symbol_minus2(p: int) -> int:
    """(-2/p): zero at p = 2, the Legendre symbol at odd primes."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 0
    return legendre(-2, p)


def kronecker_at_2(d: int) -> int:
    """Kronecker symbol (d/2)."""
    if d % 2 == 0:
        return 0
    return 1 if d % 8 in (1, 7) else -1


def kronecker_symbol(d: int, p: int) -> int:
    """(d/p) for a prime p, with the Kronecker convention at p = 2."""
    if p == 2:
        return kronecker_at_2(d)
    return legendre(d, p)


# ---------------------------------------------------------------------------
# rational lattices
# ---------------------------------------------------------------------------

def _lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


def integer_hnf(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Row-style Hermite normal form of the row lattice of an integer matrix.

    Columns are cleared one at a time with extended-gcd row operations; pivots
    end up positive and entries above a pivot in ``[0, pivot)``.  Zero rows are
    dropped.
    """
    pool = [list(r) for r in rows if any(r)]
    out: list[list[int]] = []
    for col in range(ncols):
        active = [r for r in pool if r[col] != 0]
        pool = [r for r in pool if r[col] == 0]
        if not active:
            continue
        piv = active[0]
        for r in active[1:]:
            g, s, t = _xgcd(piv[col], r[col])
            a, b = piv[col] // g, r[col] // g
            new_piv = [s * x + t * y for x, y in zip(piv, r)]
            cleared = [a * y - b * x for x, y in zip(piv, r)]
            piv = new_piv
            if any(cleared):
                pool.append(cleared)
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
    for i, r in enumerate(out):
        pc = next(k for k, v in enumerate(r) if v)
        for h in range(i):
            q = out[h][pc] // r[pc]
            if q:
                out[h] = [x - q * y for x, y in zip(out[h], r)]
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) > 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        a, s0, t0 = -a, -s0, -t0
    return a, s0, t0


@dataclass(frozen=True)
class RationalLattice:
    """Full-rank lattice in Q^n with its canonical (HNF) basis as rows."""

    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.basis)

    def det(self) -> Fraction:
        """Covolume; the HNF basis is upper triangular with positive pivots."""
        return reduce(lambda x, y: x * y, (self.basis[i][i] for i in range(self.rank)), Fraction(1))

    def coordinates(self, v: Sequence) -> list[Fraction]:
        """Coordinates of v in the basis (back substitution on the triangular basis)."""
        v = [Fraction(x) for x in v]
        n = self.rank
        coords = [Fraction(0)] * n
        for i in range(n):
            c = v[i] / self.basis[i][i]
            coords[i] = c
            v = [x - c * y for x, y in zip(v, self.basis[i])]
        if any(v):
            raise ValueError("vector outside the ambient space of the lattice")
        return coords

    def contains(self, v: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(v))

    def contains_lattice(self, other: "RationalLattice") -> bool:
        return all(self.contains(v) for v in other.basis)

    def dual(self) -> "RationalLattice":
        """The lattice {v : v . b in Z for every basis vector b}."""
        inv = mat_inverse([list(r) for r in self.basis])
        return hnf([list(col) for col in zip(*inv)])

    def serialize(self) -> list[list[str]]:
        return [[format_rational(x) for x in row] for row in self.basis]


def hnf(vectors: Iterable[Sequence]) -> RationalLattice:
    """Canonical basis of the lattice spanned by rational vectors.

    Denominators are cleared with their lcm, the integer HNF is taken, and the
    result is scaled back; the output depends only on the lattice.
    """
    vecs = [[Fraction(x) for x in v] for v in vectors]
    if not vecs:
        raise RankDeficientError("empty generating set")
    n = len(vecs[0])
    den = 1
    for v in vecs:
        for x in v:
            den = _lcm(den, x.denominator)
    rows = [[int(x * den) for x in v] for v in vecs]
    h = integer_hnf(rows, n)
    if len(h) != n:
        raise RankDeficientError(f"generators span a rank-{len(h)} lattice, expected rank {n}")
    return RationalLattice(tuple(tuple(Fraction(x, den) for x in r) for r in h))


def mat_inverse(m: list[list]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            raise RankDeficientError("singular matrix")
        a[c], a[p] = a[p], a[c]
        pv = a[c][c]
        a[c] = [x / pv for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def mat_det(m: Sequence[Sequence]) -> Fraction:
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if a[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            f = a[r][c] / a[c][c]
            if f:
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return det


def preimage_lattice(columns_image: Sequence[Sequence]) -> RationalLattice:
    """Lattice {v in Q^n : M v in Z^m} for an injective rational m x n map M.

    ``columns_image`` lists the rows of M.  The preimage is the dual of the
    lattice spanned by those rows.
    """
    return hnf(columns_image).dual()
