"""The quaternion algebra (-2, D)_Q: i^2 = -2, j^2 = D, ij = -ji.

Elements carry exact rational coefficients in the basis 1, i, j, ij.  Two
matrix representations are provided: ``rho`` lands in the stabilizer of
``|z|^2 = D`` and ``rho_prime`` is its conjugate adapted to a general reduced
form (A, B); the latter is written entrywise so no sqrt(A) is ever needed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .circles import ReducedForm
from .exact_arith import Mat2, QRat, format_rational

W = QRat(0, 1)  # sqrt(-2)


@dataclass(frozen=True)
class AlgebraParams:
    D: int

    def __post_init__(self):
        if self.D < 1:
            raise ValueError("D must be a positive integer")


@dataclass(frozen=True)
class Quaternion:
    t: Fraction
    x: Fraction
    y: Fraction
    z: Fraction
    D: int

    @classmethod
    def of(cls, t, x, y, z, D: int) -> "Quaternion":
        AlgebraParams(D)
        return cls(Fraction(t), Fraction(x), Fraction(y), Fraction(z), D)

    @classmethod
    def from_vector(cls, v: Sequence, D: int) -> "Quaternion":
        return cls.of(*v, D)

    @classmethod
    def basis(cls, D: int) -> tuple["Quaternion", ...]:
        return tuple(cls.of(*(int(i == k) for i in range(4)), D) for k in range(4))

    def vector(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self.t, self.x, self.y, self.z)

    def _check(self, other: "Quaternion"):
        if self.D != other.D:
            raise ValueError(f"quaternions from different algebras (D={self.D} vs D={other.D})")

    def __add__(self, o: "Quaternion"):
        self._check(o)
        return Quaternion(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z, self.D)

    def __sub__(self, o: "Quaternion"):
        return self + (-o)

    def __neg__(self):
        return Quaternion(-self.t, -self.x, -self.y, -self.z, self.D)

    def __mul__(self, o):
        if isinstance(o, Quaternion):
            return q_mul(self, o)
        s = Fraction(o)
        return Quaternion(self.t * s, self.x * s, self.y * s, self.z * s, self.D)

    def __rmul__(self, s):
        return self * s

    def conj(self) -> "Quaternion":
        return Quaternion(self.t, -self.x, -self.y, -self.z, self.D)

    def trd(self) -> Fraction:
        return 2 * self.t

    def nrd(self) -> Fraction:
        return nrd(self)

    def to_json(self) -> dict:
        return {"t": format_rational(self.t), "x": format_rational(self.x),
                "y": format_rational(self.y), "z": format_rational(self.z), "D": self.D}


def mul_vec(u: Sequence, v: Sequence, D: int) -> tuple:
    """Product of coefficient vectors; works for ints or Fractions alike."""
    t1, x1, y1, z1 = u
    t2, x2, y2, z2 = v
    # i^2 = -2, j^2 = D, (ij)^2 = 2D, ij = -ji, i(ij) = -2j, (ij)i = 2j,
    # j(ij) = -Di, (ij)j = Di
    return (
        t1 * t2 - 2 * x1 * x2 + D * y1 * y2 + 2 * D * z1 * z2,
        t1 * x2 + x1 * t2 - D * y1 * z2 + D * z1 * y2,
        t1 * y2 + y1 * t2 - 2 * x1 * z2 + 2 * z1 * x2,
        t1 * z2 + z1 * t2 + x1 * y2 - y1 * x2,
    )


def nrd_vec(v: Sequence, D: int):
    t, x, y, z = v
    return t * t + 2 * x * x - D * y * y - 2 * D * z * z


def delta_vec(v: Sequence, D: int):
    _, x, y, z = v
    return -8 * x * x + 4 * D * y * y + 8 * D * z * z


def q_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    p._check(q)
    return Quaternion(*mul_vec(p.vector(), q.vector(), p.D), p.D)


def nrd(q: Quaternion) -> Fraction:
    return nrd_vec(q.vector(), q.D)


def trd(q: Quaternion) -> Fraction:
    return 2 * q.t


def delta(q: Quaternion) -> Fraction:
    """trd^2 - 4 nrd, i.e. -8x^2 + 4Dy^2 + 8Dz^2."""
    return delta_vec(q.vector(), q.D)


def rho(q: Quaternion) -> Mat2:
    D = q.D
    return Mat2(
        QRat.from_parts(q.t, q.x),
        QRat.from_parts(D * q.y, D * q.z),
        QRat.from_parts(q.y, -q.z),
        QRat.from_parts(q.t, -q.x),
    )


def rho_prime_generators(F: ReducedForm) -> tuple[Mat2, Mat2, Mat2]:
    """Images of i, j, ij under the representation adapted to F."""
    A, D = F.A, F.D
    B = QRat.coerce(F.B)
    inv_a = QRat(1, 0, A)
    Bsq = B * B
    ri = Mat2(W, W * B * 2 * inv_a, QRat(0), -W)
    rj = Mat2(-B, (QRat(D) - Bsq) * inv_a, QRat(A), B)
    rij = Mat2(B * W, (QRat(D) + Bsq) * inv_a * W, QRat(-A) * W, -B * W)
    return ri, rj, rij


def rho_prime(q: Quaternion, F: ReducedForm) -> Mat2:
    if q.D != F.D:
        raise ValueError(f"quaternion algebra D={q.D} does not match form discriminant {F.D}")
    ri, rj, rij = rho_prime_generators(F)
    out = Mat2.identity() * QRat.coerce(q.t)
    for c, m in ((q.x, ri), (q.y, rj), (q.z, rij)):
        if c:
            out = out + m * QRat.coerce(c)
    return out


def is_integral(q: Quaternion, F: ReducedForm) -> bool:
    """True iff every entry of rho_prime(q, F) lies in Z[sqrt(-2)]."""
    return rho_prime(q, F).is_integral()
