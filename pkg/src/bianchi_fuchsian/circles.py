"""Circle forms ``A|z|^2 + B conj(z) + conj(B) z + C = 0`` over Z[sqrt(-2)].

A form is stored through its Hermitian matrix ``[[A, B], [conj(B), C]]``; the
circle is the zero set of ``(z, 1)^* H (z, 1)``.  The six representative
families are indexed by ``k = 1..6`` and an integer parameter ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact_arith import Mat2, QInt, QRat


class DegenerateFormError(ValueError):
    pass


class CongruenceError(ValueError):
    """Raised when a discriminant is outside a family's congruence class."""


@dataclass(frozen=True)
class ReducedForm:
    A: int
    B: QInt
    C: int
    D: int

    def hermitian(self) -> Mat2:
        return Mat2.of(self.A, self.B, self.B.conj(), self.C)

    def evaluate(self, z: QRat) -> QRat:
        """Value of the form at a point of Q(sqrt(-2))."""
        B = QRat.coerce(self.B)
        return self.A * z * z.conj() + B * z.conj() + B.conj() * z + self.C

    def to_json(self) -> dict:
        return {"A": self.A, "Ba": self.B.a, "Bb": self.B.b, "C": self.C, "D": self.D}

    @classmethod
    def from_json(cls, d: dict) -> "ReducedForm":
        f = reduce_form(d["A"], QInt(d["Ba"], d["Bb"]), d["C"])
        if f.D != d["D"]:
            raise ValueError(f"stored discriminant {d['D']} disagrees with computed {f.D}")
        return f

    def __str__(self):
        return f"{self.A}|z|^2 + ({self.B})conj(z) + ({self.B.conj()})z + {self.C}"


def _normalize(A: int, B: QInt, C: int) -> tuple[int, QInt, int]:
    g = math.gcd(math.gcd(A, B.a), math.gcd(B.b, C))
    if g == 0:
        raise DegenerateFormError("zero form")
    A, B, C = A // g, QInt(B.a // g, B.b // g), C // g
    lead = next(v for v in (A, B.a, B.b, C) if v != 0)
    if lead < 0:
        A, B, C = -A, -B, -C
    return A, B, C


def reduce_form(A: int, B, C: int) -> ReducedForm:
    """Divide out the content and make the first nonzero of (A, Ba, Bb, C) positive."""
    A, B, C = _normalize(A, QInt.coerce(B), C)
    D = B.norm() - A * C
    if D <= 0:
        raise DegenerateFormError(f"form ({A}, {B}, {C}) has discriminant {D} <= 0")
    return ReducedForm(A, B, C, D)


# (A, B, C/c) for f_{k,c}; C = (C/c) * c
_FAMILIES = {
    1: (1, QInt(0, 0), 1),
    2: (2, QInt(1, 0), 2),
    3: (4, QInt(0, -1), 4),
    4: (4, QInt(2, -1), 4),
    5: (2, QInt(0, -1), 2),
    6: (2, QInt(1, -1), 2),
}

# D = offset + slope * c, and the congruence class D = residue mod modulus
_DISC = {1: (0, -1), 2: (1, -4), 3: (2, -16), 4: (6, -16), 5: (2, -4), 6: (3, -4)}
_CLASS = {1: (0, 1), 2: (1, 4), 3: (2, 16), 4: (6, 16), 5: (2, 4), 6: (3, 4)}

FAMILIES = tuple(range(1, 7))


def _check_family(k: int):
    if k not in _FAMILIES:
        raise ValueError(f"family index must be 1..6, got {k}")


def family_discriminant(k: int, c: int) -> int:
    _check_family(k)
    off, slope = _DISC[k]
    return off + slope * c


def admits(k: int, D: int) -> bool:
    """Whether a positive discriminant D lies in family k's congruence class."""
    _check_family(k)
    r, m = _CLASS[k]
    return D >= 1 and D % m == r % m


def families_for(D: int) -> list[int]:
    return [k for k in FAMILIES if admits(k, D)]


def family_c(k: int, D: int) -> int:
    if not admits(k, D):
        r, m = _CLASS[k]
        raise CongruenceError(f"D = {D} is not admissible for family {k} (need D = {r} mod {m}, D >= 1)")
    off, slope = _DISC[k]
    return (D - off) // slope


def family_form(k: int, c: int) -> ReducedForm:
    _check_family(k)
    A, B, Cc = _FAMILIES[k]
    return reduce_form(A, B, Cc * c)


def family_form_for(k: int, D: int) -> ReducedForm:
    return family_form(k, family_c(k, D))


def n2(D: int) -> int:
    """Number of conjugacy classes of maximal Fuchsian subgroups with discriminant D."""
    if D < 1:
        raise ValueError("discriminant must be positive")
    if D % 4 == 0:
        return 1
    if D % 16 in (2, 6):
        return 3
    return 2


def _pullback(g: Mat2, F: ReducedForm) -> tuple[int, QInt, int]:
    """Hermitian matrix (g^-1)^* H (g^-1), i.e. the form of the image circle."""
    if g.det() != QRat(1):
        raise ValueError("transform_form needs a determinant-1 matrix")
    if not g.is_integral():
        raise ValueError("transform_form needs entries in Z[sqrt(-2)]")
    gi = g.adjugate()
    h = gi.conj_transpose() * F.hermitian() * gi
    return h.m11.to_qint().a, h.m12.to_qint(), h.m22.to_qint().a


def transform_form(g: Mat2, F: ReducedForm) -> ReducedForm:
    """Reduced form of the image of F's circle under z -> g.z."""
    A, B, C = _pullback(g, F)
    return reduce_form(A, B, C)


def stabilizes(g: Mat2, F: ReducedForm) -> bool:
    """True iff g maps F's circle to itself and each complementary disc to itself.

    The pulled-back Hermitian matrix must equal F's exactly; an element that
    swaps the two sides of the circle yields ``-H`` and is rejected.
    """
    A, B, C = _pullback(g, F)
    return (A, B, C) == (F.A, F.B, F.C)


def preserves_circle(g: Mat2, F: ReducedForm) -> bool:
    """Set-wise stabilization of the circle, orientation ignored."""
    return transform_form(g, F) == F


def verify_t_identity(F: ReducedForm) -> bool:
    """Check (Az+B)(A conj(z)+conj(B)) - D = A * f(z) coefficient by coefficient.

    Monomial order: |z|^2, conj(z), z, 1.
    """
    A, B, C, D = F.A, F.B, F.C, F.D
    lhs = (QInt(A * A), B * A, B.conj() * A, QInt(B.norm() - D))
    rhs = (QInt(A * A), B * A, B.conj() * A, QInt(A * C))
    return lhs == rhs
