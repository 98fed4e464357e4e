"""Z-orders in (-2, D)_Q attached to the six circle families.

Orders are stored as canonical rational lattices whose rows are coefficient
vectors in the basis 1, i, j, ij.  Local invariants are computed by exhaustive
residue enumeration in the order's own coordinates, where the reduced norm
and the discriminant form ``trd^2 - 4 nrd`` are integer quadratic forms.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Callable, Sequence

import numpy as np

from .circles import ReducedForm, family_c, family_form_for, stabilizes
from .exact_arith import (
    Mat2,
    QInt,
    RationalLattice,
    hnf,
    kronecker_symbol,
    legendre,
    mat_det,
    mat_inverse,
    prime_divisors,
    preimage_lattice,
)
from .quaternion import Quaternion, delta_vec, mul_vec, nrd_vec, rho_prime


class NotAnOrderError(ValueError):
    pass


class EichlerInconsistencyError(ArithmeticError):
    """Both +1 and -1 occur among the symbols of trd^2 - 4 nrd."""


# primes above this are handled by diagonalizing the form mod p instead of
# enumerating all p^4 residue tuples
BRUTE_FORCE_PRIME_LIMIT = 23


@dataclass(frozen=True)
class ZOrder:
    D: int
    lattice: RationalLattice

    @cached_property
    def basis(self) -> tuple[Quaternion, ...]:
        return tuple(Quaternion.from_vector(v, self.D) for v in self.lattice.basis)

    @cached_property
    def _scaled(self) -> tuple[int, tuple[tuple[int, ...], ...]]:
        """(L, rows) with integer rows equal to L times the basis."""
        L = 1
        for row in self.lattice.basis:
            for x in row:
                L = math.lcm(L, x.denominator)
        return L, tuple(tuple(int(x * L) for x in row) for row in self.lattice.basis)

    def element(self, coords: Sequence[int]) -> Quaternion:
        v = [sum(Fraction(c) * b[k] for c, b in zip(coords, self.lattice.basis)) for k in range(4)]
        return Quaternion.from_vector(v, self.D)

    def _int_coords(self, u: Sequence[int], scale: int) -> list[int] | None:
        """Coordinates of u / scale in the basis, or None if not all integers."""
        L, rows = self._scaled
        # u/scale = sum c_i rows_i / L  <=>  u*L = scale * sum c_i rows_i
        v = [x * L for x in u]
        coords = []
        for i, r in enumerate(rows):
            den = scale * r[i]
            if v[i] % den:
                return None
            c = v[i] // den
            coords.append(c)
            if c:
                v = [x - c * scale * y for x, y in zip(v, r)]
        return coords if not any(v) else None

    def contains(self, q: Quaternion) -> bool:
        return q.D == self.D and self.lattice.contains(q.vector())

    def coordinates(self, q: Quaternion) -> list[Fraction]:
        return self.lattice.coordinates(q.vector())

    def quadratic_form(self, f: Callable[[Sequence, int], int]) -> dict[tuple[int, int], int]:
        """Integer coefficients c[i, j] (i <= j) of a quadratic form in basis coordinates.

        ``f`` acts on coefficient vectors, e.g. :func:`nrd_vec`.
        """
        L, rows = self._scaled
        L2 = L * L
        diag = [Fraction(f(r, self.D), L2) for r in rows]
        coeffs = {}
        for i in range(4):
            coeffs[(i, i)] = diag[i]
            for j in range(i + 1, 4):
                s = [x + y for x, y in zip(rows[i], rows[j])]
                coeffs[(i, j)] = Fraction(f(s, self.D), L2) - diag[i] - diag[j]
        for key, v in coeffs.items():
            if v.denominator != 1:
                raise NotAnOrderError(f"quadratic form coefficient {v} at {key} is not integral")
        return {key: int(v) for key, v in coeffs.items()}

    @cached_property
    def nrd_form(self) -> dict[tuple[int, int], int]:
        return self.quadratic_form(nrd_vec)

    @cached_property
    def delta_form(self) -> dict[tuple[int, int], int]:
        return self.quadratic_form(delta_vec)

    @cached_property
    def is_order(self) -> bool:
        L, rows = self._scaled
        if self._int_coords((L, 0, 0, 0), L) is None:
            return False
        for u in rows:
            if (2 * u[0]) % L or nrd_vec(u, self.D) % (L * L):
                return False
            for v in rows:
                if self._int_coords(mul_vec(u, v, self.D), L * L) is None:
                    return False
        return True

    @cached_property
    def reduced_discriminant(self) -> int:
        if not self.is_order:
            raise NotAnOrderError("reduced discriminant requested for a non-order")
        L, rows = self._scaled
        # trd(u * conj(v)) = 2 * scalar part of the product
        gram = [[Fraction(2 * mul_vec(u, (v[0], -v[1], -v[2], -v[3]), self.D)[0], L * L)
                 for v in rows] for u in rows]
        d = abs(mat_det(gram))
        assert d.denominator == 1
        n = math.isqrt(int(d))
        if n * n != d:
            raise NotAnOrderError(f"trace-form determinant {d} is not a square")
        return n

    def to_json(self) -> dict:
        return {"D": self.D, "basis": self.lattice.serialize()}

    @classmethod
    def from_json(cls, d: dict) -> "ZOrder":
        return make_order(d["D"], [[Fraction(x) for x in row] for row in d["basis"]])


@dataclass(frozen=True)
class LocalData:
    p: int
    eichler: int
    lam: Fraction
    norm_index: int
    nrd_image_mod8: frozenset | None = None


def make_order(D: int, vectors) -> ZOrder:
    return ZOrder(D, hnf(vectors))


def standard_order(D: int) -> ZOrder:
    """Z[1, i, j, ij]."""
    return make_order(D, [[int(i == k) for i in range(4)] for k in range(4)])


_F = Fraction
# rows: coefficient vectors (1, i, j, ij) of the generators in the displayed bases
_THEOREM1 = {
    1: [(1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)],
    2: [(1, 0, 0, 0), (0, 1, 0, 0), (_F(1, 2), 0, _F(1, 2), 0), (0, _F(1, 2), 0, _F(1, 2))],
    3: [(1, 0, 0, 0), (0, 1, 0, 0), (0, _F(3, 4), _F(1, 4), 0), (_F(1, 2), 0, 0, _F(1, 4))],
    4: [(1, 0, 0, 0), (0, 1, 0, 0), (0, _F(1, 4), _F(1, 4), _F(1, 4)), (_F(1, 2), _F(1, 2), 0, _F(1, 4))],
    5: [(1, 0, 0, 0), (0, 1, 0, 0), (0, _F(1, 2), _F(1, 2), 0), (0, 0, 0, _F(1, 2))],
    6: [(1, 0, 0, 0), (0, 1, 0, 0), (_F(1, 2), 0, _F(1, 2), _F(1, 2)), (0, _F(1, 2), 0, _F(1, 2))],
}


def theorem1_order(k: int, D: int) -> ZOrder:
    """The order attached to family k, from its transcribed generators."""
    family_c(k, D)  # validates the congruence class
    return make_order(D, _THEOREM1[k])


def integrality_map(F: ReducedForm) -> list[list[Fraction]]:
    """The 8 x 4 rational matrix sending (t, x, y, z) to the coordinates of rho_prime.

    Row r holds coordinate r (real part, then sqrt(-2) part, for each of the
    four entries) of rho_prime applied to each standard basis quaternion.
    """
    cols = []
    for e in Quaternion.basis(F.D):
        m = rho_prime(e, F)
        col = []
        for ent in m.entries():
            col += [ent.re, ent.im]
        cols.append(col)
    return [list(r) for r in zip(*cols)]


def derive_order(k: int, D: int) -> ZOrder:
    """Lattice of quaternions whose rho_prime image has entries in Z[sqrt(-2)]."""
    F = family_form_for(k, D)
    return ZOrder(D, preimage_lattice(integrality_map(F)))


def rho_prime_preimage(g: Mat2, F: ReducedForm) -> Quaternion | None:
    """The quaternion q with rho_prime(q, F) = g, or None if g is outside the image."""
    M = integrality_map(F)
    b = []
    for ent in g.entries():
        b += [ent.re, ent.im]
    # normal equations; exact since M has full column rank
    MtM = [[sum(M[r][i] * M[r][j] for r in range(8)) for j in range(4)] for i in range(4)]
    Mtb = [sum(M[r][i] * b[r] for r in range(8)) for i in range(4)]
    inv = mat_inverse(MtM)
    v = [sum(inv[i][j] * Mtb[j] for j in range(4)) for i in range(4)]
    if any(sum(M[r][i] * v[i] for i in range(4)) != b[r] for r in range(8)):
        return None
    return Quaternion.from_vector(v, F.D)


def is_order(M: ZOrder) -> bool:
    """1 in M, basis products in M, integral trd and nrd on the basis."""
    return M.is_order


def index(M: ZOrder, O: ZOrder) -> int:
    """[M : O] for a suborder O of M."""
    if M.D != O.D:
        raise ValueError("orders live in different algebras")
    if not M.lattice.contains_lattice(O.lattice):
        raise ValueError("second order is not contained in the first")
    r = O.lattice.det() / M.lattice.det()
    assert r.denominator == 1
    return abs(int(r))


def reduced_discriminant(M: ZOrder) -> int:
    """N(M) with N(M)^2 = |det trd(e_i * conj(e_j))|."""
    return M.reduced_discriminant


# ---------------------------------------------------------------------------
# residue enumeration
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _residue_grid(m: int) -> list[np.ndarray]:
    r = np.arange(m, dtype=np.int64)
    return [g.ravel() for g in np.meshgrid(r, r, r, r, indexing="ij")]


def form_values_mod(form: dict[tuple[int, int], int], m: int) -> np.ndarray:
    """Values mod m of an integer quadratic form over every tuple in (Z/m)^4."""
    v = _residue_grid(m)
    out = np.zeros_like(v[0])
    for (i, j), c in form.items():
        if c % m:
            out = (out + (c % m) * ((v[i] * v[j]) % m)) % m
    return out


def _gram_mod_p(form: dict[tuple[int, int], int], p: int) -> list[list[int]]:
    """Symmetric matrix S over F_p with f(v) = v^T S v (p odd)."""
    half = pow(2, -1, p)
    S = [[0] * 4 for _ in range(4)]
    for (i, j), c in form.items():
        if i == j:
            S[i][i] = c % p
        else:
            S[i][j] = S[j][i] = c * half % p
    return S


def diagonalize_mod_p(S: list[list[int]], p: int) -> list[int]:
    """Diagonal entries of a form congruent to S over F_p (p odd)."""
    S = [row[:] for row in S]
    n = len(S)
    diag = []
    live = list(range(n))
    while live:
        piv = next((i for i in live if S[i][i] % p), None)
        if piv is None:
            pair = next(((i, j) for i in live for j in live if i < j and S[i][j] % p), None)
            if pair is None:
                diag += [0] * len(live)
                break
            i, j = pair
            # e_i <- e_i + e_j makes the (i, i) entry 2 S_ij != 0
            for k in range(n):
                S[i][k] = (S[i][k] + S[j][k]) % p
            for k in range(n):
                S[k][i] = (S[k][i] + S[k][j]) % p
            piv = i
        a = S[piv][piv]
        inv = pow(a, -1, p)
        for k in live:
            if k == piv:
                continue
            f = S[k][piv] * inv % p
            if f:
                for l in range(n):
                    S[k][l] = (S[k][l] - f * S[piv][l]) % p
                for l in range(n):
                    S[l][k] = (S[l][k] - f * S[l][piv]) % p
        diag.append(a)
        live.remove(piv)
    return diag


def form_image_mod_p(form: dict[tuple[int, int], int], p: int) -> set[int]:
    """Exact value set of a quadratic form over F_p^4."""
    if p == 2 or p <= BRUTE_FORCE_PRIME_LIMIT:
        return set(np.unique(form_values_mod(form, p)).tolist())
    diag = diagonalize_mod_p(_gram_mod_p(form, p), p)
    image = np.zeros(p, dtype=bool)
    image[0] = True
    xs = np.arange(p, dtype=np.int64)
    for a in diag:
        if a == 0:
            continue
        summands = np.unique(a * xs * xs % p)
        current = np.flatnonzero(image)
        image = np.zeros(p, dtype=bool)
        for lo in range(0, len(summands), 64):
            image[(current[:, None] + summands[None, lo:lo + 64]) % p] = True
            if image.all():
                break
        if image.all():
            break
    return set(np.flatnonzero(image).tolist())


def eichler_symbol(M: ZOrder, p: int, modulus: int | None = None) -> int:
    """Eichler symbol at p from the symbols of trd^2 - 4 nrd over M.

    At p = 2 the symbol depends on values mod 8, so coordinates are enumerated
    mod ``modulus`` (default 8; any multiple of 8 must agree).  At odd p the
    value set mod p is used.  All-zero gives 0.
    """
    if reduced_discriminant(M) % p:
        raise ValueError(f"p = {p} does not divide the reduced discriminant")
    if p == 2:
        m = modulus or 8
        if m % 8:
            raise ValueError("modulus at p = 2 must be a multiple of 8")
        values = set(np.unique(form_values_mod(M.delta_form, m)).tolist())
    else:
        values = form_image_mod_p(M.delta_form, p)
    symbols = {kronecker_symbol(v, p) for v in values} - {0}
    if symbols == {1, -1}:
        raise EichlerInconsistencyError(f"both symbols occur at p = {p}")
    return symbols.pop() if symbols else 0


def _subgroup_mod8(values) -> frozenset:
    group = {1}
    frontier = set(values) | {1}
    while True:
        new = {a * b % 8 for a in group | frontier for b in group | frontier}
        if new <= group:
            return frozenset(group)
        group |= new


def nrd_image_mod8(M: ZOrder, modulus: int = 8) -> tuple[frozenset, int]:
    """Subgroup of (Z/8)^x generated by the odd reduced norms, and its index."""
    vals = np.unique(form_values_mod(M.nrd_form, modulus) % 8).tolist()
    odd = [v for v in vals if v % 2]
    if not odd:
        raise ArithmeticError("no element of odd reduced norm")
    group = _subgroup_mod8(odd)
    return group, 4 // len(group)


def norm_index(M: ZOrder, p: int) -> int:
    """[Z_p^x : nrd(M_p^x)]."""
    if p == 2:
        return nrd_image_mod8(M)[1]
    image = form_image_mod_p(M.nrd_form, p)
    if any(legendre(v, p) == -1 for v in image):
        return 1
    return 2


def lambda_factor(M: ZOrder, p: int) -> Fraction:
    e = eichler_symbol(M, p)
    return (1 - Fraction(1, p * p)) / (1 - Fraction(e, p))


def local_data(M: ZOrder, p: int) -> LocalData:
    e = eichler_symbol(M, p)
    lam = (1 - Fraction(1, p * p)) / (1 - Fraction(e, p))
    if p == 2:
        img, idx = nrd_image_mod8(M)
    else:
        img, idx = None, norm_index(M, p)
    return LocalData(p=p, eichler=e, lam=lam, norm_index=idx, nrd_image_mod8=img)


def local_data_all(M: ZOrder) -> list[LocalData]:
    return [local_data(M, p) for p in prime_divisors(reduced_discriminant(M))]


# ---------------------------------------------------------------------------
# brute-force unit and stabilizer searches
# ---------------------------------------------------------------------------

def enumerate_units(M: ZOrder, H: int) -> list[Quaternion]:
    """All elements of reduced norm 1 with basis coordinates in [-H, H].

    H = 0 is read as "the trivial units": +-1 when 1 is itself a basis vector.
    """
    if H < 0:
        raise ValueError("H must be non-negative")
    if H == 0:
        one = Quaternion.of(1, 0, 0, 0, M.D)
        return [-one, one] if one in M.basis else []
    form = M.nrd_form
    r = np.arange(-H, H + 1, dtype=np.int64)
    c1, c2, c3 = (g.ravel() for g in np.meshgrid(r, r, r, indexing="ij"))
    tail = [c1, c2, c3]
    found = []
    for v0 in range(-H, H + 1):
        v = [np.full_like(c1, v0)] + tail
        val = np.zeros_like(c1)
        for (i, j), c in form.items():
            if c:
                val += c * v[i] * v[j]
        for idx in np.flatnonzero(val == 1):
            found.append((v0, int(c1[idx]), int(c2[idx]), int(c3[idx])))
    found.sort()
    return [M.element(co) for co in found]


def _qint_range(H: int):
    return [QInt(a, b) for a in range(-H, H + 1) for b in range(-H, H + 1)]


def _bounded(q: QInt, H: int) -> bool:
    return abs(q.a) <= H and abs(q.b) <= H


def _stabilizers_diagonal(F: ReducedForm, H: int) -> list[Mat2]:
    """Search [[a, D b], [conj(b), conj(a)]] with N(a) - D N(b) = 1, coefficients of a, b in [-H, H]."""
    D = F.D
    out = []
    for b1, b2 in itertools.product(range(-H, H + 1), repeat=2):
        target = 1 + D * (b1 * b1 + 2 * b2 * b2)
        for a2 in range(-H, H + 1):
            rest = target - 2 * a2 * a2
            if rest < 0:
                continue
            a1 = math.isqrt(rest)
            if a1 * a1 != rest or a1 > H:
                continue
            for s in {a1, -a1}:
                a, b = QInt(s, a2), QInt(b1, b2)
                g = Mat2.of(a, b * D, b.conj(), a.conj())
                if stabilizes(g, F):
                    out.append(g)
    return out


def _stabilizers_general(F: ReducedForm, H: int) -> list[Mat2]:
    """Search over entries (a, c); b and d follow from H g = adj(g)^* H.

    For det(g) = 1, stabilizing the form means g^* H g = H, equivalently
    H g = adj(g)^* H; the (2,1) and (1,1) entries of that identity solve for
    conj(b) and conj(d) linearly.
    """
    A, C = F.A, F.C
    B = F.B
    Bc = B.conj()
    out = []
    for a in _qint_range(H):
        for c in _qint_range(H):
            nb = a.conj() * Bc - Bc * a - c * C
            nd = a * A + B * c + c.conj() * Bc
            if nb.a % A or nb.b % A or nd.a % A or nd.b % A:
                continue
            b = QInt(nb.a // A, nb.b // A).conj()
            d = QInt(nd.a // A, nd.b // A).conj()
            if not (_bounded(b, H) and _bounded(d, H)):
                continue
            if a * d - b * c != QInt(1):
                continue
            g = Mat2.of(a, b, c, d)
            if stabilizes(g, F):
                out.append(g)
    return out


def _mat_key(g: Mat2):
    return tuple((e.a, e.b, e.d) for e in g.entries())


def enumerate_stabilizers(F: ReducedForm, H: int, method: str = "auto") -> list[Mat2]:
    """Determinant-1 matrices over Z[sqrt(-2)] stabilizing F, within height H.

    For ``|z|^2 - D`` the height bounds the coefficients of a and b in
    ``[[a, D b], [conj(b), conj(a)]]``; otherwise it bounds every entry.
    ``method`` is ``"auto"``, ``"diagonal"`` or ``"general"``.
    """
    if method == "auto":
        method = "diagonal" if (F.A == 1 and F.B.is_zero()) else "general"
    if method == "diagonal":
        if not (F.A == 1 and F.B.is_zero()):
            raise ValueError("diagonal search needs the form |z|^2 - D")
        out = _stabilizers_diagonal(F, H)
    elif method == "general":
        out = _stabilizers_general(F, H)
    else:
        raise ValueError(f"unknown method {method!r}")
    return sorted(out, key=_mat_key)


def projective_key(g: Mat2):
    """Key identifying g up to sign."""
    k1, k2 = _mat_key(g), _mat_key(-g)
    return min(k1, k2)
