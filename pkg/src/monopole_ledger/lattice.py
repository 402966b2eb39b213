"""Exact arithmetic in a free unimodular lattice modelling H^2(X;Z).

Everything here is integer or Fraction arithmetic; there is no floating
point anywhere.  Torsion is out of scope: the lattice is free, so a mod-2
class is "good" exactly when it is nonzero.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

from .errors import ValidationError


@dataclass(frozen=True)
class CohClass:
    """An integral cohomology class in coordinates on a fixed basis."""

    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __add__(self, other):
        _same_length(self, other)
        return CohClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        _same_length(self, other)
        return CohClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return CohClass(tuple(-a for a in self.coords))

    def scale(self, m):
        return CohClass(tuple(m * a for a in self.coords))

    def mod2(self):
        return Mod2Class(tuple(a % 2 for a in self.coords))

    def is_zero(self):
        return all(a == 0 for a in self.coords)

    def __len__(self):
        return len(self.coords)


@dataclass(frozen=True)
class Mod2Class:
    """A class with Z/2 coefficients, stored as a 0/1 bit vector."""

    bits: tuple

    def __post_init__(self):
        bits = tuple(int(b) % 2 for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValidationError("mod-2 class entries must reduce to 0 or 1")
        object.__setattr__(self, "bits", bits)

    def is_zero(self):
        return all(b == 0 for b in self.bits)

    def __len__(self):
        return len(self.bits)


def _same_length(u, v):
    if len(u) != len(v):
        raise ValidationError(
            f"coordinate length mismatch: {len(u)} vs {len(v)}"
        )


def _check_symmetric(gram):
    n = len(gram)
    for row in gram:
        if len(row) != n:
            raise ValidationError("gram matrix is not square")
    for i in range(n):
        for j in range(i + 1, n):
            if gram[i][j] != gram[j][i]:
                raise ValidationError(
                    f"gram matrix is not symmetric at ({i},{j})"
                )


def _determinant(gram):
    """Exact determinant by fraction-based Gaussian elimination."""
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    det = Fraction(1)
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            det = -det
        det *= a[k][k]
        inv = Fraction(1) / a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] * inv
            if f:
                a[i] = [a[i][j] - f * a[k][j] for j in range(n)]
    return det


def _signature(gram):
    """Signature by rational congruence (Lagrange) diagonalization.

    Returns (positives, negatives, zeros) of any diagonalization of the
    form over Q; exact, no eigenvalues involved.
    """
    n = len(gram)
    a = [[Fraction(x) for x in row] for row in gram]
    pos = neg = zero = 0

    def add_basis_vector(k, j):
        # e_k <- e_k + e_j, applied to rows and columns
        for t in range(n):
            a[k][t] += a[j][t]
        for t in range(n):
            a[t][k] += a[t][j]

    def swap_basis(k, j):
        a[k], a[j] = a[j], a[k]
        for t in range(n):
            a[t][k], a[t][j] = a[t][j], a[t][k]

    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                swap_basis(k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    zero += 1
                    continue
                add_basis_vector(k, j)
        d = a[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = a[i][k] / d
            if f:
                for t in range(k, n):
                    a[i][t] -= f * a[k][t]
                for t in range(k, n):
                    a[t][i] -= f * a[t][k]
    return pos, neg, zero


@dataclass(frozen=True)
class IntegralLattice:
    """A unimodular symmetric bilinear form on Z^rank."""

    rank: int
    gram: tuple
    sig_plus: int
    sig_minus: int

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", gram)
        if self.rank != len(gram):
            raise ValidationError("rank does not match gram size")
        _check_symmetric(gram)
        if self.rank != self.sig_plus + self.sig_minus:
            raise ValidationError("rank must equal sig_plus + sig_minus")
        det = _determinant(gram)
        if abs(det) != 1:
            raise ValidationError(f"lattice is not unimodular: |det| = {det}")
        pos, neg, zero = _signature(gram)
        if zero != 0 or (pos, neg) != (self.sig_plus, self.sig_minus):
            raise ValidationError(
                f"signature mismatch: diagonalization gives ({pos},{neg}), "
                f"declared ({self.sig_plus},{self.sig_minus})"
            )

    @property
    def signature(self):
        return self.sig_plus - self.sig_minus

    def zero_class(self):
        return CohClass((0,) * self.rank)


def form(L, u, v):
    """The bilinear form on arbitrary rational coordinate vectors."""
    if len(u) != L.rank or len(v) != L.rank:
        raise ValidationError(
            f"coordinate length mismatch: expected {L.rank}"
        )
    gv = [sum(L.gram[i][j] * v[j] for j in range(L.rank)) for i in range(L.rank)]
    return sum(u[i] * gv[i] for i in range(L.rank))


def pairing(L, u, v):
    """Integer pairing of two integral classes, u^T . gram . v."""
    return int(form(L, u.coords, v.coords))


def square(L, u):
    return pairing(L, u, u)


def is_characteristic(L, K):
    """K . v == v . v  (mod 2) for all v; basis vectors suffice."""
    if len(K) != L.rank:
        raise ValidationError(f"coordinate length mismatch: expected {L.rank}")
    for i in range(L.rank):
        kv = sum(L.gram[i][j] * K.coords[j] for j in range(L.rank))
        if (kv - L.gram[i][i]) % 2 != 0:
            return False
    return True


def is_wu_class(L, v):
    """Whether the mod-2 class v pairs like the diagonal, v.e_i == e_i.e_i (mod 2).

    Integral lifts of v are then exactly the characteristic vectors.
    """
    if len(v) != L.rank:
        raise ValidationError(f"coordinate length mismatch: expected {L.rank}")
    for i in range(L.rank):
        vv = sum(L.gram[i][j] * v.bits[j] for j in range(L.rank))
        if (vv - L.gram[i][i]) % 2 != 0:
            return False
    return True


def is_good(L, v):
    """No integral lift of v is torsion; in a free lattice this is v != 0."""
    return not v.is_zero()


def reduces_to(u, v):
    """Whether the integral class u reduces to the mod-2 class v."""
    _same_length(u, v)
    return all(a % 2 == b for a, b in zip(u.coords, v.bits))


def find_orthogonal_classes(L, B, target_square, coeff_bound):
    """All classes c with |c_i| <= coeff_bound, c orthogonal to every
    element of B, and c.c == target_square, in lexicographic order.

    Exhaustive within the coefficient bound; the bound is part of any
    completeness claim made about the output.
    """
    if coeff_bound < 0:
        raise ValidationError("coeff_bound must be nonnegative")
    out = []
    rng = range(-coeff_bound, coeff_bound + 1)
    for coords in product(rng, repeat=L.rank):
        cand = CohClass(coords)
        if any(pairing(L, cand, k) != 0 for k in B):
            continue
        if square(L, cand) == target_square:
            out.append(cand)
    return out


def hyperbolic_lattice():
    return IntegralLattice(2, ((0, 1), (1, 0)), 1, 1)


def diagonal_lattice(plus, minus):
    n = plus + minus
    gram = tuple(
        tuple((1 if i < plus else -1) if i == j else 0 for j in range(n))
        for i in range(n)
    )
    return IntegralLattice(n, gram, plus, minus)


def block_sum(L, blocks_gram, extra_plus, extra_minus):
    """Append an orthogonal block to an existing lattice."""
    k = len(blocks_gram)
    n = L.rank + k
    gram = [[0] * n for _ in range(n)]
    for i in range(L.rank):
        for j in range(L.rank):
            gram[i][j] = L.gram[i][j]
    for i in range(k):
        for j in range(k):
            gram[L.rank + i][L.rank + j] = blocks_gram[i][j]
    return IntegralLattice(
        n,
        tuple(tuple(row) for row in gram),
        L.sig_plus + extra_plus,
        L.sig_minus + extra_minus,
    )
