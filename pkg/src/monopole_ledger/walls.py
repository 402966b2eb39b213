"""Bounded wall enumeration and chamber classification for b2+ = 1.

Walls are classes congruent to w mod 2 whose square lies on the arithmetic
progression p1 + 4*level.  Indefinite lattices carry infinitely many of
them, so enumeration is by bounded coefficients and every completeness
claim is scoped by the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import lattice as lat
from .errors import ValidationError
from .lattice import CohClass


@dataclass(frozen=True)
class WallClass:
    alpha: CohClass
    level: int


def enumerate_walls(L, w, p1, level_max, coeff_bound):
    """All alpha with |alpha_i| <= coeff_bound, alpha == w (mod 2), and
    alpha^2 == p1 + 4*level for some 0 <= level <= level_max, in
    lexicographic coordinate order."""
    if L.sig_plus != 1:
        raise ValidationError("wall enumeration requires b2+ = 1")
    if len(w) != L.rank:
        raise ValidationError(f"w length must be {L.rank}")
    if level_max < 0 or coeff_bound < 0:
        raise ValidationError("level_max and coeff_bound must be natural")
    w_parity = tuple(c % 2 for c in w.coords)
    wsq = lat.square(L, w)
    out = []
    rng = range(-coeff_bound, coeff_bound + 1)
    for coords in product(rng, repeat=L.rank):
        if tuple(c % 2 for c in coords) != w_parity:
            continue
        alpha = CohClass(coords)
        s = lat.square(L, alpha)
        if (s - wsq) % 4 != 0:
            raise ValidationError(
                "parity violation: alpha == w (mod 2) forces squares to "
                "agree mod 4"
            )
        num = s - p1
        if num < 0 or num % 4 != 0:
            continue
        lvl = num // 4
        if lvl <= level_max:
            out.append(WallClass(alpha=alpha, level=lvl))
    return out


def wall_correspondence(L, t, walls):
    """Pair every wall class alpha with the reducible class lambda - alpha.

    Asserts that each image is characteristic and satisfies the level
    equation, and that the assignment is injective on the input.
    """
    if L.sig_plus != 1:
        raise ValidationError("wall correspondence requires b2+ = 1")
    seen = set()
    out = []
    for wall in walls:
        if wall.alpha.coords in seen:
            raise ValidationError("duplicate wall class in input")
        seen.add(wall.alpha.coords)
        c1 = t.lam - wall.alpha
        if not lat.is_characteristic(L, c1):
            raise ValidationError(
                f"lambda - alpha is not characteristic for alpha = "
                f"{list(wall.alpha.coords)}; w2 data inconsistent"
            )
        if lat.square(L, c1 - t.lam) != t.p1 + 4 * wall.level:
            raise ValidationError("level equation failed; inconsistent input")
        out.append({"alpha": wall.alpha, "c1_s": c1, "level": wall.level})
    return out


def chamber_sign(L, omega, alpha):
    """Sign of Q(omega, alpha); 0 means omega lies on the alpha-wall."""
    if len(omega) != L.rank:
        raise ValidationError(f"omega length must be {L.rank}")
    if lat.form(L, omega, omega) <= 0:
        raise ValidationError("omega must lie in the positive cone")
    v = lat.form(L, omega, alpha.coords)
    if v > 0:
        return 1
    if v < 0:
        return -1
    return 0
