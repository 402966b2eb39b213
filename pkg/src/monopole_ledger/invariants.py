"""The theorem engine.

Dimension and index formulas, Uhlenbeck-level and orientation bookkeeping,
link pairings with reducible strata (closed Jacobi route and direct
Segre-sum route), the cobordism formula, blow-up transport, and the
top-level results: case classification of low-degree Donaldson invariants,
the simple-type specialization, and the low-degree comparison of the
Donaldson and Seiberg-Witten generating series.

Conventions.  For h in degree-2 homology with Poincare dual eta, pairings
<c, h> are realized as the lattice form Q(c, eta), and Q(h, h) as
Q(eta, eta); everything lives in one lattice with one Gram matrix.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice as lat
from .combinatorics import gen_binomial, jacobi_standard, JacobiParams, link_constant_closed
from .errors import (
    HypothesisError,
    ChamberError,
    MissingDataError,
    OracleMismatchError,
    ValidationError,
)
from .lattice import CohClass, IntegralLattice, Mod2Class
from .powerseries import TruncatedMultiPoly, poly_exp, segre_classes


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class BasicClassEntry:
    """A class with nontrivial Seiberg-Witten function.

    `sw` is the plain invariant (the x^{d_s/2} pairing); `sw_higher` maps
    (d, theta_tag) to the pairing against x^d theta for positive first
    Betti number.
    """

    c1: CohClass
    sw: int
    sw_higher: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ManifoldData:
    b1: int
    b2_plus: int
    b2_minus: int
    lattice: IntegralLattice
    w2: Mod2Class
    basic_classes: tuple
    chi: int
    sigma: int
    effective: bool
    h1_cup_trivial: bool


@dataclass(frozen=True)
class SpinUData:
    """The rank-8 structure datum: c1 (lam), first Pontryagin number,
    and an integral lift w of its second Stiefel-Whitney class."""

    lam: CohClass
    p1: int
    w: CohClass


@dataclass(frozen=True)
class MonomialZ:
    """z = x^{delta0} theta h^{delta2}, theta an opaque odd-degree factor."""

    delta0: int
    delta1: int
    delta2: int
    theta_tag: str = ""
    contains_h3: bool = False

    def __post_init__(self):
        if self.delta0 < 0 or self.delta1 < 0 or self.delta2 < 0:
            raise ValidationError("monomial degrees must be natural numbers")

    @property
    def degree(self):
        return 4 * self.delta0 + 3 * self.delta1 + 2 * self.delta2


class CaseLabel(enum.Enum):
    VANISH_BELOW_R = "VANISH_BELOW_R"
    AT_R = "AT_R"
    RELATION_RANGE = "RELATION_RANGE"
    MOD8_FAIL = "MOD8_FAIL"
    OUT_OF_THEOREM = "OUT_OF_THEOREM"


@dataclass(frozen=True)
class DimensionReport:
    d_a: int
    n_a: int
    i_lambda: Fraction
    c_x: Fraction


@dataclass(frozen=True)
class NormalIndices:
    ns1: int  # n_s'
    ns2: int  # n_s''


@dataclass(frozen=True)
class RValues:
    table: tuple  # of (BasicClassEntry, int)
    r_min: object  # int or None for the empty (+infinity) sentinel


@dataclass(frozen=True)
class CobordismResult:
    value: Fraction
    relation_residual: Fraction


@dataclass(frozen=True)
class BlowupResult:
    manifold: ManifoldData
    spinu: SpinUData
    class_map: tuple  # of (CohClass, (CohClass plus, CohClass minus))


@dataclass(frozen=True)
class DonaldsonResult:
    case: CaseLabel
    value: object  # Fraction or None
    relation_residual: object  # Fraction or None
    rows: tuple
    chamber: object
    h_normalization_divergent: bool


@dataclass(frozen=True)
class WittenReport:
    c_x: int
    sw_vanish_order: int
    d_vanish_ok: bool
    sw_vanish_ok: bool
    congruence_ok: bool
    residuals_ok: bool
    corollary_residuals: tuple  # of (d, residual poly is zero, serialized residual)
    donaldson_series: TruncatedMultiPoly
    sw_series: TruncatedMultiPoly


# ---------------------------------------------------------------------------
# manifold construction and validation


def make_manifold(
    b1,
    b2_plus,
    b2_minus,
    lattice_,
    w2,
    basic_classes,
    effective,
    h1_cup_trivial=True,
):
    if b1 < 0 or b2_minus < 0:
        raise ValidationError("betti numbers must be natural")
    if b2_plus < 1:
        raise ValidationError("b2_plus must be at least 1")
    if lattice_.rank != b2_plus + b2_minus:
        raise ValidationError("lattice rank must equal b2_plus + b2_minus")
    if (lattice_.sig_plus, lattice_.sig_minus) != (b2_plus, b2_minus):
        raise ValidationError("lattice signature must match (b2_plus, b2_minus)")
    if len(w2) != lattice_.rank:
        raise ValidationError("w2 length must match rank")
    if not lat.is_wu_class(lattice_, w2):
        raise ValidationError(
            "w2 must pair like the diagonal (characteristic mod-2 class)"
        )
    chi = 2 - 2 * b1 + b2_plus + b2_minus
    sigma = b2_plus - b2_minus
    if (chi + sigma) % 2 != 0:
        raise ValidationError("chi + sigma must be even")
    if b1 == 0 and b2_plus % 2 == 1 and (chi + sigma) % 4 != 0:
        raise ValidationError("chi + sigma must be divisible by 4 here")
    if b1 > 0 and not h1_cup_trivial:
        raise ValidationError("b1 > 0 requires trivial cup products on H^1")
    seen = set()
    for idx, entry in enumerate(basic_classes):
        where = f"basic_classes[{idx}]"
        if len(entry.c1) != lattice_.rank:
            raise ValidationError(f"{where}.c1: length must match rank")
        if entry.c1.coords in seen:
            raise ValidationError(f"{where}.c1: duplicate basic class")
        seen.add(entry.c1.coords)
        if not lat.is_characteristic(lattice_, entry.c1):
            raise ValidationError(f"{where}.c1: not characteristic")
        if (lat.square(lattice_, entry.c1) - sigma) % 8 != 0:
            raise ValidationError(f"{where}.c1: square != sigma (mod 8)")
        if not lat.reduces_to(entry.c1, w2):
            raise ValidationError(f"{where}.c1: does not reduce to w2")
        num = lat.square(lattice_, entry.c1) - 2 * chi - 3 * sigma
        if num % 4 != 0:
            raise ValidationError(f"{where}.c1: non-integral moduli dimension")
        d_s = num // 4
        if d_s < 0:
            raise ValidationError(f"{where}: negative moduli dimension {d_s}")
        for (d, tag), val in entry.sw_higher.items():
            if d < 0:
                raise ValidationError(f"{where}.sw_higher: negative x-power")
            if b1 == 0 and d_s == 0:
                raise ValidationError(
                    f"{where}.sw_higher: entries need b1 > 0 or positive moduli dimension"
                )
            if b1 == 0 and tag == "" and 2 * d == d_s and val != entry.sw:
                raise ValidationError(
                    f"{where}.sw_higher: ({d},'') must agree with sw"
                )
    return ManifoldData(
        b1=b1,
        b2_plus=b2_plus,
        b2_minus=b2_minus,
        lattice=lattice_,
        w2=w2,
        basic_classes=tuple(basic_classes),
        chi=chi,
        sigma=sigma,
        effective=bool(effective),
        h1_cup_trivial=bool(h1_cup_trivial),
    )


def validate_spinu(X, t):
    L = X.lattice
    if len(t.lam) != L.rank or len(t.w) != L.rank:
        raise ValidationError("spin-u class lengths must match rank")
    if not lat.reduces_to(t.w - t.lam, X.w2):
        raise ValidationError("w - lambda must reduce to w2 (mod 2)")
    if (lat.square(L, t.w) - X.sigma) % 2 != 0:
        raise ValidationError("w.w must have the parity of sigma")


def simple_type_check(X):
    """Every basic class squares to 2 chi + 3 sigma (zero-dimensional moduli)."""
    if X.b1 != 0:
        raise ValidationError("simple type is only defined when b1 = 0")
    target = 2 * X.chi + 3 * X.sigma
    return all(
        lat.square(X.lattice, e.c1) == target for e in X.basic_classes
    )


# ---------------------------------------------------------------------------
# dimensions, indices, levels, signs


def c_of(X):
    return Fraction(-(7 * X.chi + 11 * X.sigma), 4)


def dimension_report(X, t):
    chi_sigma = X.chi + X.sigma
    d_a = -2 * t.p1 - (3 * chi_sigma) // 2
    num = t.p1 + lat.square(X.lattice, t.lam) - X.sigma
    if num % 4 != 0:
        raise ValidationError("p1 + lambda^2 - sigma must be divisible by 4")
    n_a = num // 4
    c_x = c_of(X)
    i_lambda = lat.square(X.lattice, t.lam) + c_x + chi_sigma
    return DimensionReport(d_a=d_a, n_a=n_a, i_lambda=i_lambda, c_x=c_x)


def sw_dimension(X, K):
    if not lat.is_characteristic(X.lattice, K):
        raise ValidationError("moduli dimension needs a characteristic class")
    num = lat.square(X.lattice, K) - 2 * X.chi - 3 * X.sigma
    if num % 4 != 0:
        raise ValidationError("non-integral Seiberg-Witten moduli dimension")
    return num // 4


def normal_indices(X, t, K):
    L = X.lattice
    ns1 = -lat.square(L, t.lam - K) - (X.chi + X.sigma) // 2
    if (X.chi + X.sigma) % 2 != 0:
        raise ValidationError("chi + sigma must be even")
    num2 = lat.square(L, t.lam.scale(2) - K) - X.sigma
    if num2 % 8 != 0:
        raise ValidationError("(2 lambda - K)^2 - sigma must be divisible by 8")
    return NormalIndices(ns1=ns1, ns2=num2 // 8)


def r_of(X, t, K):
    num = -4 * lat.square(X.lattice, K - t.lam) - 3 * (X.chi + X.sigma)
    if num % 4 != 0:
        raise ValidationError("non-integral r value (chi+sigma not 0 mod 4)")
    return num // 4


def r_values(X, t):
    table = tuple((e, r_of(X, t, e.c1)) for e in X.basic_classes)
    r_min = min((r for _, r in table), default=None)
    return RValues(table=table, r_min=r_min)


def level(t, K, L):
    """Uhlenbeck level of the reducible stratum; None when not represented."""
    num = lat.square(L, t.lam - K) - t.p1
    if num < 0 or num % 4 != 0:
        return None
    return num // 4


def orientation_sign(t, K, L):
    """Parity bit ((w - lambda + K)^2 / 4) mod 2."""
    u = t.w - t.lam + K
    sq = lat.square(L, u)
    if sq % 4 != 0:
        raise ValidationError("(w - lambda + K)^2 must be divisible by 4")
    return (sq // 4) % 2


def mod8_gate(X, w, deg):
    """deg == -2 w^2 - (3/2)(chi+sigma)  (mod 8)."""
    wsq = lat.square(X.lattice, w)
    return (deg + 2 * wsq + (3 * (X.chi + X.sigma)) // 2) % 8 == 0


def kappa_of(X, deg):
    return Fraction(2 * deg + 3 * (X.chi + X.sigma), 16)


def derive_p1(X, deg):
    """The standard-regime p1 making the asd dimension equal deg."""
    num = 2 * deg + 3 * (X.chi + X.sigma)
    if num % 4 != 0:
        raise ValidationError("degree admits no integral p1 in the standard regime")
    return -num // 4


# ---------------------------------------------------------------------------
# link pairings


def _sw_monomial_value(X, entry, d, delta1, theta_tag):
    if delta1 == 0:
        # with no odd factor, d = d_s/2 and the pairing is the plain invariant
        return Fraction(entry.sw)
    val = entry.sw_higher.get((d, theta_tag))
    if val is None:
        raise MissingDataError(
            f"manifest lacks SW pairing for (x^{d}, theta '{theta_tag}') "
            f"on class {list(entry.c1.coords)}"
        )
    return Fraction(val)


def _link_constant(ns1, ns2, delta_p, d, method):
    """Link constant by the requested route(s); 'both' must agree."""
    direct = closed = None
    if method in ("direct", "both"):
        segre = segre_classes(ns1, ns2, d)
        direct = Fraction(0)
        for i in range(d + 1):
            bi = gen_binomial(delta_p, i)
            if bi:
                direct += 2**i * bi * segre[d - i]
    if method in ("closed", "both"):
        closed = link_constant_closed(ns2, ns1, delta_p, d)
    if method == "both" and direct != closed:
        raise OracleMismatchError(
            f"link constant routes disagree at (ns1={ns1}, ns2={ns2}, "
            f"delta_p={delta_p}, d={d}): direct {direct}, closed {closed}"
        )
    return closed if closed is not None else direct


def _link_pairing_core(X, t, entry, delta0, delta1, theta_tag, h_factors, delta_c, method):
    """Pairing of mu_p(z) cup mu_c^{delta_c} with a level-zero link.

    `h_factors` lists (rational coordinate vector, exponent) for the
    degree-2 arguments; the blow-up machinery passes the exceptional
    direction as an extra factor.
    """
    if not X.h1_cup_trivial:
        raise HypothesisError("link pairing requires trivial cup products on H^1")
    L = X.lattice
    K = entry.c1
    if level(t, K, L) != 0:
        raise HypothesisError("link pairing requires a top-level (level 0) stratum")
    if delta_c < 0:
        raise ValidationError("delta_c must be a natural number")
    d_s = sw_dimension(X, K)
    delta2 = sum(exp for _, exp in h_factors)
    deg_z = 4 * delta0 + 3 * delta1 + 2 * delta2
    rep = dimension_report(X, t)
    if deg_z + 2 * delta_c != rep.d_a + 2 * rep.n_a - 2:
        raise HypothesisError(
            f"degree mismatch: deg(z) + 2 delta_c = {deg_z + 2 * delta_c} "
            f"but the link has dimension {rep.d_a + 2 * rep.n_a - 2}"
        )
    if (d_s - delta1) % 2 != 0:
        raise HypothesisError("delta1 must have the parity of the moduli dimension")
    if delta1 > d_s:
        return Fraction(0)
    d = (d_s - delta1) // 2
    sw_val = _sw_monomial_value(X, entry, d, delta1, theta_tag)
    ni = normal_indices(X, t, K)
    delta_p = delta2 + delta1 + 2 * delta0
    C = _link_constant(ni.ns1, ni.ns2, delta_p, d, method)
    h_val = Fraction(1)
    diff = (K - t.lam).coords
    for vec, exp in h_factors:
        if exp:
            h_val *= Fraction(lat.form(L, diff, vec)) ** exp
    sign = -1 if (delta0 + delta1) % 2 else 1
    return sign * Fraction(1, 2 ** (delta2 + 2 * delta0)) * C * sw_val * h_val


def _find_entry(X, K):
    for e in X.basic_classes:
        if e.c1 == K:
            return e
    raise ValidationError(f"{list(K.coords)} is not a basic class of the manifold")


def link_pairing(X, t, K, z, delta_c, h_pd, method="both"):
    """Level-zero link pairing for z = x^{delta0} theta h^{delta2}.

    Returns 0 outright when z carries a degree-3 factor.
    """
    entry = _find_entry(X, K)
    if z.contains_h3:
        if level(t, K, X.lattice) != 0:
            raise HypothesisError("link pairing requires a top-level stratum")
        return Fraction(0)
    h_vec = _as_fraction_vector(h_pd, X.lattice.rank)
    return _link_pairing_core(
        X, t, entry, z.delta0, z.delta1, z.theta_tag,
        [(h_vec, z.delta2)], delta_c, method,
    )


def _as_fraction_vector(vec, rank):
    out = tuple(Fraction(v) for v in vec)
    if len(out) != rank:
        raise ValidationError(f"h vector length must be {rank}")
    return out


# ---------------------------------------------------------------------------
# cobordism formula


def cobordism_sum(X, t, z, delta_c, h_pd, method="both"):
    """Signed sum of link pairings over top-level reducibles.

    With deg(z) equal to the asd dimension this evaluates the invariant;
    in the window above it the signed sum itself is asserted to vanish and
    is reported as a residual.
    """
    validate_spinu(X, t)
    rep = dimension_report(X, t)
    if rep.n_a <= 0:
        raise HypothesisError("cobordism formula requires n_a > 0")
    if not lat.is_good(X.lattice, t.w.mod2()):
        raise HypothesisError("cobordism formula requires w (mod 2) good")
    deg = z.degree
    if deg + 2 * delta_c != rep.d_a + 2 * rep.n_a - 2:
        raise HypothesisError("deg(z) + 2 delta_c must equal d_a + 2 n_a - 2")
    if deg < rep.d_a:
        raise HypothesisError("deg(z) below the asd dimension is out of range")
    eligible = []
    for entry in X.basic_classes:
        lv = level(t, entry.c1, X.lattice)
        if lv is None:
            continue
        if lv > 0:
            raise HypothesisError(
                "a nontrivial Seiberg-Witten class sits below the top level; "
                "only the top-level regime is computed"
            )
        eligible.append(entry)
    signed = Fraction(0)
    for entry in eligible:
        o = orientation_sign(t, entry.c1, X.lattice)
        term = link_pairing(X, t, entry.c1, z, delta_c, h_pd, method)
        signed += (-1 if o else 1) * term
    if not eligible:
        return CobordismResult(value=Fraction(0), relation_residual=Fraction(0))
    if deg == rep.d_a:
        value = -(Fraction(2) ** (1 - rep.n_a)) * signed
        return CobordismResult(value=value, relation_residual=Fraction(0))
    return CobordismResult(value=Fraction(0), relation_residual=signed)


# ---------------------------------------------------------------------------
# blow-up transport


def blowup_transform(X, t):
    """Connect-sum with the reversed projective plane.

    The lattice gains a final basis vector of square -1; chi rises and
    sigma drops by one; each basic class splits into the pair K +- e with
    unchanged SW data and unchanged moduli dimension.
    """
    L = X.lattice
    Lb = lat.block_sum(L, ((-1,),), 0, 1)
    w2b = Mod2Class(X.w2.bits + (1,))
    star = (0,) * L.rank + (1,)
    classes = []
    class_map = []
    for entry in X.basic_classes:
        up = CohClass(entry.c1.coords + (1,))
        down = CohClass(entry.c1.coords + (-1,))
        classes.append(BasicClassEntry(up, entry.sw, dict(entry.sw_higher)))
        classes.append(BasicClassEntry(down, entry.sw, dict(entry.sw_higher)))
        class_map.append((entry.c1, (up, down)))
    Xb = make_manifold(
        b1=X.b1,
        b2_plus=X.b2_plus,
        b2_minus=X.b2_minus + 1,
        lattice_=Lb,
        w2=w2b,
        basic_classes=classes,
        effective=X.effective,
        h1_cup_trivial=X.h1_cup_trivial,
    )
    tb = SpinUData(
        lam=CohClass(t.lam.coords + (0,)),
        p1=t.p1 - 1,
        w=CohClass(t.w.coords + (1,)),
    )
    return BlowupResult(manifold=Xb, spinu=tb, class_map=tuple(class_map))


def blowup_pairing_pair(X, t, K, z, delta_c, k, h_pd, method="both"):
    """Signed pair of blown-up link pairings against e^{k+1} x^{delta0}
    theta h^{delta2 - k}, against its closed form on the base manifold.

    Zero for odd k.  With method 'both' the assembled pair sum and the
    closed form must agree exactly.
    """
    if k < 0:
        raise ValidationError("k must be a natural number")
    if z.delta2 < k:
        raise ValidationError("z.delta2 must be at least k")
    if z.contains_h3:
        return Fraction(0)
    entry = _find_entry(X, K)
    L = X.lattice
    if level(t, K, L) != 0:
        raise HypothesisError("blow-up pairing requires a top-level stratum")
    h_vec = _as_fraction_vector(h_pd, L.rank)

    lhs = None
    if method in ("direct", "both"):
        bl = blowup_transform(X, t)
        Xb, tb = bl.manifold, bl.spinu
        pair = next(pair for base, pair in bl.class_map if base == K)
        h_vec_b = h_vec + (Fraction(0),)
        e_vec = (Fraction(0),) * L.rank + (Fraction(1),)
        lhs = Fraction(0)
        for Kb in pair:
            entry_b = _find_entry(Xb, Kb)
            o = orientation_sign(tb, Kb, Xb.lattice)
            term = _link_pairing_core(
                Xb, tb, entry_b, z.delta0, z.delta1, z.theta_tag,
                [(h_vec_b, z.delta2 - k), (e_vec, k + 1)], delta_c, method,
            )
            lhs += (-1 if o else 1) * term

    rhs = None
    if method in ("closed", "both"):
        if k % 2 == 1:
            rhs = Fraction(0)
        else:
            d_s = sw_dimension(X, K)
            if (d_s - z.delta1) % 2 != 0:
                raise HypothesisError(
                    "delta1 must have the parity of the moduli dimension"
                )
            if z.delta1 > d_s:
                rhs = Fraction(0)
            else:
                d = (d_s - z.delta1) // 2
                sw_val = _sw_monomial_value(X, entry, d, z.delta1, z.theta_tag)
                ni = normal_indices(X, t, K)
                delta_p = z.delta2 + z.delta1 + 2 * z.delta0
                C = _link_constant(ni.ns1, ni.ns2, delta_p, d, method)
                o = orientation_sign(t, K, L)
                sign = -1 if (o + z.delta0 + z.delta1) % 2 else 1
                h_val = Fraction(lat.form(L, (K - t.lam).coords, h_vec)) ** (
                    z.delta2 - k
                )
                rhs = (
                    sign
                    * Fraction(1, 2 ** (z.delta2 + 2 * z.delta0))
                    * C
                    * sw_val
                    * h_val
                )

    if method == "both" and lhs != rhs:
        raise OracleMismatchError(
            f"blow-up pairing routes disagree (k={k}): pair sum {lhs}, "
            f"closed form {rhs}"
        )
    return rhs if rhs is not None else lhs


# ---------------------------------------------------------------------------
# Donaldson invariants


def _entry_sign_bit(X, t, entry, against):
    """Parity of (w^2 + K . against)/2, the per-class sign in the sums."""
    e2 = lat.square(X.lattice, t.w) + lat.pairing(X.lattice, entry.c1, against)
    if e2 % 2 != 0:
        raise ValidationError("sign exponent is not an integer")
    return (e2 // 2) % 2


def _h_constant(X, r_min, i_lambda, deg, d_s, delta1, method):
    """The Jacobi constant of the main formula, via the link constant under
    the substitution delta_c = (3r + i)/4 - deg/2 - 1, ns1 = r + (chi+sigma)/4.

    Returns (value, jacobi value at the parameters) for the normalization
    divergence flag.
    """
    d = (d_s - delta1) // 2
    if d == 0:
        return Fraction(1), Fraction(1)
    delta_p2 = deg - delta1
    if delta_p2 % 2 != 0:
        raise ValidationError("deg(z) - delta1 must be even")
    delta_p = delta_p2 // 2
    if (X.chi + X.sigma) % 4 != 0:
        raise ValidationError("chi + sigma must be divisible by 4 here")
    ns1 = r_min + (X.chi + X.sigma) // 4
    delta_c4 = 3 * r_min + i_lambda - 2 * deg - 4
    if Fraction(delta_c4, 4).denominator != 1:
        raise ValidationError("non-integral delta_c in the Jacobi substitution")
    delta_c = int(Fraction(delta_c4, 4))
    ns2 = delta_c - d + delta_p - ns1
    value = _link_constant(ns1, ns2, delta_p, d, method)
    p_val = jacobi_standard(
        JacobiParams(delta_c - d - 1, delta_p - ns1 - d, d, Fraction(0))
    )
    return value, p_val


def _main_formula_sum(X, t, z, h_vec, r_min, i_lambda, method):
    """The signed sum over classes at minimal r, with the Jacobi constant,
    SW pairing, and the h power; also returns report rows and the
    normalization divergence flag."""
    L = X.lattice
    total = Fraction(0)
    rows = []
    divergent = False
    w_minus_lam = t.w - t.lam
    for entry, r in r_values(X, t).table:
        if r != r_min:
            continue
        d_s = sw_dimension(X, entry.c1)
        if (d_s - z.delta1) % 2 != 0:
            raise ValidationError(
                "contributing class violates the delta1 parity; inconsistent input"
            )
        if z.delta1 > d_s:
            term = Fraction(0)
            rows.append(_row(X, t, entry, r, None, Fraction(0), Fraction(0), term))
            continue
        d = (d_s - z.delta1) // 2
        sw_val = _sw_monomial_value(X, entry, d, z.delta1, z.theta_tag)
        H, p_val = _h_constant(X, r_min, i_lambda, z.degree, d_s, z.delta1, method)
        if d > 0 and p_val != 0:
            divergent = True
        sign_bit = _entry_sign_bit(X, t, entry, w_minus_lam)
        h_val = Fraction(lat.form(L, (entry.c1 - t.lam).coords, h_vec)) ** z.delta2
        term = (-1 if sign_bit else 1) * H * sw_val * h_val
        total += term
        rows.append(_row(X, t, entry, r, d, H, sw_val, term))
    return total, tuple(rows), divergent


def _row(X, t, entry, r, d, H, sw_val, term):
    return {
        "c1": list(entry.c1.coords),
        "r": r,
        "level": level(t, entry.c1, X.lattice),
        "orientation": orientation_sign(t, entry.c1, X.lattice),
        "d": d,
        "H": H,
        "sw": sw_val,
        "term": term,
    }


def _chamber_annotation(X, t, period_point):
    if X.b2_plus != 1:
        return None
    if not lat.is_good(X.lattice, t.w.mod2()):
        raise HypothesisError("b2+ = 1 requires w (mod 2) good")
    if period_point is None:
        raise ChamberError("b2+ = 1 requires a period point")
    omega = _as_fraction_vector(period_point, X.lattice.rank)
    if lat.form(X.lattice, omega, omega) <= 0:
        raise ChamberError("period point must lie in the positive cone")
    signs = []
    for entry in X.basic_classes:
        v = lat.form(X.lattice, (entry.c1 - t.lam).coords, omega)
        if v == 0:
            raise ChamberError(
                f"period point lies on the wall of {list(entry.c1.coords)}"
            )
        signs.append(1 if v > 0 else -1)
    return {"omega": [str(o) for o in omega], "signs": signs}


def donaldson_invariant(X, t, z, h_pd, period_point=None, method="both"):
    """Classify and, where the theory determines it, evaluate D^w(z).

    Classification is a total function of (deg(z)/2, r, i, mod-8 gate):
    below both bounds the invariant vanishes; at r it is the signed
    Seiberg-Witten sum; in the window above r the relation is reported as
    a residual asserted to vanish.
    """
    if not X.effective:
        raise HypothesisError("computation assumes the manifold is effective")
    if z.delta1 > X.b1:
        raise ValidationError("delta1 exceeds b1")
    validate_spinu(X, t)
    h_vec = _as_fraction_vector(h_pd, X.lattice.rank)
    chamber = _chamber_annotation(X, t, period_point)
    deg = z.degree
    if not mod8_gate(X, t.w, deg):
        return DonaldsonResult(
            CaseLabel.MOD8_FAIL, Fraction(0), None, (), chamber, False
        )
    rv = r_values(X, t)
    rep = dimension_report(X, t)
    i_lambda = rep.i_lambda
    delta = Fraction(deg, 2)
    below_r = rv.r_min is None or delta < rv.r_min

    if delta < i_lambda and below_r:
        return DonaldsonResult(
            CaseLabel.VANISH_BELOW_R, Fraction(0), None, (), chamber, False
        )

    if delta < i_lambda and rv.r_min is not None and delta == rv.r_min:
        _refuse_lower_levels(X, t)
        if z.contains_h3:
            return DonaldsonResult(
                CaseLabel.AT_R, Fraction(0), None, (), chamber, False
            )
        n_a_f = Fraction(i_lambda - delta, 4)
        if n_a_f.denominator != 1 or n_a_f <= 0:
            raise ValidationError("(i - delta)/4 must be a positive integer")
        total, rows, divergent = _main_formula_sum(
            X, t, z, h_vec, rv.r_min, i_lambda, method
        )
        exponent = 1 - int(n_a_f) - z.delta2 - 2 * z.delta0
        sgn_exp = z.delta0 + z.delta1 + _half_sigma_minus_wsq(X, t) + 1
        sign = -1 if sgn_exp % 2 else 1
        value = sign * Fraction(2) ** exponent * total
        return DonaldsonResult(
            CaseLabel.AT_R, value, None, rows, chamber, divergent
        )

    if rv.r_min is not None:
        upper4 = 4 * rv.r_min + 2 * (rv.r_min + i_lambda) - 8
        if 2 * rv.r_min < 2 * delta and 8 * delta <= upper4 and deg % 2 == 0:
            _refuse_lower_levels(X, t)
            if z.contains_h3:
                return DonaldsonResult(
                    CaseLabel.RELATION_RANGE, Fraction(0), Fraction(0), (),
                    chamber, False,
                )
            total, rows, divergent = _main_formula_sum(
                X, t, z, h_vec, rv.r_min, i_lambda, method
            )
            return DonaldsonResult(
                CaseLabel.RELATION_RANGE, Fraction(0), total, rows, chamber,
                divergent,
            )

    return DonaldsonResult(CaseLabel.OUT_OF_THEOREM, None, None, (), chamber, False)


def _half_sigma_minus_wsq(X, t):
    num = X.sigma - lat.square(X.lattice, t.w)
    if num % 2 != 0:
        raise ValidationError("sigma - w^2 must be even")
    return (num // 2) % 2


def _refuse_lower_levels(X, t):
    for entry in X.basic_classes:
        lv = level(t, entry.c1, X.lattice)
        if lv is not None and lv > 0:
            raise HypothesisError(
                "a nontrivial Seiberg-Witten class sits in a positive level; "
                "this regime is conjectural and refused"
            )


def donaldson_blowup_route(X, t, z, h_pd, method="direct"):
    """The invariant assembled through the blown-up cobordism.

    Independent of the closed main formula: every pairing is evaluated on
    the blow-up and summed with orientation signs computed there.
    """
    validate_spinu(X, t)
    rep = dimension_report(X, t)
    if z.degree != rep.d_a:
        raise HypothesisError("blow-up route requires deg(z) = d_a")
    if rep.n_a <= 0:
        raise HypothesisError("blow-up route requires n_a > 0")
    delta_c = rep.n_a - 1
    total = Fraction(0)
    for entry in X.basic_classes:
        lv = level(t, entry.c1, X.lattice)
        if lv is None:
            continue
        if lv > 0:
            raise HypothesisError("positive-level class; regime refused")
        total += blowup_pairing_pair(
            X, t, entry.c1, z, delta_c, 0, h_pd, method
        )
    return -(Fraction(2) ** (1 - rep.n_a)) * total


def donaldson_simple_type(X, t, delta, m, h_pd):
    """D^w(h^{delta-2m} x^m) for effective simple-type manifolds with
    lambda orthogonal to the basic classes.

    Returns (case, value, residual); vanishing cases carry value 0 and the
    relation window reports the signed sum as its residual.
    """
    if X.b1 != 0:
        raise HypothesisError("simple-type route requires b1 = 0")
    if X.b2_plus < 3 or X.b2_plus % 2 == 0:
        raise HypothesisError("simple-type route requires odd b2+ >= 3")
    if not X.effective:
        raise HypothesisError("computation assumes the manifold is effective")
    if not simple_type_check(X):
        raise HypothesisError("manifold is not of simple type")
    validate_spinu(X, t)
    L = X.lattice
    for entry in X.basic_classes:
        if lat.pairing(L, t.lam, entry.c1) != 0:
            raise HypothesisError("lambda must be orthogonal to the basic classes")
    if delta < 0 or m < 0 or 2 * m > delta:
        raise ValidationError("need 0 <= m <= delta/2")
    h_vec = _as_fraction_vector(h_pd, L.rank)
    deg = 2 * delta
    if not mod8_gate(X, t.w, deg):
        return CaseLabel.MOD8_FAIL, Fraction(0), None
    c_x = c_of(X)
    if c_x.denominator != 1:
        raise ValidationError("c(X) must be an integer here")
    c_x = int(c_x)
    lam_sq = lat.square(L, t.lam)
    r_st4 = -4 * lam_sq + 4 * c_x - 4 * (X.chi + X.sigma)
    r_st = r_st4 // 4
    i_st = 2 * c_x - r_st

    def signed_sum(power):
        total = Fraction(0)
        for entry in X.basic_classes:
            bit = _entry_sign_bit(X, t, entry, t.w)
            h_val = Fraction(
                lat.form(L, (entry.c1 - t.lam).coords, h_vec)
            ) ** power
            total += (-1 if bit else 1) * entry.sw * h_val
        return total

    if delta < i_st and delta < r_st:
        return CaseLabel.VANISH_BELOW_R, Fraction(0), None
    if delta == r_st and delta < i_st:
        total = signed_sum(delta - 2 * m)
        if total == 0:
            return CaseLabel.AT_R, Fraction(0), None
        if (c_x + delta) % 2 != 0:
            raise ValidationError("c(X) + delta must be even here")
        exponent = 1 - (c_x + delta) // 2
        sgn = m + 1 + _half_sigma_minus_wsq(X, t)
        value = (-1 if sgn % 2 else 1) * Fraction(2) ** exponent * total
        return CaseLabel.AT_R, value, None
    if r_st < delta and 2 * delta <= r_st + c_x - 2:
        return CaseLabel.RELATION_RANGE, Fraction(0), signed_sum(delta - 2 * m)
    return CaseLabel.OUT_OF_THEOREM, None, None


# ---------------------------------------------------------------------------
# generating series and the low-degree comparison


def sw_series(X, w, cap):
    """sum over basic classes of (-1)^{(w^2 + K.w)/2} SW e^{<K, h>},
    as a truncated polynomial in the coordinates of the dual of h."""
    L = X.lattice
    if len(w) != L.rank:
        raise ValidationError("w length must match rank")
    if (lat.square(L, w) - X.sigma) % 2 != 0:
        raise ValidationError("w.w must have the parity of sigma")
    out = TruncatedMultiPoly.zero(L.rank, cap)
    for entry in X.basic_classes:
        e2 = lat.square(L, w) + lat.pairing(L, entry.c1, w)
        if e2 % 2 != 0:
            raise ValidationError("sign exponent is not an integer")
        sign = -1 if (e2 // 2) % 2 else 1
        linear = TruncatedMultiPoly.linear(
            cap,
            [
                sum(L.gram[i][j] * entry.c1.coords[j] for j in range(L.rank))
                for i in range(L.rank)
            ],
        )
        out = out + poly_exp(linear).scale(sign * entry.sw)
    return out


def _simple_type_term_poly(X, t, delta, m, cap):
    """D^w(h^{delta-2m} x^m) as a homogeneous polynomial in eta, degree
    delta-2m, or zero where the classification gives zero."""
    L = X.lattice
    deg = 2 * delta
    if not mod8_gate(X, t.w, deg):
        return TruncatedMultiPoly.zero(L.rank, cap)
    c_frac = c_of(X)
    if c_frac.denominator != 1:
        raise ValidationError("c(X) must be an integer here")
    c_x = int(c_frac)
    lam_sq = lat.square(L, t.lam)
    r_st = (-4 * lam_sq + 4 * c_x - 4 * (X.chi + X.sigma)) // 4
    i_st = 2 * c_x - r_st
    if delta < i_st and delta < r_st:
        return TruncatedMultiPoly.zero(L.rank, cap)
    if r_st < delta and 2 * delta <= r_st + c_x - 2:
        return TruncatedMultiPoly.zero(L.rank, cap)
    if not (delta == r_st and delta < i_st):
        raise HypothesisError(
            f"series needs D(h^{delta - 2 * m} x^{m}) outside the computed cases"
        )
    power = delta - 2 * m
    total = TruncatedMultiPoly.zero(L.rank, cap)
    for entry in X.basic_classes:
        bit = _entry_sign_bit(X, t, entry, t.w)
        linear = TruncatedMultiPoly.linear(
            cap,
            [
                sum(
                    L.gram[i][j] * (entry.c1.coords[j] - t.lam.coords[j])
                    for j in range(L.rank)
                )
                for i in range(L.rank)
            ],
        )
        total = total + (linear**power).scale((-1 if bit else 1) * entry.sw)
    if total.is_zero():
        return total
    if (c_x + delta) % 2 != 0:
        raise ValidationError("c(X) + delta must be even here")
    exponent = 1 - (c_x + delta) // 2
    sgn = m + 1 + _half_sigma_minus_wsq(X, t)
    return total.scale((-1 if sgn % 2 else 1) * Fraction(2) ** exponent)


def donaldson_series(X, t, cap):
    """The generating series D((1 + x/2) e^h), assembled from the
    simple-type invariants through degree min(cap, c(X)) - 1; invariants
    of higher degree are not determined by the computed cases."""
    from math import factorial

    c_x = c_of(X)
    if c_x.denominator != 1:
        raise ValidationError("c(X) must be an integer here")
    out = TruncatedMultiPoly.zero(X.lattice.rank, cap)
    for e in range(min(cap, int(c_x))):
        p_plain = _simple_type_term_poly(X, t, e, 0, cap)
        p_x = _simple_type_term_poly(X, t, e + 2, 1, cap)
        out = out + p_plain.scale(Fraction(1, factorial(e)))
        out = out + p_x.scale(Fraction(1, 2 * factorial(e)))
    return out


def _find_orthogonal_hyperbolic_pair(X):
    """A coordinate hyperbolic pair orthogonal to every basic class;
    None when no such pair of basis vectors exists."""
    L = X.lattice
    for i in range(L.rank):
        if L.gram[i][i] != 0:
            continue
        for j in range(i + 1, L.rank):
            if L.gram[j][j] != 0 or L.gram[i][j] != 1:
                continue
            clean = True
            for entry in X.basic_classes:
                row = entry.c1.coords
                gi = sum(L.gram[i][k] * row[k] for k in range(L.rank))
                gj = sum(L.gram[j][k] * row[k] for k in range(L.rank))
                if gi != 0 or gj != 0:
                    clean = False
                    break
            if clean:
                return i, j
    return None


def witten_compare(X, t, cap):
    """Low-degree comparison of the two generating series.

    Checks the vanishing of both series below degree c-2, the congruence
    D = 2^{2-c} e^{Q/2} SW through degree c-1, and the signed power-sum
    relations through degree c-3, all coefficientwise and exact.
    """
    if X.b1 != 0:
        raise HypothesisError("series comparison requires b1 = 0")
    if X.b2_plus < 3 or X.b2_plus % 2 == 0:
        raise HypothesisError("series comparison requires odd b2+ >= 3")
    if not X.effective:
        raise HypothesisError("computation assumes the manifold is effective")
    if not simple_type_check(X):
        raise HypothesisError("manifold is not of simple type")
    validate_spinu(X, t)
    L = X.lattice
    for entry in X.basic_classes:
        if lat.pairing(L, t.lam, entry.c1) != 0:
            raise HypothesisError("lambda must be orthogonal to the basic classes")
    lam_sq = lat.square(L, t.lam)
    if lam_sq != 2 - (X.chi + X.sigma):
        raise HypothesisError(
            f"lambda^2 must be {2 - (X.chi + X.sigma)}, got {lam_sq}"
        )
    c_x = c_of(X)
    if c_x.denominator != 1:
        raise ValidationError("c(X) must be an integer here")
    c_x = int(c_x)
    cap_eff = max(cap, c_x)

    d_poly = donaldson_series(X, t, cap_eff)
    s_poly = sw_series(X, t.w, cap_eff)

    def vanishes_below(poly, bound):
        order = poly.min_total_degree()
        return order is None or order >= bound

    d_vanish_ok = vanishes_below(d_poly, c_x - 2)
    sw_vanish_ok = vanishes_below(s_poly, c_x - 2)
    order = s_poly.min_total_degree()
    sw_vanish_order = cap_eff + 1 if order is None else order

    quad = TruncatedMultiPoly(
        L.rank,
        cap_eff,
        {
            tuple(
                (1 if k == i else 0) + (1 if k == j else 0)
                for k in range(L.rank)
            ): (Fraction(L.gram[i][j], 2) if i == j else Fraction(L.gram[i][j]))
            for i in range(L.rank)
            for j in range(i, L.rank)
            if L.gram[i][j]
        },
    )
    rhs = poly_exp(quad) * s_poly
    rhs = rhs.scale(Fraction(2) ** (2 - c_x))
    congruence_ok = all(
        (d_poly - rhs).homogeneous_part(e).is_zero() for e in range(min(c_x, cap_eff + 1))
    )

    residual_rows = []
    residuals_ok = True
    if c_x >= 3:
        pair = _find_orthogonal_hyperbolic_pair(X)
        if pair is None:
            raise HypothesisError(
                "no hyperbolic pair orthogonal to the basic classes was found "
                "(abundance not witnessed by coordinate vectors)"
            )
        i, j = pair
        coords0 = [0] * L.rank
        coords0[i] = 1
        coords0[j] = (4 - (X.chi + X.sigma)) // 2
        lam0 = CohClass(coords0)
        w0 = t.w + (lam0 - t.lam)
        for d in range(c_x - 2):
            total = TruncatedMultiPoly.zero(L.rank, cap_eff)
            for entry in X.basic_classes:
                bit = _entry_sign_bit(X, SpinUData(lam0, t.p1, w0), entry, w0)
                linear = TruncatedMultiPoly.linear(
                    cap_eff,
                    [
                        sum(
                            L.gram[a][b] * (entry.c1.coords[b] - lam0.coords[b])
                            for b in range(L.rank)
                        )
                        for a in range(L.rank)
                    ],
                )
                total = total + (linear**d).scale(
                    (-1 if bit else 1) * entry.sw
                )
            ok = total.is_zero()
            residuals_ok = residuals_ok and ok
            residual_rows.append((d, ok, total.serialize()))

    return WittenReport(
        c_x=c_x,
        sw_vanish_order=sw_vanish_order,
        d_vanish_ok=d_vanish_ok,
        sw_vanish_ok=sw_vanish_ok,
        congruence_ok=d_vanish_ok and sw_vanish_ok and congruence_ok and residuals_ok,
        residuals_ok=residuals_ok,
        corollary_residuals=tuple(residual_rows),
        donaldson_series=d_poly,
        sw_series=s_poly,
    )
