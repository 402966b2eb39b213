"""Exact rational special-function kernel.

Pochhammer symbols, generalized binomials, Jacobi polynomials in the
Gradshteyn-Ryzhik normalization (with the 2^-n prefactor), terminating
hypergeometric sums, and the link-pairing constant computed by two
independent routes that must agree:

  direct:  sum_{u=0}^{d} 2^u binom(-ns2, d-u) binom(delta_p - ns1, u),
           itself cross-checked against the pre-Vandermonde double sum;
  closed:  (-2)^d P^{a,b}_d(0) with a = ns2 + ns1 - delta_p - 1 and
           b = delta_p - ns1 - d.

The closed route's Jacobi parameters follow the verifiable derivation
chain; the two displayed normalizations of the Jacobi constant in the
source material cannot both be literal, and the direct sum is the arbiter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import DegenerateParameterError, OracleMismatchError, ValidationError


def pochhammer(a, n):
    """Rising factorial a(a+1)...(a+n-1), with empty product 1."""
    if n < 0:
        raise ValidationError("pochhammer order must be a natural number")
    out = Fraction(1)
    for k in range(n):
        out *= Fraction(a) + k
    return out


def gen_binomial(a, k):
    """Binomial coefficient extended to arbitrary integer a.

    Equals (-1)^k (-a)_k / k!, an integer for integer a; matches the
    classical value for a >= k >= 0 and is 1 at k = 0 for every a.
    """
    if k < 0:
        raise ValidationError("binomial lower index must be a natural number")
    num = 1
    for j in range(k):
        num *= a - j
    q, r = divmod(num, factorial(k))
    if r != 0:
        raise OracleMismatchError(
            f"gen_binomial({a},{k}): falling factorial not divisible by {k}!"
        )
    return q


@dataclass(frozen=True)
class JacobiParams:
    a: int
    b: int
    n: int
    xi: Fraction


def jacobi_standard(p):
    """P^{a,b}_n(xi) = 2^-n sum_k binom(a+n, n-k) binom(n+b, k)
    (xi-1)^k (xi+1)^{n-k}, exact over Q."""
    if p.n < 0:
        raise ValidationError("jacobi degree must be a natural number")
    xi = Fraction(p.xi)
    total = Fraction(0)
    for k in range(p.n + 1):
        total += (
            gen_binomial(p.a + p.n, p.n - k)
            * gen_binomial(p.n + p.b, k)
            * (xi - 1) ** k
            * (xi + 1) ** (p.n - k)
        )
    return total / Fraction(2**p.n)


def hypergeom_terminating(neg_n, b, c, xi):
    """F(-n, b; c; xi) as the finite sum of n+1 terms
    sum_k (-n)_k (b)_k / ((c)_k k!) xi^k.

    Raises if (c)_k vanishes at an index whose numerator does not.
    """
    if neg_n < 0:
        raise ValidationError("termination order must be a natural number")
    b = Fraction(b)
    c = Fraction(c)
    xi = Fraction(xi)
    total = Fraction(0)
    num = Fraction(1)  # (-n)_k (b)_k
    den_c = Fraction(1)  # (c)_k
    xi_pow = Fraction(1)
    for k in range(neg_n + 1):
        if k > 0:
            num *= (Fraction(-neg_n) + k - 1) * (b + k - 1)
            den_c *= c + k - 1
            xi_pow *= xi
        if den_c == 0:
            if num != 0:
                raise DegenerateParameterError(
                    k, f"(c)_{k} = 0 with c = {c} in terminating hypergeometric sum"
                )
            continue
        total += num / (den_c * factorial(k)) * xi_pow
    return total


def _link_constant_double_sum(ns2, ns1, delta_p, d):
    """Pre-Vandermonde double sum over the Segre expansion indices."""
    total = 0
    for i in range(d + 1):
        bi = gen_binomial(delta_p, i)
        if bi == 0:
            continue
        for j in range(d - i + 1):
            total += (
                2 ** (i + j)
                * bi
                * gen_binomial(-ns1, j)
                * gen_binomial(-ns2, d - i - j)
            )
    return total


def link_constant_direct(ns2, ns1, delta_p, d):
    """Link-pairing constant as the Vandermonde-collapsed single sum.

    The unreduced double sum is recomputed as an internal oracle; any
    disagreement is a defect, never a user error.
    """
    if d < 0:
        raise ValidationError("link constant degree must be a natural number")
    total = 0
    for u in range(d + 1):
        total += 2**u * gen_binomial(-ns2, d - u) * gen_binomial(delta_p - ns1, u)
    double = _link_constant_double_sum(ns2, ns1, delta_p, d)
    if total != double:
        raise OracleMismatchError(
            "link constant single sum and double sum disagree at "
            f"(ns2={ns2}, ns1={ns1}, delta_p={delta_p}, d={d}): "
            f"{total} vs {double}"
        )
    return Fraction(total)


def link_constant_closed(ns2, ns1, delta_p, d):
    """Link-pairing constant via the Jacobi polynomial closed form."""
    if d < 0:
        raise ValidationError("link constant degree must be a natural number")
    a = ns2 + ns1 - delta_p - 1
    b = delta_p - ns1 - d
    return Fraction(-2) ** d * jacobi_standard(JacobiParams(a, b, d, Fraction(0)))
