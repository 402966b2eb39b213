"""Truncated exact polynomial and power-series arithmetic.

TruncatedMultiPoly is the sparse multivariate carrier for generating
series in the coordinates of the Poincare dual of a degree-2 homology
class; TruncatedUniSeries is the short dense carrier for total Chern and
Segre classes in a single nilpotent generator.  All coefficients are
Fractions and every operation truncates above the degree cap.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .combinatorics import gen_binomial
from .errors import OracleMismatchError, ValidationError


class TruncatedMultiPoly:
    """Degree-capped multivariate polynomial with exact coefficients.

    Immutable by convention: no method mutates self, and term maps are
    copied on construction.  Zero coefficients are never stored.
    """

    __slots__ = ("num_vars", "cap", "terms")

    def __init__(self, num_vars, cap, terms=None):
        if num_vars < 0 or cap < 0:
            raise ValidationError("num_vars and cap must be natural numbers")
        self.num_vars = num_vars
        self.cap = cap
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != num_vars:
                raise ValidationError("exponent vector length mismatch")
            if any(e < 0 for e in exps):
                raise ValidationError("negative exponent")
            if sum(exps) > cap:
                continue
            coeff = Fraction(coeff)
            if coeff:
                clean[exps] = coeff
        self.terms = clean

    @classmethod
    def zero(cls, num_vars, cap):
        return cls(num_vars, cap, {})

    @classmethod
    def constant(cls, num_vars, cap, value):
        return cls(num_vars, cap, {(0,) * num_vars: Fraction(value)})

    @classmethod
    def one(cls, num_vars, cap):
        return cls.constant(num_vars, cap, 1)

    @classmethod
    def linear(cls, cap, coeffs):
        """The linear form sum_i coeffs[i] x_i."""
        n = len(coeffs)
        terms = {}
        for i, c in enumerate(coeffs):
            if c:
                e = [0] * n
                e[i] = 1
                terms[tuple(e)] = Fraction(c)
        return cls(n, cap, terms)

    def _check_shape(self, other):
        if self.num_vars != other.num_vars or self.cap != other.cap:
            raise ValidationError("polynomial shape mismatch (num_vars/cap)")

    def coefficient(self, exps):
        return self.terms.get(tuple(exps), Fraction(0))

    def constant_term(self):
        return self.coefficient((0,) * self.num_vars)

    def is_zero(self):
        return not self.terms

    def min_total_degree(self):
        """Order of vanishing; None for the zero polynomial."""
        if not self.terms:
            return None
        return min(sum(e) for e in self.terms)

    def homogeneous_part(self, degree):
        return TruncatedMultiPoly(
            self.num_vars,
            self.cap,
            {e: c for e, c in self.terms.items() if sum(e) == degree},
        )

    def __add__(self, other):
        self._check_shape(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return TruncatedMultiPoly(self.num_vars, self.cap, out)

    def __neg__(self):
        return TruncatedMultiPoly(
            self.num_vars, self.cap, {e: -c for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        return self + (-other)

    def scale(self, value):
        value = Fraction(value)
        if not value:
            return TruncatedMultiPoly.zero(self.num_vars, self.cap)
        return TruncatedMultiPoly(
            self.num_vars, self.cap, {e: c * value for e, c in self.terms.items()}
        )

    def __mul__(self, other):
        self._check_shape(other)
        out = {}
        cap = self.cap
        for e1, c1 in self.terms.items():
            d1 = sum(e1)
            for e2, c2 in other.terms.items():
                if d1 + sum(e2) > cap:
                    continue
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return TruncatedMultiPoly(self.num_vars, self.cap, out)

    def __pow__(self, n):
        if n < 0:
            raise ValidationError("negative power of a polynomial")
        result = TruncatedMultiPoly.one(self.num_vars, self.cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedMultiPoly)
            and self.num_vars == other.num_vars
            and self.cap == other.cap
            and self.terms == other.terms
        )

    def __repr__(self):
        items = ", ".join(
            f"{e}:{c}" for e, c in sorted(self.terms.items())
        )
        return f"TruncatedMultiPoly(n={self.num_vars}, cap={self.cap}, {{{items}}})"

    def sorted_terms(self):
        return sorted(self.terms.items())

    def serialize(self):
        """Map from 'e1,e2,...' exponent strings to 'p/q' rational strings."""
        return {
            ",".join(str(e) for e in exps): f"{c.numerator}/{c.denominator}"
            for exps, c in self.sorted_terms()
        }

    @classmethod
    def parse(cls, num_vars, cap, data):
        terms = {}
        for key, val in data.items():
            exps = tuple(int(e) for e in key.split(",")) if key else ()
            p, q = val.split("/")
            terms[exps] = Fraction(int(p), int(q))
        return cls(num_vars, cap, terms)


def poly_mul(p, q):
    """Truncated product; commutative and associative below the cap."""
    return p * q


def poly_exp(p):
    """exp(p) = sum p^n / n! truncated at the cap; requires p(0) = 0."""
    if p.constant_term() != 0:
        raise ValidationError("poly_exp requires a zero constant term")
    result = TruncatedMultiPoly.one(p.num_vars, p.cap)
    power = TruncatedMultiPoly.one(p.num_vars, p.cap)
    for n in range(1, p.cap + 1):
        power = power * p
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(n)))
    return result


class TruncatedUniSeries:
    """Univariate series truncated at degree cap, dense coefficients."""

    __slots__ = ("cap", "coeffs")

    def __init__(self, cap, coeffs):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != cap + 1:
            raise ValidationError("coefficient vector must have length cap+1")
        self.cap = cap
        self.coeffs = coeffs

    @classmethod
    def one(cls, cap):
        return cls(cap, (Fraction(1),) + (Fraction(0),) * cap)

    def __mul__(self, other):
        if self.cap != other.cap:
            raise ValidationError("series cap mismatch")
        out = [Fraction(0)] * (self.cap + 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if i + j > self.cap:
                    break
                if b:
                    out[i + j] += a * b
        return TruncatedUniSeries(self.cap, out)

    def __eq__(self, other):
        return (
            isinstance(other, TruncatedUniSeries)
            and self.cap == other.cap
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"TruncatedUniSeries({list(self.coeffs)})"


def series_inverse(s):
    """The t with s*t = 1 up to the cap; requires unit constant term 1."""
    if s.coeffs[0] != 1:
        raise ValidationError("series_inverse requires constant coefficient 1")
    out = [Fraction(1)] + [Fraction(0)] * s.cap
    for k in range(1, s.cap + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            if s.coeffs[i]:
                acc += s.coeffs[i] * out[k - i]
        out[k] = -acc
    return TruncatedUniSeries(s.cap, out)


def unit_binomial_power(scalar, exponent, cap):
    """(1 + scalar*mu)^exponent as a truncated series, any integer exponent."""
    coeffs = [
        Fraction(gen_binomial(exponent, k)) * Fraction(scalar) ** k
        for k in range(cap + 1)
    ]
    return TruncatedUniSeries(cap, coeffs)


def segre_classes(ns1, ns2, imax):
    """Segre coefficients of (1+2mu)^-ns1 (1+mu)^-ns2, two routes.

    Closed form: s_i = sum_{j=0}^{i} 2^j binom(-ns1, j) binom(-ns2, i-j);
    the j = 0 term is required (dropping it fails already at
    (ns1, ns2, i) = (0, 1, 1)).  Oracle: invert the forward expansion of
    (1+2mu)^ns1 (1+mu)^ns2.  The two must agree exactly.
    """
    if imax < 0:
        raise ValidationError("imax must be a natural number")
    closed = [
        Fraction(
            sum(
                2**j * gen_binomial(-ns1, j) * gen_binomial(-ns2, i - j)
                for j in range(i + 1)
            )
        )
        for i in range(imax + 1)
    ]
    chern = unit_binomial_power(2, ns1, imax) * unit_binomial_power(1, ns2, imax)
    inverted = series_inverse(chern)
    if tuple(closed) != inverted.coeffs:
        raise OracleMismatchError(
            f"segre_classes({ns1},{ns2},{imax}): closed form {closed} "
            f"disagrees with series inversion {list(inverted.coeffs)}"
        )
    return closed
