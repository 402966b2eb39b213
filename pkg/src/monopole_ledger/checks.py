"""Grid sweeps and randomized route-equivalence suites.

Each suite returns a list of PropertyResult rows; a suite passes when
every row does.  All randomness is seeded, so suite output is
deterministic run to run.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from . import fixtures
from .combinatorics import (
    JacobiParams,
    gen_binomial,
    hypergeom_terminating,
    jacobi_standard,
    link_constant_closed,
    link_constant_direct,
    pochhammer,
)
from .errors import DegenerateParameterError, ValidationError
from .invariants import (
    BasicClassEntry,
    MonomialZ,
    SpinUData,
    blowup_pairing_pair,
    blowup_transform,
    dimension_report,
    donaldson_blowup_route,
    donaldson_invariant,
    link_pairing,
    make_manifold,
    normal_indices,
    sw_dimension,
    witten_compare,
    CaseLabel,
)
from .lattice import CohClass, IntegralLattice, Mod2Class, diagonal_lattice, square
from .powerseries import segre_classes, series_inverse, unit_binomial_power
from .cli_util import load_manifest_data

_SEED = 20260811


@dataclass
class PropertyResult:
    name: str
    passed: bool
    checked: int
    counterexample: str = ""


def _result(name, failures, checked):
    if failures:
        return PropertyResult(name, False, checked, failures[0])
    return PropertyResult(name, True, checked)


# ---------------------------------------------------------------------------
# identities suite


def check_identities(grid_bound=6):
    g = grid_bound
    results = []

    fails, n_checked = [], 0
    for a in range(-g, g + 1):
        for k in range(9):
            n_checked += 1
            lhs = pochhammer(a, k)
            rhs = (-1) ** k * pochhammer(1 - a - k, k)
            if lhs != rhs:
                fails.append(f"a={a}, k={k}")
    results.append(_result("pochhammer_reflection", fails, n_checked))

    fails, n_checked = [], 0
    for a in range(-g, g + 1):
        for k in range(9):
            n_checked += 1
            if gen_binomial(a, k) != (-1) ** k * pochhammer(-a, k) / factorial(k):
                fails.append(f"a={a}, k={k}")
    results.append(_result("binomial_pochhammer", fails, n_checked))

    fails, n_checked = [], 0
    for a in range(-g, g + 1):
        for n in range(9):
            for k in range(n + 1):
                den = pochhammer(1 - a - n, k)
                if den == 0:
                    continue
                n_checked += 1
                if pochhammer(a, n - k) != (-1) ** k * pochhammer(a, n) / den:
                    fails.append(f"a={a}, n={n}, k={k}")
    results.append(_result("pochhammer_tail", fails, n_checked))

    fails, n_checked = [], 0
    for n in range(9):
        for k in range(n + 1):
            n_checked += 1
            if factorial(n - k) != factorial(n) / ((-1) ** k * pochhammer(-n, k)):
                fails.append(f"n={n}, k={k}")
    results.append(_result("factorial_pochhammer", fails, n_checked))

    fails, n_checked = [], 0
    for a in range(-g, g + 1):
        for b in range(-g, g + 1):
            for u in range(11):
                n_checked += 1
                lhs = sum(
                    gen_binomial(a, i) * gen_binomial(b, u - i)
                    for i in range(u + 1)
                )
                if lhs != gen_binomial(a + b, u):
                    fails.append(f"a={a}, b={b}, u={u}")
    results.append(_result("vandermonde_convolution", fails, n_checked))

    fails, n_checked = [], 0
    for ns1 in range(-g, g + 1):
        for ns2 in range(-g, g + 1):
            for delta_p in range(11):
                for d in range(9):
                    n_checked += 1
                    if link_constant_direct(
                        ns2, ns1, delta_p, d
                    ) != link_constant_closed(ns2, ns1, delta_p, d):
                        fails.append(
                            f"ns1={ns1}, ns2={ns2}, delta_p={delta_p}, d={d}"
                        )
    results.append(_result("link_constant_master_oracle", fails, n_checked))

    results.extend(_check_function_relations())
    return results


def _check_function_relations():
    results = []
    xis = (Fraction(0), Fraction(1, 2), Fraction(-1, 2), Fraction(2))

    fails, n_checked = [], 0
    for b in range(-5, 6):
        for c in range(-5, 6):
            for n in range(7):
                for xi in xis:
                    if xi == 0:
                        continue
                    cn = pochhammer(c, n)
                    if cn == 0:
                        continue
                    try:
                        lhs = hypergeom_terminating(n, b, c, xi)
                        inner = hypergeom_terminating(
                            n, 1 - n - c, 1 - n - b, 1 / xi
                        )
                    except DegenerateParameterError:
                        continue
                    n_checked += 1
                    rhs = pochhammer(b, n) * (-1) ** n * xi**n / cn * inner
                    if lhs != rhs:
                        fails.append(f"n={n}, b={b}, c={c}, xi={xi}")
    results.append(_result("hypergeom_argument_inversion", fails, n_checked))

    fails, n_checked = [], 0
    for a in range(-5, 6):
        for b in range(-5, 6):
            for n in range(7):
                for xi in xis:
                    try:
                        f_val = hypergeom_terminating(
                            n, n + a + b + 1, b + 1, (1 + xi) / 2
                        )
                    except DegenerateParameterError:
                        continue
                    n_checked += 1
                    lhs = jacobi_standard(JacobiParams(a, b, n, xi))
                    rhs = (
                        (-1) ** n
                        * pochhammer(b + 1, n)
                        / factorial(n)
                        * f_val
                    )
                    if lhs != rhs:
                        fails.append(f"a={a}, b={b}, n={n}, xi={xi}")
    results.append(_result("jacobi_hypergeom_relation", fails, n_checked))
    return results


# ---------------------------------------------------------------------------
# segre suite


def _segre_literal_from_one(ns1, ns2, i):
    # the displayed sum starting at j = 1; kept only to demonstrate it fails
    return Fraction(
        sum(
            2**j * gen_binomial(-ns1, j) * gen_binomial(-ns2, i - j)
            for j in range(1, i + 1)
        )
    )


def check_segre(grid_bound=6):
    g = grid_bound
    results = []

    fails, n_checked = [], 0
    for ns1 in range(-g, g + 1):
        for ns2 in range(-g, g + 1):
            n_checked += 1
            closed = segre_classes(ns1, ns2, 8)  # raises on internal mismatch
            chern = unit_binomial_power(2, ns1, 8) * unit_binomial_power(1, ns2, 8)
            if tuple(closed) != series_inverse(chern).coeffs:
                fails.append(f"ns1={ns1}, ns2={ns2}")
    results.append(_result("segre_closed_equals_inversion", fails, n_checked))

    true_s1 = segre_classes(0, 1, 1)[1]
    literal = _segre_literal_from_one(0, 1, 1)
    results.append(
        _result(
            "segre_literal_j_from_one_fails_at_(0,1,1)",
            [] if literal != true_s1 else [f"literal={literal} equals true={true_s1}"],
            1,
        )
    )
    return results


# ---------------------------------------------------------------------------
# randomized pairing fixtures


def _random_characteristic_lattice(rng):
    kind = rng.choice(("diag", "hyp"))
    if kind == "diag":
        p = rng.randint(1, 2)
        m = rng.randint(1, 3)
        L = diagonal_lattice(p, m)
        k = [rng.choice((-3, -1, 1, 3)) for _ in range(L.rank)]
        return L, CohClass(k), p, m
    p = rng.randint(1, 2)
    m = rng.randint(1, 2)
    rank = 2 + p + m
    gram = [[0] * rank for _ in range(rank)]
    gram[0][1] = gram[1][0] = 1
    for i in range(2, 2 + p):
        gram[i][i] = 1
    for i in range(2 + p, rank):
        gram[i][i] = -1
    L = IntegralLattice(rank, tuple(tuple(r) for r in gram), 1 + p, 1 + m)
    k = [rng.choice((-2, 0, 2)), rng.choice((-2, 0, 2))] + [
        rng.choice((-3, -1, 1, 3)) for _ in range(rank - 2)
    ]
    return L, CohClass(k), 1 + p, 1 + m


def random_pairing_fixture(rng):
    """A random valid level-zero pairing instance: manifold, spin-u datum,
    monomial, delta_c, and a rational h vector."""
    while True:
        L, K, b2p, b2m = _random_characteristic_lattice(rng)
        b1 = rng.choice((0, 2))
        chi = 2 - 2 * b1 + L.rank
        sigma = b2p - b2m
        num = square(L, K) - 2 * chi - 3 * sigma
        if num % 4 != 0 or not (0 <= num // 4 <= 8):
            continue
        d_s = num // 4
        lam = CohClass([rng.randint(-2, 2) for _ in range(L.rank)])
        if square(L, lam) % 2 != 0:
            continue
        p1 = square(L, lam - K)
        t = SpinUData(
            lam=lam,
            p1=p1,
            w=lam + K + CohClass([2 * rng.randint(-1, 1) for _ in range(L.rank)]),
        )
        ni_num = square(L, lam.scale(2) - K) - sigma
        if ni_num % 8 != 0:
            continue
        ns1 = -square(L, lam - K) - (chi + sigma) // 2
        ns2 = ni_num // 8
        budget = d_s + 2 * (ns1 + ns2) - 2
        if budget < 0 or budget > 30:
            continue
        delta1_opts = [
            v
            for v in (d_s % 2, d_s % 2 + 2)
            if v <= b1 and 3 * v <= budget
        ]
        if not delta1_opts:
            continue
        delta1 = rng.choice(delta1_opts)
        delta0_opts = [v for v in (0, 1) if 4 * v + 3 * delta1 <= budget]
        delta0 = rng.choice(delta0_opts)
        rest = budget - 4 * delta0 - 3 * delta1
        if rest % 2 != 0:
            continue
        delta2 = rng.randint(0, rest // 2)
        delta_c = rest // 2 - delta2
        tag = "t" if delta1 > 0 else ""
        sw_higher = {}
        if delta1 > 0 and delta1 <= d_s:
            sw_higher[((d_s - delta1) // 2, tag)] = rng.choice((-2, -1, 1, 2))
        entry = BasicClassEntry(
            c1=K, sw=rng.choice((-2, -1, 1, 2)), sw_higher=sw_higher
        )
        try:
            X = make_manifold(
                b1, b2p, b2m, L, K.mod2(), (entry,), effective=True
            )
        except ValidationError:
            continue
        z = MonomialZ(delta0, delta1, delta2, theta_tag=tag)
        h = [Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(L.rank)]
        return X, t, z, delta_c, h


def check_pairing(count=200, seed=_SEED):
    rng = random.Random(seed)
    fails = []
    for i in range(count):
        X, t, z, delta_c, h = random_pairing_fixture(rng)
        K = X.basic_classes[0].c1
        direct = link_pairing(X, t, K, z, delta_c, h, method="direct")
        closed = link_pairing(X, t, K, z, delta_c, h, method="closed")
        both = link_pairing(X, t, K, z, delta_c, h, method="both")
        if not (direct == closed == both):
            fails.append(
                f"fixture {i}: direct={direct}, closed={closed}"
            )
    return [_result("link_pairing_direct_equals_closed", fails, count)]


# ---------------------------------------------------------------------------
# blow-up suite


def _en_like_loaded(n):
    bundle = load_manifest_data(fixtures.en_like_manifest(n))
    return bundle.manifold


def check_blowup():
    results = []
    dim_fails, dim_checked = [], 0
    const_fails, const_checked = [], 0
    route_fails, route_checked = [], 0

    for n in (2, 3, 4):
        X = _en_like_loaded(n)
        K = X.basic_classes[0].c1
        for k in (0, 1, 2, 3):
            lam = CohClass(
                [1, -(n + k + 3)] + [0] * (X.lattice.rank - 2)
            )
            t = SpinUData(lam=lam, p1=square(X.lattice, lam - K), w=lam + K)
            bl = blowup_transform(X, t)
            up, down = bl.class_map[0][1]

            for Kb in (up, down):
                dim_checked += 1
                if sw_dimension(bl.manifold, Kb) != sw_dimension(X, K):
                    dim_fails.append(f"n={n}, k={k}, class {list(Kb.coords)}")

            ni = normal_indices(X, t, K)
            ni_up = normal_indices(bl.manifold, bl.spinu, up)
            ni_down = normal_indices(bl.manifold, bl.spinu, down)
            const_checked += 1
            if not (
                ni_up.ns1 == ni.ns1 + 1
                and ni_up.ns2 == ni.ns2
                and ni_down.ns1 == ni.ns1 + 1
                and ni_down.ns2 == ni.ns2
            ):
                const_fails.append(f"n={n}, k={k}: index shift wrong")

            z = MonomialZ(0, 0, k + 1)
            rep = dimension_report(X, t)
            delta_c = (rep.d_a + 2 * rep.n_a - 2 - z.degree) // 2
            h = [Fraction(1)] * 2 + [Fraction(1, 2)] * (X.lattice.rank - 2)
            route_checked += 1
            try:
                val = blowup_pairing_pair(X, t, K, z, delta_c, k, h, method="both")
                if k % 2 == 1 and val != 0:
                    route_fails.append(f"n={n}, k={k}: odd k gave {val}")
            except Exception as exc:  # noqa: BLE001 - report, do not abort suite
                route_fails.append(f"n={n}, k={k}: {exc}")

    # argument-level invariance of the link constant under the index shift
    for ns1 in range(-4, 5):
        for ns2 in range(-4, 5):
            for delta_p in range(7):
                for d in range(5):
                    const_checked += 1
                    if link_constant_closed(
                        ns2, ns1 + 1, delta_p + 1, d
                    ) != link_constant_closed(ns2, ns1, delta_p, d):
                        const_fails.append(
                            f"shift ns1={ns1}, ns2={ns2}, delta_p={delta_p}, d={d}"
                        )

    results.append(_result("blowup_moduli_dimension_preserved", dim_fails, dim_checked))
    results.append(_result("blowup_constant_invariance", const_fails, const_checked))
    results.append(_result("blowup_pair_route_equivalence", route_fails, route_checked))
    return results


# ---------------------------------------------------------------------------
# theorem route cross-check and series comparison


def _en_like_spinu(X, n, deg):
    from .invariants import derive_p1

    lam = CohClass(fixtures.en_like_lambda(n))
    K = X.basic_classes[0].c1
    return SpinUData(lam=lam, p1=derive_p1(X, deg), w=lam + K)


def check_theorem_routes(h_count=20, seed=_SEED):
    rng = random.Random(seed)
    fails, checked = [], 0
    for n in (2, 3, 4):
        X = _en_like_loaded(n)
        zs = [MonomialZ(0, 0, n - 2)]
        if n == 4:
            zs.append(MonomialZ(1, 0, 0))
        for z in zs:
            t = _en_like_spinu(X, n, z.degree)
            for _ in range(h_count):
                h = [
                    Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                    for _ in range(X.lattice.rank)
                ]
                res = donaldson_invariant(X, t, z, h, method="both")
                route = donaldson_blowup_route(X, t, z, h, method="direct")
                checked += 1
                if res.case is not CaseLabel.AT_R or res.value != route:
                    fails.append(
                        f"n={n}, z=({z.delta0},{z.delta1},{z.delta2}): "
                        f"main {res.case.value} {res.value} vs blow-up {route}"
                    )
    return [_result("donaldson_main_equals_blowup_route", fails, checked)]


def check_witten():
    results = []

    X = _en_like_loaded(3)
    t = _en_like_spinu(X, 3, 2)
    rep = witten_compare(X, t, 3)
    ok = (
        rep.sw_vanish_ok
        and rep.d_vanish_ok
        and rep.congruence_ok
        and rep.residuals_ok
    )
    results.append(
        _result(
            "witten_congruence_en_like_3",
            [] if ok else [f"report: {rep}"],
            1,
        )
    )

    # no basic classes at all: both series vanish identically
    data = fixtures.en_like_manifest(3)
    data["basic_classes"] = []
    data["name"] = "fixture:en_like(3)-empty"
    X0 = load_manifest_data(data).manifold
    K = CohClass([0, 0] + [3] * 3 + [1] * 1 + [1] * 28)
    lam = CohClass(fixtures.en_like_lambda(3))
    t0 = SpinUData(lam=lam, p1=-10, w=lam + K)
    rep0 = witten_compare(X0, t0, 3)
    ok0 = rep0.congruence_ok and rep0.sw_series.is_zero()
    results.append(
        _result("witten_congruence_empty_class_set", [] if ok0 else [f"{rep0}"], 1)
    )

    Xa = load_manifest_data(fixtures.asymmetric_manifest()).manifold
    ta = _en_like_spinu(Xa, 3, 2)
    repa = witten_compare(Xa, ta, 3)
    bad_found = (not repa.congruence_ok) and any(
        d == 0 and not ok for d, ok, _ in repa.corollary_residuals
    )
    results.append(
        _result(
            "witten_detects_violated_power_sums",
            [] if bad_found else [f"{repa}"],
            1,
        )
    )
    return results


SUITES = {
    "identities": lambda grid_bound=6: check_identities(grid_bound),
    "segre": lambda grid_bound=6: check_segre(grid_bound),
    "pairing": lambda grid_bound=6: check_pairing(),
    "blowup": lambda grid_bound=6: check_blowup(),
    "witten": lambda grid_bound=6: check_witten(),
}


def run_suite(name, grid_bound=6):
    if name not in SUITES:
        raise ValidationError(
            f"unknown suite: {name}; choose from {sorted(SUITES)}"
        )
    return SUITES[name](grid_bound=grid_bound)
