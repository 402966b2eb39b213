"""Synthetic manifest generation.

The emitted Seiberg-Witten data is synthetic: it is chosen to satisfy the
structural invariants the loader checks (characteristic classes, square
congruences, nonnegative moduli dimensions), not to be the invariants of
any particular smooth manifold.
"""

from __future__ import annotations

from .errors import ValidationError

# Cartan matrix of E8, Bourbaki node numbering: chain 1-3-4-5-6-7-8 with
# node 2 attached to node 4.  Negated below to get the negative-definite
# even unimodular block.
_E8_EDGES = ((1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4))


def _minus_e8_gram():
    gram = [[0] * 8 for _ in range(8)]
    for i in range(8):
        gram[i][i] = -2
    for a, b in _E8_EDGES:
        gram[a - 1][b - 1] = 1
        gram[b - 1][a - 1] = 1
    return gram


def _hyperbolic_block(gram, at):
    gram[at][at + 1] = 1
    gram[at + 1][at] = 1


def en_like_manifest(n):
    """Elliptic-surface-like data: chi = 12n, sigma = -8n, two opposite
    basic classes of square zero with opposite invariants, and a leading
    hyperbolic block for searches orthogonal to them."""
    if n < 2:
        raise ValidationError("en_like requires n >= 2")
    b2_plus = 2 * n - 1
    b2_minus = 10 * n - 1
    rank = b2_plus + b2_minus
    gram = [[0] * rank for _ in range(rank)]
    _hyperbolic_block(gram, 0)
    for i in range(2, 2 * n):
        gram[i][i] = 1
    for i in range(2 * n, rank):
        gram[i][i] = -1
    # K = (0,0 | n threes, n-2 ones | all ones): square (9n + n - 2) - (10n - 2) = 0
    k = [0, 0] + [3] * n + [1] * (n - 2) + [1] * (10 * n - 2)
    w2 = [c % 2 for c in k]
    return {
        "name": f"fixture:en_like({n})",
        "b1": 0,
        "b2_plus": b2_plus,
        "b2_minus": b2_minus,
        "gram": gram,
        "w2": w2,
        "basic_classes": [
            {"c1": k, "sw": -1},
            {"c1": [-c for c in k], "sw": 1},
        ],
        "simple_type": True,
        "effective": True,
    }


def en_like_lambda(n):
    """A class of square 2 - (chi + sigma) in the leading hyperbolic block,
    orthogonal to the basic classes of en_like_manifest(n)."""
    rank = 12 * n - 2
    lam = [0] * rank
    lam[0] = 1
    lam[1] = 1 - 2 * n
    return lam


def k3_like_manifest():
    """Even unimodular data of signature (3,19) with the zero class as the
    single basic class."""
    rank = 22
    gram = [[0] * rank for _ in range(rank)]
    for at in (0, 2, 4):
        _hyperbolic_block(gram, at)
    e8 = _minus_e8_gram()
    for block in (6, 14):
        for i in range(8):
            for j in range(8):
                gram[block + i][block + j] = e8[i][j]
    return {
        "name": "fixture:k3_like",
        "b1": 0,
        "b2_plus": 3,
        "b2_minus": 19,
        "gram": gram,
        "w2": [0] * rank,
        "basic_classes": [{"c1": [0] * rank, "sw": 1}],
        "simple_type": True,
        "effective": True,
    }


def empty_manifest():
    """Minimal b2+ = 1 data with no basic classes at all."""
    return {
        "name": "fixture:empty",
        "b1": 0,
        "b2_plus": 1,
        "b2_minus": 1,
        "gram": [[0, 1], [1, 0]],
        "w2": [0, 0],
        "basic_classes": [],
        "simple_type": True,
        "effective": True,
    }


def asymmetric_manifest():
    """en_like(3) geometry with sign-symmetric invariants, deliberately
    violating the signed power-sum relations at degree zero."""
    m = en_like_manifest(3)
    m["name"] = "fixture:asymmetric"
    m["basic_classes"][0]["sw"] = 1
    m["basic_classes"][1]["sw"] = 1
    return m


def gen_fixture(kind, n=None):
    if kind == "empty":
        return empty_manifest()
    if kind == "k3_like":
        return k3_like_manifest()
    if kind == "en_like":
        if n is None:
            raise ValidationError("en_like requires --n")
        return en_like_manifest(n)
    if kind == "asymmetric":
        return asymmetric_manifest()
    raise ValidationError(f"unknown fixture kind: {kind}")
