"""Manifest and request ingestion with located validation errors.

Every rejection names the first failing constraint together with a
JSON-pointer-style path into the offending document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .invariants import (
    BasicClassEntry,
    ManifoldData,
    MonomialZ,
    SpinUData,
    make_manifold,
    simple_type_check,
)
from .lattice import CohClass, IntegralLattice, Mod2Class

MANIFEST_KEYS = (
    "name",
    "b1",
    "b2_plus",
    "b2_minus",
    "gram",
    "w2",
    "basic_classes",
    "simple_type",
    "effective",
)
BASIC_KEYS = ("c1", "sw", "sw_higher")
REQUEST_KEYS = (
    "w",
    "lambda",
    "p1",
    "z",
    "h_pd",
    "period_point",
    "truncation",
    "method",
)
Z_KEYS = ("delta0", "delta1", "delta2", "theta_tag", "contains_h3")


def frac_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s, path=""):
    try:
        if isinstance(s, int):
            return Fraction(s)
        if isinstance(s, str):
            if "/" in s:
                p, q = s.split("/")
                return Fraction(int(p), int(q))
            return Fraction(int(s))
    except (ValueError, ZeroDivisionError):
        pass
    raise ValidationError("expected a rational 'p/q' string or integer", path)


def _require_int(value, path):
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError("expected an integer", path)
    return value


def _require_bool(value, path):
    if not isinstance(value, bool):
        raise ValidationError("expected a boolean", path)
    return value


def _int_vector(value, path):
    if not isinstance(value, list):
        raise ValidationError("expected a list of integers", path)
    return [_require_int(v, f"{path}/{i}") for i, v in enumerate(value)]


@dataclass(frozen=True)
class ManifestBundle:
    name: str
    simple_type: bool
    manifold: ManifoldData
    raw: dict


def load_manifest_data(data):
    if not isinstance(data, dict):
        raise ValidationError("manifest must be a JSON object", "/")
    for key in data:
        if key not in MANIFEST_KEYS:
            raise ValidationError("unknown manifest key", f"/{key}")
    for key in MANIFEST_KEYS:
        if key == "sw_higher":
            continue
        if key not in data:
            raise ValidationError("missing manifest key", f"/{key}")
    name = data["name"]
    if not isinstance(name, str):
        raise ValidationError("expected a string", "/name")
    b1 = _require_int(data["b1"], "/b1")
    b2_plus = _require_int(data["b2_plus"], "/b2_plus")
    b2_minus = _require_int(data["b2_minus"], "/b2_minus")
    gram = data["gram"]
    if not isinstance(gram, list) or not gram:
        raise ValidationError("expected a nonempty integer matrix", "/gram")
    gram_rows = [_int_vector(row, f"/gram/{i}") for i, row in enumerate(gram)]
    try:
        lattice = IntegralLattice(
            rank=len(gram_rows),
            gram=tuple(tuple(r) for r in gram_rows),
            sig_plus=b2_plus,
            sig_minus=b2_minus,
        )
    except ValidationError as exc:
        raise ValidationError(str(exc), "/gram") from None
    w2_bits = _int_vector(data["w2"], "/w2")
    if any(b not in (0, 1) for b in w2_bits):
        raise ValidationError("bits must be 0 or 1", "/w2")
    w2 = Mod2Class(tuple(w2_bits))
    if not isinstance(data["basic_classes"], list):
        raise ValidationError("expected a list", "/basic_classes")
    entries = []
    for i, raw_entry in enumerate(data["basic_classes"]):
        where = f"/basic_classes/{i}"
        if not isinstance(raw_entry, dict):
            raise ValidationError("expected an object", where)
        for key in raw_entry:
            if key not in BASIC_KEYS:
                raise ValidationError("unknown key", f"{where}/{key}")
        if "c1" not in raw_entry or "sw" not in raw_entry:
            raise ValidationError("entry needs c1 and sw", where)
        c1 = CohClass(tuple(_int_vector(raw_entry["c1"], f"{where}/c1")))
        sw = _require_int(raw_entry["sw"], f"{where}/sw")
        sw_higher = {}
        for key, val in (raw_entry.get("sw_higher") or {}).items():
            kpath = f"{where}/sw_higher/{key}"
            parts = key.split(":", 1)
            if len(parts) != 2:
                raise ValidationError("keys must look like 'd:theta_tag'", kpath)
            try:
                d = int(parts[0])
            except ValueError:
                raise ValidationError("x-power must be an integer", kpath) from None
            sw_higher[(d, parts[1])] = _require_int(val, kpath)
        entries.append(BasicClassEntry(c1=c1, sw=sw, sw_higher=sw_higher))
    simple_type = _require_bool(data["simple_type"], "/simple_type")
    effective = _require_bool(data["effective"], "/effective")
    try:
        manifold = make_manifold(
            b1=b1,
            b2_plus=b2_plus,
            b2_minus=b2_minus,
            lattice_=lattice,
            w2=w2,
            basic_classes=entries,
            effective=effective,
            h1_cup_trivial=True,
        )
    except ValidationError as exc:
        raise ValidationError(str(exc), "/") from None
    if b1 == 0:
        if simple_type != simple_type_check(manifold):
            raise ValidationError(
                "claim disagrees with the basic-class squares", "/simple_type"
            )
    elif simple_type:
        raise ValidationError(
            "simple type is only defined when b1 = 0", "/simple_type"
        )
    return ManifestBundle(
        name=name, simple_type=simple_type, manifold=manifold, raw=data
    )


def load_manifest(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read manifest: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"manifest is not valid JSON: {exc}") from None
    return load_manifest_data(data)


@dataclass(frozen=True)
class RequestData:
    w: CohClass
    lam: CohClass
    p1: object  # int or None
    z: MonomialZ
    h_pd: tuple
    period_point: object  # tuple or None
    truncation: int
    method: str
    raw: dict


def load_request_data(data, rank):
    if not isinstance(data, dict):
        raise ValidationError("request must be a JSON object", "/")
    for key in data:
        if key not in REQUEST_KEYS:
            raise ValidationError("unknown request key", f"/{key}")
    for key in ("w", "lambda", "z", "h_pd"):
        if key not in data:
            raise ValidationError("missing request key", f"/{key}")
    w = CohClass(tuple(_int_vector(data["w"], "/w")))
    lam = CohClass(tuple(_int_vector(data["lambda"], "/lambda")))
    if len(w) != rank or len(lam) != rank:
        raise ValidationError(f"w and lambda must have length {rank}", "/w")
    p1 = data.get("p1")
    if p1 is not None:
        p1 = _require_int(p1, "/p1")
    zd = data["z"]
    if not isinstance(zd, dict):
        raise ValidationError("expected an object", "/z")
    for key in zd:
        if key not in Z_KEYS:
            raise ValidationError("unknown key", f"/z/{key}")
    z = MonomialZ(
        delta0=_require_int(zd.get("delta0", 0), "/z/delta0"),
        delta1=_require_int(zd.get("delta1", 0), "/z/delta1"),
        delta2=_require_int(zd.get("delta2", 0), "/z/delta2"),
        theta_tag=zd.get("theta_tag", ""),
        contains_h3=_require_bool(zd.get("contains_h3", False), "/z/contains_h3")
        if "contains_h3" in zd
        else False,
    )
    if not isinstance(z.theta_tag, str):
        raise ValidationError("expected a string", "/z/theta_tag")
    if not isinstance(data["h_pd"], list) or len(data["h_pd"]) != rank:
        raise ValidationError(f"expected a list of {rank} rationals", "/h_pd")
    h_pd = tuple(
        parse_rational(v, f"/h_pd/{i}") for i, v in enumerate(data["h_pd"])
    )
    period_point = None
    if data.get("period_point") is not None:
        pp = data["period_point"]
        if not isinstance(pp, list) or len(pp) != rank:
            raise ValidationError(
                f"expected a list of {rank} rationals", "/period_point"
            )
        period_point = tuple(
            parse_rational(v, f"/period_point/{i}") for i, v in enumerate(pp)
        )
    truncation = _require_int(data.get("truncation", 0), "/truncation")
    if truncation < 0:
        raise ValidationError("truncation must be a natural number", "/truncation")
    method = data.get("method", "both")
    if method not in ("closed", "direct", "both"):
        raise ValidationError("method must be closed, direct, or both", "/method")
    return RequestData(
        w=w,
        lam=lam,
        p1=p1,
        z=z,
        h_pd=h_pd,
        period_point=period_point,
        truncation=truncation,
        method=method,
        raw=data,
    )


def load_request(path, rank):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read request: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"request is not valid JSON: {exc}") from None
    return load_request_data(data, rank)
