"""JSON encoding of problem specs and results.

All rationals travel as [numerator, denominator] pairs; inputs also
accept plain integers and "p/q" strings.  Reports are deterministic:
canonical dumps sort keys and the timing field is excluded from the
determinism hash.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction

from .errors import SchemaError
from .geometry import PLFunction, Polytope, convex_hull
from .semigroups import GradedSemigroup
from .series import ExplicitSeries, LatticeSeries, MultigradedSeries
from .valuations import (
    CompositeValuation,
    LaurentPoly,
    MonomialValuation,
    flag_valuation,
)


def rational_from(value, pointer="/"):
    if isinstance(value, bool):
        raise SchemaError("boolean is not a rational", pointer)
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemaError(f"bad rational {value!r}: {exc}", pointer)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        try:
            return Fraction(int(value[0]), int(value[1]))
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise SchemaError(f"bad rational {value!r}: {exc}", pointer)
    raise SchemaError(f"expected rational, got {value!r}", pointer)


def rational_to(x) -> list:
    f = Fraction(x)
    return [f.numerator, f.denominator]


def point_from(value, pointer="/"):
    if not isinstance(value, (list, tuple)):
        raise SchemaError("expected a coordinate list", pointer)
    return tuple(rational_from(v, f"{pointer}/{i}") for i, v in enumerate(value))


def polytope_to(p: Polytope) -> dict:
    return {
        "dim": p.dim,
        "ambient_dim": p.ambient_dim,
        "vertices": [[rational_to(x) for x in v] for v in p.vertices],
        "halfspaces": [
            {"normal": [int(x) for x in a], "offset": rational_to(b)}
            for a, b in p.halfspaces
        ],
        "equations": [
            {"normal": [int(x) for x in a], "offset": rational_to(b)}
            for a, b in p.equations
        ],
    }


def polytope_from(obj, pointer="/") -> Polytope:
    if isinstance(obj, list):
        return convex_hull([point_from(v, pointer) for v in obj])
    if isinstance(obj, dict) and "vertices" in obj:
        return convex_hull(
            [point_from(v, f"{pointer}/vertices") for v in obj["vertices"]]
        )
    raise SchemaError("expected a polytope (vertex list)", pointer)


def pl_function_to(f: PLFunction) -> dict:
    return {
        "domain": polytope_to(f.domain),
        "cells": [[[rational_to(x) for x in v] for v in cell] for cell in f.cells],
        "affine_coeffs": [
            {"gradient": [rational_to(x) for x in g], "constant": rational_to(c)}
            for g, c in f.coeffs
        ],
        "concave": f.concave,
    }


def semigroup_from(obj, pointer="/") -> GradedSemigroup:
    if "generators" in obj:
        gens = []
        for i, row in enumerate(obj["generators"]):
            if not isinstance(row, (list, tuple)) or not row:
                raise SchemaError("generator must be [degree, payload...]", f"{pointer}/generators/{i}")
            d = row[0]
            if not isinstance(d, int):
                raise SchemaError("degree must be an integer", f"{pointer}/generators/{i}/0")
            payload = tuple(
                rational_from(x, f"{pointer}/generators/{i}/{j+1}")
                for j, x in enumerate(row[1:])
            )
            gens.append((d, payload))
        return GradedSemigroup.from_generators(gens)
    if "oracle" in obj:
        name = obj["oracle"]
        params = obj.get("params", {})
        if name == "series-values":
            from .valuations import value_semigroup

            series = series_from(params["series"], f"{pointer}/params/series")
            v = valuation_from(params["valuation"], f"{pointer}/params/valuation")
            return value_semigroup(series, v)
        if name == "rees":
            from .filtrations import ReesSemigroupSpec, rees_semigroup

            series = series_from(params["series"], f"{pointer}/params/series")
            v = valuation_from(params["valuation"], f"{pointer}/params/valuation")
            filt = filtration_from(params["filtration"], series, f"{pointer}/params/filtration")
            floor = rational_from(params.get("floor", 0), f"{pointer}/params/floor")
            return rees_semigroup(ReesSemigroupSpec(series, v, filt, floor))
        raise SchemaError(f"unknown oracle {name!r}", f"{pointer}/oracle")
    raise SchemaError("semigroup spec needs 'generators' or 'oracle'", pointer)


def valuation_from(obj, pointer="/"):
    kind = obj.get("type")
    if kind == "monomial":
        return MonomialValuation(obj["weights"])
    if kind == "flag":
        n = obj.get("chart")
        if not isinstance(n, int) or n < 0:
            raise SchemaError("flag spec needs integer 'chart' dimension", pointer)
        return flag_valuation(n)
    if kind == "composite":
        quotient = valuation_from(obj["quotient"], f"{pointer}/quotient")
        return CompositeValuation(obj["flag_vars"], quotient)
    raise SchemaError(f"unknown valuation type {kind!r}", pointer)


def series_from(obj, pointer="/"):
    if "toric_polytope" in obj:
        return LatticeSeries(
            polytope_from(obj["toric_polytope"], f"{pointer}/toric_polytope"),
            name=obj.get("name", ""),
        )
    if "explicit" in obj:
        bases = {}
        first = None
        for key, monomials in obj["explicit"].items():
            d = int(key)
            polys = [LaurentPoly.monomial(tuple(int(x) for x in alpha)) for alpha in monomials]
            bases[d] = polys
            if polys and first is None:
                first = polys[0].n
        return ExplicitSeries(first or 0, bases, name=obj.get("name", ""))
    if "multigrading" in obj:
        polys = tuple(
            polytope_from(p, f"{pointer}/multigrading/{i}")
            for i, p in enumerate(obj["multigrading"])
        )
        return MultigradedSeries(polys, name=obj.get("name", ""))
    raise SchemaError("series spec needs 'toric_polytope', 'explicit' or 'multigrading'", pointer)


def filtration_from(obj, series, pointer="/"):
    from .filtrations import (
        ExplicitLevelsFiltration,
        OrdDivisorFiltration,
    )

    kind = obj.get("type")
    if kind == "ord_divisor":
        return OrdDivisorFiltration(
            series,
            tuple(int(x) for x in obj["functional"]),
            int(obj.get("offset_per_degree", 0)),
            name=obj.get("name", "ord"),
        )
    if kind == "explicit_levels":
        levels = {}
        for d, per in obj["levels"].items():
            entry = {}
            for alpha, t in per.items():
                exps = json.loads(alpha) if isinstance(alpha, str) else alpha
                entry[tuple(int(x) for x in exps)] = rational_from(t, pointer)
            levels[int(d)] = entry
        return ExplicitLevelsFiltration(
            series, levels, denominator=int(obj.get("denominator", 1))
        )
    if kind == "rescale":
        base = filtration_from(obj["base"], series, f"{pointer}/base")
        return base.rescaled(rational_from(obj["a"], f"{pointer}/a"))
    raise SchemaError(f"unknown filtration type {kind!r}", pointer)


def encode_value(x):
    """Recursive canonical encoding of report values."""
    if isinstance(x, Fraction):
        return rational_to(x)
    if isinstance(x, Polytope):
        return polytope_to(x)
    if isinstance(x, PLFunction):
        return pl_function_to(x)
    if isinstance(x, dict):
        return {str(k): encode_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode_value(v) for v in x]
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    if isinstance(x, float):
        return x
    return repr(x)


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def determinism_hash(report: dict) -> str:
    body = {k: v for k, v in report.items() if k not in ("timing", "determinism_hash")}
    return hashlib.sha256(canonical_dumps(body).encode()).hexdigest()
