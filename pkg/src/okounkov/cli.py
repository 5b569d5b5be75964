"""Command-line entry point.

``okounkov run SPEC.json`` dispatches a problem spec to the right module
and writes a deterministic JSON report (optionally SVG figures);
``okounkov check`` runs the built-in theorem battery and the randomized
property suites; ``okounkov list-examples`` shows the shipped specs.

Exit codes: 0 success, 1 input error, 2 verdict-level mismatch (a theorem
check failed while the run itself succeeded).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import jsonio
from .errors import OkounkovError, ParseError, SchemaError

F = Fraction


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="okounkov",
        description="Exact Newton-Okounkov bodies of semigroups, series, "
        "filtrations and toric Seshadri problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a problem spec")
    run_p.add_argument("spec", help="path to the JSON problem spec")
    run_p.add_argument("--max-degree", type=int, default=None)
    run_p.add_argument("--grid", type=int, default=None, help="t-grid steps")
    run_p.add_argument("--svg", metavar="DIR", default=None)
    run_p.add_argument("--json", dest="json_out", metavar="OUT", default=None)
    run_p.add_argument("--seed", type=int, default=0)

    check_p = sub.add_parser("check", help="run the built-in theorem suite")
    check_p.add_argument("--max-degree", type=int, default=8)
    check_p.add_argument("--seed", type=int, default=0)
    check_p.add_argument("--json", dest="json_out", metavar="OUT", default=None)

    sub.add_parser("list-examples", help="list the shipped example specs")

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "check":
            return _cmd_check(args)
        return _cmd_list_examples()
    except (SchemaError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OkounkovError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _load_spec(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    try:
        spec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}")
    if not isinstance(spec, dict):
        raise SchemaError("spec must be a JSON object", "/")
    if "kind" not in spec:
        raise SchemaError("missing 'kind'", "/kind")
    if spec["kind"] not in ("semigroup", "series", "filtration", "seshadri", "check-suite"):
        raise SchemaError(f"unknown kind {spec['kind']!r}", "/kind")
    if spec["kind"] != "check-suite" and not isinstance(spec.get("payload"), dict):
        raise SchemaError("missing 'payload' object", "/payload")
    return spec


def _cmd_run(args) -> int:
    spec = _load_spec(args.spec)
    options = dict(spec.get("options", {}))
    if args.max_degree is not None:
        options["max_degree"] = args.max_degree
    if args.grid is not None:
        options["grid"] = args.grid
    options.setdefault("max_degree", 8)
    options.setdefault("seed", args.seed)

    started = time.perf_counter()
    kind = spec["kind"]
    if kind == "semigroup":
        report, ok, figures = _run_semigroup(spec["payload"], options)
    elif kind == "series":
        report, ok, figures = _run_series(spec["payload"], options)
    elif kind == "filtration":
        report, ok, figures = _run_filtration(spec["payload"], options)
    elif kind == "seshadri":
        report, ok, figures = _run_seshadri(spec["payload"], options)
    else:  # check-suite
        from .suites import theorem_checks

        results = theorem_checks(options["max_degree"], options["seed"])
        report = {"kind": kind, "results": results}
        ok = all(results.values())
        figures = {}

    report["inputs"] = spec
    report["options"] = {k: v for k, v in options.items()}
    report = jsonio.encode_value(report)
    report["determinism_hash"] = jsonio.determinism_hash(report)
    report["timing"] = {"seconds": round(time.perf_counter() - started, 6)}

    out = json.dumps(report, indent=2, sort_keys=True)
    if args.json_out:
        Path(args.json_out).write_text(out + "\n")
    else:
        print(out)
    if args.svg:
        svg_dir = Path(args.svg)
        svg_dir.mkdir(parents=True, exist_ok=True)
        for name, text in figures.items():
            (svg_dir / f"{name}.svg").write_text(text)
    return 0 if ok else 2


def _cmd_check(args) -> int:
    from .suites import theorem_checks

    results = theorem_checks(args.max_degree, args.seed)
    for name in sorted(results):
        status = "pass" if results[name] else "FAIL"
        print(f"{status}  {name}")
    if args.json_out:
        report = {"kind": "check-suite", "results": results}
        report["determinism_hash"] = jsonio.determinism_hash(report)
        Path(args.json_out).write_text(
            json.dumps(report, indent=2, sort_keys=True) + "\n"
        )
    return 0 if all(results.values()) else 2


def _cmd_list_examples() -> int:
    root = resources.files("okounkov._examples")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            spec = json.loads(entry.read_text())
            desc = spec.get("description", "")
            print(f"{entry.name:28s} {spec.get('kind', '?'):12s} {desc}")
    return 0


def example_path(name: str) -> Path:
    """Filesystem path of a shipped example spec (used by tests)."""
    root = resources.files("okounkov._examples")
    return Path(str(root / name))


# ---------------------------------------------------------------------------
# kind handlers


def _run_semigroup(payload, options):
    from .semigroups import growth_report

    sigma = jsonio.semigroup_from(payload.get("semigroup", payload), "/payload")
    d = options["max_degree"]
    if sigma.generators is None:
        body, flags = sigma.okounkov_body("truncated", d)
        report = {
            "kind": "semigroup",
            "presentation": "oracle",
            "body": body,
            "body_flags": flags,
            "hilbert": sigma.hilbert(d),
        }
        figures = {}
        if body is not None and body.ambient_dim <= 2:
            from .svg import polytope_svg

            figures["semigroup_body"] = polytope_svg(body)
        return report, True, figures
    rep = growth_report(sigma, d, checkpoints=[d])
    body = rep["body"]
    report = {
        "kind": "semigroup",
        "presentation": "generators",
        "rank": rep["rank"],
        "det1": rep["det1"],
        "volume": rep["volume"],
        "body": body,
        "hilbert": rep["hilbert"],
        "ratio_at_max_degree": rep["ratios"].get(d),
        "growth_rate_at_max_degree": rep["slopes"].get(d),
    }
    figures = {}
    if body is not None and body.ambient_dim <= 2:
        from .svg import polytope_svg

        figures["semigroup_body"] = polytope_svg(body)
    return report, True, figures


def _run_series(payload, options):
    from .series import LatticeSeries, series_body, volume_theorem_check

    series = jsonio.series_from(payload.get("series", payload), "/payload/series")
    v = jsonio.valuation_from(payload["valuation"], "/payload/valuation")
    d = options["max_degree"]
    sb = series_body(series, v, max_degree=d)
    report = {
        "kind": "series",
        "body": sb.body,
        "volume": sb.body.volume("euclidean"),
        "stabilized_at": sb.stabilized_at,
        "exact": sb.exact,
    }
    ok = True
    if isinstance(series, LatticeSeries):
        check = volume_theorem_check(series, v, max_degree=d)
        report["volume_theorem"] = {
            "vol_X": check["vol_X"],
            "n_factorial_vol_delta": check["n_factorial_vol_delta"],
            "equal": check["equal"],
        }
        ok = bool(check["equal"])
    figures = {}
    if sb.body.ambient_dim <= 3:
        from .svg import polytope_svg

        figures["series_body"] = polytope_svg(sb.body)
    return report, ok, figures


def _run_filtration(payload, options):
    from .filtrations import (
        ReesSemigroupSpec,
        bc_volume_check,
        filtered_body_slice_check,
        jumping_profile,
        transforms_agree_check,
    )

    series = jsonio.series_from(payload["series"], "/payload/series")
    v = jsonio.valuation_from(payload["valuation"], "/payload/valuation")
    filt = jsonio.filtration_from(payload["filtration"], series, "/payload/filtration")
    d = options["max_degree"]
    floor = F(0) if payload.get("floor", "zero") == "zero" else filt.e_min()
    spec = ReesSemigroupSpec(series, v, filt, floor)

    profiles = {}
    for deg in range(1, min(d, 5) + 1):
        prof = jumping_profile(filt, deg)
        profiles[deg] = {
            "levels": list(prof.levels),
            "mass": prof.mass,
            "mass_plus": prof.mass_plus,
        }
    slice_ts = [filt.e_min() + (filt.e_max() - filt.e_min()) * F(i, 4) for i in range(5)]
    slices = filtered_body_slice_check(spec, slice_ts, max_degree=d)
    agree = transforms_agree_check(filt, v, max_degree=d)
    bc = bc_volume_check(spec, max_degree=d, mass_degrees=(2 * d,))
    ok = bool(slices["all_equal"]) and bc["equal"]
    report = {
        "kind": "filtration",
        "e_min": filt.e_min(),
        "e_max": filt.e_max(),
        "jumping_profiles": profiles,
        "filtered_body": slices["body"].body,
        "slices_equal": slices["all_equal"],
        "transforms_gap": agree["gap"],
        "boucksom_chen": {
            "volume_filtered_body": bc["volume_filtered_body"],
            "slice_volume_integral": bc["slice_volume_integral"],
            "mass_sequence": bc["mass_sequence"],
            "equal": bc["equal"],
        },
    }
    figures = {}
    body = slices["body"].body
    if body.ambient_dim <= 3:
        from .svg import polytope_svg

        figures["filtered_body"] = polytope_svg(body)
    if agree["transform_I"].function.domain.ambient_dim == 1:
        from .svg import pl_function_svg

        figures["concave_transform"] = pl_function_svg(agree["transform_I"].function)
    return report, ok, figures


def _parse_surface(obj, pointer="/payload/surface"):
    from .seshadri import P2, P1xP1, ToricSurface, hirzebruch

    if obj == "P2":
        return P2()
    if obj == "P1xP1":
        return P1xP1()
    if isinstance(obj, str) and obj.startswith("F") and obj[1:].isdigit():
        return hirzebruch(int(obj[1:]))
    if isinstance(obj, dict) and "fan" in obj:
        return ToricSurface(tuple(tuple(int(x) for x in u) for u in obj["fan"]))
    raise SchemaError(f"unknown surface {obj!r}", pointer)


def _run_seshadri(payload, options):
    from .seshadri import (
        SeshadriProblem,
        rationality_verdict,
        restricted_volume_profile,
        subgraph_equals_body_check,
        thresholds,
    )

    surface = _parse_surface(payload["surface"])
    coeffs = tuple(
        jsonio.rational_from(c, "/payload/L") for c in payload["L"]
    )
    point = payload.get("point", 0)
    if isinstance(point, int):
        cone = (point, (point + 1) % surface.n_rays)
    else:
        cone = (int(point[0]), int(point[1]))
    problem = SeshadriProblem(surface, coeffs, cone)
    d = options["max_degree"]
    eps, mu = thresholds(problem)
    verdict = rationality_verdict(problem, b=payload.get("b"), max_degree=d)
    profile = restricted_volume_profile(problem, max_degree=d)
    report = {
        "kind": "seshadri",
        "eps": eps,
        "mu": mu,
        "verdict": verdict,
    }
    ok = bool(verdict["iota_consistency"])
    if payload.get("verify_bundle"):
        b = payload.get("b") or verdict["suggested_b"]
        check = subgraph_equals_body_check(problem, F(b), max_degree=min(d, 8))
        report["bundle_check"] = {
            "bodies_equal": check["bodies_equal"],
            "counts_equal": check["counts_equal"],
            "volume": check["volume"],
            "transform_integral": check["transform_integral"],
            "vol_xhat_lhat": check["vol_xhat_lhat"],
        }
        ok = ok and check["bodies_equal"] and check["counts_equal"]
    figures = {}
    from .svg import pl_function_svg, polytope_svg

    figures["profile"] = pl_function_svg(profile)
    from .seshadri import blowup_body

    sb, _ = blowup_body(problem, max_degree=d)
    figures["blowup_body"] = polytope_svg(sb.body)
    return report, ok, figures


if __name__ == "__main__":
    sys.exit(main())
