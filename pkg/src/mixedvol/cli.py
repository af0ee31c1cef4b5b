"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 stabilization or convergence failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from mixedvol.errors import InputError, StabilizationError
from mixedvol.graded_families import family_from_json
from mixedvol.lattice_geometry import RationalPolytope, format_rational, mixed_volume, volume_polynomial
from mixedvol.monomial_algebra import MonomialIdeal
from mixedvol import multiplicities as mm
from mixedvol import okounkov as ok
from mixedvol.verification import verify_theorem_c

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_STABILIZATION = 3


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc


def _require(payload: Any, key: str) -> Any:
    if not isinstance(payload, dict) or key not in payload:
        raise InputError(f"input needs a {key!r} field")
    return payload[key]


def _csv(rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerows(rows)
    return buf.getvalue()


def _dec(x: Fraction) -> str:
    return f"{float(x):.10g}"


# --------------------------------------------------------------------------
# commands


def cmd_mixed_volume(payload: Any, args) -> tuple[str, int]:
    raw = payload if isinstance(payload, list) else _require(payload, "polytopes")
    if not isinstance(raw, list) or not raw:
        raise InputError("'polytopes' must be a non-empty list")
    bodies = [RationalPolytope.from_json(p) for p in raw]
    multidegree = payload.get("multidegree") if isinstance(payload, dict) else None
    if multidegree is not None:
        if not isinstance(multidegree, list) or len(multidegree) != len(bodies):
            raise InputError("'multidegree' needs one entry per polytope")
        if any(isinstance(k, bool) or not isinstance(k, int) or k < 0 for k in multidegree):
            raise InputError("'multidegree' entries must be non-negative integers")
        d = bodies[0].dim
        if sum(multidegree) != d:
            raise InputError(f"multidegree must sum to the dimension {d}")
        multiset = [K for K, k in zip(bodies, multidegree) for _ in range(k)]
        value = mixed_volume(multiset)
        if volume_polynomial(bodies).mixed_volume(multidegree) != value:
            raise ArithmeticError("mixed volume routes disagree")
    else:
        value = mixed_volume(bodies)
    if args.format == "csv":
        return _csv([["mixed_volume", "decimal"], [format_rational(value), _dec(value)]]), EXIT_OK
    return _json({"mixed_volume": format_rational(value), "decimal": _dec(value)}), EXIT_OK


def cmd_mixed_mult(payload: Any, args) -> tuple[str, int]:
    I = MonomialIdeal.from_json(_require(payload, "I"))
    Js_raw = payload.get("J", [])
    if not isinstance(Js_raw, list):
        raise InputError("'J' must be a list of ideals")
    Js = [MonomialIdeal.from_json(j) for j in Js_raw]
    res = mm.mixed_multiplicities_ideals_detailed(I, Js, max_base=args.max_base)
    if args.format == "csv":
        return res.table.to_csv(), EXIT_OK
    out = res.table.to_json()
    out["base"] = res.base
    return _json(out), EXIT_OK


def _families(payload: Any, key: str):
    raw = payload.get(key, []) if isinstance(payload, dict) else None
    if not isinstance(raw, list):
        raise InputError(f"'{key}' must be a list of families")
    return [family_from_json(f) for f in raw]


def cmd_family_mult(payload: Any, args) -> tuple[str, int]:
    Jf = _families(payload, "J")
    if isinstance(payload, dict) and "I" in payload:
        If = family_from_json(payload["I"])
        res = mm.mixed_multiplicities_family(If, Jf, args.p_schedule, args.max_base, args.threads)
        if args.format == "csv":
            rows = [["p", "d0"] + [f"d{i + 1}" for i in range(len(Jf))] + ["value", "decimal"]]
            for p, t in zip(res.p_schedule, res.normalized):
                for (d0, dvec), v in t.entries.items():
                    rows.append([p, d0, *dvec, format_rational(v), _dec(v)])
            return _csv(rows), EXIT_OK
        return _json({
            "p_schedule": list(res.p_schedule),
            "normalized": [{"p": p, "table": t.to_json()} for p, t in zip(res.p_schedule, res.normalized)],
            "estimate": res.estimate.to_json(),
            "stabilized_from": res.stabilized_from,
        }), EXIT_OK
    if not Jf:
        raise InputError("family-mult needs 'J' families (and optionally 'I')")
    res = mm.m_primary_family_multiplicities(
        Jf, args.p_schedule, payload.get("grid_max"), payload.get("c"), args.max_base
    )
    keys = sorted(res.route_bridge, reverse=True)
    if args.format == "csv":
        rows = [[f"d{i + 1}" for i in range(res.r)] + ["fit", "bridge_last", "geometric"]]
        for k in keys:
            rows.append([
                *k,
                "" if res.route_fit is None else format_rational(res.route_fit[k]),
                format_rational(res.route_bridge[k][-1]),
                "" if res.geometric is None else format_rational(res.geometric[k]),
            ])
        return _csv(rows), EXIT_OK
    return _json({
        "d": res.dim,
        "r": res.r,
        "c": res.c,
        "p_schedule": list(res.p_schedule),
        "entries": [
            {
                "dvec": list(k),
                "fit": None if res.route_fit is None else format_rational(res.route_fit[k]),
                "bridge": [format_rational(x) for x in res.route_bridge[k]],
                "geometric": None if res.geometric is None else format_rational(res.geometric[k]),
            }
            for k in keys
        ],
        "fit_error": res.fit_error,
        "agree": res.agree,
    }), EXIT_OK


def cmd_verify_theorem_c(payload: Any, args) -> tuple[str, int]:
    raw = payload if isinstance(payload, list) else _require(payload, "bodies")
    if not isinstance(raw, list) or not raw:
        raise InputError("'bodies' must be a non-empty list of polytopes")
    bodies = [RationalPolytope.from_json(p) for p in raw]
    opts = payload if isinstance(payload, dict) else {}
    report = verify_theorem_c(
        bodies,
        args.p_schedule,
        args.tolerance,
        h=opts.get("h", "auto"),
        routes=tuple(opts.get("routes", ("m", "mp"))),
        max_base=args.max_base,
        threads=args.threads,
    )
    code = EXIT_OK if report.passed else EXIT_STABILIZATION
    if args.format == "csv":
        r = len(bodies)
        rows = [["route", "d0"] + [f"d{i + 1}" for i in range(r)] + ["geometric"]
                + [f"p{p}" for p in report.p_schedule] + ["abs_dev", "rel_dev", "monotone", "pass"]]
        for route, entries in report.entries.items():
            for e in entries:
                rows.append([
                    route, e.index[0], *e.index[1], format_rational(e.geometric),
                    *[format_rational(x) for x in e.sequence],
                    format_rational(e.abs_dev), "" if e.rel_dev is None else format_rational(e.rel_dev),
                    e.monotone, e.passed,
                ])
        return _csv(rows), code
    return _json(report.to_json()), code


def _gamma_inputs(payload: Any):
    If = family_from_json(_require(payload, "I"))
    Jf = _families(payload, "J")
    n0 = payload.get("n0", 1)
    n = payload.get("n", [0] * len(Jf))
    if isinstance(n0, bool) or not isinstance(n0, int) or n0 < 0:
        raise InputError("'n0' must be a non-negative integer")
    if not isinstance(n, list) or len(n) != len(Jf) or any(
        isinstance(x, bool) or not isinstance(x, int) or x < 0 for x in n
    ):
        raise InputError("'n' must list one non-negative integer per J family")
    c = payload.get("c")
    if c is not None and (isinstance(c, bool) or not isinstance(c, int)):
        raise InputError("'c' must be an integer")
    if c is None:
        c = ok.compute_c(If, Jf)
    return If, Jf, n0, tuple(n), c


def cmd_okounkov(payload: Any, args) -> tuple[str, int]:
    If, Jf, n0, n, c = _gamma_inputs(payload)
    rows = ok.level_count_series(If, Jf, n0, n, args.schedule, c)
    decomp = None
    if args.decomposition:
        decomp = ok.levelwise_decomposition_check(If, Jf, n0, n, args.m_max, c)
    if args.format == "csv":
        out = _csv([["m", "count_plain", "count_hat", "normalized_diff"]]
                   + [[r.m, r.count_plain, r.count_hat, format_rational(r.normalized_diff)] for r in rows])
        if decomp is not None:
            out += _csv([["m", "variant", "decomposition"]]
                        + [[m, v, "pass" if good else "fail"] for m, v, good in decomp.per_level])
        return out, EXIT_OK
    body = {
        "c": c,
        "series": [
            {"m": r.m, "count_plain": r.count_plain, "count_hat": r.count_hat,
             "normalized_diff": format_rational(r.normalized_diff)}
            for r in rows
        ],
    }
    if decomp is not None:
        body["decomposition"] = _decomp_json(decomp)
    return _json(body), EXIT_OK


def _decomp_json(res: ok.DecompositionResult) -> dict:
    return {
        "pass": res.ok,
        "levels": [{"m": m, "variant": v, "pass": good} for m, v, good in res.per_level],
        "witness": res.witness,
    }


def cmd_decomposition_check(payload: Any, args) -> tuple[str, int]:
    If, Jf, n0, n, c = _gamma_inputs(payload)
    m_max = payload.get("m_max", args.m_max)
    res = ok.levelwise_decomposition_check(If, Jf, n0, n, m_max, c)
    if args.format == "csv":
        return _csv([["m", "variant", "pass"]] + [[m, v, good] for m, v, good in res.per_level]), EXIT_OK
    return _json(_decomp_json(res)), EXIT_OK


def _json(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"


COMMANDS = {
    "mixed-volume": cmd_mixed_volume,
    "mixed-mult": cmd_mixed_mult,
    "family-mult": cmd_family_mult,
    "verify-theorem-c": cmd_verify_theorem_c,
    "okounkov": cmd_okounkov,
    "decomposition-check": cmd_decomposition_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", default="-", help="input JSON file (default: stdin)")
    common.add_argument("--output", default="-", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--p-schedule", type=_int_list, default=[1, 2, 4, 8, 16])
    common.add_argument("--tolerance", type=_fraction, default=Fraction(1, 20))
    common.add_argument("--max-base", type=int, default=None,
                        help="cap on the finite-difference base (env MIXEDVOL_MAX_BASE)")
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="mixedvol", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name in ("okounkov", "decomposition-check"):
            p.add_argument("--schedule", type=_int_list, default=[1, 2, 4, 8])
            p.add_argument("--m-max", type=int, default=4)
        if name == "okounkov":
            p.add_argument("--decomposition", action="store_true",
                           help="also run the levelwise decomposition check")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    try:
        if args.max_base is not None and args.max_base < 1:
            raise InputError("--max-base must be positive")
        payload = _load(args.input)
        text, code = COMMANDS[args.command](payload, args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except StabilizationError as exc:
        print(f"stabilization failure: {exc}", file=sys.stderr)
        return EXIT_STABILIZATION
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
