"""Command-line front door: ``cofrontal {analyze,symmetry,torus,catalog}``.

Every command builds one plain report dictionary.  ``--format structured``
prints it as canonical JSON; ``--format text`` renders the same dictionary.
Exit status: 0 success, 1 negative verdict or failed check, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Any, Sequence

from .flow import FlowError, mapping_torus_atlas, numeric_return_map
from .germ import GermError, MapGerm, classify_germ, pluecker_section, reduce_adapted
from .local_algebra import DEFAULT_CAP, quotient_dimension_profile
from .poly import PolynomialParseError, parse_polynomial, render
from .symmetry import (
    DEFAULT_CATALOG,
    DEFAULT_ORDER_CAP,
    GermDiffeo,
    SymmetryError,
    check_right_symmetry,
    diffeo_order,
    jacobian_equivariance_sign,
    symmetry_catalog,
)
from .torus import TorusError, assemble, describe_root, fiber_census

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT = 0, 1, 2
DEFAULT_STEP_SIZE = 1e-3


class InputError(ValueError):
    """Malformed input; maps to exit status 2."""


# -- input ---------------------------------------------------------------------


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    if not text.strip():
        raise InputError(f"{path}: input is empty")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _strings(value: Any, what: str) -> list[str]:
    if not isinstance(value, list) or not all(isinstance(s, str) for s in value):
        raise InputError(f"{what} must be a list of polynomial strings")
    return value


def _parse_components(texts: Sequence[str], n: int, what: str):
    out = []
    for i, text in enumerate(texts):
        try:
            out.append(parse_polynomial(text, nvars=n))
        except PolynomialParseError as exc:
            raise InputError(f"{what} component {i + 1}, column {exc.position + 1}: {exc}") from exc
    return out


def germ_from_object(obj: Any, what: str = "germ") -> MapGerm:
    if not isinstance(obj, dict):
        raise InputError(f"{what} must be an object with n, m and components")
    missing = [k for k in ("n", "m", "components") if k not in obj]
    if missing:
        raise InputError(f"{what} is missing {', '.join(missing)}")
    n, m = obj["n"], obj["m"]
    if not isinstance(n, int) or not isinstance(m, int) or isinstance(n, bool) or n < 1 or m < 1:
        raise InputError(f"{what}: n and m must be positive integers")
    comps = _strings(obj["components"], f"{what} components")
    if len(comps) != m:
        raise InputError(f"{what}: m = {m} but {len(comps)} components given")
    try:
        return MapGerm(n, m, tuple(_parse_components(comps, n, what)))
    except GermError as exc:
        raise InputError(f"{what}: {exc}") from exc


def diffeo_from_object(obj: Any, n: int, what: str = "diffeo") -> GermDiffeo:
    comps = _strings(obj, what)
    if len(comps) != n:
        raise InputError(f"dimension mismatch: {what} has {len(comps)} components, "
                         f"germ source has {n} variables")
    try:
        return GermDiffeo(n, tuple(_parse_components(comps, n, what)))
    except SymmetryError as exc:
        raise InputError(f"{what}: {exc}") from exc


def parse_rational_tuple(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(part.strip()) for part in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--b {text!r}: expected comma-separated rationals p/q") from exc


def parse_points(text: str) -> list[tuple[float, ...]]:
    try:
        return [tuple(float(Fraction(c.strip())) for c in point.split(","))
                for point in text.split(";") if point.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--samples {text!r}: expected points like '1/2;-1/4' "
                         "or '1/2,0;0,1/4'") from exc


# -- reports -------------------------------------------------------------------


def _index_key(I: Sequence[int]) -> str:
    return ",".join(str(i + 1) for i in I)


def _kind_label(kind: str, n: int, m: int) -> str:
    if kind == "indeterminate":
        return kind
    rel = "n=m" if n == m else ("n>m" if n > m else "n<m")
    return f"{kind} ({rel})"


def analyze_germ(f: MapGerm, degree_cap: int) -> dict:
    verdict = classify_germ(f)
    rep = verdict.report
    out: dict[str, Any] = {
        "germ": {"n": f.n, "m": f.m, "components": f.rendered()},
        "minors": {_index_key(I): render(D) for I, D in rep.minors.items()},
        "gcd": render(rep.gcd),
        "principal": rep.principal,
        "base_index": _index_key(rep.base_index) if rep.base_index is not None else None,
        "generator": render(rep.generator) if rep.generator is not None else None,
        "jacobi_ideal_zero": rep.gcd.is_zero(),
        "verdict": verdict.kind,
        "verdict_label": _kind_label(verdict.kind, f.n, f.m),
        "fair": verdict.fair,
        "reason": verdict.reason,
        "kernel_field": None,
        "local_algebra": None,
    }
    if verdict.fair and f.n >= f.m:
        kf = pluecker_section(f)
        out["kernel_field"] = {
            "base_index": _index_key(kf.base_index),
            "pluecker": {_index_key(I): s for I, s in kf.section.items()},
            "cofactor_field": ([render(c) for c in kf.cofactor_field]
                               if kf.cofactor_field is not None else None),
        }
    if f.n >= f.m:
        out["local_algebra"] = _local_algebra(f, degree_cap)
    return out


def _local_algebra(f: MapGerm, degree_cap: int) -> dict:
    try:
        g = f if f.n == f.m else reduce_adapted(f, f.n - f.m)
    except GermError as exc:
        return {"status": "not adapted", "detail": str(exc), "dimension": None,
                "profile": [], "basis": []}
    report = quotient_dimension_profile(g, degree_cap)
    return {
        "status": report.describe(),
        "detail": "reduced by dropping fiber variables" if g is not f else "",
        "dimension": report.dimension,
        "profile": [d for _, d in report.dims_by_degree],
        "basis": report.basis_text(),
    }


def analyze_exit(report: dict) -> int:
    return EXIT_OK if report["fair"] and report["principal"] else EXIT_NEGATIVE


def symmetry_report(f: MapGerm, sigma: GermDiffeo, order_cap: int) -> dict:
    cert = check_right_symmetry(f, sigma)
    order = diffeo_order(sigma, order_cap)
    out: dict[str, Any] = {
        "germ": {"n": f.n, "m": f.m, "components": f.rendered()},
        "diffeo": sigma.rendered(),
        "verified": cert.verified,
        "certificate": cert.describe(),
        "counterexample": None,
        "order": order,
        "order_cap": order_cap,
        "jacobian_sign": None,
    }
    if cert.counterexample is not None:
        ce = cert.counterexample
        out["counterexample"] = {"component": ce.component + 1,
                                 "monomial": ce.monomial_text(),
                                 "difference": str(ce.difference)}
    elif f.n == f.m:
        out["jacobian_sign"] = jacobian_equivariance_sign(f, sigma)
    return out


def catalog_report(names: Sequence[str]) -> dict:
    entries = []
    for name in names:
        e = symmetry_catalog(name)
        entries.append({
            "name": e.name,
            "description": e.description,
            "germ": e.germ.rendered(),
            "generators": [g.rendered() for g in e.generators],
            "known_group": e.known_group,
            "group_order": e.group_order,
            "notes": e.notes,
        })
    return {"entries": entries}


def _default_samples(box) -> list[tuple[float, ...]]:
    out = []
    for c in (Fraction(1, 2), Fraction(-1, 2), Fraction(1, 4), Fraction(-1, 4), Fraction(1, 8)):
        out.append(tuple(float(c * (hi if c > 0 else -lo)) for lo, hi in box))
    return out


def torus_report(spec: Any, b: tuple[Fraction, ...] | None, return_map: bool,
                 samples: list | None, caps: dict) -> dict:
    if not isinstance(spec, dict) or not isinstance(spec.get("pieces"), list):
        raise InputError("torus file must be an object with a list of pieces")
    pieces_spec = []
    for k, p in enumerate(spec["pieces"]):
        if not isinstance(p, dict) or not {"germ", "symmetry", "box"} <= p.keys():
            raise InputError(f"piece {k} needs germ, symmetry and box")
        germ = germ_from_object(p["germ"], f"piece {k} germ")
        sigma = diffeo_from_object(p["symmetry"], germ.n, f"piece {k} symmetry")
        box = p["box"]
        if not isinstance(box, list) or not all(isinstance(iv, list) and len(iv) == 2 for iv in box):
            raise InputError(f"piece {k} box must be a list of [lo, hi] pairs")
        try:
            box = [(Fraction(str(lo)), Fraction(str(hi))) for lo, hi in box]
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"piece {k} box: {exc}") from exc
        pieces_spec.append((germ, sigma, box))
    try:
        torus = assemble(pieces_spec, caps["order_cap"])
    except TorusError as exc:
        raise InputError(f"assembly failed: {exc}") from exc
    out: dict[str, Any] = {
        "pieces": [{"germ": p.germ.rendered(), "symmetry": p.symmetry.rendered(),
                    "box": [[str(lo), str(hi)] for lo, hi in p.domain],
                    "symmetry_order": p.symmetry_order} for p in torus.pieces],
        "census": None,
        "return_map": None,
    }
    if b is not None:
        try:
            census = fiber_census(torus, b, caps["degree_cap"])
        except TorusError as exc:
            raise InputError(f"census failed: {exc}") from exc
        out["census"] = {
            "target_value": [str(x) for x in census.target_value],
            "summary": census.summary(),
            "total_circles": census.total_circles,
            "circles": [{"piece": c.piece, "representative": describe_root(c.representative),
                         "wrapping": c.wrapping} for c in census.circles],
            "roots": [[describe_root(r) for r in pc.roots] for pc in census.pieces],
            "warnings": list(census.warnings),
        }
    if return_map:
        rows = []
        worst = 0.0
        for k, p in enumerate(torus.pieces):
            manifold, transversal, ref = mapping_torus_atlas(
                p.germ.components, p.symmetry, p.domain, p.symmetry_order)
            pts = samples if samples is not None else _default_samples(p.domain)
            if any(len(s) != p.m for s in pts):
                raise InputError(f"samples must have {p.m} coordinates for piece {k}")
            try:
                res = numeric_return_map(manifold, transversal, pts, ref,
                                         step_size=caps["step_size"])
            except FlowError as exc:
                raise InputError(f"return map on piece {k}: {exc}") from exc
            worst = max(worst, res.max_deviation)
            for s, img, want in zip(res.transversal_points, res.images, res.reference_images):
                rows.append({"piece": k, "sample": [f"{v:.9g}" for v in s],
                             "image": [f"{v:.9g}" for v in img],
                             "reference": [f"{v:.9g}" for v in want],
                             "deviation": f"{float(max(abs(img - want))):.3e}"})
        out["return_map"] = {"step_size": caps["step_size"], "rows": rows,
                             "max_deviation": f"{worst:.3e}"}
    return out


# -- text rendering ------------------------------------------------------------


def _tuple_text(items: Sequence[str]) -> str:
    return "(" + ", ".join(items) + ")"


def render_analyze_text(r: dict) -> str:
    g = r["germ"]
    lines = [f"germ: {_tuple_text(g['components'])}  [n={g['n']}, m={g['m']}]", "minors:"]
    lines += [f"  D({I}) = {D}" for I, D in r["minors"].items()]
    if r["jacobi_ideal_zero"]:
        lines.append("jacobi ideal: (0)")
    else:
        lines.append(f"gcd: {r['gcd']}")
    lines.append(f"principal: {'yes' if r['principal'] else 'no'}")
    if r["base_index"] is not None:
        lines.append(f"base index: ({r['base_index']})")
    if r["generator"] is not None and not r["jacobi_ideal_zero"]:
        lines.append(f"jacobian: {r['generator']}")
    lines.append(f"verdict: {r['verdict_label']}")
    lines.append(f"fair: {'yes' if r['fair'] else 'no'}")
    lines.append(f"reason: {r['reason']}")
    kf = r["kernel_field"]
    if kf is not None:
        if kf["cofactor_field"] is not None:
            lines.append(f"kernel field: {_tuple_text(kf['cofactor_field'])}")
        lines.append("pluecker: " + "; ".join(f"h({I}) = {s}" for I, s in kf["pluecker"].items()))
    la = r["local_algebra"]
    if la is not None:
        if la["dimension"] is not None:
            lines.append(f"QF-dim: {la['dimension']}")
        else:
            lines.append(f"QF-dim: {la['status']}")
        if la["profile"]:
            lines.append("QF-profile: " + " ".join(map(str, la["profile"])))
        if la["basis"]:
            lines.append("QF-basis: " + ", ".join(la["basis"]))
        if la["status"] == "not adapted":
            lines.append(f"QF-note: {la['detail']}")
    return "\n".join(lines)


def render_symmetry_text(r: dict) -> str:
    order = r["order"]
    order_text = f"order {order}" if order is not None else f"order undecided (cap {r['order_cap']})"
    lines = [f"germ: {_tuple_text(r['germ']['components'])}",
             f"diffeo: {_tuple_text(r['diffeo'])}"]
    if r["verified"]:
        lines.append(f"{r['certificate']}; {order_text}")
        if r["jacobian_sign"] is not None:
            sign = "+" if r["jacobian_sign"] > 0 else "-"
            lines.append(f"equivariance: (lambda o sigma) * det J(sigma) = {sign}lambda")
    else:
        ce = r["counterexample"]
        lines.append(r["certificate"])
        lines.append(f"coefficient of {ce['monomial']} in f{ce['component']} o sigma - "
                     f"f{ce['component']}: {ce['difference']}")
        lines.append(f"diffeo {order_text}")
    return "\n".join(lines)


def render_catalog_text(r: dict) -> str:
    blocks = []
    for e in r["entries"]:
        gens = "; ".join(_tuple_text(g) for g in e["generators"]) or "none listed"
        block = [f"{e['name']}: {e['description']}",
                 f"  germ: {_tuple_text(e['germ'])}",
                 f"  generators: {gens}",
                 f"  group: {e['known_group']} (order {e['group_order']})"]
        if e["notes"]:
            block.append(f"  notes: {e['notes']}")
        blocks.append("\n".join(block))
    return "\n".join(blocks)


def render_torus_text(r: dict) -> str:
    lines = []
    for k, p in enumerate(r["pieces"]):
        box = " x ".join(f"({lo}, {hi})" for lo, hi in p["box"])
        lines.append(f"piece {k}: h = {_tuple_text(p['germ'])}, "
                     f"sigma = {_tuple_text(p['symmetry'])} (order {p['symmetry_order']}), "
                     f"U = {box}")
    c = r["census"]
    if c is not None:
        lines.append(f"census at b = ({', '.join(c['target_value'])}): {c['summary']}")
        for circ in c["circles"]:
            lines.append(f"  piece {circ['piece']}  root {circ['representative']}  "
                         f"wrapping {circ['wrapping']}")
        lines += [f"  warning: {w}" for w in c["warnings"]]
    rm = r["return_map"]
    if rm is not None:
        lines.append(f"return map (step {rm['step_size']:g}):")
        lines.append("  piece  sample  image  reference  deviation")
        for row in rm["rows"]:
            lines.append(f"  {row['piece']}  {_tuple_text(row['sample'])}  "
                         f"{_tuple_text(row['image'])}  {_tuple_text(row['reference'])}  "
                         f"{row['deviation']}")
        lines.append(f"max deviation: {rm['max_deviation']}")
    return "\n".join(lines)


def to_structured(report: Any) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False)


# -- commands ------------------------------------------------------------------


def run_analyze(args) -> tuple[int, Any, str]:
    data = _read_json(args.input)
    germs = data if isinstance(data, list) else [data]
    if not germs:
        raise InputError("no germs given")
    parsed = [germ_from_object(g, f"germ {i}" if len(germs) > 1 else "germ")
              for i, g in enumerate(germs)]
    with ThreadPoolExecutor() as pool:
        reports = list(pool.map(lambda f: analyze_germ(f, args.degree_cap), parsed))
    status = max(analyze_exit(r) for r in reports)
    text = "\n\n".join(render_analyze_text(r) for r in reports)
    return status, reports if isinstance(data, list) else reports[0], text


def run_symmetry(args) -> tuple[int, Any, str]:
    data = _read_json(args.input)
    if not isinstance(data, dict) or "germ" not in data or "diffeo" not in data:
        raise InputError("symmetry file must be an object with germ and diffeo")
    f = germ_from_object(data["germ"])
    sigma = diffeo_from_object(data["diffeo"], f.n)
    report = symmetry_report(f, sigma, args.order_cap)
    status = EXIT_OK if report["verified"] else EXIT_NEGATIVE
    return status, report, render_symmetry_text(report)


def run_torus(args) -> tuple[int, Any, str]:
    if args.b is None and not args.return_map:
        raise InputError("torus needs --b for a census or --return-map")
    spec = _read_json(args.input)
    b = parse_rational_tuple(args.b) if args.b is not None else None
    samples = parse_points(args.samples) if args.samples else None
    caps = {"degree_cap": args.degree_cap, "order_cap": args.order_cap,
            "step_size": args.step_size}
    report = torus_report(spec, b, args.return_map, samples, caps)
    return EXIT_OK, report, render_torus_text(report)


def run_catalog(args) -> tuple[int, Any, str]:
    names = [args.name] if args.name else list(DEFAULT_CATALOG)
    try:
        report = catalog_report(names)
    except SymmetryError as exc:
        raise InputError(str(exc)) from exc
    return EXIT_OK, report, render_catalog_text(report)


COMMANDS = {"analyze": run_analyze, "symmetry": run_symmetry,
            "torus": run_torus, "catalog": run_catalog}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--degree-cap", type=_positive_int, default=DEFAULT_CAP,
                        help="local-algebra degree cap (default %(default)s)")
    common.add_argument("--order-cap", type=_positive_int, default=DEFAULT_ORDER_CAP,
                        help="symmetry order cap (default %(default)s)")
    common.add_argument("--step-size", type=_positive_float, default=DEFAULT_STEP_SIZE,
                        help="RK4 step for return maps (default %(default)s)")

    parser = argparse.ArgumentParser(prog="cofrontal",
                                     description="Exact analysis of polynomial map-germs.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("analyze", parents=[common], help="Jacobi ideal, verdict, local algebra")
    p.add_argument("--input", required=True, help="germ file (JSON), '-' for stdin")
    p = sub.add_parser("symmetry", parents=[common], help="check f o sigma = f")
    p.add_argument("--input", required=True, help="JSON object with germ and diffeo")
    p = sub.add_parser("torus", parents=[common], help="mapping-torus census and return map")
    p.add_argument("--input", required=True, help="torus description (JSON) with pieces")
    p.add_argument("--b", help="target value, comma-separated rationals such as 1/4,0")
    p.add_argument("--return-map", action="store_true",
                   help="integrate the kernel field and compare the return map with sigma^-1")
    p.add_argument("--samples", help="transversal points, ';'-separated, coordinates ','-separated")
    p = sub.add_parser("catalog", parents=[common], help="list catalog germs and symmetries")
    p.add_argument("name", nargs="?", help="fold, cusp, squares, power_ell(l) or dihedral(l)")
    return parser


def _glue_negative_values(argv: Sequence[str]) -> list[str]:
    # argparse reads "--b -1/4" as two flags
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--b", "--samples"):
            value = next(it, None)
            out.append(tok if value is None else f"{tok}={value}")
        else:
            out.append(tok)
    return out


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_negative_values(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        status, report, text = COMMANDS[args.command](args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(to_structured(report) if args.format == "structured" else text)
    return status


if __name__ == "__main__":
    sys.exit(main())
