"""Command-line front end.

Subcommands cover the whole pipeline: field construction and unit data
(`field-info`), ideal-count coefficients (`zeta-coeffs`), box enumeration
(`enumerate`), exact per-norm counts (`counts`), the geometric estimate
with its error profile (`estimate`), zeta-function bounds (`bounds`), and
the probability curves (`pep`, `eve`).

Exit codes: 0 success, 2 validation error, 3 budget or cutoff failure.
CSV output uses a header row, UTF-8, '.' decimals, and 15 significant
digits for floats, so repeated runs diff cleanly.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import channel, estimator
from .bounds import full_height_report, geometric_bound
from .enumeration import (
    DEFAULT_BUDGET,
    BoxSpec,
    CountTable,
    count_table,
    enumerate_box,
)
from .errors import ResourceLimitError, ValidationError
from .numberfield import NumberField, Polynomial, parse_field
from .units import UnitSystem, build_unit_system
from .zeta import dirichlet_coeffs

_HINTS = {
    "BoxTooLarge": "raise --budget or shrink --radius",
    "CutoffTooSmall": "raise --cutoff",
    "CutoffMismatch": "raise --cutoff to at least the table cap",
    "NotTotallyReal": "the minimal polynomial must have only real roots",
    "NotSquarefree": "the minimal polynomial must be squarefree",
    "NotMonic": "the minimal polynomial must be monic",
    "WrongRank": "supply exactly r1+r2-1 fundamental units in the field document",
    "NotAUnit": "every supplied unit must have |norm| = 1",
    "RegulatorMismatch": "supplied units disagree with expected_regulator",
    "EmptyGrid": "the SNR grid needs at least one point",
}


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.15g}"


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _write_csv(header, rows, out: str | None, preamble: str | None = None):
    lines = []
    if preamble:
        lines.append(preamble)
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _emit("\n".join(lines) + "\n", out)


def load_field_document(path: str, precision_bits: int) -> tuple[NumberField, dict]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    poly = Polynomial(tuple(int(c) for c in doc["min_poly"]))
    if not doc.get("assume_maximal_order", False):
        raise ValidationError(
            "field document must set assume_maximal_order: computations use Z[theta]"
        )
    field = parse_field(poly, assume_maximal_order=True,
                        precision_bits=precision_bits,
                        label=doc.get("label", ""))
    return field, doc


def unit_system_from_document(field: NumberField, doc: dict) -> UnitSystem:
    units = doc.get("fundamental_units")
    return build_unit_system(
        field,
        units=[field.element(u) for u in units] if units else None,
        w=int(doc.get("roots_of_unity", 2)),
        expected_regulator=doc.get("expected_regulator"),
    )


def _table_for(field: NumberField, doc: dict, args) -> CountTable:
    box = BoxSpec(args.radius, args.tol)
    cap = min(int(math.floor((args.radius + args.tol) ** field.degree + 1e-9)),
              args.max_norm if args.max_norm else 10 ** 18)
    cutoff = args.cutoff if args.cutoff else cap
    series = dirichlet_coeffs(field, max(cutoff, 1))
    return count_table(field, box, series, max_norm=args.max_norm, budget=args.budget)


# ---------------------------------------------------------------------------
# subcommand bodies


def cmd_field_info(args) -> int:
    field, doc = load_field_document(args.field_doc, args.precision)
    us = unit_system_from_document(field, doc)
    payload = {
        "label": field.label,
        "min_poly": list(field.min_poly.coeffs),
        "degree": field.degree,
        "signature": list(field.signature),
        "embeddings": [float(v) for v in field.embeddings],
        "poly_discriminant": field.poly_discriminant,
        "fundamental_units": [list(u.coords) for u in us.units],
        "roots_of_unity": us.w,
        "regulator": us.regulator,
        "log_volume": us.log_volume,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_zeta_coeffs(args) -> int:
    field, _doc = load_field_document(args.field_doc, args.precision)
    series = dirichlet_coeffs(field, args.max)
    rows = ((k, int(series.a[k])) for k in range(1, args.max + 1))
    _write_csv(["k", "a_k"], rows, args.out)
    return 0


def cmd_enumerate(args) -> int:
    field, _doc = load_field_document(args.field_doc, args.precision)
    points = enumerate_box(field, BoxSpec(args.radius, args.tol), budget=args.budget)
    header = [f"c{i}" for i in range(field.degree)] + ["norm", "height"]
    rows = (list(p.coords) + [p.norm(), p.height()] for p in points)
    _write_csv(header, rows, args.out)
    return 0


def _counts_preamble(field: NumberField, table: CountTable) -> str:
    return ("# nfbounds-counts"
            f" label={field.label} degree={table.degree} R={_fmt(table.R)}"
            f" cap={table.cap} max_norm={table.max_norm} total={table.total_points}")


def cmd_counts(args) -> int:
    field, doc = load_field_document(args.field_doc, args.precision)
    table = _table_for(field, doc, args)
    rows = zip(table.ks.tolist(), table.a.tolist(), table.b.tolist())
    _write_csv(["k", "a_k", "b_k"], rows, args.out, _counts_preamble(field, table))
    return 0


def _read_counts_csv(path: str) -> tuple[CountTable, dict]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith("# nfbounds-counts"):
        raise ValidationError("counts CSV lacks the nfbounds-counts preamble")
    meta = dict(tok.split("=", 1) for tok in lines[0].split()[2:])
    body = [ln.split(",") for ln in lines[2:] if ln]
    ks = np.array([int(r[0]) for r in body], dtype=np.int64)
    a = np.array([int(r[1]) for r in body], dtype=np.int64)
    b = np.array([int(r[2]) for r in body], dtype=np.int64)
    table = CountTable(
        R=float(meta["R"]), degree=int(meta["degree"]), cap=int(meta["cap"]),
        max_norm=int(meta["max_norm"]), ks=ks, a=a, b=b,
        total_points=int(meta["total"]),
    )
    return table, meta


def cmd_estimate(args) -> int:
    field, doc = load_field_document(args.field_doc, args.precision)
    us = unit_system_from_document(field, doc)
    if args.from_counts:
        table, _meta = _read_counts_csv(args.from_counts)
    else:
        if args.radius is None:
            raise ValidationError("estimate needs --radius or --from-counts")
        table = _table_for(field, doc, args)
    table = estimator.add_estimates(table, us)
    rows = zip(table.ks.tolist(), table.a.tolist(), table.b.tolist(),
               table.n_raw.tolist(), table.n_est.tolist(), table.f.tolist())
    _write_csv(["k", "a_k", "b_k", "n_k_raw", "n_k", "f_k"], rows, args.out,
               _counts_preamble(field, table))
    if args.profile_out:
        profile = estimator.error_profile(table)
        rows = [(f, profile.histogram[f], c) for (f, c) in profile.cumulative]
        _write_csv(["f", "count", "cumulative_fraction"], rows, args.profile_out)
    return 0


def cmd_bounds(args) -> int:
    field, doc = load_field_document(args.field_doc, args.precision)
    us = unit_system_from_document(field, doc)
    if (args.height is None) == (args.radius is None):
        raise ValidationError("bounds needs exactly one of --height or --radius")
    if args.height is not None:
        report = full_height_report(field, us, args.s, args.height)
    else:
        cap = int(math.floor(args.radius ** field.degree + 1e-9))
        cutoff = args.cutoff or min(max(cap, 10 ** 4), 10 ** 5)
        series = dirichlet_coeffs(field, cutoff)
        report = geometric_bound(series, us, args.s, args.radius)
    _emit(report.to_json(label=field.label) + "\n", args.out)
    return 0


def cmd_pep(args) -> int:
    field, doc = load_field_document(args.field_doc, args.precision)
    us = unit_system_from_document(field, doc)
    try:
        start, stop, npts = args.snr.split(":")
        start, stop, npts = float(start), float(stop), int(npts)
    except ValueError as exc:
        raise ValidationError(f"--snr must be START:STOP:POINTS, got {args.snr!r}") from exc
    table = estimator.add_estimates(_table_for(field, doc, args), us)
    curve = channel.pep_curve(table, start, stop, npts)
    rows = zip(curve.snr_db, curve.snr_linear, curve.pe_estimate, curve.pe_exact)
    _write_csv(["snr_db", "gamma", "pe_estimate", "pe_exact"], rows, args.out,
               f"# nfbounds-pep ratio={_fmt(curve.ratio)}")
    return 0


def cmd_eve(args) -> int:
    field, doc = load_field_document(args.field_doc, args.precision)
    table = _table_for(field, doc, args)
    value = channel.eve_probability(table, args.gamma, args.vol)
    payload = {
        "label": field.label,
        "gamma_e": args.gamma,
        "vol_lambda_b": args.vol,
        "radius": args.radius,
        "eve_sum": float(np.sum(table.b / table.ks.astype(float) ** 3)),
        "probability_bound": value,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nfbounds",
        description="Probability bounds and norm-count estimates for "
                    "totally real number-field lattice constellations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, radius_required=True):
        p.add_argument("field_doc", help="path to the field document (JSON)")
        p.add_argument("--precision", type=int, default=80,
                       help="working precision in bits (default 80)")
        p.add_argument("--tol", type=float, default=1e-9,
                       help="boundary tolerance for box membership")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="candidate budget for enumeration")
        p.add_argument("--out", help="output path (default stdout)")
        return p

    p = common(sub.add_parser("field-info", help="embeddings, discriminant, regulator"))
    p.set_defaults(func=cmd_field_info)

    p = common(sub.add_parser("zeta-coeffs", help="ideal-count coefficients a_k"))
    p.add_argument("--max", type=int, required=True, help="largest k")
    p.set_defaults(func=cmd_zeta_coeffs)

    p = common(sub.add_parser("enumerate", help="all box points with norm and height"))
    p.add_argument("--radius", type=float, required=True)
    p.set_defaults(func=cmd_enumerate)

    for name, fn, help_text in [
        ("counts", cmd_counts, "exact per-norm counts b_k"),
        ("estimate", cmd_estimate, "geometric estimates n_k and error column"),
        ("pep", cmd_pep, "pairwise-error curve over an SNR grid"),
        ("eve", cmd_eve, "eavesdropper correct-decision bound"),
    ]:
        p = common(sub.add_parser(name, help=help_text))
        p.add_argument("--radius", type=float, required=(name in ("counts", "pep", "eve")))
        p.add_argument("--max-norm", type=int, default=None,
                       help="keep only rows with k <= this cap")
        p.add_argument("--cutoff", type=int, default=None,
                       help="coefficient cutoff (default: the table cap)")
        if name == "estimate":
            p.add_argument("--from-counts", help="re-ingest a counts CSV")
            p.add_argument("--profile-out", help="write the error histogram CSV here")
        if name == "pep":
            p.add_argument("--snr", required=True, help="grid as START_DB:STOP_DB:POINTS")
        if name == "eve":
            p.add_argument("--gamma", type=float, required=True, help="Eve's SNR (linear)")
            p.add_argument("--vol", type=float, default=1.0, help="Vol of Bob's lattice")
        p.set_defaults(func=fn)

    p = common(sub.add_parser("bounds", help="zeta-function bound report (JSON)"))
    p.add_argument("--s", type=int, required=True, help="exponent (2 = PEP, 3 = wiretap)")
    p.add_argument("--height", type=float, help="height truncation m")
    p.add_argument("--radius", type=float, help="box radius R for the geometric bound")
    p.add_argument("--cutoff", type=int, default=None)
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        name = type(exc).__name__
        hint = _HINTS.get(name, "check the inputs")
        print(f"error: {name}: {exc} ({hint})", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        name = type(exc).__name__
        hint = _HINTS.get(name, "raise the relevant limit")
        print(f"error: {name}: {exc} ({hint})", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
