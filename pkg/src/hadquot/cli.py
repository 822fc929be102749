"""Command-line front end.

    hadquot COMMAND --spec FILE [options]

Every run writes one report (JSON, or a CSV ladder where that makes sense).
Exit status: 0 success, 2 validation error, 3 computational error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone

from . import __version__
from .criterion import AUDIT_NOTE, criterion_run, theorem14_check, theorem17_check
from .errors import HadquotError, SpecSyntaxError, UnverifiedRelation
from .expsum import rational_to_expsum
from .fields import FieldCtx, Place, enumerate_places
from .heights import a_analyticity_audit, radius_profile, series_height, truncation_height_curve
from .reduction import profile, reduce_series, split_unit_density
from .relations import find_relation, siegel_bound_report
from .specfmt import parse_spec

SCHEMA = "hadquot.report/1"
COMMANDS = ("places", "height", "radius", "audit", "reduce", "profile", "find-relation",
            "criterion", "theorem14", "theorem17", "density")
CSV_COMMANDS = ("places", "height", "radius", "audit", "profile", "criterion")


class ValidationError(ValueError):
    pass


def _positive(name, lo=1):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"{name} must be >= {lo}")
        return v
    return conv


def _ladder(text):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError("ladder must be comma-separated integers") from None
    if not vals or vals[0] < 1 or any(b <= a for a, b in zip(vals, vals[1:])):
        raise argparse.ArgumentTypeError("ladder must be positive and strictly increasing")
    return vals


def _field(text):
    if text == "Q":
        return FieldCtx.rationals()
    if text.startswith("Fq:"):
        try:
            return FieldCtx.function_field(int(text[3:]))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    raise argparse.ArgumentTypeError("field must be Q or Fq:<q>")


def build_parser():
    ap = argparse.ArgumentParser(prog="hadquot", description="Heights, reductions and algebraicity "
                                 "criteria for Hadamard quotients of power series.")
    ap.add_argument("--version", action="version", version=f"hadquot {__version__}")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--spec", help="series specification file")
    ap.add_argument("--series", help="series to analyse (default: the last one defined)")
    ap.add_argument("--denominator", help="rational series g for theorem14 / theorem17")
    ap.add_argument("--relation", help="relation satisfied by the series (theorem17)")
    ap.add_argument("--field", type=_field, help="Q or Fq:<q>, for 'places' without a spec")
    ap.add_argument("--r", type=_positive("r"), default=1)
    ap.add_argument("--L", type=_positive("L"), default=1)
    ap.add_argument("--ladder", type=_ladder)
    ap.add_argument("--place-bound", type=_positive("place-bound", 2), default=200)
    ap.add_argument("--degree-cap", type=_positive("degree-cap", 0))
    ap.add_argument("--verification-cap", type=_positive("verification-cap", 0))
    ap.add_argument("--coeff-window", type=_positive("coeff-window"), default=200)
    ap.add_argument("--threshold", type=float, default=3.0)
    ap.add_argument("--place", help="place for 'reduce', e.g. p:5 or poly:q=3:x^2+1")
    ap.add_argument("--order", type=_positive("order", 0), default=20)
    ap.add_argument("--density-bound", type=_positive("density-bound", 2), default=10 ** 5)
    ap.add_argument("--part", choices=("i", "ii"), default="i")
    ap.add_argument("--l", type=_positive("l", 0), default=1)
    ap.add_argument("--places", default="inf", help="comma-separated places for theorem14")
    ap.add_argument("--output", "-o", help="output path (default: stdout)")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    return ap


# ---------------------------------------------------------------------------


def _load(args):
    if not args.spec:
        raise ValidationError("--spec is required for this command")
    try:
        with open(args.spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read spec: {exc}") from None
    return parse_spec(text)


def _series(doc, name):
    if name is None:
        if not doc.series:
            raise ValidationError("spec defines no series")
        name = list(doc.series)[-1]
    return doc.power_series(name)


def _parse_place(text, ctx):
    try:
        place = Place.parse(text, ctx)
    except (ValueError, KeyError) as exc:
        raise ValidationError(f"bad place {text!r}: {exc}") from None
    ok = place.kind in ("inf", "p") if ctx.is_rationals else place.q == ctx.q
    if not ok:
        raise ValidationError(f"place {text!r} does not belong to {ctx}")
    return place


def _execute(args):
    """(result dict, csv rows or None)."""
    cmd = args.command
    if cmd == "places":
        ctx = args.field if args.spec is None else _load(args).ctx
        if ctx is None:
            raise ValidationError("places needs --field or --spec")
        places = enumerate_places(ctx, args.place_bound)
        rows = [("place", "residue_card")] + [(str(p), p.residue_card or "") for p in places]
        return {"field": str(ctx), "places": [str(p) for p in places]}, rows

    doc = _load(args)
    ctx = doc.ctx
    f = _series(doc, args.series)
    ladder = args.ladder

    if cmd == "height":
        orders = ladder or [50, 100, 200, 400]
        est = truncation_height_curve(f, args.r, orders)
        bomb = series_height(f, orders)
        rows = [("N", "truncation", "series")] + [
            (n, a, b) for (n, a), (_, b) in zip(est.samples, bomb.samples)]
        return {"truncation_height": est.to_dict(), "series_height": bomb.to_dict()}, rows
    if cmd == "radius":
        rp = radius_profile(f, args.place_bound, args.coeff_window)
        rows = [("place", "log_inv_radius")] + [(str(p), v) for p, v in rp.per_place.items()]
        return rp.to_dict(), rows
    if cmd == "audit":
        au = a_analyticity_audit(f, args.place_bound, args.coeff_window, args.threshold)
        rows = [("place", "log_inv_r")] + [(str(p), v) for p, v in au.per_place.items()]
        return au.to_dict(), rows
    if cmd == "reduce":
        if not args.place:
            raise ValidationError("reduce needs --place")
        s = _parse_place(args.place, ctx)
        if s.is_archimedean:
            raise ValidationError("reduce needs a non-archimedean place")
        return {"place": str(s), "coefficients": reduce_series(f, s, args.order)}, None
    if cmd == "profile":
        cap = 4 if args.degree_cap is None else args.degree_cap
        prof = profile(f, args.r, args.place_bound, cap)
        rows = [("place", "h", "status")] + [
            (str(s), "inf" if e.h == float("inf") else e.h, e.status) for s, e in prof.entries.items()]
        return prof.to_dict(), rows
    if cmd == "find-relation":
        cert = find_relation(f, args.r, args.L, args.verification_cap)
        out = cert.to_dict(ctx)
        out["siegel"] = siegel_bound_report(cert, f, ctx).to_dict()
        return out, None
    if cmd == "criterion":
        rep = criterion_run(f, args.r, ladder, args.place_bound, args.L, args.degree_cap,
                            args.verification_cap)
        rows = [("n", "lambda", "rhs")] + rep.ladder_rows()
        return rep.to_dict(), rows
    if cmd in ("theorem14", "theorem17", "density"):
        gname = args.denominator if cmd != "density" else (args.series or args.denominator)
        if gname is None:
            raise ValidationError(f"{cmd} needs --denominator")
        g = rational_to_expsum(doc.power_series(gname))
        if cmd == "density":
            return split_unit_density(g, ctx, args.density_bound).to_dict(), None
        if cmd == "theorem14":
            places = [_parse_place(p.strip(), ctx) for p in args.places.split(",") if p.strip()]
            return theorem14_check(f, g, places, args.r, ladder, args.place_bound, args.L, args.l).to_dict(), None
        if args.relation:
            rel = doc.relation(args.relation)
        else:
            cert = find_relation(f, args.r, args.L, args.verification_cap)
            if not cert.exact_at_cap:
                raise UnverifiedRelation(cert.first_nonzero[0])
            rel = cert.relation
        rep = theorem17_check(rel, f, g, args.place_bound, ladder, args.L, args.part, args.density_bound)
        return rep.to_dict(), None
    raise ValidationError(f"unknown command {cmd}")


def _config(args):
    cfg = {k: v for k, v in vars(args).items() if k not in ("output",)}
    cfg["field"] = str(args.field) if args.field is not None else None
    return cfg


def _plain(obj):
    """JSON-safe copy: non-finite floats become the strings "inf" / "-inf" / "nan"."""
    if isinstance(obj, float) and not math.isfinite(obj):
        return "nan" if obj != obj else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


def _emit(text, path):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)  # exits with status 2 on bad flags
    report = {
        "schema": SCHEMA,
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "status": "ok",
        "result": None,
        "error": None,
        "audit_note": AUDIT_NOTE,
        "generated_at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    code = 0
    rows = None
    try:
        if args.format == "csv" and args.command not in CSV_COMMANDS:
            raise ValidationError(f"csv output is available for: {', '.join(CSV_COMMANDS)}")
        report["result"], rows = _execute(args)
    except HadquotError as exc:
        report["status"], report["error"], code = "error", exc.to_dict(), 3
    except (ValidationError, SpecSyntaxError) as exc:
        report["status"], code = "invalid", 2
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    except ValueError as exc:
        # parameter combinations rejected by the library before any computation
        report["status"], code = "invalid", 2
        report["error"] = {"type": type(exc).__name__, "message": str(exc)}

    if code == 0 and args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        _emit(buf.getvalue(), args.output)
    else:
        _emit(json.dumps(_plain(report), indent=2, default=str) + "\n", args.output)
    if code:
        msg = report["error"].get("message", "")
        print(f"hadquot: {report['status']}: {report['error']['type']}: {msg}", file=sys.stderr)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
