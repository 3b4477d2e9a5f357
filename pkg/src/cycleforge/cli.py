"""Command-line front end.

Reports are JSON, trajectories are CSV; every file is written atomically
(temp file in the target directory, then rename).  Exit status: 0 on
success, 1 when --strict is set and the analysis reaches a negative
verdict, 2 on input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from fractions import Fraction

from . import bifurcation, centers, dynamics, fields, integrate, lyapunov
from .poly import MultiPoly, PolyParseError, format_poly, parse_poly
from .resultants import cascade


def worker_count() -> int:
    """Worker cap from CYCLEFORGE_THREADS (default 1)."""
    try:
        n = int(os.environ.get("CYCLEFORGE_THREADS", "1"))
    except ValueError:
        return 1
    return max(1, n)


FAMILIES = {
    "P4": fields.p4_family,
    "P5": fields.p5_family,
    "P7": fields.p7_base,
    "P8": fields.p8_base,
    "P9": fields.p9_family,
}


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    d = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".cycleforge-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit_json(obj, out: str | None) -> None:
    _write_out(json.dumps(obj, indent=2) + "\n", out)


class InputError(Exception):
    pass


def _load_family(args) -> fields.VectorField:
    if getattr(args, "family", None):
        if args.family not in FAMILIES:
            raise InputError(
                f"unknown family {args.family!r}; choose from "
                f"{sorted(FAMILIES)} or use --file"
            )
        return FAMILIES[args.family]()
    if getattr(args, "file", None):
        try:
            with open(args.file) as fh:
                data = json.load(fh)
        except OSError as e:
            raise InputError(str(e))
        except json.JSONDecodeError as e:
            raise InputError(f"{args.file}: line {e.lineno} column {e.colno}: {e.msg}")
        try:
            vs = tuple(data.get("variables") or ("x", "y"))
            return fields.VectorField(
                parse_poly(data["f"], vs), parse_poly(data["g"], vs)
            )
        except (KeyError, PolyParseError, ValueError) as e:
            raise InputError(f"{args.file}: {e}")
    raise InputError("need --family or --file")


def _parse_binding(spec: str | None) -> dict:
    out = {}
    if not spec:
        return out
    for part in spec.split(","):
        if "=" not in part:
            raise InputError(f"bad binding {part!r}; expected name=value")
        name, val = part.split("=", 1)
        try:
            out[name.strip()] = Fraction(val.strip())
        except ValueError:
            raise InputError(f"bad rational value {val!r} for {name.strip()!r}")
    return out


# -- subcommands ------------------------------------------------------------------


def _cmd_lyap(args) -> int:
    fam = _load_family(args)
    rep = lyapunov.lyapunov_quantities(fam.P, fam.Q, args.N)
    _emit_json(rep.to_json(), args.out)
    return 0


def _cmd_center_certify(args) -> int:
    fam = _load_family(args)
    conditions = {"P4": fields.P4_CONDITIONS, "P5": fields.P5_CONDITIONS}.get(
        getattr(args, "family", None) or "", {}
    )
    if args.condition:
        if args.condition in conditions:
            fam_c = fields.apply_condition(fam, conditions[args.condition])
        else:
            try:
                cond = json.loads(args.condition)
            except json.JSONDecodeError:
                raise InputError(
                    f"condition {args.condition!r} is neither a known label "
                    "nor a JSON substitution map"
                )
            fam_c = fields.apply_condition(fam, cond)
    else:
        fam_c = fam
    extra = []
    if args.curve:
        for c in args.curve:
            extra.append(parse_poly(c, fam_c.variables))
    cert = centers.certify(fam_c, extra_curves=extra)
    out = {"condition": args.condition, "certificate": cert.to_json()}
    _emit_json(out, args.out)
    if args.strict and cert.kind == "none":
        return 1
    return 0


def _cmd_eliminate(args) -> int:
    fam = _load_family(args)
    rep = lyapunov.lyapunov_quantities(fam.P, fam.Q, args.N)
    order = [s.strip() for s in args.order.split(",")]
    traces = cascade(rep.quantities, order, coeff_bound=args.bound)
    _emit_json([t.to_json() for t in traces], args.out)
    return 0


def _load_setup(path: str) -> "bifurcation.PerturbationSetup":
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(str(e))
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")
    try:
        base_data = data["base"]
        vs = tuple(base_data.get("variables") or ("x", "y"))
        base = fields.VectorField(
            parse_poly(base_data["f"], vs), parse_poly(base_data["g"], vs)
        )
        terms = [tuple(t) for t in data["terms"]]
        point = tuple(Fraction(str(c)) for c in data.get("point", (0, 0)))
        return bifurcation.build_perturbation(
            base, terms, alpha_symbol=data.get("alpha", "alpha"), point=point
        )
    except (KeyError, TypeError, PolyParseError, ValueError) as e:
        raise InputError(f"{path}: {e}")


def _cmd_bifurcate(args) -> int:
    if not args.prop and not args.setup:
        raise InputError("need --prop or --setup")
    if args.setup:
        setup = _load_setup(args.setup)
        rep = bifurcation.ggt_analyze(setup, N=args.N)
        _emit_json(rep.to_json(), args.out)
        return 1 if (args.strict and rep.verdict[0] != "k_plus_ell_cycles") else 0
    label = args.prop
    if label in ("P7", "P8", "P9b"):
        setup = bifurcation.CANNED_SETUPS[label]()
        rep = bifurcation.ggt_analyze(setup, N=args.N)
        out = rep.to_json()
        if label == "P9b":
            out["mirror_total"] = (
                bifurcation.mirror_count(rep)
                if rep.verdict[0] == "k_plus_ell_cycles" else None
            )
        _emit_json(out, args.out)
        return 1 if (args.strict and rep.verdict[0] != "k_plus_ell_cycles") else 0
    if label == "T1c":
        rep = bifurcation.ggt_analyze(bifurcation.p9_setup(), N=args.N)
        ok = rep.verdict[0] == "k_plus_ell_cycles"
        out = {
            "setting": "two nests around the symmetric pair of centers",
            "per_nest": rep.verdict[1] if ok else None,
            "total": bifurcation.mirror_count(rep) if ok else None,
            "report": rep.to_json(),
        }
        _emit_json(out, args.out)
        return 1 if (args.strict and not ok) else 0
    if label == "P9c":
        setup = bifurcation.p9_setup()
        res = bifurcation.hopf_order_one(setup, {"mu": Fraction(0)})
        total = 2 if res == "one_cycle" else 0
        _emit_json({"hopf": res, "per_nest": 1 if res == "one_cycle" else 0,
                    "total": total}, args.out)
        return 1 if (args.strict and res != "one_cycle") else 0
    raise InputError(f"unknown analysis label {label!r}")


def _cmd_singular(args) -> int:
    fam = _load_family(args)
    binding = _parse_binding(args.bind)
    rep = dynamics.singularities_in_delta(fam, binding, region=args.region)
    _emit_json(rep.to_json(), args.out)
    return 1 if (args.strict and rep.degenerate_family) else 0


def _cmd_berlinskii(args) -> int:
    fam = _load_family(args)
    binding = _parse_binding(args.bind)
    if args.raw_pair:
        fb = fam.bind(binding)
        rep = dynamics.pair_report(fb.f, fb.g)
    else:
        rep = dynamics.singularities_in_delta(fam, binding, region=args.region)
    res = dynamics.berlinskii_check(rep)
    out = {"singularities": rep.to_json(), "berlinskii": res.to_json()}
    _emit_json(out, args.out)
    return 1 if (args.strict and res.configuration == "counterexample") else 0


def _cmd_simulate(args) -> int:
    fam = _load_family(args)
    binding = _parse_binding(args.bind)
    try:
        x0 = tuple(float(t) for t in args.start.split(","))
        if len(x0) != 2:
            raise ValueError
    except ValueError:
        raise InputError(f"bad start point {args.start!r}; expected x,y")
    traj = integrate.integrate(
        fam, binding, x0, args.tmax, rtol=args.rtol, atol=args.atol,
        samples=args.samples,
    )
    if args.out:
        d = os.path.dirname(os.path.abspath(args.out))
        fd, tmp = tempfile.mkstemp(dir=d, prefix=".cycleforge-")
        os.close(fd)
        try:
            traj.to_csv(tmp)
            os.replace(tmp, args.out)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
    else:
        import io

        buf = io.StringIO()
        buf.write("t,x,y\n")
        for ti, (xi, yi) in zip(traj.t, traj.xy):
            buf.write(f"{float(ti)!r},{float(xi)!r},{float(yi)!r}\n")
        sys.stdout.write(buf.getvalue())
    if traj.status != "ok":
        sys.stderr.write(f"warning: {traj.diagnostic}\n")
        return 1 if args.strict else 0
    return 0


def _cmd_game_build(args) -> int:
    try:
        with open(args.file) as fh:
            data = json.load(fh)
    except OSError as e:
        raise InputError(str(e))
    except json.JSONDecodeError as e:
        raise InputError(f"{args.file}: line {e.lineno} column {e.colno}: {e.msg}")
    try:
        model = fields.GameModel.from_json(data)
    except (KeyError, PolyParseError, ValueError) as e:
        raise InputError(f"{args.file}: {e}")
    fld = fields.build_from_game(model)
    _emit_json(fld.to_json(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="cycleforge",
        description="Exact analysis of planar polynomial fields with an "
                    "invariant square",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, family=True):
        if family:
            p.add_argument("--family", help="built-in family label "
                           f"({', '.join(sorted(FAMILIES))})")
            p.add_argument("--file", help="JSON family file with f, g, variables")
        p.add_argument("--out", help="output path (default: stdout)")
        p.add_argument("--strict", action="store_true",
                       help="exit 1 on negative analysis verdicts")

    p = sub.add_parser("lyap", help="Lyapunov quantities of a family")
    common(p)
    p.add_argument("--N", type=int, default=2)
    p.set_defaults(func=_cmd_lyap)

    p = sub.add_parser("center-certify", help="certify a center stratum")
    common(p)
    p.add_argument("--condition", help="label (e.g. C5, D7) or JSON map")
    p.add_argument("--curve", action="append",
                   help="extra candidate invariant curve (repeatable)")
    p.set_defaults(func=_cmd_center_certify)

    p = sub.add_parser("eliminate", help="resultant cascade on the quantities")
    common(p)
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--order", required=True,
                   help="comma-separated elimination order")
    p.add_argument("--bound", type=int, default=2)
    p.set_defaults(func=_cmd_eliminate)

    p = sub.add_parser("bifurcate", help="first-order cycle bifurcation")
    common(p, family=False)
    p.add_argument("--prop", help="P7 | P8 | P9b | P9c | T1c")
    p.add_argument("--setup", help="JSON file with a custom perturbation "
                   "setup: base {f, g, variables}, terms, alpha, point")
    p.add_argument("--N", type=int, default=None)
    p.set_defaults(func=_cmd_bifurcate)

    p = sub.add_parser("singular", help="certified singular points")
    common(p)
    p.add_argument("--bind", help="comma-separated name=value parameters")
    p.add_argument("--region", choices=("delta", "all"), default="delta")
    p.set_defaults(func=_cmd_singular)

    p = sub.add_parser("berlinskii", help="four-point configuration check")
    common(p)
    p.add_argument("--bind", help="comma-separated name=value parameters")
    p.add_argument("--region", choices=("delta", "all"), default="delta")
    p.add_argument("--raw-pair", action="store_true",
                   help="classify (f, g) itself instead of the full field")
    p.set_defaults(func=_cmd_berlinskii)

    p = sub.add_parser("simulate", help="integrate a trajectory to CSV")
    common(p)
    p.add_argument("--bind", help="comma-separated name=value parameters")
    p.add_argument("--start", required=True, help="x,y start point")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--rtol", type=float, default=1e-10)
    p.add_argument("--atol", type=float, default=1e-12)
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("game-build", help="field from 2x2 game payoffs")
    p.add_argument("--file", required=True, help="JSON {A: [[..]], B: [[..]]}")
    p.add_argument("--out")
    p.add_argument("--strict", action="store_true")
    p.set_defaults(func=_cmd_game_build)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors already
        return int(e.code or 0)
    for tol in ("rtol", "atol"):
        if getattr(args, tol, 1.0) <= 0:
            sys.stderr.write(f"error: --{tol} must be positive\n")
            return 2
    try:
        return args.func(args)
    except InputError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except (PolyParseError, ValueError, ArithmeticError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
