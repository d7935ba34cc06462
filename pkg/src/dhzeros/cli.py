"""Command line interface.

Output is JSON lines on stdout (CSV/SVG for traced curves); diagnostics
go to stderr.  Exit codes: 0 ok, 2 usage or invalid input, 3 numerical
failure, 4 a verified property failed (e.g. a missing mirror zero).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import math
import re
import sys

from . import characters as ch
from . import dh, lincomb, rays, zeros
from .errors import DHError, MirrorNotFound, NumericError, VerificationFailure
from .lfunc import EvalParams, dirichlet_L

EXIT_USAGE, EXIT_NUMERIC, EXIT_ASSERT = 2, 3, 4


def parse_point(text: str) -> complex:
    try:
        sigma, t = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'sigma,t', got {text!r}")
    return complex(sigma, t)


def parse_angle(text: str) -> float:
    named = {"pi": math.pi, "-pi": -math.pi, "pi/2": math.pi / 2, "-pi/2": -math.pi / 2}
    if text in named:
        return named[text]
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a float or pi, got {text!r}")


def parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 5:
        raise argparse.ArgumentTypeError("expected sigma0:sigma1:t0:t1:n")
    s0, s1, t0, t1 = (float(p) for p in parts[:4])
    return (s0, s1), (t0, t1), int(parts[4])


def parse_rect(text: str) -> zeros.SearchRect:
    try:
        return zeros.SearchRect.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def emit(record, out=None):
    out = out or sys.stdout
    out.write(json.dumps(record, sort_keys=True) + "\n")


def _cplx(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _params(args) -> EvalParams:
    base = EvalParams()
    return dataclasses.replace(
        base,
        target_abs_tol=args.tol if args.tol is not None else base.target_abs_tol,
        em_order=args.em_order if args.em_order is not None else base.em_order,
        max_height=args.max_height if args.max_height is not None else base.max_height,
    )


def _spec(args) -> dh.DHSpec:
    return dh.build_dh(ch.get_character(args.modulus, args.char))


# handlers ----------------------------------------------------------------

def cmd_characters_list(args):
    for chi in ch.enumerate_characters(args.modulus):
        emit({
            "label": chi.label,
            "modulus": chi.modulus,
            "conductor": ch.conductor(chi),
            "parity": ch.parity(chi),
            "exponents": list(chi.exponents),
            "values": [None if r is None else [r.numerator, r.denominator] for r in
                       (chi.turn(n) for n in range(1, chi.modulus + 1))],
        })


def cmd_eval_L(args):
    chi = ch.get_character(args.modulus, args.char)
    val, err = dirichlet_L(chi, args.s, _params(args), return_error=True)
    emit({"re": float(val.real), "im": float(val.imag), "est_error": float(err)})


def cmd_dh_build(args):
    emit(_spec(args).summary())


def cmd_dh_eval(args):
    val, err = dh.eval_dh(_spec(args), args.s, _params(args), return_error=True)
    emit({"re": float(val.real), "im": float(val.imag), "est_error": float(err)})


def cmd_dh_residual(args):
    spec = _spec(args)
    (s0, s1), (t0, t1), n = args.grid
    grid = dh.standard_grid(n, n, (s0, s1), (t0, t1))
    res = dh.fe_residual(spec, grid, _params(args))
    for z, r in zip(grid, res):
        emit({"s": _cplx(z), "residual": float(r)})
    emit({"summary": True, "points": int(grid.size), "max_residual": float(res.max())})


def cmd_zeros_scan(args):
    spec = _spec(args)
    f = spec.evaluator(_params(args))
    target = zeros.derivative(f) if args.derivative else f
    rect = dataclasses.replace(args.rect, boundary_samples=args.samples)
    found = zeros.find_zeros(target, rect, args.zero_tol)
    missing = []
    for z in found:
        if not args.derivative and not args.no_mirror:
            try:
                z = zeros.mirror_check(f, z, args.zero_tol)
            except MirrorNotFound as exc:
                missing.append(str(exc))
        emit(z.to_dict())
    if missing:
        raise MirrorNotFound("; ".join(missing))


def cmd_zeros_mirror(args):
    spec = _spec(args)
    f = spec.evaluator(_params(args))
    z = zeros.refine_newton(f, args.at, args.zero_tol)
    emit(zeros.mirror_check(f, z, args.zero_tol).to_dict())


def cmd_trace(args):
    spec = _spec(args)
    f = spec.evaluator(_params(args))
    if args.through_zero:
        z = zeros.refine_newton(f, args.seed)
        curves = rays.curves_through_zero(f, z.location, args.phi, args.rect, step=args.step)
    else:
        curves = [rays.trace_preimage(f, args.seed, args.phi, args.rect, step=args.step)]
    for i, c in enumerate(curves):
        print(f"curve {i}: {len(c.points)} points, ends {c.ends}, max ray residual {c.max_ray_residual:.3g}",
              file=sys.stderr)
    if args.format == "svg":
        sys.stdout.write(rays.to_svg(curves, args.rect) + "\n")
    else:
        for c in curves:
            rays.write_csv(c, sys.stdout, f)
    if args.svg:
        with open(args.svg, "w") as fh:
            fh.write(rays.to_svg(curves, args.rect))


def cmd_lincomb_demo(args):
    out = lincomb.demo(args.modulus, args.s0, params=_params(args))
    emit(out)
    ok = (out["value_at_s0"] < 1e-9
          and all(r < 1e-8 for comp in out["component_residuals"] for r in comp)
          and any(r["residual"] > 1e-4 for r in out["residual_at_samples"]))
    if not ok:
        raise VerificationFailure("separation property failed")


# parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """Treats ``-1:2:80:90`` and ``-0.5,14`` as values rather than options."""

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._negative_number_matcher = re.compile(r"^-\.?\d")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dhzeros", description=__doc__.splitlines()[0])
    p.add_argument("--show-config", action="store_true", help="print default settings and exit")
    p.add_argument("--tol", type=float, help="target absolute tolerance of the continuation")
    p.add_argument("--em-order", type=int, help="Euler-Maclaurin correction order")
    p.add_argument("--max-height", type=float, help="|Im s| the defaults are tuned for")
    p.add_argument("--format", choices=["json", "csv", "svg"], default="json")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="group", parser_class=_Parser)

    def char_args(sp):
        sp.add_argument("--modulus", "-q", type=int, required=True)
        sp.add_argument("--char", type=int, required=True, help="character label (see 'characters list')")

    g = sub.add_parser("characters").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = g.add_parser("list")
    sp.add_argument("--modulus", "-q", type=int, required=True)
    sp.set_defaults(func=cmd_characters_list)

    g = sub.add_parser("eval").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = g.add_parser("L")
    char_args(sp)
    sp.add_argument("--s", type=parse_point, required=True)
    sp.set_defaults(func=cmd_eval_L)

    g = sub.add_parser("dh").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = g.add_parser("build")
    char_args(sp)
    sp.set_defaults(func=cmd_dh_build)
    sp = g.add_parser("eval")
    char_args(sp)
    sp.add_argument("--s", type=parse_point, required=True)
    sp.set_defaults(func=cmd_dh_eval)
    sp = g.add_parser("residual")
    char_args(sp)
    sp.add_argument("--grid", type=parse_grid, default=parse_grid("-2:3:0:150:14"),
                    help="sigma0:sigma1:t0:t1:n, n x n cell centres")
    sp.set_defaults(func=cmd_dh_residual)

    g = sub.add_parser("zeros").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = g.add_parser("scan")
    char_args(sp)
    sp.add_argument("--rect", type=parse_rect, required=True)
    sp.add_argument("--derivative", action="store_true", help="scan zeros of f' instead")
    sp.add_argument("--no-mirror", action="store_true")
    sp.add_argument("--samples", type=int, default=400, help="boundary samples per edge")
    sp.add_argument("--zero-tol", type=float, default=zeros.ZERO_TOL)
    sp.set_defaults(func=cmd_zeros_scan)
    sp = g.add_parser("mirror")
    char_args(sp)
    sp.add_argument("--at", type=parse_point, required=True)
    sp.add_argument("--zero-tol", type=float, default=zeros.ZERO_TOL)
    sp.set_defaults(func=cmd_zeros_mirror)

    sp = sub.add_parser("trace")
    char_args(sp)
    sp.add_argument("--seed", type=parse_point, required=True)
    sp.add_argument("--phi", type=parse_angle, required=True)
    sp.add_argument("--rect", type=parse_rect, required=True)
    sp.add_argument("--step", type=float, default=1e-2)
    sp.add_argument("--through-zero", action="store_true", help="seed is near a zero; trace curves leaving it")
    sp.add_argument("--svg", help="also write an SVG plot to this path")
    sp.set_defaults(func=cmd_trace)

    g = sub.add_parser("lincomb").add_subparsers(dest="action", required=True, parser_class=_Parser)
    sp = g.add_parser("demo")
    sp.add_argument("--modulus", "-q", type=int, default=13)
    sp.add_argument("--s0", type=parse_point, default=complex(0.7, 3.0))
    sp.set_defaults(func=cmd_lincomb_demo)
    return p


def show_config() -> dict:
    return {
        "eval_params": dataclasses.asdict(EvalParams()),
        "zero_tol": zeros.ZERO_TOL,
        "merge_radius": zeros.MERGE_RADIUS,
        "mirror_im_tol": zeros.MIRROR_IM_TOL,
        "boundary_samples": 400,
        "ray_tol": rays.RAY_TOL,
        "trace_step": 1e-2,
        "step_floor": rays.STEP_FLOOR,
        "fe_residual_grid": "10 x 20 cell centres of [-2,3] x [0,150]",
    }


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.show_config:
        emit(show_config())
        return 0
    if not getattr(args, "func", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        args.func(args)
    except VerificationFailure as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_ASSERT
    except NumericError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DHError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
