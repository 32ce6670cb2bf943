"""Command-line entry point.

Exit codes: 0 success, 1 verdict ``failed`` under ``--strict``, 2 invalid
input, 3 numerical breakdown. Every output file is written atomically.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .errors import InputError, NumericalError, SchemaError
from .exact import exact_levels
from .potential import Hamiltonian, TransformSpec, dumps, hermitian_partner, loads
from .report import atomic_write, convergence_csv, convergence_points, emit_svg_convergence, json_text
from .solver import Contour, Spectrum, convergence_study, solve_fd, solve_shoot
from .verify import VerifyConfig, ZnojilConfig, eigenvectors, ortho_check, verify_proposition, znojil_duality

DEFAULT_CONTOUR = "real:-12:12:4000"
EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_NUMERICAL = 0, 1, 2, 3


@dataclass
class RunConfig:
    """Validated view of the parsed arguments."""

    command: str
    inputs: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    contour: Contour | None = None
    outputs: list = field(default_factory=list)

    def validate(self):
        for name, tol in self.tolerances.items():
            if not tol > 0:
                raise InputError(f"{name} must be positive, got {tol}")
        for p in self.inputs:
            if not Path(p).is_file():
                raise InputError(f"input file not found: {p}")
        for p in self.outputs:
            if p is not None and not Path(p).resolve().parent.is_dir():
                raise InputError(f"output directory does not exist: {p}")
        return self


def _load(path) -> Hamiltonian:
    return loads(Path(path).read_text(encoding="utf-8"))


def _emit(path, text):
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _sign(text):
    if text in ("-", "minus", "-1"):
        return -1
    if text in ("+", "plus", "1", "+1"):
        return 1
    raise argparse.ArgumentTypeError("sign must be - or +")


def cmd_transform(args):
    RunConfig("transform", [args.input], outputs=[args.out]).validate()
    h = _load(args.input)
    if args.map in ("partner-minus", "partner-plus"):
        h2, _ = hermitian_partner(h, -1 if args.map == "partner-minus" else 1)
    else:
        h2 = TransformSpec.parse(args.map).apply(h)
    _emit(args.out, dumps(h2))
    return EXIT_OK


def cmd_spectrum(args):
    c = Contour.parse(args.contour)
    RunConfig("spectrum", [args.input], contour=c, outputs=[args.out]).validate()
    h = _load(args.input)
    if args.method == "exact":
        vals = exact_levels(h, args.levels)
        spec = Spectrum.build(vals, "exact", [0.0] * len(vals), c)
    elif args.method == "shoot":
        spec = solve_shoot(h, c, args.levels)
    else:
        spec = solve_fd(h, c, args.levels)
    _emit(args.out, spec.to_csv())
    return EXIT_OK


def cmd_verify(args):
    c = Contour.parse(args.contour)
    RunConfig("verify", [args.pt], {"tol": args.tol}, c, [args.out]).validate()
    h = _load(args.pt)
    report = verify_proposition(h, c, VerifyConfig(levels=args.levels, tol=args.tol, sign=args.sign))
    _emit(args.out, json_text(report.to_dict()))
    if report.failed_stage is not None:
        print(f"error: verification stopped at {report.failed_stage}: {report.error}", file=sys.stderr)
        return EXIT_NUMERICAL
    if args.strict and report.verdict == "failed":
        return EXIT_FAILED
    return EXIT_OK


def cmd_ortho(args):
    c = Contour.parse(args.contour)
    RunConfig("ortho", [args.input], contour=c, outputs=[args.out]).validate()
    h = _load(args.input)
    report = ortho_check(eigenvectors(h, c, args.levels), c)
    _emit(args.out, json_text(report.to_dict()))
    return EXIT_OK


def cmd_znojil(args):
    RunConfig("experiment", outputs=[args.out]).validate()
    if not args.m2 > 0 or args.f < 0:
        raise InputError("need --m2 > 0 and --f >= 0")
    cfg = ZnojilConfig(levels=args.levels, n_points=args.n_points)
    report = znojil_duality(args.m2, args.f, cfg)
    _emit(args.out, json_text(report.to_dict()))
    return EXIT_OK


def cmd_convergence(args):
    c = Contour.parse(args.contour)
    RunConfig("experiment", [args.input], contour=c, outputs=[args.out, args.svg]).validate()
    try:
        n_list = [int(v) for v in args.n_list.split(",")]
    except ValueError:
        raise SchemaError(f"cannot parse --n-list {args.n_list!r}") from None
    h = _load(args.input)
    results = [convergence_study(h, c, n_list, level) for level in range(args.levels)]
    _emit(args.out, convergence_csv(results))
    if args.svg:
        atomic_write(args.svg, emit_svg_convergence({f"level {r.level}": convergence_points(r) for r in results}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptpartner", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("transform", help="apply a transformation to a Hamiltonian JSON")
    t.add_argument("--in", dest="input", required=True)
    t.add_argument(
        "--map",
        required=True,
        help="rotate-minus | rotate-plus | eta:<beta> | mass-flip | coupling-flip:<i> | partner-minus | partner-plus",
    )
    t.add_argument("--out")
    t.set_defaults(func=cmd_transform)

    s = sub.add_parser("spectrum", help="compute the lowest levels")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--method", choices=("fd", "shoot", "exact"), default="fd")
    s.add_argument("--contour", default=DEFAULT_CONTOUR)
    s.add_argument("--levels", type=_positive_int, default=4)
    s.add_argument("--out")
    s.set_defaults(func=cmd_spectrum)

    v = sub.add_parser("verify", help="solve a PT Hamiltonian and its Hermitian partner and pair them")
    v.add_argument("--pt", required=True)
    v.add_argument("--contour", default=DEFAULT_CONTOUR)
    v.add_argument("--tol", type=float, default=1e-3)
    v.add_argument("--levels", type=_positive_int, default=4)
    v.add_argument("--sign", type=_sign, default=-1, help="rotation x -> sign*i*y (default -)")
    v.add_argument("--strict", action="store_true", help="exit 1 when the verdict is failed")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("ortho", help="Gram matrices of the lowest eigenvectors")
    o.add_argument("--in", dest="input", required=True)
    o.add_argument("--contour", default=DEFAULT_CONTOUR)
    o.add_argument("--levels", type=_positive_int, default=4)
    o.add_argument("--out")
    o.set_defaults(func=cmd_ortho)

    e = sub.add_parser("experiment", help="named experiments")
    esub = e.add_subparsers(dest="experiment", required=True)
    z = esub.add_parser("znojil", help="p^2 +- m2 x^2 + i f x^3 duality")
    z.add_argument("--m2", type=float, required=True)
    z.add_argument("--f", type=float, required=True)
    z.add_argument("--levels", type=_positive_int, default=4)
    z.add_argument("--n-points", type=_positive_int, default=4000)
    z.add_argument("--out")
    z.set_defaults(func=cmd_znojil)
    cv = esub.add_parser("convergence", help="observed FD convergence order")
    cv.add_argument("--in", dest="input", required=True)
    cv.add_argument("--contour", default=DEFAULT_CONTOUR)
    cv.add_argument("--levels", type=_positive_int, default=4)
    cv.add_argument("--n-list", default="500,1000,2000,4000")
    cv.add_argument("--out")
    cv.add_argument("--svg")
    cv.set_defaults(func=cmd_convergence)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
