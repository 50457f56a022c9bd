"""Command line entry point: ``profquad integrate | sweep | profile-dump``.

Exit codes: 0 success, 1 tolerance not met (LimitReached), 2 usage error,
3 evaluation error.
"""

import argparse
import sys

from . import bench
from .driver import DEFAULT_LIMIT, Sampler, Status, assess, integrate
from .expr import ExpressionError, compile_expression
from .rule import GK21, IntegrandError, Interval

EXIT_OK = 0
EXIT_TOLERANCE = 1
EXIT_USAGE = 2
EXIT_EVALUATION = 3


class UsageError(Exception):
    pass


def resolve_function(spec, a=None, b=None):
    """``(f, interval, vectorized)`` for a builtin id or an expression.

    Builtin ids are ``<family>:<n>`` (``c1:1612``, ``pow:5``, ``atg:37``);
    without ``--a/--b`` they integrate over the family's own interval.
    """
    head, sep, tail = spec.partition(":")
    if sep and head.upper() in bench.FAMILIES:
        try:
            n = int(tail)
        except ValueError:
            raise UsageError(f"builtin id needs an integer parameter, got {spec!r}") from None
        fam = bench.family(head)
        iv = fam.interval(n)
        lo = iv.a if a is None else a
        hi = iv.b if b is None else b
        return fam.integrand(n), _interval(lo, hi), True
    try:
        f = compile_expression(spec)
    except ExpressionError as exc:
        raise UsageError(str(exc)) from None
    if a is None or b is None:
        raise UsageError("--a and --b are required with an expression")
    return f, _interval(a, b), False


def _interval(a, b):
    try:
        return Interval(a, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _cmd_integrate(args, out):
    f, iv, vec = resolve_function(args.function, args.a, args.b)
    if args.eps_abs < 0 or args.eps_rel < 0 or (args.eps_abs == 0 and args.eps_rel == 0):
        raise UsageError("tolerances must be non-negative and not both zero")
    if args.limit < 1:
        raise UsageError("--limit must be at least 1")
    res = integrate(f, iv, eps_abs=args.eps_abs, eps_rel=args.eps_rel,
                    max_subdivisions=args.limit, vectorized=vec)
    out.write(f"Q\t{res.Q!r}\n")
    out.write(f"E\t{res.E!r}\n")
    out.write(f"status\t{res.status}\n")
    out.write(f"evaluations\t{res.evaluations}\n")
    out.write(f"bisections\t{res.bisections}\n")
    out.write(f"leaves\t{len(res.ledger)}\n")
    out.write(f"worst_verdict\t{res.worst_verdict.value}\n")
    return EXIT_TOLERANCE if res.status is Status.LIMIT_REACHED else EXIT_OK


def _cmd_profile_dump(args, out):
    f, iv, vec = resolve_function(args.function, args.a, args.b)
    a = assess(GK21, iv, Sampler(f, GK21, vec)(iv))
    out.write(a.profile.dump())
    out.write(f"# q2n\t{a.est.q2n!r}\n")
    out.write(f"# e2n\t{a.est.e2n!r}\n")
    out.write(f"# verdict\t{a.verdict}\n")
    if a.diagnosis is not None:
        out.write(f"# lambda\t{a.diagnosis.lambda_}\n")
        for r in a.diagnosis.reports:
            out.write(f"# report\t{r}\n")
    return EXIT_OK


def _cmd_sweep(args, out):
    fams = bench.FAMILIES if args.family == "all" else (args.family.upper(),)
    pipes = bench.PIPELINES if args.pipeline == "all" else (args.pipeline,)
    rows = []
    for fam_id in fams:
        fam = bench.family(fam_id)
        grid = fam.grid
        if args.max_param is not None:
            grid = range(grid.start, min(grid.stop, args.max_param + 1))
            if len(grid) == 0:
                raise UsageError(f"--max-param leaves no rows for {fam_id}")
        for p in pipes:
            rows += bench.run_sweep(fam, mode=args.mode, pipeline=p, params=grid)
    try:
        data = bench.emit_report(rows, args.format, args.out)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc.strerror or exc}") from None
    if args.out is None:
        out.write(data.decode("utf-8"))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="profquad", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add_function(sp):
        sp.add_argument("--function", required=True,
                        help="builtin id like c1:1612 or an expression in x")
        sp.add_argument("--a", type=float, default=None, help="lower limit")
        sp.add_argument("--b", type=float, default=None, help="upper limit")

    s = sub.add_parser("integrate", help="adaptive integration")
    add_function(s)
    s.add_argument("--eps-abs", type=float, default=0.0)
    s.add_argument("--eps-rel", type=float, default=1e-10)
    s.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="max bisections")
    s.set_defaults(run=_cmd_integrate)

    s = sub.add_parser("sweep", help="benchmark family sweep")
    s.add_argument("--family", required=True,
                   choices=[f.lower() for f in bench.FAMILIES] + ["all"], type=str.lower)
    s.add_argument("--pipeline", default="gamma", choices=list(bench.PIPELINES) + ["all"])
    s.add_argument("--mode", default="single", choices=bench.MODES)
    s.add_argument("--out", default=None, help="output path (default stdout)")
    s.add_argument("--format", default="csv", choices=("csv", "table"))
    s.add_argument("--max-param", type=int, default=None,
                   help="truncate the parameter grid at this value")
    s.set_defaults(run=_cmd_sweep)

    s = sub.add_parser("profile-dump", help="tab-separated profile of one rule application")
    add_function(s)
    s.set_defaults(run=_cmd_profile_dump)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.run(args, out)
    except UsageError as exc:
        sys.stderr.write(f"profquad: error: {exc}\n")
        return EXIT_USAGE
    except (IntegrandError, ArithmeticError, ValueError) as exc:
        sys.stderr.write(f"profquad: evaluation error: {exc}\n")
        return EXIT_EVALUATION


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
