"""``qspectra`` command line: compute quantities, run verifications, render reports.

Exit codes: 0 all pass, 1 some identity failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import QSpectraError
from .exact import RationalFunction
from .partitions import Partition, lr_coeff
from .report import load_report
from .spectral import (
    SpectralContext,
    a_image,
    f_of_z,
    images_for,
    p_image_poly,
    pi_k,
    s_image,
    schur_image,
    u_of_y,
)
from .symfunc import Alphabet, complete_sym, default_order, elem_sym, power_sum_classical
from .verify import DEFAULT_GRID, DEFAULT_KMAX, IDENTITIES, verify_grid

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

QUANTITIES = ("ek", "hk", "pk-classical", "ak", "sk", "pik", "weights", "p-image", "schur", "f", "u", "lr")


class UsageError(Exception):
    pass


def _partition(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {v}")
    return v


def _pos(text: str) -> int:
    v = _nonneg(text)
    if v < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return v


def _render(x) -> str:
    if isinstance(x, RationalFunction) and not x.factors:
        return str(x.num)
    return str(x)


def _need(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError(f"{args.quantity} needs {', '.join(missing)}")


def _ctx(args) -> SpectralContext:
    _need(args, "m", "n")
    if args.m + args.n < 1:
        raise UsageError("need m + n >= 1")
    return SpectralContext(args.m, args.n, args.order or default_order())


def compute(args) -> list[str]:
    q = args.quantity
    if q in ("ek", "hk", "pk-classical"):
        _need(args, "m", "k")
        A = Alphabet.mu(args.m)
        if q == "ek":
            return [str(elem_sym(args.k, A))]
        if q == "hk":
            return [str(complete_sym(args.k, A))]
        return [str(power_sum_classical(args.k, A))]
    if q == "lr":
        _need(args, "lam", "mu", "nu")
        return [str(lr_coeff(args.lam, args.mu, args.nu))]
    ctx = _ctx(args)
    if q == "ak":
        _need(args, "k")
        return [str(a_image(args.k, ctx))]
    if q == "sk":
        _need(args, "k")
        return [str(s_image(args.k, ctx))]
    if q == "pik":
        _need(args, "k")
        return [str(pi_k(args.k, ctx))]
    if q == "weights":
        w = images_for(ctx).weights
        return ([f"d{i + 1} = {_render(d)}" for i, d in enumerate(w.d)]
                + [f"d~{j + 1} = {_render(d)}" for j, d in enumerate(w.d_tilde)])
    if q == "p-image":
        _need(args, "k")
        return [str(p_image_poly(args.k, ctx))]
    if q == "schur":
        _need(args, "lam")
        return [_render(schur_image(args.lam, ctx))]
    if q == "f":
        if args.k is None:
            return [_render(f_of_z(ctx))]
        return [_render(images_for(ctx).f_taylor(args.k))]
    if q == "u":
        if args.k is None:
            return [_render(u_of_y(ctx))]
        return [_render(images_for(ctx).u_derivative_at_zero(args.k))]
    raise UsageError(f"unknown quantity {q!r}")


def _grid(args) -> list[tuple[int, int]]:
    if args.m is None and args.n is None:
        return list(DEFAULT_GRID)
    if args.m is None or args.n is None:
        raise UsageError("give both --m and --n, or neither for the default grid")
    if args.m + args.n < 1:
        raise UsageError("need m + n >= 1")
    return [(args.m, args.n)]


def _emit_reports(reports, fmt: str, timings: bool) -> str:
    if fmt == "json":
        if len(reports) == 1:
            return reports[0].to_json(timings)
        payload = {
            "reports": [r.to_dict(timings) for r in reports],
            "summary": {"pass": sum(r.n_pass for r in reports), "fail": sum(r.n_fail for r in reports)},
        }
        return json.dumps(payload, indent=2)
    return "\n".join(r.to_text(timings) for r in reports)


def verify(args) -> tuple[str, int]:
    order = args.order or default_order()
    kmax = args.kmax if args.kmax is not None else min(DEFAULT_KMAX, order)
    if kmax > order:
        raise UsageError(f"--kmax {kmax} exceeds series order {order}")
    ids = IDENTITIES if args.identity == "all" else (args.identity,)
    seed = args.seed if args.mode == "evaluated" else None
    reports = verify_grid(_grid(args), kmax, args.mode, seed, order=order, identities=ids, jobs=args.jobs)
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    return _emit_reports(reports, args.format, args.timings), code


def report(args) -> tuple[str, int]:
    try:
        with open(args.path) if args.path != "-" else sys.stdin as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read report: {exc}") from None
    try:
        raw = data["reports"] if "reports" in data else [data]
        reports = [load_report(r) for r in raw]
    except (KeyError, TypeError) as exc:
        raise UsageError(f"not a verification report: {exc}") from None
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    return _emit_reports(reports, args.format, False), code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=_nonneg, help="number of even spectral values")
    common.add_argument("--n", type=_nonneg, help="number of odd spectral values")
    common.add_argument("--k", type=_nonneg,
                        help="degree index; for f and u, the Taylor index in y = 1/z (omit for the whole function)")
    common.add_argument("--order", type=_pos, help="series order K (default $QSPECTRA_ORDER or 8)")
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="qspectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("compute", parents=[common], help="print one quantity")
    pc.add_argument("quantity", choices=QUANTITIES)
    pc.add_argument("--lam", type=_partition, help="partition, e.g. (2,1)")
    pc.add_argument("--mu", type=_partition)
    pc.add_argument("--nu", type=_partition)

    pv = sub.add_parser("verify", parents=[common], help="check an identity over a grid")
    pv.add_argument("identity", choices=IDENTITIES + ("all",))
    pv.add_argument("--kmax", type=_pos)
    pv.add_argument("--mode", choices=("symbolic", "evaluated"), default="symbolic")
    pv.add_argument("--seed", type=_nonneg, default=0)
    pv.add_argument("--timings", action="store_true", help="include per-cell milliseconds")
    pv.add_argument("--jobs", type=_pos, default=1, help="worker processes")

    pr = sub.add_parser("report", help="render a saved JSON report")
    pr.add_argument("path", help="JSON file from `verify --format json`, or - for stdin")
    pr.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    try:
        if args.command == "compute":
            lines = compute(args)
            if args.format == "json":
                print(json.dumps({"quantity": args.quantity, "value": lines}))
            else:
                print("\n".join(lines))
            return EXIT_OK
        out, code = verify(args) if args.command == "verify" else report(args)
        print(out)
        return code
    except (UsageError, QSpectraError, ValueError, IndexError, KeyError) as exc:
        print(f"qspectra: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
