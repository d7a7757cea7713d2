"""Command-line entry point: ``cotangent-kahler verify`` and ``cotangent-kahler scan``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 on
configuration or runtime errors.
"""
from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .errors import ConfigError, NoAdmissiblePoints
from .verify import emit_report, load_config, run_verification, scan_admissibility


def _common(parser):
    parser.add_argument("--config", metavar="PATH", help="JSON config file; flags override its keys")
    parser.add_argument("--n", type=int)
    parser.add_argument("--c", type=float)
    parser.add_argument("--A", type=float)
    parser.add_argument("--B", type=float, help="B of the example lambda family")
    parser.add_argument("--lam0", type=float, help="use the constant lambda family with this value")
    parser.add_argument("--out", metavar="PATH", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cotangent-kahler", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="run the identity checks on sampled points")
    _common(verify)
    verify.add_argument("--check", metavar="LIST", help="comma-separated subset of check ids")
    verify.add_argument("--samples", type=int)
    verify.add_argument("--seed", type=int)
    verify.add_argument("--workers", type=int)
    verify.add_argument("--format", choices=["json", "csv", "text"], default="text")
    verify.add_argument("--mu-override", type=float, metavar="F",
                        help="testing only: replace mu by lambda' + F in the closedness check")

    scan = sub.add_parser("scan", help="tabulate the admissibility conditions on a t grid")
    _common(scan)
    scan.add_argument("--t-min", type=float, default=0.1)
    scan.add_argument("--t-max", type=float, default=10.0)
    scan.add_argument("--points", type=int, default=100)
    return parser


def _family_override(args):
    if args.lam0 is not None:
        return {"type": "constant", "lam0": args.lam0}
    if args.B is not None:
        return {"type": "example", "B": args.B}
    return None


def _write(data: bytes, path):
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    overrides = dict(n=args.n, c=args.c, A=args.A, family=_family_override(args))
    try:
        if args.command == "verify":
            checks = [c.strip() for c in args.check.split(",") if c.strip()] if args.check else None
            cfg = load_config(
                args.config, samples=args.samples, seed=args.seed, checks=checks,
                mu_override=args.mu_override, workers=args.workers, **overrides,
            )
            report = run_verification(cfg)
            _write(emit_report(report, args.format), args.out)
            return report.exit_code
        cfg = load_config(args.config, **overrides)
        if args.points < 1:
            raise ConfigError("scan needs at least one grid point")
        grid = np.linspace(args.t_min, args.t_max, args.points)
        _write(scan_admissibility(cfg, grid).encode(), args.out)
        return 0
    except (ConfigError, NoAdmissiblePoints) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure inside the battery
        logging.getLogger(__name__).exception("run aborted")
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
