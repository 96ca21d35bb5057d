"""Command-line interface: ``point``, ``sweep``, ``reproduce`` and ``selftest``."""

import argparse
import json
import os
import re
import sys

from ._version import __version__
from .errors import ConfigError, NumericalError
from .presets import PRESETS, preset_specs
from .pipeline import ERROR, OK, UNSTABLE, evaluate_point
from .selftest import run_selftest
from .sweep import SweepSpec, apply_overrides, emit, load_config, run_sweep, _json_value

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_UNSTABLE = 0, 2, 3, 4


def _sweep_exit(summary):
    if summary["n_ok"]:
        return EXIT_OK
    if summary["n_unstable"] == summary["n_points"]:
        return EXIT_UNSTABLE
    return EXIT_NUMERICAL


def _spec(args):
    spec = load_config(args.config) if args.config else SweepSpec()
    return apply_overrides(spec, args.set or [])


def cmd_point(args):
    spec = _spec(args)
    record = evaluate_point(spec.base, spec.options)
    json.dump({k: _json_value(v) for k, v in record.items()}, sys.stdout, indent=1, allow_nan=False)
    sys.stdout.write("\n")
    if record["status"] == UNSTABLE:
        return EXIT_UNSTABLE
    return EXIT_NUMERICAL if record["status"] == ERROR else EXIT_OK


def cmd_sweep(args):
    spec = _spec(args)
    result = run_sweep(spec, workers=args.workers)
    emit(result, args.format, args.out)
    print(json.dumps({k: _json_value(v) for k, v in result.summary.items()}), file=sys.stderr)
    return _sweep_exit(result.summary)


def _overlay_values(text):
    combos = []
    for item in text.split(";"):
        combos.append(tuple(float(v) for v in item.split(",")))
    return combos


def cmd_reproduce(args):
    base = apply_overrides(SweepSpec(base=PRESETS[args.figid].base()), args.set or [])
    overlays = None if args.overlay is None else _overlay_values(args.overlay)
    specs = preset_specs(args.figid, base.base, overlays, base.options)
    os.makedirs(args.out, exist_ok=True)
    codes = []
    for label, spec in specs.items():
        result = run_sweep(spec, workers=args.workers)
        safe = re.sub(r"[^A-Za-z0-9_.=-]+", "_", label)
        path = os.path.join(args.out, f"{args.figid}_{safe}.{args.format}")
        emit(result, args.format, path)
        print(f"{path}: {json.dumps({k: _json_value(v) for k, v in result.summary.items()})}")
        codes.append(_sweep_exit(result.summary))
    return EXIT_OK if EXIT_OK in codes else max(codes)


def cmd_selftest(args):
    results = run_selftest()
    for name, ok, detail in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_NUMERICAL


def build_parser():
    parser = argparse.ArgumentParser(prog="magnoqcrb", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def overrides(p):
        p.add_argument("--set", action="append", metavar="KEY=VALUE",
                       help="override a parameter (or options.NAME); repeatable")

    p = sub.add_parser("point", help="evaluate one operating point and print its record as JSON")
    p.add_argument("--config")
    overrides(p)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("sweep", help="run a 1-D or 2-D sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    overrides(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("reproduce", help="run a figure preset")
    p.add_argument("figid", choices=sorted(PRESETS))
    p.add_argument("--out", default=".")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--overlay", help="replace the overlay list: 'a;b;c' or 'r,theta;r,theta'")
    overrides(p)
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("selftest", help="run the built-in oracle checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error ({exc.kind}): {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error ({exc.kind}): {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
