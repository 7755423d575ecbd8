"""Command line interface.

    envwraps bench --config chain.json [--checked] [--repeat N]
    envwraps serve

bench prints one single-line JSON report per run on stdout; diagnostics go to
stderr.  Exit codes: 0 success, 1 config/build error, 2 runtime failure.
With --repeat N the runs execute sequentially over fresh env+chain instances
and a min/median steps_per_second summary lands on stderr (stdout stays one
report object per run).
"""

import argparse
import json
import statistics
import sys

from .bench import run_benchmark
from .chain import parse_config
from .errors import (
    EnvwrapsError,
    InvalidParam,
    ParseError,
    PreconditionFailed,
    ShapeMismatch,
    UnknownEnv,
    ValidationError,
)
from .serve import serve

__all__ = ["main"]

_BUILD_ERRORS = (
    ParseError,
    ValidationError,
    PreconditionFailed,
    InvalidParam,
    ShapeMismatch,
    UnknownEnv,
)


def _bench(args) -> int:
    try:
        with open(args.config, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        print(f"bench: cannot read config: {e}", file=sys.stderr)
        return 1
    try:
        config = parse_config(text)
        reports = []
        for _ in range(args.repeat):
            report = run_benchmark(config, checked=args.checked)
            print(json.dumps(report.to_json_dict()))
            reports.append(report)
    except _BUILD_ERRORS as e:
        print(f"bench: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    except EnvwrapsError as e:
        print(f"bench: {type(e).__name__}: {e}", file=sys.stderr)
        return 2
    if args.repeat > 1:
        rates = [r.steps_per_second for r in reports]
        print(
            f"bench: repeat={args.repeat} steps_per_second "
            f"min={min(rates):.1f} median={statistics.median(rates):.1f}",
            file=sys.stderr,
        )
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="envwraps")
    sub = parser.add_subparsers(dest="command", required=True)

    p_bench = sub.add_parser("bench", help="run a configured chain and report throughput")
    p_bench.add_argument("--config", required=True, help="path to a chain config JSON file")
    p_bench.add_argument("--checked", action="store_true",
                         help="assert space containment on every emission")
    p_bench.add_argument("--repeat", type=int, default=1, metavar="N",
                         help="run the config N times on fresh instances")

    sub.add_parser("serve", help="speak the stdio JSON-line protocol on stdin/stdout")

    args = parser.parse_args(argv)
    if args.command == "bench":
        if args.repeat < 1:
            print("bench: --repeat must be >= 1", file=sys.stderr)
            return 1
        return _bench(args)
    return serve()


if __name__ == "__main__":
    sys.exit(main())
