"""Command line: ``flagq <experiment> --config <file> [--json] [--jobs N] [--seed S] [--out <path>]``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config as cfgmod
from .errors import ConfigError, ConstructionError, DomainError, PrecisionError, PreconditionError, ResourceError
from .experiments import RUNNERS

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flagq", description="Toeplitz quantization experiments on flag manifolds of U(n).")
    p.add_argument("experiment", choices=sorted(RUNNERS))
    p.add_argument("--config", required=True,
                   help="JSON config file, or the name of a bundled config (e.g. 'verify_su2')")
    p.add_argument("--json", action="store_true", help="also write a JSON mirror next to the CSV")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for sweep points")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=None, help="CSV output path (default: stdout or config 'out')")
    return p


def _load(arg: str) -> dict:
    path = Path(arg)
    if not path.exists() and arg in cfgmod.bundled_names():
        path = cfgmod.bundled(arg)
    return cfgmod.load(path)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load(args.config)
        if cfg.get("experiment", args.experiment) != args.experiment:
            raise ConfigError(f"config is for '{cfg['experiment']}', not '{args.experiment}'")
        cfg["experiment"] = args.experiment
        if args.seed is not None:
            cfg["seed"] = args.seed
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        table = RUNNERS[args.experiment](cfg, jobs=args.jobs)
    except (ConfigError, ConstructionError, DomainError, PrecisionError, PreconditionError,
            ResourceError) as exc:
        print(f"flagq: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR

    text = table.to_csv()
    out = args.out or cfg.get("out")
    if out:
        Path(out).write_text(text)
        if args.json:
            Path(out).with_suffix(".json").write_text(json.dumps(table.to_json(), indent=2) + "\n")
    else:
        sys.stdout.write(text)
        if args.json:
            sys.stdout.write(json.dumps(table.to_json(), indent=2) + "\n")
    for a in table.assertions:
        if not a.passed:
            print(f"flagq: FAIL {a.name} {a.detail}", file=sys.stderr)
    return EXIT_PASS if table.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
