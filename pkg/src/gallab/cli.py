"""Command line entry point.

    gal-lab <experiment> [--config PATH] [--key value]...

The config file is flat ``key = value`` text (``#`` starts a comment); command
line overrides are applied after it, and the later setting of a key wins.
Outputs: a CSV of result rows and a JSON sidecar next to it (same name,
``.json`` suffix) echoing the resolved config, version, timestamp, per-row wall
times and run summary.

Exit status: 0 success, 1 usage or config error, 2 numerical failure.
"""

import argparse
import csv
import datetime as _dt
import io
import json
import logging
import os
import sys

from . import __version__
from .errors import InvalidArgument, ProductOverflowError, SetParseError
from .experiments import SCHEMA, ConfigError, OracleMismatch, fit_slope, resolve_config, run_experiment

__all__ = ["main", "parse_config_text", "fit_slope", "write_outputs"]

log = logging.getLogger("gallab")

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


def parse_config_text(text):
    """Parse flat key=value lines into an ordered list of (key, value)."""
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"config line {lineno}: empty key")
        pairs.append((key.replace("-", "_"), value))
    return pairs


def parse_overrides(tokens):
    pairs = []
    it = iter(tokens)
    for tok in it:
        if not tok.startswith("--") or len(tok) <= 2:
            raise ConfigError(f"unexpected argument {tok!r}")
        key = tok[2:]
        if "=" in key:
            key, value = key.split("=", 1)
        else:
            try:
                value = next(it)
            except StopIteration:
                raise ConfigError(f"option {tok} needs a value") from None
        pairs.append((key.replace("-", "_"), value))
    return pairs


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    if v is None:
        return ""
    return str(v)


def rows_to_csv(rows):
    """RFC 4180 CSV text; float cells use the shortest round-trip repr."""
    columns = []
    for r in rows:
        for k in r:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c, "")) for c in columns])
    return buf.getvalue()


def _atomic_write(path, text):
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def sidecar_path(csv_path):
    root, _ = os.path.splitext(csv_path)
    return root + ".json"


def write_outputs(path, rows, meta):
    _atomic_write(path, rows_to_csv(rows))
    _atomic_write(sidecar_path(path), json.dumps(meta, indent=2, sort_keys=True) + "\n")


def build_parser():
    p = argparse.ArgumentParser(
        prog="gal-lab",
        description="Run GCD-sum, energy, random-multiplicative and pair-correlation experiments.",
        epilog="Any further --key value pairs override config-file settings.",
    )
    p.add_argument("experiment", choices=sorted(SCHEMA))
    p.add_argument("--config", help="flat key = value config file")
    return p


def main(argv=None):
    logging.basicConfig(level=logging.WARNING, format="gal-lab: %(message)s")
    parser = build_parser()
    try:
        args, rest = parser.parse_known_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        raw = []
        if args.config:
            with open(args.config, encoding="utf-8") as fh:
                raw += parse_config_text(fh.read())
        raw += parse_overrides(rest)
        cfg, echo = resolve_config(args.experiment, raw)
    except (ConfigError, SetParseError, InvalidArgument, OSError) as exc:
        print(f"gal-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE

    started = _dt.datetime.now(_dt.timezone.utc).isoformat()
    try:
        rows, summary, timings = run_experiment(args.experiment, cfg)
    except (OracleMismatch, ProductOverflowError, ArithmeticError) as exc:
        print(f"gal-lab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except InvalidArgument as exc:
        print(f"gal-lab: {exc}", file=sys.stderr)
        return EXIT_USAGE

    meta = {
        "experiment": args.experiment,
        "config": echo,
        "version": __version__,
        "timestamp": started,
        "rows": len(rows),
        "wall_time_ms": timings,
        "summary": summary,
    }
    write_outputs(cfg["output"], rows, meta)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
