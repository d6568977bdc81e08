"""``mslab <experiment> [--param value]... [--out DIR] [--format csv,json,svg] [--seed N]``.

Exit status is 0 when every verdict passes, 1 when one fails and 2 on usage
errors.  An optional ``--config FILE`` supplies ``key=value`` lines; explicit
flags take precedence over it.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .exceptions import MslabError
from .experiments import CATALOG, catalog, run
from .geometry import DEFAULT_SEED
from .reporting import FORMATS, verdict_lines, write_report

COMMON = ("out", "format", "seed")


def read_config(path):
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    out = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key=value")
        key, value = (t.strip() for t in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _formats(text):
    fmts = tuple(t.strip() for t in text.split(",") if t.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise argparse.ArgumentTypeError(f"formats must be a subset of {','.join(FORMATS)}")
    return fmts


def build_parser():
    parser = argparse.ArgumentParser(prog="mslab", description="Run a named numerical experiment.")
    sub = parser.add_subparsers(dest="experiment", metavar="experiment", required=True)
    sub.add_parser("list", help="show the experiment catalog")
    for exp in catalog():
        sp = sub.add_parser(exp.name, help=exp.summary, description=f"{exp.summary} [{exp.anchor}]",
                            argument_default=argparse.SUPPRESS)
        for key, prm in exp.params.items():
            flags = [f"--{key}"]
            if "_" in key:
                flags.append(f"--{key.replace('_', '-')}")
            sp.add_argument(*flags, dest=key, metavar=prm.kind.upper(),
                            help=f"{prm.help} (default {_show(prm.default)})")
        sp.add_argument("--out", help="output directory (default results)")
        sp.add_argument("--format", type=_formats, help="comma list from csv,json,svg (default csv,json)")
        sp.add_argument("--seed", type=int, help=f"random seed (default {DEFAULT_SEED})")
        sp.add_argument("--config", help="key=value file; flags override it")
    return parser


def _show(v):
    if isinstance(v, (list, tuple)):
        return ",".join(f"{x:g}" if isinstance(x, float) else str(x) for x in v)
    return f"{v:g}" if isinstance(v, float) else str(v)


def print_catalog(stream=sys.stdout):
    for exp in catalog():
        print(f"{exp.name}\t{exp.anchor}", file=stream)
        for key, prm in exp.params.items():
            print(f"    --{key} {prm.kind} = {_show(prm.default)}\t{prm.help}", file=stream)


def main(argv=None):
    parser = build_parser()
    args = vars(parser.parse_args(argv))
    name = args.pop("experiment")
    if name == "list":
        print_catalog()
        return 0
    settings = {}
    if "config" in args:
        try:
            settings.update(read_config(args.pop("config")))
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
    settings.update(args)
    out = Path(settings.pop("out", "results"))
    fmts = settings.pop("format", ("csv", "json"))
    if isinstance(fmts, str):
        fmts = _formats(fmts)
    seed = int(settings.pop("seed", DEFAULT_SEED))
    start = time.perf_counter()
    try:
        report = run(name, settings, seed)
    except (KeyError, TypeError, ValueError) as exc:
        parser.error(str(exc))
    except MslabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    for path in write_report(report, out, fmts):
        print(f"wrote {path}", file=sys.stderr)
    for line in verdict_lines(report):
        print(line)
    print(f"wall time {time.perf_counter() - start:.2f}s", file=sys.stderr)
    failed = [v["name"] for v in report["verdicts"] if not v["passed"]]
    if failed:
        print(f"failed verdicts: {'; '.join(failed)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
