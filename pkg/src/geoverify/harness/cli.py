"""Command-line entry point ``geoverify``.

Exit codes: 0 every check passed, 1 some check failed, 2 operational error
(bad arguments, unreadable or malformed spec file, missing spec block).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import GeoVerifyError
from .fixtures import fixture_text, list_fixtures, load_fixture
from .report import emit_report
from .specfile import load_manifold_spec
from .suites import DEFAULT_THEOREM_SEED, DEFAULT_TRIALS, SUITES, run_suite

EXIT_ERROR = 2


def _resolve_spec(target: str):
    """A path to a spec file, or the name of a bundled fixture."""
    path = Path(target)
    if path.exists() or target.endswith(".manifold") or "/" in target:
        return load_manifold_spec(path)
    if target in list_fixtures():
        return load_fixture(target)
    return load_manifold_spec(path)


def _write(text: str, out):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit(report, fmt, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            return emit_report(report, fmt, fh)
    return emit_report(report, fmt, sys.stdout)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geoverify", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite on a spec file or bundled fixture")
    v.add_argument("spec", help="path to a .manifold file, or a bundled fixture name")
    v.add_argument("--suite", default="all", choices=SUITES)
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--points", type=int, default=None, help="override the spec file's sample count")
    v.add_argument("--seed", type=int, default=None, help="override the spec file's sampling seed")
    v.add_argument("--mode", choices=("random", "grid"), default=None, help="override the sampling mode")
    v.add_argument("--format", choices=("json", "text"), default="json")
    v.add_argument("--out", default=None, help="write the report here instead of stdout")

    f = sub.add_parser("fixtures", help="list or print bundled fixtures")
    fsub = f.add_subparsers(dest="action", required=True)
    fsub.add_parser("list")
    d = fsub.add_parser("dump")
    d.add_argument("name")

    t = sub.add_parser("theorems", help="run the scalar theorem suite (no manifold needed)")
    t.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    t.add_argument("--seed", type=int, default=DEFAULT_THEOREM_SEED)
    t.add_argument("--tol", type=float, default=1e-8)
    t.add_argument("--format", choices=("json", "text"), default="json")
    t.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else EXIT_ERROR
    try:
        if args.command == "fixtures":
            if args.action == "list":
                _write("".join(name + "\n" for name in list_fixtures()), None)
            else:
                _write(fixture_text(args.name), None)
            return 0
        if args.command == "theorems":
            if args.trials < 1:
                raise GeoVerifyError("--trials must be positive")
            report = run_suite(None, "theorems", args.tol, trials=args.trials, seed=args.seed)
            return _emit(report, args.format, args.out)
        spec = _resolve_spec(args.spec)
        report = run_suite(spec, args.suite, args.tol, args.points, args.seed, args.mode)
        return _emit(report, args.format, args.out)
    except (GeoVerifyError, OSError) as err:
        print(f"geoverify: error: {err}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
