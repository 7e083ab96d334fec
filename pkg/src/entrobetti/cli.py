"""Command-line entry point: ``entrobetti [JOB] [--preset NAME] ...``.

Exit codes: 0 ok, 2 argument error, 3 resource error, 4 verification
failure, 5 unsettled integrality under ``--require-snap``.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ArgumentError, ResourceError, VerificationError
from .io import EXIT_ARGUMENT, EXIT_RESOURCE, EXIT_VERIFICATION, emit, parse_job, run_job, validate_job
from .presets import PRESETS, preset


def build_parser():
    ap = argparse.ArgumentParser(prog="entrobetti", description="Entropy of linear subshifts over Z^d and entropy Betti numbers.")
    ap.add_argument("job", nargs="?", help="JSON job file, or '-' for stdin")
    ap.add_argument("--preset", help="run a named job instead of a file")
    ap.add_argument("--list-presets", action="store_true")
    ap.add_argument("--schedule", help="comma-separated box sides, overrides the job's schedule")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--out", help="write the result here instead of stdout")
    ap.add_argument("--max-cells", type=int, help="largest dense matrix (in bits) a window may build")
    ap.add_argument("--seed", type=int, help="seed for randomized relations")
    ap.add_argument("--require-snap", action="store_true", help="exit 5 when the integer summary is unsettled")
    return ap


def _load(args):
    if args.preset:
        job = preset(args.preset)
    elif args.job:
        text = sys.stdin.read() if args.job == "-" else open(args.job, encoding="utf-8").read()
        job = parse_job(text)
    else:
        raise ArgumentError("give a job file or --preset")
    doc = job.to_dict()
    if args.schedule:
        try:
            sched = [int(x) for x in args.schedule.split(",") if x.strip()]
        except ValueError:
            raise ArgumentError(f"--schedule: bad list {args.schedule!r}") from None
        key = "sides" if job.kind in ("fixpoints", "covers") else "schedule"
        doc[key] = sched
    if args.seed is not None:
        doc["seed"] = args.seed
    return validate_job(doc)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.list_presets:
        print("\n".join(sorted(PRESETS)))
        return 0
    try:
        job = _load(args)
        table = run_job(job, max_cells=args.max_cells, require_snap=args.require_snap)
    except ArgumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ARGUMENT
    text = emit(table, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return table.exit_code


if __name__ == "__main__":
    sys.exit(main())
