"""Command-line interface.

Exit codes: certify returns 0 (entangled), 1 (not detected), 2 (self-test
failed); every command returns 3 on input, format or witness errors.
Machine-readable output goes to --out (or stdout); messages go to stderr.
"""
import argparse
import json
import sys

from .certify import (DETECTION_MARGIN, detection_threshold, noise_sweep, reference_witness,
                      run_pipeline, separable_baseline)
from .exceptions import DimensionError, InvalidStateError, NotHermitianError, PPTInputError
from .formats import (FormatError, load_state, load_witness, save_state, save_witness, sweep_to_csv,
                 sweep_to_json, table_to_csv, table_to_json)
from .network import canonical_config, probability_table
from .selftest import DEFAULT_TOLERANCE, selftest_check
from .states import isotropic
from .witness import witness_from_state

EXIT_OK, EXIT_NOT_DETECTED, EXIT_SELFTEST_FAILED, EXIT_INPUT_ERROR = 0, 1, 2, 3
VERDICT_EXIT = {"entangled": EXIT_OK, "not_detected": EXIT_NOT_DETECTED,
                "selftest_failed": EXIT_SELFTEST_FAILED}


class UsageError(Exception):
    pass


def _log(msg):
    print(msg, file=sys.stderr)


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(doc):
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _visibility(text):
    v = float(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError(f"visibility must lie in [0, 1], got {v}")
    return v


def _parse_grid(text):
    try:
        grid = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"grid must be comma-separated numbers, got {text!r}") from None
    if not grid:
        raise UsageError("grid is empty")
    if any(not 0 <= v <= 1 for v in grid):
        raise UsageError("grid values must lie in [0, 1]")
    return grid


def _witness(args, rho=None):
    if args.witness:
        return load_witness(args.witness)
    return None if rho is not None else reference_witness()


def cmd_certify(args):
    rho = load_state(args.state)
    report = run_pipeline(rho, args.visibility, args.tolerance, witness=_witness(args, rho))
    doc = report.to_dict()
    doc["provenance"]["state"] = args.state
    _emit(_dump(doc), args.out)
    _log(f"verdict: {report.verdict}  I = {report.I_value:.12g}")
    return VERDICT_EXIT[report.verdict]


def cmd_selftest(args):
    rho = load_state(args.state) if args.state else isotropic(1.0)
    table = probability_table(canonical_config(rho, args.visibility))
    report = selftest_check(table, args.tolerance)
    _emit(_dump({**report.to_dict(), "config_digest": table.digest}), args.out)
    _log(f"J_left = {report.J_left:.12g}  J_right = {report.J_right:.12g}  passed = {report.passed}")
    return EXIT_OK if report.passed else EXIT_SELFTEST_FAILED


def cmd_sweep(args):
    grid = _parse_grid(args.grid)
    rho = load_state(args.state)
    ws = _witness(args, rho) or witness_from_state(rho)
    records = noise_sweep(rho, grid, ws)
    threshold = detection_threshold(rho, ws)
    if args.format == "csv":
        text = sweep_to_csv(records)
    else:
        text = _dump(sweep_to_json(records, state=args.state, detection_threshold=threshold))
    _emit(text, args.out)
    _log(f"{len(records)} points; detection threshold visibility = {threshold}")
    return EXIT_OK


def cmd_baseline(args):
    if args.samples < 1:
        raise UsageError("--samples must be >= 1")
    ws = _witness(args)
    normal = separable_baseline(args.samples, args.terms, args.seed, adversarial=False, witness=ws)
    adversarial = separable_baseline(args.samples, args.terms, args.seed, adversarial=True, witness=ws)
    ok = normal >= -DETECTION_MARGIN and adversarial >= -DETECTION_MARGIN
    doc = {"samples": args.samples, "terms": args.terms, "seed": args.seed,
           "min_I_normal": normal, "min_I_adversarial": adversarial, "sound": ok}
    _emit(_dump(doc), args.out)
    _log(f"min I (normal) = {normal:.6g}, min I (adversarial) = {adversarial:.6g}")
    return EXIT_OK if ok else 1


def cmd_table(args):
    rho = load_state(args.state)
    table = probability_table(canonical_config(rho, args.visibility))
    text = table_to_csv(table) if args.format == "csv" else _dump(table_to_json(table))
    _emit(text, args.out)
    return EXIT_OK


def cmd_isotropic(args):
    if not args.out:
        raise UsageError("--out is required")
    save_state(isotropic(args.p, args.dim), args.out)
    return EXIT_OK


def cmd_witness(args):
    if not args.out:
        raise UsageError("--out is required")
    save_witness(witness_from_state(load_state(args.state)), args.out)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="dicert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, state=True, state_required=True):
        p = sub.add_parser(name, help=help_)
        if state:
            p.add_argument("--state", required=state_required, help="state JSON file")
        p.add_argument("--out", help="output file (default: stdout)")
        p.set_defaults(func=func)
        return p

    p = add("certify", cmd_certify, "run the full certification pipeline")
    p.add_argument("--witness", help="witness JSON file (default: built from the state)")
    p.add_argument("--visibility", type=_visibility, default=1.0)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)

    p = add("selftest", cmd_selftest, "evaluate the chained CHSH self-test", state_required=False)
    p.add_argument("--visibility", type=_visibility, default=1.0)
    p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)

    p = add("sweep", cmd_sweep, "sweep auxiliary visibility")
    p.add_argument("--witness")
    p.add_argument("--grid", required=True, help="comma-separated visibilities")
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("baseline", cmd_baseline, "minimum I over random separable states", state=False)
    p.add_argument("--witness", help="witness JSON file (default: isotropic(0.8) witness)")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--terms", type=int, default=4, help="product terms per separable state")
    p.add_argument("--seed", type=int, default=0)

    p = add("table", cmd_table, "export the full probability table")
    p.add_argument("--visibility", type=_visibility, default=1.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = add("isotropic", cmd_isotropic, "write an isotropic state file", state=False)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--dim", type=int, default=2)

    p = add("witness", cmd_witness, "write the PPT witness (with omega) for a state")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except PPTInputError as exc:
        _log(f"error: {exc}")
    except (FormatError, InvalidStateError, DimensionError, NotHermitianError, UsageError,
            ValueError, OSError) as exc:
        _log(f"error: {exc}")
    return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
