"""Command-line entry point: ``robust-contracts <command> ...``.

Exit codes: 0 ok, 1 invalid input or usage, 2 internal failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import io
from .baseline import BoundsReport, opt_nonrobust, social_welfare
from .generators import gen_random, gen_tight_lb, gen_tight_ub
from .learning import BASELINE_MODES, LearnConfig, run_ucb1
from .model import Instance, TypedInstance
from .oracle import GridCapError, GridSpec, grid_psi_max
from .robust import RobustSolverError, solve_robust

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2
BOUNDS_COLUMNS = ("delta", "opt_delta", "lb", "ub")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _delta(text: str) -> float:
    value = float(text)
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"delta must lie in (0, 1), got {text}")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _delta_grid(text: str) -> list[float]:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text}") from None
    if step <= 0.0 or stop < start:
        raise argparse.ArgumentTypeError(f"empty or invalid delta grid {text}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    values = [round(start + k * step, 12) for k in range(count)]
    for v in values:
        if not 0.0 < v < 1.0:
            raise argparse.ArgumentTypeError(f"delta grid value {v} outside (0, 1)")
    return values


def _load(path: str, typed_ok: bool = False):
    obj, rep = io.load(path)
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if not rep.ok:
        for e in rep.errors:
            print(f"error: {e}", file=sys.stderr)
        raise UsageError(f"{path}: invalid instance")
    if isinstance(obj, TypedInstance) and not typed_ok:
        if len(obj.types) != 1:
            raise UsageError(f"{path}: command needs a single-type instance")
        obj = obj.types[0]
    return obj


def _fmt(p) -> str:
    return "(" + ", ".join(f"{v:.10g}" for v in p) + ")"


def cmd_validate(args) -> int:
    obj, rep = io.load(args.path)
    for w in rep.warnings:
        print(f"warning: {w}")
    for e in rep.errors:
        print(f"error: {e}")
    if not rep.ok:
        return EXIT_INPUT
    kind = f"typed instance with {len(obj.types)} types" if isinstance(obj, TypedInstance) else "instance"
    print(f"ok: {kind}, n={obj.n}, m={obj.m}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = _load(args.path)
    sol = solve_robust(inst, args.delta, threads=args.threads)
    print(f"psi = {sol.psi:.10g}")
    print(f"contract = {_fmt(sol.contract)}")
    print(f"pair = ({inst.action_name(sol.a_star)}, {inst.action_name(sol.a_delta)})")
    print(f"partition j = {sol.partition_index}")
    if args.emit:
        with open(args.emit, "w") as fh:
            json.dump(sol.as_dict(), fh, indent=1, sort_keys=True)
            fh.write("\n")
    return EXIT_OK


def cmd_bounds(args) -> int:
    inst = _load(args.path)
    opt, sw = opt_nonrobust(inst).value, social_welfare(inst)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(BOUNDS_COLUMNS)
        for d in args.delta_grid:
            rep = BoundsReport(opt, sw, d)
            psi = solve_robust(inst, d, threads=args.threads).psi
            writer.writerow([repr(d), repr(psi), repr(rep.lb), repr(rep.ub)])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "tight-lb":
        if args.delta is None or args.n is None:
            raise UsageError("tight-lb needs --delta and --n")
        inst = gen_tight_lb(args.delta, args.n)
    elif args.family == "tight-ub":
        if args.delta is None:
            raise UsageError("tight-ub needs --delta")
        inst = gen_tight_ub(args.delta)
    else:
        if args.n is None or args.m is None:
            raise UsageError("random needs --n and --m")
        inst = gen_random(args.n, args.m, args.seed, with_opt_out=args.opt_out)
    io.dump(inst, args.output)
    print(f"wrote {args.output} (n={inst.n}, m={inst.m})")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load(args.path)
    grid = GridSpec(args.step, args.upper)
    try:
        grid.check(inst.m)
    except GridCapError as exc:
        raise UsageError(str(exc)) from None
    p, value = grid_psi_max(inst, args.delta, grid, threads=args.threads)
    print(f"grid points = {grid.size(inst.m)}")
    print(f"grid max psi = {value:.10g}")
    print(f"argmax contract = {_fmt(p)}")
    return EXIT_OK


def cmd_learn(args) -> int:
    obj = _load(args.path, typed_ok=True)
    if isinstance(obj, Instance):
        obj = TypedInstance.single(obj)
    try:
        cfg = LearnConfig(
            horizon=args.T, delta=args.delta, epsilon=args.epsilon, seed=args.seed,
            baseline=args.baseline, baseline_step=args.baseline_step,
        )
        run = run_ucb1(obj, cfg)
    except (ValueError, GridCapError) as exc:
        raise UsageError(str(exc)) from None
    run.write_csv(args.output)
    line = f"T={run.horizon} arms={len(run.arms)} epsilon={run.epsilon:.6g}"
    if run.cum_regret_robust is not None:
        line += f" regret_robust={run.regret('robust'):.6g}"
    if run.cum_regret_nonrobust is not None:
        line += f" regret_nonrobust={run.regret('nonrobust'):.6g}"
    print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="robust-contracts", description="Robust contract design toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check an instance file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="optimal delta-robust contract")
    p.add_argument("path")
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("--emit", metavar="PATH", help="write the result as JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bounds", help="OPT(delta) with lower/upper bounds over a delta sweep")
    p.add_argument("path")
    p.add_argument("--delta-grid", type=_delta_grid, required=True, metavar="START:STOP:STEP")
    p.add_argument("--threads", type=_positive_int, default=1)
    p.add_argument("-o", "--output", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gen", help="write a generated instance")
    p.add_argument("family", choices=("tight-lb", "tight-ub", "random"))
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--delta", type=_delta)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--m", type=_positive_int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--opt-out", action="store_true", help="random: include an opt-out action")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", help="brute-force grid maximum of psi")
    p.add_argument("path")
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("--upper", type=float, default=1.0)
    p.add_argument("--threads", type=_positive_int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("learn", help="UCB1 over the contract grid")
    p.add_argument("path")
    p.add_argument("--T", type=_positive_int, required=True)
    p.add_argument("--delta", type=_delta, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--baseline", choices=BASELINE_MODES, default="both")
    p.add_argument("--baseline-step", type=float, default=0.01)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_learn)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except RobustSolverError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
