"""Command-line interface.

Exit codes are a contract: 0 success, 1 validation failure, 2 usage
error, 3 provider or runtime error. With --json, errors are emitted as a
single machine-readable object on stdout instead of prose on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import evolution, generate, report
from .baselines import ALGORITHMS
from .errors import PackbenchError, ProviderError
from .metrics import area_lower_bound
from .model import (BinSpec, decode_dataset, decode_instance, decode_solution,
                    encode_dataset, encode_solution)
from .oracle import exact_min_bins
from .validate import validate

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _parse_bin(text: str) -> BinSpec:
    try:
        w, h = text.lower().split("x")
        return BinSpec(int(w), int(h))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WxH, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="packbench",
        description="2D bin packing workbench: baselines, validation, "
                    "instance generation, exact tiny-instance solving, and "
                    "LLM-driven heuristic evolution.")
    parser.add_argument("--json", action="store_true",
                        help="emit errors (and validate results) as JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a seeded dataset")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=generate.DEFAULT_COUNT)
    p.add_argument("--items", type=int, default=generate.DEFAULT_N_ITEMS)
    p.add_argument("--min-side", type=int, default=generate.DEFAULT_MIN_SIDE)
    p.add_argument("--max-side", type=int, default=generate.DEFAULT_MAX_SIDE)
    p.add_argument("--bin", type=_parse_bin, default=generate.DEFAULT_BIN,
                   metavar="WxH")
    p.add_argument("--out", required=True)

    p = sub.add_parser("solve", help="run a built-in heuristic on a dataset")
    p.add_argument("--algo", choices=sorted(ALGORITHMS), required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--out", required=True, help="directory for solution files")
    p.add_argument("--report", help="also write a report CSV (+ figure) here")

    p = sub.add_parser("validate", help="check a solution against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--solution", required=True)

    p = sub.add_parser("oracle", help="exact minimum bins for a tiny instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--out", help="write the witness solution here")

    p = sub.add_parser("evolve", help="run the evolutionary search")
    p.add_argument("--config", required=True)
    p.add_argument("--dataset", help="dataset file (overrides config)")
    p.add_argument("--out", required=True, help="run directory")
    p.add_argument("--provider", choices=["mock", "http"])
    p.add_argument("--seed", type=int)
    p.add_argument("--jobs", type=int)

    p = sub.add_parser("report", help="re-emit reports for a finished run")
    p.add_argument("--rundir", required=True)
    p.add_argument("--format", choices=["csv", "table"], default="table")

    return parser


def cmd_gen(args) -> int:
    dataset = generate.gen_dataset(
        seed=args.seed, count=args.count, n_items=args.items,
        min_side=args.min_side, max_side=args.max_side, bin_spec=args.bin)
    Path(args.out).write_text(encode_dataset(dataset) + "\n", encoding="utf-8")
    print(f"wrote {args.count} instances to {args.out}")
    return EXIT_OK


def cmd_solve(args) -> int:
    dataset = decode_dataset(Path(args.dataset).read_text(encoding="utf-8"))
    algo = ALGORITHMS[args.algo]
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for i, inst in enumerate(dataset.instances):
        solution = algo(inst)
        violations = validate(inst, solution)
        if violations:  # baselines are validator-clean by contract
            raise AssertionError(f"instance {i}: {violations[0]}")
        path = out_dir / f"solution-{i:03d}.json"
        path.write_text(encode_solution(solution) + "\n", encoding="utf-8")
    if args.report:
        row = report.emit_solve_report(dataset, args.algo, args.report)
        print(f"{row['method']}: avg bins {row['avg_bins']:.2f}, "
              f"avg utilization {row['avg_utilization']:.4f} "
              f"(report: {args.report})")
    print(f"wrote {len(dataset.instances)} solutions to {out_dir}")
    return EXIT_OK


def cmd_validate(args) -> int:
    instance = decode_instance(Path(args.instance).read_text(encoding="utf-8"))
    solution = decode_solution(Path(args.solution).read_text(encoding="utf-8"),
                               instance)
    violations = validate(instance, solution)
    if args.json:
        print(json.dumps({"valid": not violations,
                          "violations": [v.to_obj() for v in violations]}))
    else:
        for v in violations:
            loc = f" bin {v.bin}" if v.bin is not None else ""
            print(f"{v.kind}{loc} items {list(v.items)}: {v.detail}")
        print("valid" if not violations else f"{len(violations)} violation(s)")
    return EXIT_OK if not violations else EXIT_INVALID


def cmd_oracle(args) -> int:
    instance = decode_instance(Path(args.instance).read_text(encoding="utf-8"))
    min_bins, witness = exact_min_bins(instance, max_n=args.max_n)
    print(f"minimum bins: {min_bins} (area lower bound "
          f"{area_lower_bound(instance)})")
    if args.out:
        Path(args.out).write_text(encode_solution(witness) + "\n",
                                  encoding="utf-8")
        print(f"witness written to {args.out}")
    return EXIT_OK


def cmd_evolve(args) -> int:
    config = evolution.EvolutionConfig.from_file(
        args.config, provider=args.provider, seed=args.seed, jobs=args.jobs,
        dataset=args.dataset)
    if not config.dataset:
        raise PackbenchError("no dataset given (config 'dataset' or --dataset)")
    dataset = decode_dataset(Path(config.dataset).read_text(encoding="utf-8"))
    state = evolution.run_evolution(config, dataset, args.out)
    best = state.best_so_far
    if best is None:
        print(f"run complete: no valid candidate found ({args.out})")
    else:
        print(f"run complete: best {best.id} avg bins "
              f"{best.score.bins_used:.2f}, utilization "
              f"{best.score.utilization:.4f} ({args.out})")
    return EXIT_OK


def cmd_report(args) -> int:
    state = evolution.load_run_state(args.rundir)
    dataset_path = Path(state.config.dataset)
    if not dataset_path.exists():
        raise PackbenchError(f"dataset {dataset_path} not found; "
                             "regenerate it or fix the config echo in run.json")
    dataset = decode_dataset(dataset_path.read_text(encoding="utf-8"))
    report.emit_report(state, dataset, run_dir=args.rundir)
    if args.format == "csv":
        print((Path(args.rundir) / "report.csv").read_text(encoding="utf-8"),
              end="")
    else:
        print((Path(args.rundir) / "report.txt").read_text(encoding="utf-8"),
              end="")
    return EXIT_OK


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "validate": cmd_validate,
    "oracle": cmd_oracle,
    "evolve": cmd_evolve,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ProviderError as e:
        _report_error(args, e)
        return EXIT_RUNTIME
    except (PackbenchError, OSError, ValueError) as e:
        _report_error(args, e)
        return EXIT_RUNTIME


def _report_error(args, exc: Exception) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"error": {"type": type(exc).__name__,
                                    "message": str(exc)}}))
    else:
        print(f"error: {exc}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
