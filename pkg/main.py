"""
Main Entry Point for the Lattice Parameter Tuner
"""
import argparse
import logging
import sys

from config import APP_NAME, APP_VERSION, EXIT_CONFIG_ERROR, LOG_FORMAT, LOG_LEVEL, STRATEGY_NAMES

# Configure logging
logging.basicConfig(level=LOG_LEVEL, format=LOG_FORMAT)
logger = logging.getLogger(__name__)


def print_banner():
    """Print startup banner"""
    banner = f"""
    ╔═══════════════════════════════════════════════════════════════╗
    ║   {APP_NAME} v{APP_VERSION:<40}║
    ║   Sample • Analyze • Refine                                   ║
    ╚═══════════════════════════════════════════════════════════════╝
    """
    print(banner, file=sys.stderr)


def _int_list(text: str):
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _name_list(text: str):
    names = [part.strip() for part in text.split(",") if part.strip()]
    unknown = [n for n in names if n not in STRATEGY_NAMES]
    if unknown:
        raise argparse.ArgumentTypeError(f"unknown strategies {unknown}; choose from {STRATEGY_NAMES}")
    return names


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tuner", description=f"{APP_NAME}: adaptive analyzer parameter tuning")
    parser.add_argument("--quiet", action="store_true", help="No banner")
    sub = parser.add_subparsers(dest="mode", required=True)

    tune = sub.add_parser("tune", help="Tune parameters for one program")
    tune.add_argument("--config", required=True)
    tune.add_argument("--budget", type=float, help="Total budget in seconds")
    tune.add_argument("--seed", type=int)
    tune.add_argument("--jobs", type=int)
    tune.add_argument("--report", help="JSONL report path")
    tune.add_argument("--no-timestamps", action="store_true", help="Omit timestamps from report records")

    validate = sub.add_parser("validate", help="Validate a config without running anything")
    validate.add_argument("--config", required=True)

    render = sub.add_parser("render", help="Print the analyzer command line for a setting")
    render.add_argument("--config", required=True)
    source = render.add_mutually_exclusive_group()
    source.add_argument("--setting", help="JSON object of parameter values")
    source.add_argument("--from-report", help="PATH:INDEX of a report record")

    bench = sub.add_parser("bench", help="Compare strategies on simulator benchmarks")
    models = bench.add_mutually_exclusive_group(required=True)
    models.add_argument("--models", help="Directory of benchmark files")
    models.add_argument("--generate", type=int, default=0, help="Generate N benchmarks in memory")
    bench.add_argument("--family", choices=["uniform", "skewed"], default="skewed")
    bench.add_argument("--budget", type=float)
    bench.add_argument("--seeds", type=_int_list, default=[0])
    bench.add_argument("--out", help="Result table (.csv or .jsonl)")
    bench.add_argument("--strategies", type=_name_list, default=list(STRATEGY_NAMES))
    bench.add_argument("--repeats", type=int, default=1, help="Adaptive runs per cell, best one kept")
    bench.add_argument("--split-budget", action="store_true", help="Divide the budget among repeats")
    bench.add_argument("--num-refine", type=int, help="Adaptive strategy round limit")
    bench.add_argument("--num-sample", type=int, help="Adaptive strategy settings per round")
    bench.add_argument("--alpha", type=float, help="Round floor as a share of the baseline time")
    bench.add_argument("--beta", type=float, help="First-round budget share in literal mode")
    bench.add_argument("--beta-mode", choices=["fit_series", "literal"], help="How round budgets are sized")
    bench.add_argument("--ladder", help="JSON settings run as the official strategy")
    bench.add_argument("--jobs", type=int, default=1, help="Cells run in parallel")

    generate = sub.add_parser("generate", help="Write simulator benchmarks and replay configs")
    generate.add_argument("--out", required=True, help="Output directory")
    generate.add_argument("--family", choices=["uniform", "skewed"], default="uniform")
    generate.add_argument("--count", type=int, default=1)
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--n-params", type=int, default=2)
    generate.add_argument("--n-alarms", type=int, default=6)
    generate.add_argument("--max-threshold", type=int, default=20)
    generate.add_argument("--cost-scale", type=float, default=1.0)
    generate.add_argument("--non-principal", action="store_true")
    generate.add_argument("--budget", type=float, help="Budget written into the replay configs")
    return parser


def run(argv=None) -> int:
    """Parse arguments and dispatch; returns the exit code"""
    from analyzers.sim_analyzer import BenchKnobs
    from cli import cmd_bench, cmd_generate, cmd_render, cmd_tune, cmd_validate
    from core.errors import TunerError
    from engine.models import HyperParams

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG_ERROR if e.code else 0

    if not args.quiet:
        print_banner()

    if args.mode == "tune":
        return cmd_tune(args.config, args.budget, args.seed, args.jobs, args.report, not args.no_timestamps)
    if args.mode == "validate":
        return cmd_validate(args.config)
    if args.mode == "render":
        return cmd_render(args.config, args.setting, args.from_report)
    if args.mode == "bench":
        try:
            overrides = {
                "num_refine": args.num_refine,
                "num_sample": args.num_sample,
                "alpha": args.alpha,
                "beta": args.beta,
                "beta_mode": args.beta_mode,
            }
            hyper = HyperParams(**{k: v for k, v in overrides.items() if v is not None})
        except ValueError as e:
            print(f"error: {e}", file=sys.stderr)
            return EXIT_CONFIG_ERROR
        return cmd_bench(
            models_dir=args.models,
            generate=args.generate,
            family=args.family,
            budget=args.budget,
            seeds=args.seeds,
            out=args.out,
            strategies=args.strategies,
            hyper=hyper,
            repeats=args.repeats,
            split_budget=args.split_budget,
            jobs=args.jobs,
            ladder=args.ladder,
        )
    try:
        knobs = BenchKnobs(
            n_params=args.n_params,
            n_alarms=args.n_alarms,
            max_threshold=args.max_threshold,
            cost_scale=args.cost_scale,
            non_principal=args.non_principal,
        )
    except TunerError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    return cmd_generate(args.out, args.family, args.count, args.seed, knobs, args.budget)


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
