"""Command-line front end.

Data goes to standard output as CSV (or a text grid for ``design``);
diagnostics go to standard error.  ``--config FILE`` reads flat
``key = value`` lines (``#`` comments) whose keys are long option names;
explicit flags override file values.
"""

from __future__ import annotations

import argparse
import configparser
import logging
import sys

from . import harness
from .baselines import parse_rate
from .codebook import complexity_report
from .design import MAX_LAMBDA, build_design
from .relays import build_relays, to_csv_rows as relay_csv
from .signalset import build_signalset, to_csv_rows as signalset_csv

log = logging.getLogger("ddstc")


def positive_lambda(text: str) -> int:
    try:
        lam = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid lambda {text!r}") from None
    if not 1 <= lam <= MAX_LAMBDA:
        raise argparse.ArgumentTypeError(f"lambda must be in [1, {MAX_LAMBDA}], got {lam}")
    return lam


def rate_arg(text: str) -> float:
    try:
        return parse_rate(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def snr_grid(text: str) -> tuple[float, float, float]:
    try:
        a, b, s = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected start:stop:step, got {text!r}") from None
    if s <= 0 or b < a:
        raise argparse.ArgumentTypeError("grid needs step > 0 and stop >= start")
    return a, b, s


def read_config(path: str) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    cp = configparser.ConfigParser(comment_prefixes=("#",), inline_comment_prefixes=("#",),
                                   delimiters=("=",))
    cp.optionxform = str
    cp.read_string("[top]\n" + text)
    return {k.strip().lstrip("-").replace("-", "_"): v.strip() for k, v in cp["top"].items()}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="flat key = value file with defaults")
    common.add_argument("--lambda", dest="lam", type=positive_lambda, default=2,
                        help="R = 2**lambda relays (default 2)")
    common.add_argument("--code", choices=harness.CODES, default="proposed")
    common.add_argument("--rate", type=rate_arg, default=1.0, help="bits per channel use")
    common.add_argument("-v", "--verbose", action="store_true")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--decoder", choices=harness.DECODERS, default="auto")
    sim.add_argument("--min-errors", type=int, default=500)
    sim.add_argument("--max-blocks", type=int, default=10 ** 6)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--block-channel-uses", type=int, default=800)

    p = argparse.ArgumentParser(prog="ddstc", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("design", parents=[common], help="print the symbolic design")
    sub.add_parser("signalset", parents=[common], help="per-group signal points as CSV")
    sub.add_parser("relays", parents=[common], help="relay matrices as CSV")
    sub.add_parser("verify", parents=[common], help="run all verification checks")
    s = sub.add_parser("simulate", parents=[common, sim], help="simulate a single SNR point")
    s.add_argument("--snr", type=float, required=False, help="total power P in dB")
    s = sub.add_parser("sweep", parents=[common, sim], help="simulate an SNR grid")
    s.add_argument("--snr-grid", type=snr_grid, default=None, help="start:stop:step in dB")
    sub.add_parser("complexity", parents=[common], help="decoding search sizes")
    return p


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        try:
            cfg = read_config(args.config)
        except (OSError, configparser.Error) as e:
            parser.error(f"cannot read config: {e}")
        converters = {"lam": positive_lambda, "lambda": positive_lambda, "rate": rate_arg,
                      "snr_grid": snr_grid, "snr": float, "seed": int, "min_errors": int,
                      "max_blocks": int, "workers": int, "block_channel_uses": int}
        defaults = {}
        for k, v in cfg.items():
            key = "lam" if k == "lambda" else k
            try:
                defaults[key] = converters.get(k, str)(v)
            except (argparse.ArgumentTypeError, ValueError) as e:
                parser.error(f"config key {k}: {e}")
        # re-parse so explicit flags win over file values
        for action in parser._subparsers._group_actions[0].choices.values():
            action.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _spec(args, grid) -> harness.ExperimentSpec:
    return harness.ExperimentSpec(
        code=args.code, lam=args.lam, rate=args.rate, snr_start=grid[0], snr_stop=grid[1],
        snr_step=grid[2], min_errors=args.min_errors, max_blocks=args.max_blocks,
        seed=args.seed, decoder=args.decoder, block_channel_uses=args.block_channel_uses,
    )


def _setup_logging(verbose: bool) -> None:
    for h in list(log.handlers):
        log.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if verbose else logging.WARNING)
    log.propagate = False


def main(argv=None) -> int:
    args = parse_args(argv)
    _setup_logging(args.verbose or args.command == "sweep")
    out = sys.stdout
    try:
        if args.command == "design":
            D, _ = build_design(args.lam)
            print(D.format_grid(), file=out)
        elif args.command == "signalset":
            S = build_signalset(args.lam, harness.proposed_size(args.lam, args.rate))
            print("\n".join(signalset_csv(S)), file=out)
        elif args.command == "relays":
            if args.code == "proposed":
                RS = build_relays(args.lam)
            else:
                _, RS = harness.build_code(args.code, args.lam, args.rate)
            print("\n".join(relay_csv(RS)), file=out)
        elif args.command == "verify":
            from .verify import all_passed, run_checks

            checks = run_checks(args.code, args.lam, args.rate)
            for c in checks:
                print(c.to_csv(), file=out)
            if not all_passed(checks):
                failing = ", ".join(c.name for c in checks if not c.passed and not c.info)
                print(f"failing checks: {failing}", file=sys.stderr)
                return 1
        elif args.command == "complexity":
            C, _ = harness.build_code(args.code, args.lam, args.rate)
            c = complexity_report(C)
            print("code,rate_bpcu,joint_search,per_group_search,joint_evaluations,group_evaluations",
                  file=out)
            fmt = lambda v: "-" if v is None else str(v)  # noqa: E731
            print(f"{args.code},{args.rate:.10g},{c.joint},{fmt(c.per_group)},"
                  f"{c.joint_evaluations},{fmt(c.group_evaluations)}", file=out)
        elif args.command in ("simulate", "sweep"):
            if args.command == "simulate":
                if args.snr is None:
                    print("simulate requires --snr", file=sys.stderr)
                    return 2
                grid = (args.snr, args.snr, 1.0)
            else:
                grid = args.snr_grid or (10.0, 30.0, 5.0)
            spec = _spec(args, grid)
            print(harness.CSV_HEADER, file=out, flush=True)
            harness.sweep(spec, workers=max(1, args.workers),
                          emit=lambda row: print(row.to_csv(), file=out, flush=True))
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
