"""Command-line entry point.

    dualsub dr [--config FILE] [--lambda 1,10,100] [--theta 10] ...
    dualsub dr-cross ...
    dualsub sdr --C 100 --M-sweep 50,100,200 ...
    dualsub pca-compare --seeds 10 ...
    dualsub selftest

Exit codes: 0 success, 2 configuration error, 3 numerical divergence.
"""

import argparse
import dataclasses
import logging
import sys

from . import experiments
from .config import ConfigError, ExperimentConfig, parse_pairs, read_config_file
from .optimizer import DivergenceError

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGED = 0, 2, 3

COMMANDS = {
    "dr": ("dr", "dimension reduction of a near-plane point cloud"),
    "dr-cross": ("dr-cross", "dimension reduction of the three-stick mixture"),
    "sdr": ("sdr", "sufficient dimension reduction of the Ackley + ball target"),
    "pca-compare": ("dr-cross", "PCA versus the method on the three-stick mixture"),
}

# task-specific defaults applied before file and flag overrides
TASK_DEFAULTS = {
    "sdr": {"T": 50, "theta": 1.0, "k": 2},
    "pca-compare": {"k": 1, "N": 1000, "lam": [30.0]},
}


HELP = {
    "n": "ambient dimension", "k": "subspace rank", "N": "number of data points",
    "T": "outer iterations", "K": "kernel (xi) nodes", "L": "data-term (nu) nodes",
    "M": "neurons per bank (real and imaginary)", "lam": "penalty weight, comma list sweeps",
    "M_sweep": "neuron counts to sweep (sdr)", "C_sweep": "ball weights to sweep (sdr)",
    "eta": "density bandwidth", "theta": "kernel scale (default 1/eta, 1 for sdr)",
    "eps": "thickness of the synthetic data", "C": "ball weight of the sdr target",
    "seeds": "number of seeds (pca-compare)", "steps": "Adam steps per warm-started inner solve",
    "first_steps": "Adam steps of the first inner solve", "learning_rate": "Adam step size",
    "resample_nodes": "redraw nodes every outer iteration (0/1)",
    "output_dir": "directory for CSV and SVG output", "data_path": "CSV of points (dr only)",
    "plots": "write SVG charts (0/1)",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _flag(name):
    return "--" + {"lam": "lambda"}.get(name, name).replace("_", "-")


def build_parser():
    parser = _Parser(prog="dualsub", description="Subspace recovery by the dual alternating scheme.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for command, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(command, help=help_text)
        p.add_argument("--config", help="flat key=value configuration file")
        for f in dataclasses.fields(ExperimentConfig):
            if f.name == "task":
                continue
            p.add_argument(_flag(f.name), dest=f.name, default=None, metavar="VALUE",
                           help=HELP.get(f.name))
    sub.add_parser("selftest", help="run the built-in oracle checks")
    return parser


def config_from_args(command, args):
    task = COMMANDS[command][0]
    values = dict(TASK_DEFAULTS.get(command, {}))
    if args.config:
        values.update(read_config_file(args.config))
    flags = {
        name: raw for name, raw in vars(args).items()
        if raw is not None and name not in ("command", "config", "verbose")
    }
    values.update(parse_pairs(flags))
    values["task"] = task
    return ExperimentConfig(**values)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.command == "selftest":
        from .selftest import run_selftest

        return EXIT_OK if run_selftest() else 1
    try:
        cfg = config_from_args(args.command, args)
        if args.command == "dr" or args.command == "dr-cross":
            rows = experiments.run_dr(cfg)
        elif args.command == "sdr":
            rows = experiments.run_sdr(cfg)
        else:
            rows, summary = experiments.run_pca_compare(cfg)
            rows = rows + [summary]
    except (ConfigError, OSError) as exc:
        print(f"dualsub: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceError as exc:
        print(f"dualsub: numerical divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    print(f"wrote {len(rows)} result rows to {cfg.output_dir}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
