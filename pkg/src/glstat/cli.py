"""``glstat run <config.json>``: run one Monte-Carlo experiment."""

import argparse
import json
import logging
import sys
import time

from ._errors import GLStatError
from .sim import ExperimentConfig, run_experiment, write_outputs

log = logging.getLogger("glstat")


def build_parser():
    parser = argparse.ArgumentParser(prog="glstat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run the experiment described by a JSON config")
    run.add_argument("config", help="path to the experiment config (JSON)")
    run.add_argument("--seed", type=int, help="override the config seed")
    run.add_argument("--replicates", type=int, help="override the replicate count")
    run.add_argument("--out", help="override the output CSV path")
    run.add_argument("--threads", type=int, default=None, help="worker threads (default 1)")
    run.add_argument("-v", "--verbose", action="store_true")
    return parser


def load_config(path, seed=None, replicates=None, out=None, threads=None):
    with open(path) as fh:
        raw = json.load(fh)
    for key, value in (("seed", seed), ("replicates", replicates), ("output_path", out), ("threads", threads)):
        if value is not None:
            raw[key] = value
    return ExperimentConfig.from_dict(raw)


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_config(args.config, args.seed, args.replicates, args.out, args.threads)
        log.info("running %s with seed %d", config.experiment, config.seed)
        start = time.perf_counter()
        columns, rows, summary = run_experiment(config)
        csv_path, manifest_path = write_outputs(config, columns, rows, summary)
    except (GLStatError, OSError, ValueError, KeyError, TypeError) as exc:
        print(f"glstat: error: {exc}", file=sys.stderr)
        return 2
    log.info("finished in %.1fs", time.perf_counter() - start)
    print(f"seed={config.seed} wrote {csv_path} and {manifest_path}")
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
