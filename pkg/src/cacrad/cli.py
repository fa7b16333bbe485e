"""Command line front end.

Subcommands: extract, train-eval, phantom, stats, catalog. Exit codes:
0 success, 2 configuration problem, 3 data problem, 4 degenerate cohort.
Flags override config-file values; a missing config file is fine when
the flags alone describe the run.
"""

import argparse
import sys

from .config import RunConfig, apply_overrides, load_config
from .errors import CacradError, ConfigError, DataError, DegenerateCohortError
from .features.catalog import catalog_text
from .phantom import generate_cohort
from .pipeline import run_extract, run_stats, run_train_eval

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_DEGENERATE = 4


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cacrad",
        description="Calcium-score classification from CT radiomics or "
                    "precomputed embeddings.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_common(sp, with_mode=True):
        sp.add_argument("--config", help="key = value run configuration file")
        sp.add_argument("--manifest", help="cohort manifest CSV")
        sp.add_argument("--seed", type=int, help="master seed")
        sp.add_argument("--out", help="output directory")
        if with_mode:
            sp.add_argument("--mode", choices=("radiomics", "embeddings"))

    sp = sub.add_parser("extract", help="compute the feature table for a cohort")
    add_common(sp, with_mode=False)
    sp.add_argument("--features-csv", dest="features_csv",
                    help="where to write the feature table (default <out>/features.csv)")

    sp = sub.add_parser("train-eval", help="split, select, tune, fit, and score")
    add_common(sp)
    sp.add_argument("--train-composition", dest="train_composition",
                    choices=("mixed", "noncontrast"))
    sp.add_argument("--features-csv", dest="features_csv")
    sp.add_argument("--embeddings-csv", dest="embeddings_csv")
    sp.add_argument("--n-seeds", dest="n_seeds", type=int)
    sp.add_argument("--label-shuffle", dest="label_shuffle",
                    action="store_const", const=True, default=None,
                    help="permute training labels (null-hypothesis control)")
    sp.add_argument("--models", help="comma-separated model kinds")

    sp = sub.add_parser("phantom", help="generate a synthetic NIfTI cohort")
    sp.add_argument("--n", type=int, required=True, help="number of subjects")
    sp.add_argument("--balance", type=float, default=0.5,
                    help="fraction of NonZero subjects")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="cohort directory to create")

    sp = sub.add_parser("stats", help="paired t-tests between two run reports")
    sp.add_argument("report_a", help="run_report.json from the first arm")
    sp.add_argument("report_b", help="run_report.json from the second arm")
    sp.add_argument("--out", help="also write stats.json here")

    sub.add_parser("catalog", help="print the feature schema")
    return p


def _config_from_args(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    overrides = {}
    for name in ("manifest", "seed", "out", "mode", "train_composition",
                 "features_csv", "embeddings_csv", "n_seeds", "label_shuffle"):
        if hasattr(args, name):
            overrides[name] = getattr(args, name)
    if getattr(args, "models", None):
        overrides["models"] = tuple(
            t.strip() for t in args.models.split(",") if t.strip())
    return apply_overrides(cfg, **overrides)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "catalog":
            print(catalog_text())
        elif args.command == "phantom":
            manifest = generate_cohort(args.out, args.n, args.balance, args.seed)
            print(f"wrote {args.n} subjects, manifest {manifest}")
        elif args.command == "extract":
            cfg = _config_from_args(args)
            report = run_extract(cfg)
            print(f"extracted {report['n_extracted']}/{report['n_subjects']} subjects "
                  f"-> {report['features_csv']}")
            for exc in report["excluded"]:
                print(f"excluded {exc['subject_id']}: {exc['error']}: {exc['message']}")
        elif args.command == "train-eval":
            cfg = _config_from_args(args)
            report = run_train_eval(cfg)
            print(f"{len(report['runs'])} run(s), models: {', '.join(report['models'])}, "
                  f"reports under {cfg.out}")
        elif args.command == "stats":
            doc = run_stats(args.report_a, args.report_b, out_dir=args.out)
            for line in doc["lines"]:
                print(line)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateCohortError as exc:
        print(f"degenerate cohort: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (DataError, CacradError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
