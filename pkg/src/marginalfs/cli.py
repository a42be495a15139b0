"""Command line interface: ``marginalfs {select,stability,ell-sweep,synth,verify}``.

On failure the process exits non-zero after printing one line to stderr::

    error<TAB><ExceptionName><TAB><message>
"""

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .datasets import generate_synthetic, ingest_csv, write_csv
from .exceptions import DataFormatError
from .pipeline import (
    format_ell_sweep,
    format_reports,
    format_stability,
    load_config,
    run_ell_sweep,
    run_selection,
    run_stability,
)
from .streams import StreamKey, stream_id

log = logging.getLogger("marginalfs")


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}")


def _add_run_options(p, needs_input=True):
    p.add_argument("--input", required=needs_input, help="CSV file with a header row")
    p.add_argument("--label-col", default="label", help="name of the 0/1 label column")
    p.add_argument("--delimiter", default=",")
    p.add_argument("--config", help="key=value file; command line flags take precedence")
    p.add_argument("--statistic", choices=["auc", "xi"])
    p.add_argument("--resample", action="store_const", const=True, default=None,
                   help="average the statistic over random subsamples")
    p.add_argument("--m", type=int, help="subsample size")
    p.add_argument("--ell", type=int, help="number of subsamples")
    p.add_argument("--n-perm", type=int, help="Monte Carlo permutations per feature")
    p.add_argument("--pvalue", choices=["exact", "mc"])
    p.add_argument("--fdr", choices=["by", "bh"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--folds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--threads", type=int)
    p.add_argument("--output-dir", default=".", help="directory for output tables")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="marginalfs",
        description="Marginal AUC / xi tests with FDR-controlled feature selection.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("select", help="per-feature p-values and FDR selection")
    _add_run_options(p)

    p = sub.add_parser("stability", help="stability curve S(M_s) over folds")
    _add_run_options(p)
    p.add_argument("--s-grid", type=_int_list, help="comma separated s values (default 1..p)")

    p = sub.add_parser("ell-sweep", help="rejections of resampled xi versus ell")
    _add_run_options(p)
    p.add_argument("--ell-grid", type=_int_list, default=[10, 100, 1000])

    p = sub.add_parser("synth", help="write a synthetic two-class data set")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--p", type=int, default=100)
    p.add_argument("--n-nonnull", type=int, default=10)
    p.add_argument("--shift", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--label-col", default="label")
    p.add_argument("--output-dir", default=".")
    p.add_argument("--output", default="synthetic.csv", help="file name inside --output-dir")

    p = sub.add_parser("verify", help="run the brute-force oracle suite")
    p.add_argument("--max-n", type=int, default=12)
    return parser


def _config_from_args(args):
    return load_config(
        args.config, statistic=args.statistic, resample=args.resample, m=args.m, ell=args.ell,
        n_perm=args.n_perm, pvalue=args.pvalue, fdr=args.fdr, alpha=args.alpha,
        folds=args.folds, seed=args.seed, threads=args.threads)


def _write(outdir, name, text):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(text)
    log.info("wrote %s", path)
    return path


def _cmd_select(args):
    config = _config_from_args(args)
    data = ingest_csv(args.input, args.label_col, args.delimiter)
    reports, selection = run_selection(data, config)
    _write(args.output_dir, "features.tsv", format_reports(reports))
    print(f"selected {selection.n_selected} of {data.p} features "
          f"({selection.procedure.upper()}, alpha={selection.alpha})")


def _cmd_stability(args):
    config = _config_from_args(args)
    data = ingest_csv(args.input, args.label_col, args.delimiter)
    curve = run_stability(data, config, args.s_grid)
    _write(args.output_dir, "stability.csv", format_stability(curve))


def _cmd_ell_sweep(args):
    config = _config_from_args(args)
    data = ingest_csv(args.input, args.label_col, args.delimiter)
    rows = run_ell_sweep(data, config, args.ell_grid)
    _write(args.output_dir, "ell_sweep.csv", format_ell_sweep(rows))


def _cmd_synth(args):
    data = generate_synthetic(args.n, args.p, args.n_nonnull, args.shift, args.rho,
                              key=StreamKey(args.seed, stream_id("synthetic")))
    outdir = Path(args.output_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    write_csv(data, outdir / args.output, args.label_col)


def _cmd_verify(args):
    from .testkit import run_oracle_suite

    results = run_oracle_suite(max_n=args.max_n)
    if not all(ok for _, ok, _ in results):
        raise RuntimeError("oracle suite failed")


COMMANDS = {
    "select": _cmd_select,
    "stability": _cmd_stability,
    "ell-sweep": _cmd_ell_sweep,
    "synth": _cmd_synth,
    "verify": _cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        COMMANDS[args.command](args)
    except (DataFormatError, ValueError, TypeError, OSError) as exc:
        print(f"error\t{type(exc).__name__}\t{_one_line(exc)}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - report and exit non-zero
        print(f"error\t{type(exc).__name__}\t{_one_line(exc)}", file=sys.stderr)
        return 1
    return 0


def _one_line(exc):
    return " ".join(str(exc).split())


if __name__ == "__main__":
    sys.exit(main())
