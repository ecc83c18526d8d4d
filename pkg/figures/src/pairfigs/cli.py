"""Command line entry: render figures from simulation output directories."""

import argparse
import glob
import os
import sys

from .csvio import FigureInputError
from .plots import PlotSpec, plot_spectra, plot_yield


def collect_spectra(path):
    """Expand a run directory into its reduced-spectrum CSVs.

    Accepts direct CSV paths, single-run directories, sweep directories
    (one curve per point) and compare directories (full plus composite).
    """
    if os.path.isfile(path):
        return [path]
    if not os.path.isdir(path):
        raise FigureInputError(f"no such file or directory: {path}")
    found = []
    points = sorted(glob.glob(os.path.join(path, "point_*")))
    for sub in [path, os.path.join(path, "full")] + points:
        for name in ("momentum_spectrum_reduced.csv", "lda_spectrum.csv"):
            p = os.path.join(sub, name)
            if os.path.exists(p):
                found.append(p)
    p = os.path.join(path, "lda", "lda_spectrum.csv")
    if os.path.exists(p):
        found.append(p)
    if not found:
        raise FigureInputError(f"no spectrum CSVs found under {path}")
    return found


def build_parser():
    ap = argparse.ArgumentParser(
        prog="pairsim-figures",
        description="Render paper-style figures from simulation CSV output")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectra",
                        help="multi-curve momentum spectrum panels")
    sp.add_argument("inputs", nargs="+",
                    help="run directories or spectrum CSV files")
    sp.add_argument("--out", default="spectra.pdf", help="output image path")
    sp.add_argument("--panel-by", default=None,
                    help="metadata key giving one panel per value (e.g. b)")
    sp.add_argument("--logy", action="store_true")
    sp.add_argument("--title", default=None)

    yp = sub.add_parser("yield", help="yield versus sweep axis, log-x")
    yp.add_argument("input", help="sweep directory or sweep_summary.csv")
    yp.add_argument("--out", default="yield.pdf", help="output image path")
    yp.add_argument("--x", default="lambda", dest="x_column",
                    help="sweep axis drawn on the x axis")
    yp.add_argument("--y", default="N_reduced", dest="y_column",
                    help="summary column drawn on the y axis")
    yp.add_argument("--logy", action="store_true")
    yp.add_argument("--title", default=None)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "spectra":
            csvs = []
            for item in args.inputs:
                csvs.extend(collect_spectra(item))
            out = plot_spectra(PlotSpec(
                inputs=csvs, out_path=args.out, panel_by=args.panel_by,
                logy=args.logy, title=args.title))
        else:
            path = args.input
            if os.path.isdir(path):
                path = os.path.join(path, "sweep_summary.csv")
            out = plot_yield(PlotSpec(
                inputs=[path], out_path=args.out, x_column=args.x_column,
                y_column=args.y_column, logy=args.logy, title=args.title))
    except FigureInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
