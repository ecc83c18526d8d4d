"""Acceptance: the four paper-style figure layouts render from preset-shaped
run directories, with one curve per CSV and metadata-sourced legends."""

import os

from pairfigs import PlotSpec, build_spectra_figure, build_yield_figure
from pairfigs.cli import collect_spectra, main


def _legend_labels(ax):
    leg = ax.get_legend()
    return [t.get_text() for t in leg.get_texts()] if leg else []


def test_criterion_13_figure_regeneration(outputs, tmp_path, capsys):
    results = []

    # spatial-width spectra with the composite overlay (single panel)
    csvs = collect_spectra(str(outputs["sweep_lambda"])) \
        + collect_spectra(str(outputs["lda"]))
    fig = build_spectra_figure(PlotSpec(inputs=csvs))
    ax = fig.axes[0]
    results.append(("width spectra", len(ax.lines) == len(csvs)
                    and len(_legend_labels(ax)) == len(csvs)))

    # yield versus width for two chirp values
    rc = main(["yield", str(outputs["sweep_lambda_b"]),
               "--out", str(tmp_path / "yield_chirp.pdf")])
    results.append(("chirp yield", rc == 0
                    and os.path.getsize(tmp_path / "yield_chirp.pdf") > 0))

    # one panel per chirp value
    csvs5 = collect_spectra(str(outputs["sweep_b"]))
    fig5 = build_spectra_figure(PlotSpec(inputs=csvs5, panel_by="b"))
    vis = [a for a in fig5.axes if a.get_visible()]
    results.append(("chirp panels", len(vis) == len(csvs5)
                    and all(len(a.lines) == 1 for a in vis)))

    # yield versus width for both carrier phases
    rc = main(["yield", str(outputs["sweep_lambda_phi"]),
               "--out", str(tmp_path / "yield_phase.pdf")])
    results.append(("phase yield", rc == 0
                    and os.path.getsize(tmp_path / "yield_phase.pdf") > 0))

    ok = all(flag for _, flag in results)
    with capsys.disabled():
        detail = ", ".join(f"{name} {'ok' if flag else 'FAILED'}"
                           for name, flag in results)
        print(f"\ncriterion 13 [figure regeneration]: "
              f"{'PASS' if ok else 'FAIL'}  ({detail})")
    assert ok
