"""Figure builders: multi-curve spectrum panels and yield-vs-width plots.

All numbers come from the CSVs; this module only arranges and styles them.
"""

import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .csvio import FigureInputError, read_spectrum, read_summary  # noqa: E402

_AXIS_LABELS = {
    "momentum": (r"$p$ [$m$]", r"$n(p)$"),
    "reduced-momentum": (r"$p$ [$m$]", r"$n(p)/\lambda$"),
    "position": (r"$x$ [$m^{-1}$]", r"$n(x)$"),
    "reduced-position": (r"$x$ [$m^{-1}$]", r"$n(x)/\lambda$"),
}

_LABEL_KEYS = ("lambda", "b", "phi", "eps", "omega", "tau")
_LABEL_TEX = {"lambda": r"$\lambda$", "b": r"$b$", "phi": r"$\varphi$",
              "eps": r"$\varepsilon$", "omega": r"$\omega$", "tau": r"$\tau$"}


@dataclass
class PlotSpec:
    """What to draw: input CSVs, layout, axes and the output image path."""

    inputs: list = field(default_factory=list)
    out_path: str = "figure.pdf"
    panel_by: str | None = None
    logx: bool = False
    logy: bool = False
    x_column: str = "lambda"
    y_column: str = "N_reduced"
    title: str | None = None


def _fmt_value(text):
    try:
        v = float(text)
    except (TypeError, ValueError):
        return str(text)
    return f"{v:g}"


def _is_composite(meta):
    # the local-density composite spectrum carries sample provenance
    return "prov.samples" in meta


def _curve_labels(curves):
    """One legend entry per CSV, built from the metadata keys that vary."""
    varying = [k for k in _LABEL_KEYS
               if len({c["meta"].get(k) for c in curves}) > 1]
    labels = []
    for c in curves:
        parts = [f"{_LABEL_TEX[k]} = {_fmt_value(c['meta'].get(k))}"
                 for k in varying if k in c["meta"]]
        if _is_composite(c["meta"]):
            parts.append("local-density composite")
        labels.append(", ".join(parts) if parts else c["path"])
    return labels


def build_spectra_figure(spec: PlotSpec):
    if not spec.inputs:
        raise FigureInputError("no input CSVs given")
    curves = [read_spectrum(p) for p in spec.inputs]
    kinds = {c["kind"] for c in curves}
    if len(kinds) > 1:
        detail = ", ".join(f"{c['path']}: {c['kind']}" for c in curves)
        raise FigureInputError(f"mixed spectrum kinds cannot share axes: {detail}")
    kind = curves[0]["kind"]
    xlabel, ylabel = _AXIS_LABELS.get(kind, ("axis", "value"))

    if spec.panel_by:
        keys = []
        for c in curves:
            k = c["meta"].get(spec.panel_by)
            if k is None:
                raise FigureInputError(
                    f"{c['path']} has no metadata key {spec.panel_by!r}")
            if k not in keys:
                keys.append(k)
        panels = [(f"{_LABEL_TEX.get(spec.panel_by, spec.panel_by)}"
                   f" = {_fmt_value(k)}",
                   [c for c in curves if c["meta"].get(spec.panel_by) == k])
                  for k in keys]
    else:
        panels = [(spec.title, curves)]

    ncols = min(2, len(panels))
    nrows = math.ceil(len(panels) / ncols)
    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(5.2 * ncols, 3.6 * nrows))
    for ax in axes.flat[len(panels):]:
        ax.set_visible(False)
    styles = ("-", "--", "-.", ":")
    for ax, (title, group) in zip(axes.flat, panels):
        labels = _curve_labels(group)
        for i, (c, lab) in enumerate(zip(group, labels)):
            ax.plot(c["axis"], c["values"], styles[i % len(styles)], label=lab)
        if spec.logx:
            ax.set_xscale("log")
        if spec.logy:
            ax.set_yscale("log")
        ax.set_xlabel(xlabel)
        ax.set_ylabel(ylabel)
        if title:
            ax.set_title(title)
        ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def plot_spectra(spec: PlotSpec) -> str:
    fig = build_spectra_figure(spec)
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path


def build_yield_figure(spec: PlotSpec):
    if not spec.inputs:
        raise FigureInputError("no input CSVs given")
    if len(spec.inputs) != 1:
        raise FigureInputError("yield plots take exactly one sweep summary CSV")
    path = spec.inputs[0]
    meta, cols = read_summary(path)
    for name in (spec.x_column, spec.y_column):
        if name not in cols:
            raise FigureInputError(
                f"{path} has no column {name!r}; columns: {sorted(cols)}")
    names = list(cols)
    axes_cols = names[:names.index("N")] if "N" in names else names[:1]
    group_cols = [c for c in axes_cols if c != spec.x_column]

    x = cols[spec.x_column]
    y = cols[spec.y_column]
    if group_cols:
        seen = []
        for i in range(x.size):
            key = tuple(cols[c][i] for c in group_cols)
            if key not in seen:
                seen.append(key)
        families = [
            (", ".join(f"{_LABEL_TEX.get(c, c)} = {v:g}"
                       for c, v in zip(group_cols, key)),
             [i for i in range(x.size)
              if tuple(cols[c][i] for c in group_cols) == key])
            for key in seen]
    else:
        families = [(None, list(range(x.size)))]

    fig, ax = plt.subplots(figsize=(5.6, 4.0))
    for label, idx in families:
        order = sorted(idx, key=lambda i: x[i])
        ax.plot(x[order], y[order], "o-", label=label)
    ax.set_xscale("log")
    if spec.logy:
        ax.set_yscale("log")
    ax.set_xlabel(_LABEL_TEX.get(spec.x_column, spec.x_column))
    ax.set_ylabel(r"$N/\lambda$" if spec.y_column == "N_reduced"
                  else spec.y_column)
    if spec.title:
        ax.set_title(spec.title)
    if any(lab for lab, _ in families):
        ax.legend(fontsize=8)
    fig.tight_layout()
    return fig


def plot_yield(spec: PlotSpec) -> str:
    fig = build_yield_figure(spec)
    fig.savefig(spec.out_path)
    plt.close(fig)
    return spec.out_path
