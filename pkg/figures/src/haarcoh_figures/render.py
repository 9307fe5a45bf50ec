"""Rebuild the figure set from the CSV files a haarcoh run wrote.

Nothing is recomputed here: every curve, fit and histogram comes straight
from the delimited output, so the figures always show exactly what the run
produced. Usage: ``render_figures <manifest-dir> <out-dir>``.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["FIGURE_IDS", "FigureInputError", "FigureSpec", "build_specs", "main", "render"]

FAMILIES = ("gaussian", "uniform", "cauchy")
DIMS = (2, 3, 4, 5, 6, 7)
STRENGTHS = ("0.1", "0.2", "0.3", "0.4", "0.5")
M_INS = ("0.55", "0.65", "0.75", "0.85", "0.95")

_HIST_HEADER = ["bin_center", "percent"]
_SUMMARY_HEADER = ["dim", "field", "family", "gamma", "target", "n", "m",
                   "mean", "std", "skewness", "seed"]
_FIT_HEADER = ["quantity", "alpha", "beta", "gamma", "sse", "converged"]
_UNNORM_HEADER = ["dim", "field", "mean_raw", "std_raw"]


class FigureInputError(Exception):
    """Missing or malformed input CSV; the message names the file."""


@dataclass(frozen=True)
class FigureSpec:
    figure_id: str
    inputs: tuple[Path, ...]
    output: Path
    title: str
    xlabel: str
    ylabel: str


def _read_rows(path: Path, header: list[str]) -> list[list[str]]:
    if not path.exists():
        raise FigureInputError(f"missing input CSV: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        got_header = next(reader, None)
        if got_header is None:
            raise FigureInputError(f"empty CSV: {path}")
        if [h.strip() for h in got_header] != header:
            raise FigureInputError(
                f"schema mismatch in {path}: expected columns {','.join(header)}"
            )
        rows = [row for row in reader if row]
    if not rows:
        raise FigureInputError(f"no data rows in {path}")
    return rows


def _floats(path: Path, row: list[str], indices: list[int]) -> list[float]:
    try:
        return [float(row[i]) for i in indices]
    except (ValueError, IndexError) as exc:
        raise FigureInputError(f"malformed row in {path}: {row!r}") from exc


def read_histogram(path: Path) -> tuple[np.ndarray, np.ndarray]:
    rows = _read_rows(path, _HIST_HEADER)
    values = np.array([_floats(path, row, [0, 1]) for row in rows])
    return values[:, 0], values[:, 1]


def read_dimsweep(path: Path) -> list[dict]:
    rows = _read_rows(path, _SUMMARY_HEADER)
    out = []
    for row in rows:
        dim = int(row[0])
        mean, std, skewness = _floats(path, row, [7, 8, 9])
        out.append({"dim": dim, "mean": mean, "std": std, "skewness": skewness})
    return out


def read_fit(path: Path) -> dict[str, tuple[float, float, float]]:
    rows = _read_rows(path, _FIT_HEADER)
    fits = {}
    for row in rows:
        alpha, beta, gamma = _floats(path, row, [1, 2, 3])
        fits[row[0]] = (alpha, beta, gamma)
    for required in ("std", "skewness"):
        if required not in fits:
            raise FigureInputError(f"{path} lacks a '{required}' fit row")
    return fits


def read_unnormalized(path: Path) -> list[dict]:
    rows = _read_rows(path, _UNNORM_HEADER)
    out = []
    for row in rows:
        mean_raw, std_raw = _floats(path, row, [2, 3])
        out.append({"dim": int(row[0]), "mean_raw": mean_raw, "std_raw": std_raw})
    return out


def _hist_name(dim: int, field: str, family: str | None = None,
               gamma: str = "0.5", target: str = "real") -> str:
    if family is None:
        return f"hist_d{dim}_{field}.csv"
    return f"hist_d{dim}_{field}_{family}_g{gamma}_{target}.csv"


def _overlay(ax, paths: list[Path], labels: list[str]) -> None:
    markers = ["*", "o", "x", "+", "d", "s"]
    for k, (path, label) in enumerate(zip(paths, labels)):
        centers, percent = read_histogram(path)
        ax.plot(centers, percent, markers[k % len(markers)], markersize=4,
                linestyle="none", label=label)
    ax.set_xlim(0.0, 1.0)
    ax.legend(fontsize=8)


def _render_distribution(spec: FigureSpec, labels: list[str]) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    _overlay(ax, list(spec.inputs), labels)
    ax.set_xlabel(spec.xlabel)
    ax.set_ylabel(spec.ylabel)
    ax.set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def _render_sweep(spec: FigureSpec) -> None:
    sweep_path, fit_path = spec.inputs
    rows = read_dimsweep(sweep_path)
    fits = read_fit(fit_path)
    dims = np.array([row["dim"] for row in rows], dtype=float)
    grid = np.linspace(dims.min(), dims.max(), 200)

    fig, axes = plt.subplots(2, 1, figsize=(6.0, 7.5))
    for ax, quantity, symbol in zip(axes, ("std", "skewness"), ("sigma_d", "s_d")):
        y = np.array([row[quantity] for row in rows])
        alpha, beta, gamma = fits[quantity]
        ax.plot(dims, y, "o", label=symbol)
        ax.plot(grid, alpha * np.exp(-beta * grid) + gamma, "-",
                label=f"{alpha:.3g} exp(-{beta:.3g} d) + {gamma:.3g}")
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(symbol)
        ax.legend(fontsize=8)
        inset = ax.inset_axes([0.55, 0.45, 0.4, 0.45])
        inset.loglog(dims, np.abs(y - gamma), "o-", markersize=3)
        inset.set_xlabel("d", fontsize=7)
        inset.set_ylabel(f"|{symbol} - gamma|", fontsize=7)
        inset.tick_params(labelsize=6)
    axes[0].set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def _render_unnormalized(spec: FigureSpec) -> None:
    complex_rows = read_unnormalized(spec.inputs[0])
    real_rows = read_unnormalized(spec.inputs[1])
    fig, axes = plt.subplots(2, 1, figsize=(6.0, 7.5))
    for ax, key, ylabel in zip(axes, ("mean_raw", "std_raw"),
                               ("raw mean", "raw standard deviation")):
        for rows, label, marker in ((complex_rows, "qudits", "o"), (real_rows, "redits", "s")):
            ax.plot([r["dim"] for r in rows], [r[key] for r in rows],
                    marker + "-", label=label)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(ylabel)
        ax.legend(fontsize=8)
    axes[0].set_title(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def _render_grid(spec: FigureSpec) -> None:
    # 4 panels, each: ordered histogram plus the three disorder families
    panels = [spec.inputs[i : i + 4] for i in range(0, 16, 4)]
    titles = ["qutrit", "4-dim qudit", "rebit", "retrit"]
    fig, axes = plt.subplots(2, 2, figsize=(10.0, 7.5))
    for ax, paths, title in zip(axes.flat, panels, titles):
        _overlay(ax, list(paths), ["ordered", "G", "U", "C-L"])
        ax.set_title(title, fontsize=9)
        ax.set_xlabel(spec.xlabel)
        ax.set_ylabel(spec.ylabel)
    fig.suptitle(spec.title)
    fig.tight_layout()
    fig.savefig(spec.output, dpi=150)
    plt.close(fig)


def build_specs(manifest_dir: Path, out_dir: Path) -> dict[str, FigureSpec]:
    src, dst = Path(manifest_dir), Path(out_dir)
    x_mod = "modified l1-norm coherence"
    y_pct = "relative frequency (%)"

    def spec(figure_id, names, title, xlabel=x_mod, ylabel=y_pct):
        return FigureSpec(
            figure_id=figure_id,
            inputs=tuple(src / name for name in names),
            output=dst / f"{figure_id}.png",
            title=title,
            xlabel=xlabel,
            ylabel=ylabel,
        )

    grid_names = []
    for dim, field in ((3, "complex"), (4, "complex"), (2, "real"), (3, "real")):
        grid_names.append(_hist_name(dim, field))
        grid_names += [_hist_name(dim, field, family) for family in FAMILIES]

    return {
        "f1": spec("f1", [_hist_name(d, "complex") for d in DIMS],
                   "typical coherence of qudits"),
        "f2": spec("f2", ["dimsweep_complex.csv", "fit_complex.csv"],
                   "spread and asymmetry vs dimension (qudits)", xlabel="d", ylabel=""),
        "f3": spec("f3", [_hist_name(d, "real") for d in DIMS],
                   "typical coherence of redits"),
        "f4": spec("f4", ["dimsweep_real.csv", "fit_real.csv"],
                   "spread and asymmetry vs dimension (redits)", xlabel="d", ylabel=""),
        "f5": spec("f5", ["unnormalized_complex.csv", "unnormalized_real.csv"],
                   "un-normalised mean and spread vs dimension", xlabel="d", ylabel=""),
        "f6": spec("f6", [_hist_name(2, "complex")] +
                   [_hist_name(2, "complex", family) for family in FAMILIES],
                   "qubit coherence under disorder"),
        "f7": spec("f7", [_hist_name(2, "complex")] +
                   [_hist_name(2, "complex", "gaussian", target=t)
                    for t in ("real", "imag", "both")],
                   "disorder in real, imaginary and both parts"),
        "f8": spec("f8", [_hist_name(2, "complex")] +
                   [_hist_name(2, "complex", "gaussian", gamma=g) for g in STRENGTHS],
                   "Gaussian disorder strength sweep"),
        "f9": spec("f9", [f"cond_m{m}.csv" for m in M_INS],
                   "perturbed coherence of fixed-coherence qubits"),
        "f10": spec("f10", grid_names, "disorder response in higher dimensions"),
    }


FIGURE_IDS = ("f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8", "f9", "f10")


def render(spec: FigureSpec) -> Path:
    """Render one figure; returns the written image path."""
    spec.output.parent.mkdir(parents=True, exist_ok=True)
    if spec.figure_id in ("f2", "f4"):
        _render_sweep(spec)
    elif spec.figure_id == "f5":
        _render_unnormalized(spec)
    elif spec.figure_id == "f10":
        _render_grid(spec)
    elif spec.figure_id in ("f1", "f3"):
        _render_distribution(spec, [f"d={d}" for d in DIMS])
    elif spec.figure_id == "f6":
        _render_distribution(spec, ["ordered", "G", "U", "C-L"])
    elif spec.figure_id == "f7":
        _render_distribution(spec, ["ordered", "real", "imag", "both"])
    elif spec.figure_id == "f8":
        _render_distribution(spec, ["ordered"] + [f"gamma={g}" for g in STRENGTHS])
    elif spec.figure_id == "f9":
        _render_distribution(spec, [f"M_in={m}" for m in M_INS])
    else:
        raise FigureInputError(f"unknown figure id: {spec.figure_id}")
    return spec.output


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="render_figures",
        description="Render the coherence figure set from haarcoh CSV output.",
    )
    parser.add_argument("manifest_dir", type=Path)
    parser.add_argument("out_dir", type=Path)
    parser.add_argument("--only", type=str, default=None,
                        help="comma-separated figure ids (default: all)")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    wanted = list(FIGURE_IDS)
    if args.only:
        wanted = [part.strip() for part in args.only.split(",")]
        unknown = [w for w in wanted if w not in FIGURE_IDS]
        if unknown:
            print(f"render_figures: unknown figure id(s): {', '.join(unknown)}", file=sys.stderr)
            return 2

    specs = build_specs(args.manifest_dir, args.out_dir)
    try:
        for figure_id in wanted:
            written = render(specs[figure_id])
            print(written)
    except FigureInputError as exc:
        print(f"render_figures: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
