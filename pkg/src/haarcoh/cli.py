"""Command-line front end.

Every experiment is exposed as a subcommand that writes CSV files plus a
run manifest into an output directory. Identical arguments and seed produce
byte-identical CSVs regardless of worker count. Values are written with 17
significant digits, '.' decimal separator and '\\n' line ends.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .coherence import analytic_mean
from .disorder import DisorderSpec, Target
from .experiments import (
    ConditionalSpec,
    run_conditional,
    run_dimension_sweep,
    run_disordered,
    run_strength_sweep,
    run_typical,
)
from .quadrature import QuadratureConfig, average_redit_coherence
from .sampling import Family
from .states import Field
from .stats import bin_centers, fit_exponential

__all__ = ["RunConfig", "main"]

SEED_ENV_VAR = "HAAR_COHERENCE_SEED"

_INT_KEYS = {"dim", "n", "m", "pool", "nodes", "seed", "workers"}
_FLOAT_KEYS = {"gamma", "window"}
_INT_LIST_KEYS = {"dims"}
_FLOAT_LIST_KEYS = {"gammas", "m_in"}
_STR_KEYS = {"subcommand", "field", "family", "target", "out", "points"}
_BOOL_KEYS = {"paper_scale"}
_ALL_KEYS = _INT_KEYS | _FLOAT_KEYS | _INT_LIST_KEYS | _FLOAT_LIST_KEYS | _STR_KEYS | _BOOL_KEYS


class ConfigError(Exception):
    """Invalid flag, config key or parameter range; exits with code 2."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_int_list(text: str) -> tuple[int, ...]:
    """Accepts '2..7' ranges or comma-separated lists."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(part) for part in text.split(","))


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(","))


def _parse_value(key: str, text: str):
    text = text.strip()
    if key in _INT_KEYS:
        return int(text)
    if key in _FLOAT_KEYS:
        return float(text)
    if key in _INT_LIST_KEYS:
        return _parse_int_list(text)
    if key in _FLOAT_LIST_KEYS:
        return _parse_float_list(text)
    if key in _BOOL_KEYS:
        if text.lower() in ("true", "1", "yes"):
            return True
        if text.lower() in ("false", "0", "no"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {text!r}")
    return text


def _format_value(key: str, value) -> str:
    if key in _FLOAT_KEYS:
        return repr(float(value))
    if key in _FLOAT_LIST_KEYS:
        return ",".join(repr(float(v)) for v in value)
    if key in _INT_LIST_KEYS:
        return ",".join(str(int(v)) for v in value)
    if key in _BOOL_KEYS:
        return "true" if value else "false"
    return str(value)


@dataclass
class RunConfig:
    """Resolved configuration of one invocation; round-trips through the
    flat ``key = value`` config-file format losslessly."""

    subcommand: str
    dim: int | None = None
    dims: tuple[int, ...] | None = None
    field: str | None = None
    n: int | None = None
    m: int | None = None
    family: str | None = None
    gamma: float | None = None
    gammas: tuple[float, ...] | None = None
    target: str | None = None
    m_in: tuple[float, ...] | None = None
    window: float | None = None
    pool: int | None = None
    nodes: int | None = None
    seed: int | None = None
    out: str | None = None
    workers: int | None = None
    points: str | None = None
    paper_scale: bool = False

    def to_text(self) -> str:
        lines = []
        for key in sorted(_ALL_KEYS):
            value = getattr(self, key)
            if value is None or (key == "paper_scale" and value is False):
                continue
            lines.append(f"{key} = {_format_value(key, value)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RunConfig":
        values = _parse_config_text(text)
        if "subcommand" not in values:
            raise ConfigError("config text must define 'subcommand'")
        return cls(**values)


def _parse_config_text(text: str) -> dict:
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        values[key] = _parse_value(key, value)
    return values


def read_config_file(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"--config: cannot read {path}: {exc}") from exc
    return _parse_config_text(text)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV_VAR}: expected an integer, got {raw!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarcoh",
        description="Coherence statistics of Haar-random pure states under glassy disorder.",
    )
    parser.add_argument("--version", action="version", version=f"haarcoh {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: argparse.ArgumentParser, out_required: bool = True) -> None:
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", type=str, default=None, required=False)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--config", type=str, default=None)

    def disorder_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--family", choices=[f.value for f in Family], default=None)
        p.add_argument("--gamma", type=float, default=None)
        p.add_argument("--target", choices=[t.value for t in Target], default=None)
        p.add_argument("--m", type=int, default=None, help="disorder configs per base state")
        p.add_argument("--paper-scale", dest="paper_scale", action="store_const", const=True, default=None)

    p = sub.add_parser("typical", help="ordered coherence distribution")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--field", choices=[f.value for f in Field], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--paper-scale", dest="paper_scale", action="store_const", const=True, default=None)
    common(p)

    p = sub.add_parser("disorder", help="quenched-disorder coherence distribution")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--field", choices=[f.value for f in Field], default=None)
    p.add_argument("--n", type=int, default=None)
    disorder_flags(p)
    common(p)

    p = sub.add_parser("sweep-dim", help="dimension sweep with exponential fits")
    p.add_argument("--dims", type=str, default=None, help="e.g. 2..7 or 2,3,5")
    p.add_argument("--field", choices=[f.value for f in Field], default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--paper-scale", dest="paper_scale", action="store_const", const=True, default=None)
    common(p)

    p = sub.add_parser("sweep-strength", help="Gaussian disorder strength sweep")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--field", choices=[f.value for f in Field], default=None)
    p.add_argument("--gammas", type=str, default=None, help="comma-separated strengths")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--paper-scale", dest="paper_scale", action="store_const", const=True, default=None)
    common(p)

    p = sub.add_parser("conditional", help="perturbation of fixed-coherence qubits")
    p.add_argument("--m-in", dest="m_in", type=str, default=None, help="comma-separated M_in values")
    p.add_argument("--window", type=float, default=None)
    p.add_argument("--pool", type=int, default=None)
    disorder_flags(p)
    common(p)

    p = sub.add_parser("analytic", help="closed-form averages and quadrature cross-check")
    p.add_argument("--dims", type=str, default=None)
    p.add_argument("--field", choices=[f.value for f in Field], default=None)
    p.add_argument("--nodes", type=int, default=None)
    common(p)

    p = sub.add_parser("fit", help="exponential fit of a d,y points file")
    p.add_argument("--points", type=str, default=None)
    common(p)

    return parser


def _resolve(args: argparse.Namespace) -> RunConfig:
    file_cfg = read_config_file(args.config) if getattr(args, "config", None) else {}

    def pick(key, default=None):
        value = getattr(args, key, None)
        if value is not None:
            if key in _INT_LIST_KEYS:
                return _parse_int_list(value) if isinstance(value, str) else value
            if key in _FLOAT_LIST_KEYS:
                return _parse_float_list(value) if isinstance(value, str) else value
            return value
        if key in file_cfg:
            return file_cfg[key]
        return default

    paper = bool(pick("paper_scale", False))
    sub = args.subcommand
    cfg = RunConfig(
        subcommand=sub,
        dim=pick("dim"),
        dims=pick("dims"),
        field=pick("field"),
        n=pick("n", 1_000_000 if paper else 100_000),
        m=pick("m", 100 if paper else 50),
        family=pick("family", "gaussian"),
        gamma=pick("gamma", 0.5),
        gammas=pick("gammas"),
        target=pick("target", "real"),
        m_in=pick("m_in"),
        window=pick("window", 0.01),
        pool=pick("pool", 1_000_000),
        nodes=pick("nodes", 32),
        seed=pick("seed", _default_seed()),
        out=pick("out", "out"),
        workers=pick("workers", 1),
        points=pick("points"),
        paper_scale=paper,
    )
    _validate(cfg)
    return cfg


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ConfigError(message)


def _validate(cfg: RunConfig) -> None:
    sub = cfg.subcommand
    _require(cfg.seed >= 0, "--seed: seed must be >= 0")
    _require(cfg.workers >= 1, "--workers: worker count must be >= 1")
    if sub in ("typical", "disorder", "sweep-strength"):
        _require(cfg.dim is not None, "--dim: dim is required")
        _require(cfg.dim >= 2, "--dim: dim must be >= 2")
        _require(cfg.field is not None, "--field: field is required")
    if sub in ("sweep-dim", "analytic"):
        _require(cfg.dims is not None and len(cfg.dims) > 0, "--dims: dims are required")
        _require(cfg.field is not None, "--field: field is required")
        _require(all(d >= 2 for d in cfg.dims), "--dims: every dim must be >= 2")
    if cfg.field is not None:
        _require(cfg.field in ("real", "complex"), "--field: must be 'real' or 'complex'")
    if sub in ("typical", "disorder", "sweep-dim", "sweep-strength"):
        _require(cfg.n >= 1000, "--n: need at least 1000 states")
    if sub in ("disorder", "conditional"):
        _require(cfg.family in ("gaussian", "uniform", "cauchy"),
                 "--family: must be gaussian, uniform or cauchy")
        _require(cfg.gamma > 0, "--gamma: strength must be > 0")
        _require(cfg.target in ("real", "imag", "both"),
                 "--target: must be real, imag or both")
        _require(cfg.m >= 1, "--m: need at least one disorder config")
    if sub == "disorder" and cfg.field == "real":
        _require(cfg.target == "real", "--target: real field requires target 'real'")
    if sub == "sweep-dim":
        _require(all(d <= 10 for d in cfg.dims), "--dims: dims must lie in 2..10")
    if sub == "sweep-strength":
        _require(cfg.gammas is not None and len(cfg.gammas) > 0, "--gammas: strengths are required")
        _require(all(g > 0 for g in cfg.gammas), "--gammas: strengths must be > 0")
        _require(cfg.m >= 1, "--m: need at least one disorder config")
    if sub == "conditional":
        _require(cfg.m_in is not None and len(cfg.m_in) > 0, "--m-in: M_in values are required")
        _require(cfg.window > 0, "--window: halfwidth must be > 0")
        _require(
            all(0.0 < m - cfg.window and m + cfg.window < 1.0 for m in cfg.m_in),
            "--m-in: each window must lie inside (0, 1)",
        )
        _require(cfg.pool >= 1000, "--pool: need at least 1000 pool states")
    if sub == "analytic":
        _require(cfg.nodes >= 4, "--nodes: need at least 4 nodes per axis")
        if cfg.field == "real":
            _require(all(d <= 7 for d in cfg.dims), "--dims: quadrature supports dims 2..7")
    if sub == "fit":
        _require(cfg.points is not None, "--points: points file is required")


def _write_csv(path: Path, header: list[str], rows: list[list[str]]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_hist(path: Path, percent) -> None:
    centers = bin_centers()
    rows = [[_fmt(c), _fmt(p)] for c, p in zip(centers, percent)]
    _write_csv(path, ["bin_center", "percent"], rows)


_SUMMARY_HEADER = ["dim", "field", "family", "gamma", "target", "n", "m", "mean", "std", "skewness", "seed"]


def _summary_row(report) -> list[str]:
    dis = report.disorder
    return [
        str(report.dim),
        report.field.value,
        dis.family.value if dis else "none",
        _fmt(dis.siqr) if dis else "0",
        dis.target.value if dis else "none",
        str(report.n_states),
        str(report.configs_per_state),
        _fmt(report.stats.mean),
        _fmt(report.stats.std),
        _fmt(report.stats.skewness),
        str(report.seed),
    ]


def hist_filename(dim: int, field: Field, disorder: DisorderSpec | None = None) -> str:
    base = f"hist_d{dim}_{field.value}"
    if disorder is None:
        return base + ".csv"
    gamma = format(disorder.siqr, "g")
    return f"{base}_{disorder.family.value}_g{gamma}_{disorder.target.value}.csv"


def conditional_filename(m_in: float) -> str:
    return f"cond_m{format(m_in, 'g')}.csv"


def _write_manifest(outdir: Path, cfg: RunConfig, wall_time: float, outputs: list[str]) -> None:
    lines = [
        f"haarcoh {__version__}",
        f"subcommand: {cfg.subcommand}",
        "config:",
    ]
    lines += ["  " + line for line in cfg.to_text().splitlines()]
    lines.append(f"wall_time_s: {wall_time:.3f}")
    lines.append("outputs:")
    lines += ["  " + name for name in outputs]
    (outdir / "manifest.txt").write_text("\n".join(lines) + "\n")


def _outdir(cfg: RunConfig) -> Path:
    path = Path(cfg.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _disorder_from_config(cfg: RunConfig) -> DisorderSpec:
    return DisorderSpec(
        family=Family(cfg.family),
        siqr=cfg.gamma,
        target=Target(cfg.target),
        configs_per_state=cfg.m,
    )


def _cmd_typical(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    report = run_typical(cfg.dim, Field(cfg.field), cfg.n, cfg.seed, cfg.workers)
    outdir = _outdir(cfg)
    hist = hist_filename(cfg.dim, Field(cfg.field))
    _write_hist(outdir / hist, report.percent)
    _write_csv(outdir / "summary.csv", _SUMMARY_HEADER, [_summary_row(report)])
    _write_manifest(outdir, cfg, time.perf_counter() - t0, [hist, "summary.csv"])
    print(
        f"typical d={cfg.dim} {cfg.field}: mean={report.stats.mean:.6f} "
        f"std={report.stats.std:.6f} skewness={report.stats.skewness:.6f}"
    )
    return 0


def _cmd_disorder(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    disorder = _disorder_from_config(cfg)
    report = run_disordered(cfg.dim, Field(cfg.field), cfg.n, disorder, cfg.seed, cfg.workers)
    outdir = _outdir(cfg)
    hist = hist_filename(cfg.dim, Field(cfg.field), disorder)
    _write_hist(outdir / hist, report.percent)
    _write_csv(outdir / "summary.csv", _SUMMARY_HEADER, [_summary_row(report)])
    _write_manifest(outdir, cfg, time.perf_counter() - t0, [hist, "summary.csv"])
    print(
        f"disorder d={cfg.dim} {cfg.field} {cfg.family} gamma={cfg.gamma}: "
        f"mean={report.stats.mean:.6f} std={report.stats.std:.6f} "
        f"skewness={report.stats.skewness:.6f}"
    )
    return 0


_FIT_HEADER = ["quantity", "alpha", "beta", "gamma", "sse", "converged"]


def _fit_row(quantity: str, fit) -> list[str]:
    return [quantity, _fmt(fit.alpha), _fmt(fit.beta), _fmt(fit.gamma), _fmt(fit.sse),
            "true" if fit.converged else "false"]


def _cmd_sweep_dim(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    field = Field(cfg.field)
    result = run_dimension_sweep(field, list(cfg.dims), cfg.n, cfg.seed, cfg.workers)
    outdir = _outdir(cfg)
    outputs = []
    for report in result.reports:
        hist = hist_filename(report.dim, field)
        _write_hist(outdir / hist, report.percent)
        outputs.append(hist)
    rows = [_summary_row(r) for r in result.reports]
    _write_csv(outdir / "summary.csv", _SUMMARY_HEADER, rows)
    _write_csv(outdir / f"dimsweep_{field.value}.csv", _SUMMARY_HEADER, rows)
    outputs += ["summary.csv", f"dimsweep_{field.value}.csv"]
    if not result.fit_skipped:
        fit_rows = [_fit_row("std", result.fit_std), _fit_row("skewness", result.fit_skewness)]
        _write_csv(outdir / f"fit_{field.value}.csv", _FIT_HEADER, fit_rows)
        outputs.append(f"fit_{field.value}.csv")
    unnorm_rows = [
        [str(dim), field.value, _fmt(mean_raw), _fmt(std_raw)]
        for dim, mean_raw, std_raw in result.unnormalized
    ]
    _write_csv(outdir / f"unnormalized_{field.value}.csv",
               ["dim", "field", "mean_raw", "std_raw"], unnorm_rows)
    outputs.append(f"unnormalized_{field.value}.csv")
    _write_manifest(outdir, cfg, time.perf_counter() - t0, outputs)
    for report in result.reports:
        print(
            f"d={report.dim}: mean={report.stats.mean:.6f} std={report.stats.std:.6f} "
            f"skewness={report.stats.skewness:.6f}"
        )
    if result.fit_skipped:
        print("fit skipped: need at least 4 dims")
    else:
        fs, fk = result.fit_std, result.fit_skewness
        print(f"std fit: alpha={fs.alpha:.4f} beta={fs.beta:.4f} gamma={fs.gamma:.4f}")
        print(f"skewness fit: alpha={fk.alpha:.4f} beta={fk.beta:.4f} gamma={fk.gamma:.4f}")
    return 0


def _cmd_sweep_strength(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    field = Field(cfg.field)
    reports = run_strength_sweep(
        cfg.dim, field, cfg.n, list(cfg.gammas), cfg.seed, cfg.workers,
        configs_per_state=cfg.m,
    )
    outdir = _outdir(cfg)
    outputs = []
    for report in reports:
        hist = hist_filename(report.dim, field, report.disorder)
        _write_hist(outdir / hist, report.percent)
        outputs.append(hist)
    _write_csv(outdir / "summary.csv", _SUMMARY_HEADER, [_summary_row(r) for r in reports])
    outputs.append("summary.csv")
    _write_manifest(outdir, cfg, time.perf_counter() - t0, outputs)
    for report in reports:
        print(
            f"gamma={report.disorder.siqr:g}: std={report.stats.std:.6f} "
            f"skewness={report.stats.skewness:.6f}"
        )
    return 0


def _cmd_conditional(cfg: RunConfig) -> int:
    t0 = time.perf_counter()
    disorder = _disorder_from_config(cfg)
    outdir = _outdir(cfg)
    outputs = []
    rows = []
    for m_in in cfg.m_in:
        spec = ConditionalSpec(m_in=m_in, window_halfwidth=cfg.window, base_pool=cfg.pool)
        result = run_conditional(spec, disorder, cfg.seed, cfg.workers)
        hist = conditional_filename(m_in)
        _write_hist(outdir / hist, result.percent)
        outputs.append(hist)
        rows.append([
            _fmt(result.m_in), _fmt(result.m_f), str(result.n_selected),
            str(cfg.pool), str(cfg.m), str(cfg.seed),
        ])
        print(f"M_in={m_in:g}: M_f={result.m_f:.6f} (from {result.n_selected} base states)")
    _write_csv(outdir / "cond_summary.csv",
               ["m_in", "m_f", "n_selected", "pool", "m", "seed"], rows)
    outputs.append("cond_summary.csv")
    _write_manifest(outdir, cfg, time.perf_counter() - t0, outputs)
    return 0


def _cmd_analytic(cfg: RunConfig) -> int:
    field = Field(cfg.field)
    rows = []
    for dim in cfg.dims:
        analytic = analytic_mean(dim, field)
        line = f"d={dim} field={field.value} analytic_raw={_fmt(analytic)}"
        quad = ""
        if field is Field.REAL:
            quad_val = average_redit_coherence(
                QuadratureConfig(dim=dim, nodes_per_axis=cfg.nodes, allow_large_grid=True)
            )
            quad = _fmt(quad_val)
            line += f" quadrature_raw={quad}"
        rows.append([str(dim), field.value, _fmt(analytic), quad])
        print(line)
    if cfg.out != "out" or Path(cfg.out).exists():
        outdir = _outdir(cfg)
        name = f"analytic_{field.value}.csv"
        _write_csv(outdir / name, ["dim", "field", "analytic_raw", "quadrature_raw"], rows)
        _write_manifest(outdir, cfg, 0.0, [name])
    return 0


def _read_points_csv(path: str) -> list[tuple[float, float]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or [h.strip() for h in header[:2]] != ["d", "y"]:
                raise ConfigError(f"--points: {path} must start with header 'd,y'")
            points = [(float(row[0]), float(row[1])) for row in reader if row]
    except OSError as exc:
        raise ConfigError(f"--points: cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise ConfigError(f"--points: malformed row in {path}: {exc}") from exc
    return points


def _cmd_fit(cfg: RunConfig) -> int:
    points = _read_points_csv(cfg.points)
    fit = fit_exponential(points)
    print(
        f"alpha={_fmt(fit.alpha)} beta={_fmt(fit.beta)} gamma={_fmt(fit.gamma)} "
        f"sse={_fmt(fit.sse)} converged={fit.converged}"
    )
    outdir = _outdir(cfg)
    _write_csv(outdir / "fit.csv", _FIT_HEADER, [_fit_row("points", fit)])
    _write_manifest(outdir, cfg, 0.0, ["fit.csv"])
    return 0


_COMMANDS = {
    "typical": _cmd_typical,
    "disorder": _cmd_disorder,
    "sweep-dim": _cmd_sweep_dim,
    "sweep-strength": _cmd_sweep_strength,
    "conditional": _cmd_conditional,
    "analytic": _cmd_analytic,
    "fit": _cmd_fit,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
    except ConfigError as exc:
        print(f"haarcoh: error: {exc}", file=sys.stderr)
        return 2
    try:
        return _COMMANDS[cfg.subcommand](cfg)
    except ConfigError as exc:
        print(f"haarcoh: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"haarcoh: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
