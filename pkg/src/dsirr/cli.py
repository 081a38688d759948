"""Command line entry point: ``dsirr <verb> [options]``.

Each verb writes one or more CSV tables to ``--out`` (and SVG line plots
with ``--plots``).  Quantities are in natural units (ħ = m = σ₀ = 1),
times in τ₀.  Every CSV starts with ``# config:`` and ``# options:``
comment lines holding the resolved run configuration.

Exit status: 0 on success, 1 for usage or configuration errors, 2 when a
numerical routine cannot deliver its result.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .config import ConfigError, RunConfig, dumps, load_config
from .errors import NumericError
from .fringes import count_fringes, pattern
from .irrealism import momentum_distribution, position_distribution, rescaled_irrealism, shannon_entropy
from .moments import covariance_closed_form, squeezing_ratios
from .packet import slit_params
from .screen import superposition

T_FLOOR = 1e-6
PATTERN_POINTS = 4001
DEFAULT_TIMES = (0.49, 0.83, 1.36)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, (str, int, np.integer)) and not isinstance(value, bool):
        return str(value)
    return f"{float(value):.12g}"


def _write_csv(path: Path, cfg: RunConfig, options: dict, columns, rows) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(f"# config: {dumps(cfg, include_paths=False, indent=None)}\n")
        fh.write(f"# options: {json.dumps(options, sort_keys=True)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
    print(f"wrote {path}")
    return path


def _plot(path: Path, columns, rows, x: str, ys, group: str | None = None):
    # matplotlib is optional and only needed here
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    matplotlib.rcParams["svg.hashsalt"] = "dsirr"
    data = np.array([[float(v) for v in r] for r in rows]) if rows else np.zeros((0, len(columns)))
    col = {name: i for i, name in enumerate(columns)}
    fig, ax = plt.subplots(figsize=(6, 4))
    for y in ys:
        if group is None:
            ax.plot(data[:, col[x]], data[:, col[y]], label=y)
        else:
            for g in np.unique(data[:, col[group]]):
                sel = data[:, col[group]] == g
                ax.plot(data[sel, col[x]], data[sel, col[y]], label=f"{y}, {group}={g:g}")
    ax.set_xlabel(x)
    ax.legend(fontsize="small")
    fig.tight_layout()
    out = path.with_suffix(".svg")
    fig.savefig(out, format="svg", metadata={"Date": None})
    plt.close(fig)
    print(f"wrote {out}")


def _emit(args, cfg, options, name, columns, rows, x=None, ys=(), group=None):
    path = _write_csv(Path(cfg.out_dir) / f"{name}.csv", cfg, options, columns, rows)
    if args.plots and x is not None:
        _plot(path, columns, rows, x, ys, group)


def cmd_uncertainties(args, cfg: RunConfig):
    tau = cfg.tau_over_tau0
    rows, squeeze = [], []
    for t in cfg.t_grid():
        cov = covariance_closed_form(slit_params(cfg.experiment, t, tau))
        rows.append((t, cov.sxx2, cov.spp2, cov.sxp, cov.dC))
        squeeze.append((t, *squeezing_ratios(cfg.experiment, t, tau)))
    cols = ("t_over_tau0", "sxx2", "spp2", "sxp", "dC")
    _emit(args, cfg, {}, "uncertainties", cols, rows, "t_over_tau0", cols[1:])
    _emit(args, cfg, {}, "squeezing", ("t_over_tau0", "rx", "rp"), squeeze, "t_over_tau0", ("rx", "rp"))


def cmd_irrealism(args, cfg: RunConfig):
    tau, res = cfg.tau_over_tau0, cfg.resolution

    def row(t):
        state = superposition(cfg.experiment, t, tau)
        q = position_distribution(state, res.dq)
        p = momentum_distribution(state, res.dk)
        iq, ip = shannon_entropy(q), shannon_entropy(p)
        return (t, iq, ip, rescaled_irrealism(iq, res, "Q"), rescaled_irrealism(ip, res, "P"), q.n, p.n)

    rows = analysis.evaluate_grid(row, cfg.t_grid())
    cols = ("t_over_tau0", "irrQ", "irrP", "irrQ_rescaled", "irrP_rescaled", "n_bins_q", "n_bins_k")
    _emit(args, cfg, {}, "irrealism", cols, rows, "t_over_tau0", cols[1:5])


def cmd_pattern(args, cfg: RunConfig):
    times = []
    for t in args.times:
        if t < T_FLOOR:
            print(f"warning: t={t:g} raised to the floor {T_FLOOR:g} tau0", file=sys.stderr)
            t = T_FLOOR
        times.append(t)
    rows, counts = [], []
    for t in times:
        params = slit_params(cfg.experiment, t, cfg.tau_over_tau0)
        half = superposition(cfg.experiment, t, cfg.tau_over_tau0).extent
        s = pattern(params, np.linspace(-half, half, PATTERN_POINTS))
        for i in range(s.x.size):
            rows.append((t, s.x[i], s.intensity[i], s.envelope[i], s.relative[i], s.visibility[i], s.predictability[i]))
        counts.append((t, count_fringes(params, args.threshold)))
    options = {"times": times, "threshold": args.threshold}
    cols = ("t_over_tau0", "x_over_sigma0", "intensity", "envelope", "relative", "visibility", "predictability")
    _emit(args, cfg, options, "pattern", cols, rows, "x_over_sigma0", ("intensity",), group="t_over_tau0")
    _emit(args, cfg, options, "fringes", ("t_over_tau0", "fringes"), counts)


EXTREMA_QUANTITIES = ("sxx", "spp", "sxp", "dC", "irrQ", "irrP")


def _local_extrema(values, kind):
    ys = np.asarray(values) * (1.0 if kind == "min" else -1.0)
    return [i for i in range(1, len(ys) - 1) if ys[i] < ys[i - 1] and ys[i] <= ys[i + 1]]


def cmd_extrema(args, cfg: RunConfig):
    """Every interior extremum found on the t grid, refined to 1e-4 tau0."""
    grid = cfg.t_grid()
    rows = []
    for q in EXTREMA_QUANTITIES:
        curve = analysis.quantity_curve(q, cfg.experiment, cfg.tau_over_tau0, cfg.resolution)
        values = analysis.evaluate_grid(curve, grid)
        for kind in analysis.KINDS:
            for i in _local_extrema(values, kind):
                bracket = (grid[max(i - 2, 0)], grid[min(i + 2, len(grid) - 1)])
                rep = analysis.find_extremum(curve, bracket, kind=kind, quantity=q)
                rows.append((q, kind, rep.t_star, rep.value, bracket[0], bracket[1]))
    cols = ("quantity", "kind", "t_star_over_tau0", "value", "bracket_lo", "bracket_hi")
    _emit(args, cfg, {}, "extrema", cols, rows)


def cmd_fit(args, cfg: RunConfig):
    window = (args.fit_lo, args.fit_hi)
    fit = analysis.visibility_fit(
        cfg.experiment, cfg.tau_over_tau0, window, args.fit_samples, cfg.resolution, rescaled=not args.raw
    )
    mono = analysis.monotonicity_check([(v, y) for _, v, y in fit.samples])
    options = {"window": list(window), "n_samples": args.fit_samples, "rescaled": not args.raw}
    cols = ("c1", "c2", "residual_rms", "window_lo", "window_hi", "n_samples", "monotonicity", "rank_correlation")
    row = (fit.c1, fit.c2, fit.residual_rms, *fit.window, len(fit.samples), mono.verdict, mono.rank_correlation)
    _emit(args, cfg, options, "fit", cols, [row])
    _emit(args, cfg, options, "fit_samples", ("t_over_tau0", "visibility", "irrealism"), fit.samples,
          "visibility", ("irrealism",))


def cmd_sweep(args, cfg: RunConfig):
    rows = analysis.sweep(args.quantity, cfg.experiment, cfg.tau_over_tau0, cfg.t_grid(), cfg.resolution)
    options = {"quantity": args.quantity}
    _emit(args, cfg, options, f"sweep_{args.quantity}", ("t_over_tau0", args.quantity), rows,
          "t_over_tau0", (args.quantity,))


COMMANDS = {
    "uncertainties": (cmd_uncertainties, "variances, correlation and determinant over t"),
    "irrealism": (cmd_irrealism, "raw and rescaled irrealism over t"),
    "pattern": (cmd_pattern, "intensity, visibility and fringe counts at given times"),
    "extrema": (cmd_extrema, "minima and maxima of every quantity on the t range"),
    "fit": (cmd_fit, "linear fit of irrealism against visibility"),
    "sweep": (cmd_sweep, "one quantity over the t grid"),
}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--gamma", type=float, help="initial correlation parameter")
    common.add_argument("--tau", type=float, help="slit-to-screen time in tau0")
    common.add_argument("--dq", type=float, help="position resolution in m")
    common.add_argument("--dk", type=float, help="wavenumber resolution in 1/m")
    common.add_argument("--t-lo", type=float, dest="t_lo")
    common.add_argument("--t-hi", type=float, dest="t_hi")
    common.add_argument("--t-steps", type=int, dest="t_steps")
    common.add_argument("--out", help="output directory")
    common.add_argument("--plots", action="store_true", help="also write SVG plots")

    parser = _Parser(prog="dsirr", description="Double-slit irrealism and uncertainty calculations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    subs = {name: sub.add_parser(name, parents=[common], help=text) for name, (_, text) in COMMANDS.items()}

    subs["pattern"].add_argument("--times", type=float, nargs="+", default=list(DEFAULT_TIMES), help="times in tau0")
    subs["pattern"].add_argument("--threshold", type=float, default=0.1, help="visibility threshold for fringe counts")
    subs["fit"].add_argument("--fit-lo", type=float, default=0.3, dest="fit_lo")
    subs["fit"].add_argument("--fit-hi", type=float, default=0.7, dest="fit_hi")
    subs["fit"].add_argument("--fit-samples", type=int, default=21, dest="fit_samples")
    subs["fit"].add_argument("--raw", action="store_true", help="fit raw instead of rescaled irrealism")
    subs["sweep"].add_argument("--quantity", choices=analysis.QUANTITIES, required=True)
    return parser


def resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    return cfg.replace(
        gamma=args.gamma,
        tau_over_tau0=args.tau,
        dq_m=args.dq,
        dk_per_m=args.dk,
        t_lo=args.t_lo,
        t_hi=args.t_hi,
        t_steps=args.t_steps,
        out_dir=args.out,
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args)
        COMMANDS[args.command][0](args, cfg)
    except NumericError as exc:
        print(f"dsirr: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, ValueError) as exc:
        print(f"dsirr: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
