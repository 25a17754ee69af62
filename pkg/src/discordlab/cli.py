"""Command-line entry point: ``run``, ``fit``, ``twobit`` and ``plot``.

Exit codes: 0 ok, 1 usage or configuration error, 2 property violation.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import logging
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .errors import DiscordLabError
from .estimators import CONVENTIONS
from .experiment import ExperimentConfig, iter_experiment
from .fitting import DegenerateFitError, fit_quadratic, residual_spread
from .io import (
    CsvFormatError,
    format_row,
    header_line,
    read_manifest,
    read_scatter,
    write_manifest,
)
from .plot import max_channel_entropy, scatter_svg
from .states import PRIOR_KINDS
from .channels import LOW_ENTROPY_RULES
from . import twobit

log = logging.getLogger("discordlab")

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _fingerprint(config: ExperimentConfig) -> str:
    blob = json.dumps(config.to_dict(), sort_keys=True) + __version__
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _points_xy(points):
    x = np.array([p.avg_distortion for p in points])
    y = np.array([p.avg_discord for p in points])
    return x, y


def _fit_or_none(points):
    try:
        return fit_quadratic(np.column_stack(_points_xy(points)))
    except DegenerateFitError:
        return None


def _resume_count(partial: Path, checkpoint: Path, fingerprint: str) -> int:
    """Number of complete rows already in ``partial`` for this config, else 0."""
    if not (partial.exists() and checkpoint.exists()):
        return 0
    if json.loads(checkpoint.read_text()).get("fingerprint") != fingerprint:
        return 0
    text = partial.read_text()
    lines = text.splitlines(keepends=True)
    if not lines or lines[0] != header_line():
        return 0
    # drop a torn trailing line
    complete = [ln for ln in lines[1:] if ln.endswith("\n")]
    partial.write_text(lines[0] + "".join(complete))
    return len(complete)


def cmd_run(args) -> int:
    config = ExperimentConfig(
        m=args.m,
        prior=args.prior,
        a_grid=args.a_grid,
        wdown_per_a=args.wdown_per_a,
        states=args.states,
        seed=args.seed,
        include_identity=not args.no_identity,
        convention=args.convention,
        low_entropy_rule=args.low_entropy_rule,
        B=args.B,
    )
    out = Path(args.out or f"runs/m{config.m}-{config.prior}-seed{config.seed}")
    out.mkdir(parents=True, exist_ok=True)
    partial = out / "scatter.csv.partial"
    checkpoint = out / "checkpoint.json"
    fingerprint = _fingerprint(config)

    done = 0 if args.no_resume else _resume_count(partial, checkpoint, fingerprint)
    if done:
        log.info("resuming at channel %d of %d", done, config.n_channels)
    else:
        partial.write_text(header_line())
    checkpoint.write_text(json.dumps({"fingerprint": fingerprint, "config": config.to_dict()}, sort_keys=True))

    t0 = time.time()
    total = config.n_channels
    with open(partial, "a", newline="") as fh:
        for k, pt in enumerate(iter_experiment(config, start=done, workers=args.workers), start=done + 1):
            fh.write(format_row(pt))
            fh.flush()
            if k % max(1, total // 20) == 0 or k == total:
                log.info("channel %d/%d (%.1fs)", k, total, time.time() - t0)

    csv_path = out / "scatter.csv"
    os.replace(partial, csv_path)
    checkpoint.unlink(missing_ok=True)
    points = read_scatter(csv_path)
    fit = _fit_or_none(points)
    vmax = max_channel_entropy(config.m)
    x, y = _points_xy(points)
    (out / "scatter.svg").write_text(
        scatter_svg(x, y, [p.weight_entropy for p in points], vmax, fit, title=f"M = {config.m}, prior = {config.prior}")
    )
    manifest = {
        "version": __version__,
        "config": config.to_dict(),
        "n_points": len(points),
        "max_channel_entropy_bits": vmax,
        "fit": fit.to_dict() if fit else None,
        "residual_spread": residual_spread(np.column_stack([x, y]), [p.weight_entropy for p in points], fit, vmax)
        if fit
        else None,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    write_manifest(out / "manifest.json", manifest)
    print(f"wrote {len(points)} rows to {csv_path}")
    if fit:
        print(_fit_line(fit))
    return EXIT_OK


def _fit_line(fit) -> str:
    return f"t1={fit.t1:.6g} t2={fit.t2:.6g} t3={fit.t3:.6g} rmse={fit.rmse:.6g} n={fit.n_points}"


def cmd_fit(args) -> int:
    points = read_scatter(args.csv)
    fit = fit_quadratic(np.column_stack(_points_xy(points)))
    print(_fit_line(fit))
    manifest_path = Path(args.manifest) if args.manifest else Path(args.csv).with_name("manifest.json")
    if manifest_path.parent.exists():
        manifest = read_manifest(manifest_path)
        manifest.setdefault("fits", []).append({"csv": str(args.csv), **fit.to_dict()})
        write_manifest(manifest_path, manifest)
    return EXIT_OK


def _infer_m(points) -> int:
    h = max(p.weight_entropy for p in points)
    for m in range(2, 9):
        if max_channel_entropy(m) >= h - 1e-9:
            return m
    return 8


def cmd_plot(args) -> int:
    points = read_scatter(args.csv)
    m = args.m or read_manifest(Path(args.csv).with_name("manifest.json")).get("config", {}).get("m") or _infer_m(points)
    fit = _fit_or_none(points)
    x, y = _points_xy(points)
    svg = scatter_svg(x, y, [p.weight_entropy for p in points], max_channel_entropy(m), fit, title=f"M = {m}")
    Path(args.svg).write_text(svg)
    print(f"wrote {args.svg}")
    return EXIT_OK


def _parse_mu_list(text: str) -> np.ndarray:
    try:
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError:
        raise UsageError(f"cannot parse mu list {text!r}") from None


def cmd_twobit(args) -> int:
    if args.states < 3 or args.mu_points < 3:
        raise UsageError("grid sizes must be at least 3")
    grid = _parse_mu_list(args.mu) if args.mu else twobit.mu_grid(args.mu_points)
    grid = twobit.check_mu_grid(grid)
    rng = np.random.default_rng(args.seed)
    states = twobit.random_twobit_states(args.states, rng)
    report = twobit.monotonicity_scan(states, grid, sign_flip=args.inject_sign_flip)
    alphas = rng.uniform(-args.alpha_max, args.alpha_max, args.states)
    errors = twobit.derivative_check(states, alphas)
    report.max_derivative_error = float(errors.max())
    deriv_ok = report.max_derivative_error <= args.derivative_rtol

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    n_curves = min(args.curves, len(states))
    with open(out / "twobit_curves.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["state_index", "p00", "p01", "p10", "p11", "mu", "channel_entropy_bits", "discord_bits", "ddelta_dalpha", "ddelta_dH"])
        for i in range(n_curves):
            s = states[i]
            delta = twobit.twobit_discord(s, grid)
            h = twobit.twobit_channel_entropy(grid)
            dda = twobit.ddelta_dalpha(s, twobit.alpha_of_mu(grid))
            ddh = twobit.ddelta_dH(s, grid)
            for k, mu in enumerate(grid):
                w.writerow([i, *(format(v, ".17g") for v in s), *(format(float(v), ".17g") for v in (mu, h[k], delta[k], dda[k], ddh[k]))])
    summary = {
        "n_states": report.n_states,
        "n_mu": report.n_mu,
        "seed": args.seed,
        "violations": len(report.violations),
        "max_derivative_rel_error": report.max_derivative_error,
        "derivative_rtol": args.derivative_rtol,
        "passed": report.passed and deriv_ok,
        "first_violations": [vars(v) for v in report.violations[:20]],
    }
    (out / "twobit_report.json").write_text(json.dumps(summary, indent=2) + "\n")
    print(
        f"states={report.n_states} mu_points={report.n_mu} violations={len(report.violations)} "
        f"max_derivative_rel_error={report.max_derivative_error:.3g}"
    )
    if report.violations:
        v = report.violations[0]
        print(f"violation: state={v.state} mu={v.mu} kind={v.kind} value={v.value:.3g}", file=sys.stderr)
        return EXIT_VIOLATION
    if not deriv_ok:
        print("derivative cross-check exceeded tolerance", file=sys.stderr)
        return EXIT_VIOLATION
    print("PASS")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="discordlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    run = sub.add_parser("run", help="scatter experiment over random channels")
    run.add_argument("--m", type=int, default=6, help="message size per party (2..8)")
    run.add_argument("--prior", choices=PRIOR_KINDS, default="random")
    run.add_argument("--seed", type=int, default=42)
    run.add_argument("--a-grid", type=int, default=100, help="number of weight-interpolation values")
    run.add_argument("--wdown-per-a", type=int, default=60, help="low-entropy weight draws per interpolation value")
    run.add_argument("--states", type=int, default=100, help="states per channel")
    run.add_argument("--no-identity", action="store_true", help="omit the noiseless channel")
    run.add_argument(
        "--convention", choices=CONVENTIONS, default="prose", help="prose: channel then permutation; equation: permutation then channel"
    )
    run.add_argument(
        "--low-entropy-rule", choices=LOW_ENTROPY_RULES, default="stick", help="sampler for the low-entropy end of each weight path"
    )
    run.add_argument("--B", type=float, default=99.0, help="identity weight scale for the state family")
    run.add_argument("--out", help="output directory")
    run.add_argument("--workers", type=int, default=None, help="worker processes (default: $DISCORDLAB_THREADS or all cores)")
    run.add_argument("--no-resume", action="store_true")
    run.set_defaults(func=cmd_run)

    fit = sub.add_parser("fit", help="quadratic fit of discord against distortion")
    fit.add_argument("csv")
    fit.add_argument("--manifest", help="manifest to append to (default: manifest.json beside the CSV)")
    fit.set_defaults(func=cmd_fit)

    tb = sub.add_parser("twobit", help="two-bit monotonicity scan and derivative checks")
    tb.add_argument("--states", type=int, default=1000)
    tb.add_argument("--mu-points", type=int, default=99)
    tb.add_argument("--mu", help="explicit comma-separated mu grid")
    tb.add_argument("--seed", type=int, default=0)
    tb.add_argument("--alpha-max", type=float, default=0.95)
    tb.add_argument("--derivative-rtol", type=float, default=1e-6)
    tb.add_argument("--curves", type=int, default=10, help="states whose curves go into the CSV")
    tb.add_argument("--out", default=".")
    tb.add_argument("--inject-sign-flip", action="store_true", help=argparse.SUPPRESS)
    tb.set_defaults(func=cmd_twobit)

    plot = sub.add_parser("plot", help="render a scatter CSV as SVG")
    plot.add_argument("csv")
    plot.add_argument("svg")
    plot.add_argument("--m", type=int, help="message size for the color scale (default: from manifest)")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help, --version and usage errors
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (DiscordLabError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
