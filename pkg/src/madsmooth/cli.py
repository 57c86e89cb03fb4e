"""Command-line interface: fit, modes, compare, simulate.

Exit codes: 0 success; 1 input or configuration error; 2 when no link
yields a feasible model.  Artifacts are written atomically; numeric
output is full double precision.
"""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import MadsmoothError
from .estimator import find_modes, make_grid, pointwise_band
from .kernel import bandwidth_nrd0, kde_cdf, kde_pdf
from .links import LINK_NAMES, get_link
from .sample import Sample, load_sample, response_cdf
from .selection import search
from .simulate import STUDIES, run_study, sample_mixture
from . import estimator, output

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_MODEL = 2

AUDIT_HEADER = ("link", "basis", "dimension", "errR_response", "errR_link",
                "feasible", "converged", "selected")
GRID_HEADER = ("x", "cdf", "pdf", "lower", "upper")
REPORT_HEADER = ("method", "link", "basis_dim", "errR", "sup_cdf_error",
                 "integrated_abs_pdf_error", "band_coverage", "failure")


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    column: str = "0"
    links: tuple = LINK_NAMES
    basis: str = "poly"
    dim_min: Optional[int] = None
    dim_max: Optional[int] = None
    alpha_family: float = 0.05
    grid_size: int = 1001
    out_format: str = "csv"
    output_prefix: Optional[str] = None
    seed: int = 0
    study: Optional[str] = None
    n: Optional[int] = None
    cdf_estimator: str = "auto"
    isotonize_response: bool = False
    baseline: str = "none"


def _column_arg(value: str):
    return int(value) if value.lstrip("-").isdigit() else value


def _dim_range(config: RunConfig):
    if config.dim_min is None and config.dim_max is None:
        return None
    from .basis import POLY_DIM_RANGE, SPLINE_DIM_RANGE
    lo_default, hi_default = POLY_DIM_RANGE if config.basis == "poly" else SPLINE_DIM_RANGE
    lo = config.dim_min if config.dim_min is not None else lo_default
    hi = config.dim_max if config.dim_max is not None else hi_default
    return range(lo, hi + 1)


def _select_all_links(sample: Sample, config: RunConfig):
    """Search every requested link; return (audit rows, best model)."""
    response = response_cdf(sample, config.cdf_estimator)
    rows = []
    best = None
    for name in config.links:
        outcome = search(sample, get_link(name), config.basis,
                         dim_range=_dim_range(config), response=response,
                         isotonize_response=config.isotonize_response)
        chosen = outcome.model.basis.dimension if outcome.model else None
        for c in outcome.candidates:
            rows.append([name, config.basis, c.dimension,
                         None if np.isnan(c.err_response) else c.err_response,
                         None if np.isnan(c.err_link) else c.err_link,
                         c.feasible, c.converged, c.dimension == chosen])
        if outcome.model is not None:
            if best is None or outcome.model.errR < best.errR - 1e-12:
                best = outcome.model
    return rows, best


def _print_audit(rows, stream=sys.stdout):
    widths = [max(len(str(h)), 14) for h in AUDIT_HEADER]
    print(" ".join(h.ljust(w) for h, w in zip(AUDIT_HEADER, widths)), file=stream)
    for row in rows:
        print(" ".join(output.format_value(v).ljust(w) for v, w in zip(row, widths)),
              file=stream)


def _grid_artifact(sample: Sample, model, config: RunConfig, prefix: str,
                   write_grid: bool = True):
    grid = make_grid(sample, config.grid_size)
    band = pointwise_band(model, grid, config.alpha_family)
    pdf = estimator.pdf_eval(model, grid.points)
    header = list(GRID_HEADER)
    columns = [grid.points, band.cdf, pdf, band.lower, band.upper]
    kernel_cdf = kernel_pdf = None
    if config.baseline == "kernel":
        h = bandwidth_nrd0(sample)
        kernel_cdf = kde_cdf(sample, h, grid.points)
        kernel_pdf = kde_pdf(sample, h, grid.points)
        header += ["kernel_cdf", "kernel_pdf"]
        columns += [kernel_cdf, kernel_pdf]

    report = find_modes(model, grid)
    modes_obj = {
        "global": report.global_mode,
        "locals": report.local_modes,
        "densities": report.density_at_modes,
        "flagged_monotone": report.flagged_monotone,
    }
    if not write_grid:
        return None, modes_obj

    if config.out_format == "svg":
        svg = output.render_svg(
            grid.points, band.cdf, pdf, band.lower, band.upper,
            modes=[report.global_mode] + list(report.local_modes),
            kernel_cdf=kernel_cdf, kernel_pdf=kernel_pdf,
            title=f"madsmooth {model.link.kind}/{model.basis.kind} dim={model.basis.dimension}")
        output.atomic_write(f"{prefix}_grid.svg", svg)
        grid_path = f"{prefix}_grid.svg"
    elif config.out_format == "json":
        obj = {name: col for name, col in zip(header, columns)}
        obj["alpha_per_test"] = band.alpha_per_test
        output.write_json(f"{prefix}_grid.json", obj)
        grid_path = f"{prefix}_grid.json"
    else:
        rows = list(zip(*[np.asarray(c) for c in columns]))
        output.write_csv(f"{prefix}_grid.csv", header, rows)
        grid_path = f"{prefix}_grid.csv"
    return grid_path, modes_obj


def cmd_fit(config: RunConfig, modes_only: bool = False) -> int:
    try:
        sample = load_sample(config.input, _column_arg(config.column))
        audit_rows, best = _select_all_links(sample, config)
    except OSError as exc:
        print(f"error: cannot read {config.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MadsmoothError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    prefix = config.output_prefix or os.path.splitext(config.input)[0]
    _print_audit(audit_rows)
    if best is None:
        print("error: no feasible model for any requested link; "
              "try another link or basis", file=sys.stderr)
        return EXIT_NO_MODEL

    print(f"selected: link={best.link.kind} basis={best.basis.kind} "
          f"dimension={best.basis.dimension} errR={best.errR!r}")
    grid_path, modes_obj = _grid_artifact(sample, best, config, prefix,
                                          write_grid=not modes_only)
    output.write_json(f"{prefix}_modes.json", modes_obj)
    written = [f"{prefix}_modes.json"]
    if not modes_only:
        output.write_csv(f"{prefix}_audit.csv", AUDIT_HEADER, audit_rows)
        written = [f"{prefix}_audit.csv", grid_path] + written
    print("wrote: " + " ".join(written))
    return EXIT_OK


def cmd_modes(config: RunConfig) -> int:
    return cmd_fit(config, modes_only=True)


def _report_rows(report):
    rows = []
    for r in report.rows:
        rows.append([r.method, r.link, r.basis_dim, r.errR, r.sup_cdf_error,
                     r.integrated_abs_pdf_error, r.band_coverage, r.failure])
    return rows


def cmd_compare(config: RunConfig) -> int:
    try:
        if config.study is not None:
            report = run_study(config.study, config.n, config.seed,
                               links=config.links, bases=(config.basis,),
                               alpha_family=config.alpha_family)
            prefix = config.output_prefix or config.study
        else:
            return _compare_input_file(config)
    except MadsmoothError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    rows = _report_rows(report)
    if config.out_format == "json":
        obj = {"study": report.study, "n": report.n, "seed": report.seed,
               "alpha_family": report.alpha_family,
               "rows": [dict(zip(REPORT_HEADER, row)) for row in rows]}
        path = f"{prefix}_report.json"
        output.write_json(path, obj)
    else:
        path = f"{prefix}_report.csv"
        output.write_csv(path, REPORT_HEADER, rows)
    for row in rows:
        print(" ".join(output.format_value(v) for v in row))
    print(f"wrote: {path}")
    return EXIT_OK


def _compare_input_file(config: RunConfig) -> int:
    """Paired errR comparison on real data (no ground truth available)."""
    try:
        sample = load_sample(config.input, _column_arg(config.column))
    except OSError as exc:
        print(f"error: cannot read {config.input}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rows = []
    for name in config.links:
        outcome = search(sample, get_link(name), config.basis,
                         dim_range=_dim_range(config))
        if outcome.model is None:
            rows.append(["beta-" + config.basis, name, None, None, None, None,
                         None, "NoFeasibleModel"])
        else:
            rows.append(["beta-" + config.basis, name, outcome.model.basis.dimension,
                         outcome.model.errR, None, None, None, None])
    bandwidth_nrd0(sample)  # validates spread; kernel has no errR to report
    rows.append(["kernel", None, None, None, None, None, None, None])
    prefix = config.output_prefix or os.path.splitext(config.input)[0]
    path = f"{prefix}_report.{'json' if config.out_format == 'json' else 'csv'}"
    if config.out_format == "json":
        output.write_json(path, {"input": config.input,
                                 "rows": [dict(zip(REPORT_HEADER, r)) for r in rows]})
    else:
        output.write_csv(path, REPORT_HEADER, rows)
    for row in rows:
        print(" ".join(output.format_value(v) for v in row))
    print(f"wrote: {path}")
    return EXIT_OK


def cmd_simulate(config: RunConfig) -> int:
    try:
        spec, default_n = STUDIES[config.study]
        n = config.n if config.n is not None else default_n
        sample = sample_mixture(spec, n, config.seed)
    except (KeyError, MadsmoothError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    path = config.output_prefix or f"{config.study}_sample.csv"
    if not path.endswith(".csv"):
        path += "_sample.csv"
    output.write_csv(path, ["x"], [[v] for v in sample.values])
    print(f"wrote: {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="madsmooth",
        description="Smooth monotone CDF/PDF estimation from a univariate sample")
    sub = parser.add_subparsers(dest="command", required=True)

    def common_fit_flags(p):
        p.add_argument("--input", required=True, help="CSV file")
        p.add_argument("--column", default="0", help="column name or 0-based index")
        p.add_argument("--link", default="all",
                       choices=list(LINK_NAMES) + ["all"])
        p.add_argument("--basis", default="poly", choices=["poly", "spline"])
        p.add_argument("--dim-min", type=int, default=None)
        p.add_argument("--dim-max", type=int, default=None)
        p.add_argument("--alpha", type=float, default=0.05,
                       help="family-wise band level")
        p.add_argument("--grid", type=int, default=1001)
        p.add_argument("--format", default="csv", choices=["csv", "json", "svg"])
        p.add_argument("--output-prefix", default=None)
        p.add_argument("--cdf-estimator", default="auto",
                       choices=["auto", "fbc", "ties"])
        p.add_argument("--isotonize-response", action="store_true",
                       help="isotonize the raw CDF estimate before fitting")
        p.add_argument("--baseline", default="none", choices=["none", "kernel"],
                       help="add kernel columns to the grid artifact")

    p_fit = sub.add_parser("fit", help="fit, write audit/grid/modes artifacts")
    common_fit_flags(p_fit)

    p_modes = sub.add_parser("modes", help="fit and report only the modes")
    common_fit_flags(p_modes)

    p_cmp = sub.add_parser("compare", help="paired comparison incl. kernel baseline")
    p_cmp.add_argument("--study", default=None, choices=sorted(STUDIES))
    p_cmp.add_argument("--input", default=None, help="CSV file (alternative to --study)")
    p_cmp.add_argument("--column", default="0")
    p_cmp.add_argument("--n", type=int, default=None)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--link", default="all", choices=list(LINK_NAMES) + ["all"])
    p_cmp.add_argument("--basis", default="poly", choices=["poly", "spline"])
    p_cmp.add_argument("--alpha", type=float, default=0.05)
    p_cmp.add_argument("--format", default="csv", choices=["csv", "json"])
    p_cmp.add_argument("--output-prefix", default=None)

    p_sim = sub.add_parser("simulate", help="draw a seeded sample, write CSV")
    p_sim.add_argument("--study", required=True, choices=sorted(STUDIES))
    p_sim.add_argument("--n", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--output", dest="output_prefix", default=None)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    links = LINK_NAMES if getattr(args, "link", "all") == "all" else (args.link,)
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None),
        column=getattr(args, "column", "0"),
        links=tuple(links),
        basis=getattr(args, "basis", "poly"),
        dim_min=getattr(args, "dim_min", None),
        dim_max=getattr(args, "dim_max", None),
        alpha_family=getattr(args, "alpha", 0.05),
        grid_size=getattr(args, "grid", 1001),
        out_format=getattr(args, "format", "csv"),
        output_prefix=getattr(args, "output_prefix", None),
        seed=getattr(args, "seed", 0),
        study=getattr(args, "study", None),
        n=getattr(args, "n", None),
        cdf_estimator=getattr(args, "cdf_estimator", "auto"),
        isotonize_response=getattr(args, "isotonize_response", False),
        baseline=getattr(args, "baseline", "none"),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = config_from_args(args)
    if config.command == "fit":
        return cmd_fit(config)
    if config.command == "modes":
        return cmd_modes(config)
    if config.command == "compare":
        if config.study is None and config.input is None:
            print("error: compare needs --study or --input", file=sys.stderr)
            return EXIT_INPUT
        return cmd_compare(config)
    if config.command == "simulate":
        return cmd_simulate(config)
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
