"""Command-line surface: scans, statistics, fits, audits, and simulations.

Commands communicate through record-cache JSON files (see store module), so
sieve work is never repeated by analysis commands.  Exit codes: 0 success,
1 usage or I/O error, 2 bound audit found exceptions.
"""

from __future__ import annotations

import json
import math
import sys
from pathlib import Path

import click

from . import __version__
from .arith import totient
from .bounds import (
    PHI_LOG2Q,
    Q_LOG2Q,
    audit_bounds,
    report_csv_rows,
    report_to_dict,
)
from .errors import ApgapsError, IncompleteEnsembleError, OutOfScanRangeError
from .fit import (
    MLE,
    MOMENTS,
    THREE_TERM,
    TWO_TERM,
    fit_gumbel,
    fit_lognormal,
    fit_power_law,
    fit_quadratic,
    fit_tau_model,
    gumbel_pdf,
    lognormal_pdf,
)
from .iid import DISTRIBUTIONS, EXPONENTIAL, IidRunConfig, expected_iid_records, simulate_record_counts
from .records import (
    build_ensemble,
    ensemble_median,
    mean_record_count_increment,
    scan_modulus,
)
from .sieve import DEFAULT_SEGMENT_SIZE
from .stats import AUTO, QUARTILE_CONVENTION, SKEWNESS_CONVENTION, histogram, skewness, summarize
from .store import (
    cache_from_record_sets,
    export_csv,
    load_cache,
    record_sets_from_cache,
    save_cache,
)

JSON = "json"
CSV = "csv"
TSV = "tsv"  # gnuplot-friendly: '#' headers, tabs, 9 significant digits


class IntExpr(click.ParamType):
    """Integer accepting scientific notation (1e9, 4e9) and plain digits."""

    name = "integer"

    def convert(self, value, param, ctx):
        if isinstance(value, int):
            return value
        try:
            return int(value)
        except ValueError:
            pass
        try:
            as_float = float(value)
        except ValueError:
            self.fail(f"{value!r} is not an integer", param, ctx)
        if not as_float.is_integer():
            self.fail(f"{value!r} is not an integer", param, ctx)
        return int(as_float)


INT_EXPR = IntExpr()


def _parse_n_range(text: str) -> tuple[int, int]:
    """'10' -> (10, 10); '1..20' -> (1, 20)."""
    if ".." in text:
        lo_text, hi_text = text.split("..", 1)
        lo, hi = int(lo_text), int(hi_text)
    else:
        lo = hi = int(text)
    if lo < 1 or hi < lo:
        raise click.UsageError(f"bad record range {text!r}")
    return lo, hi


def _fmt(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _json_text(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _tsv_text(comments: list[str], header: list[str], rows: list[list]) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append("# " + "\t".join(header))
    lines.extend("\t".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _csv_text(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out is None:
        click.echo(text, nl=False)
    else:
        Path(out).write_text(text)


def _load_sets(cache_path: str):
    cache = load_cache(cache_path)
    return cache, record_sets_from_cache(cache)


def _require_complete(ensemble, allow_incomplete: bool, q: int):
    if not ensemble.complete and not allow_incomplete:
        raise IncompleteEnsembleError(
            f"ensemble for n={ensemble.n} covers {len(ensemble.values)} of "
            f"{totient(q)} residues; rescan deeper or pass --allow-incomplete"
        )


format_option = click.option(
    "--format", "fmt", type=click.Choice([JSON, CSV, TSV]), default=JSON,
    show_default=True, help="Output format.",
)
out_option = click.option(
    "--out", "-o", "out", type=click.Path(dir_okay=False, writable=True),
    default=None, help="Output file (default: stdout).",
)


@click.group(name="apgaps")
@click.version_option(version=__version__)
def cli():
    """Record gaps between primes in arithmetic progressions."""


@cli.command()
@click.option("--q", "q", type=INT_EXPR, required=True, help="Modulus of the progression.")
@click.option("--x-max", "x_max", type=INT_EXPR, required=True, help="Scan depth.")
@click.option("--r", "residues", type=INT_EXPR, multiple=True,
              help="Residue to scan (repeatable; default: all admissible).")
@click.option("--segment-size", type=INT_EXPR, default=DEFAULT_SEGMENT_SIZE,
              show_default=True, help="Sieve segment length in progression indices.")
@click.option("--threads", type=int, default=None,
              help="Worker processes (default: all cores). Results do not depend on it.")
@click.option("--out", "-o", "out", type=click.Path(dir_okay=False, writable=True),
              required=True, help="Cache file to write.")
def scan(q, x_max, residues, segment_size, threads, out):
    """Sieve record gaps and write a record cache."""

    def progress(record_set):
        click.echo(
            f"r={record_set.prog.r}: {len(record_set.events)} records, "
            f"{record_set.primes_seen} primes",
            err=True,
        )

    sets = scan_modulus(
        q, x_max,
        residues=list(residues) if residues else None,
        segment_size=segment_size,
        workers=threads,
        progress=progress,
    )
    cache = cache_from_record_sets(sets)
    save_cache(cache, out)
    click.echo(f"wrote {out}: q={q}, x_max={x_max}, residues={len(cache.residues)}", err=True)


@cli.command()
@click.option("--cache", "cache_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Record cache to analyze.")
@click.option("--n", "n_range", default="1..14", show_default=True,
              help="Record index or range (e.g. 10 or 1..20).")
@click.option("--allow-incomplete", is_flag=True,
              help="Summarize observed values even when residues are missing.")
@format_option
@out_option
def stats(cache_path, n_range, allow_incomplete, fmt, out):
    """Ensemble summary statistics, or a median table for a range of n."""
    lo, hi = _parse_n_range(n_range)
    cache, sets = _load_sets(cache_path)
    conventions = {"quartiles": QUARTILE_CONVENTION, "skewness": SKEWNESS_CONVENTION}
    if lo == hi:
        ensemble = build_ensemble(sets, lo)
        _require_complete(ensemble, allow_incomplete, cache.q)
        summary = summarize(ensemble.gaps)
        payload = {
            "q": cache.q,
            "n": lo,
            "x_max": cache.x_max,
            "complete": ensemble.complete,
            "conventions": conventions,
            "summary": {
                "count": summary.count,
                "min": summary.min,
                "q1": summary.q1,
                "median": summary.median,
                "q3": summary.q3,
                "max": summary.max,
                "mean": summary.mean,
                "stddev": summary.stddev,
                "skewness": summary.skewness,
                "skewness_degenerate": summary.skewness_degenerate,
            },
        }
        if fmt == JSON:
            _emit(_json_text(payload), out)
        else:
            header = ["n", "count", "complete", "min", "q1", "median", "q3", "max",
                      "mean", "stddev", "skewness"]
            row = [lo, summary.count, ensemble.complete, summary.min, summary.q1,
                   summary.median, summary.q3, summary.max, summary.mean,
                   summary.stddev, summary.skewness]
            if fmt == CSV:
                _emit(_csv_text(header, [row]), out)
            else:
                comments = [f"q: {cache.q}", f"x_max: {cache.x_max}"]
                _emit(_tsv_text(comments, header, [row]), out)
        return
    rows = []
    for n in range(lo, hi + 1):
        ensemble = build_ensemble(sets, n)
        try:
            median = ensemble_median(sets, n)
        except IncompleteEnsembleError:
            # Censored median undefined at this depth: too few residues
            # have an nth record.  Rescan deeper to resolve the row.
            median = None
        rows.append({
            "n": n,
            "observed": len(ensemble.values),
            "complete": ensemble.complete,
            "median": median,
        })
    if fmt == JSON:
        payload = {
            "q": cache.q,
            "x_max": cache.x_max,
            "conventions": conventions,
            "rows": rows,
        }
        _emit(_json_text(payload), out)
        return
    header = ["n", "observed", "complete", "median"]
    table = [[r["n"], r["observed"], r["complete"], r["median"]] for r in rows]
    if fmt == CSV:
        _emit(_csv_text(header, table), out)
    else:
        comments = [f"q: {cache.q}", f"x_max: {cache.x_max}",
                    "median over all admissible residues; missing records censored high"]
        _emit(_tsv_text(comments, header, table), out)


MODELS = ("quad-median", "quad-max", "gumbel", "lognormal", "skew-power", "tau")


@cli.command()
@click.option("--cache", "cache_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Record cache to fit against.")
@click.option("--model", type=click.Choice(MODELS), required=True)
@click.option("--n", "n_range", default=None,
              help="Record index (distribution fits) or range (growth/skew fits).")
@click.option("--method", type=click.Choice([MOMENTS, MLE]), default=MOMENTS,
              show_default=True, help="Gumbel fitting method.")
@click.option("--bins", default=AUTO, show_default=True,
              help="Histogram bins for distribution fits (integer or auto).")
@click.option("--x-grid", "x_grid", default=None,
              help="Geometric grid START:STOP[:FACTOR] for the tau model.")
@click.option("--curve-out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="TSV destination for histogram + fitted density (distribution fits).")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Render a figure of the fit to this file.")
@out_option
def fit(cache_path, model, n_range, method, bins, x_grid, curve_out, plot_path, out):
    """Fit growth, distribution, skewness, or record-rate models."""
    cache, sets = _load_sets(cache_path)
    if model in ("quad-median", "quad-max"):
        lo, hi = _parse_n_range(n_range or "1..14")
        points = []
        for n in range(lo, hi + 1):
            if model == "quad-median":
                points.append((n, ensemble_median(sets, n)))
            else:
                ensemble = build_ensemble(sets, n)
                _require_complete(ensemble, False, cache.q)
                points.append((n, float(max(ensemble.gaps))))
        form = TWO_TERM if model == "quad-median" else THREE_TERM
        quad = fit_quadratic(points, form)
        payload = {
            "model": model,
            "q": cache.q,
            "form": quad.form,
            "a": quad.a,
            "b": quad.b,
            "c": quad.c,
            "rms_residual": quad.rms_residual,
            "points": [{"n": n, "y": y} for n, y in points],
        }
        _emit(_json_text(payload), out)
        if plot_path:
            from .plotting import plot_quad_fit

            plot_quad_fit(points, quad, f"q={cache.q} {model}", plot_path)
        return
    if model in ("gumbel", "lognormal"):
        if n_range is None:
            raise click.UsageError(f"--n is required for the {model} model")
        lo, hi = _parse_n_range(n_range)
        if lo != hi:
            raise click.UsageError(f"the {model} model takes a single n, got {n_range!r}")
        ensemble = build_ensemble(sets, lo)
        _require_complete(ensemble, False, cache.q)
        values = [float(g) for g in ensemble.gaps]
        if model == "gumbel":
            params = fit_gumbel(values, method)
            payload = {
                "model": "gumbel",
                "q": cache.q,
                "n": lo,
                "count": len(values),
                "method": params.method,
                "mu": params.mu,
                "beta": params.beta,
            }
            density = lambda grid: gumbel_pdf(grid, params)  # noqa: E731
        else:
            params = fit_lognormal(values)
            payload = {
                "model": "lognormal",
                "q": cache.q,
                "n": lo,
                "count": len(values),
                "log_mu": params.log_mu,
                "log_sigma": params.log_sigma,
                "model_skewness": params.model_skewness(),
            }
            density = lambda grid: lognormal_pdf(grid, params)  # noqa: E731
        _emit(_json_text(payload), out)
        bin_count = bins if bins == AUTO else int(bins)
        hist = histogram(values, bin_count)
        centers = hist.bin_centers()
        rows = [
            [c, d, float(density(c))]
            for c, d in zip(centers, hist.densities())
        ]
        comments = [f"q: {cache.q}", f"n: {lo}", f"model: {model}"]
        comments += [f"{k}: {_fmt(v)}" for k, v in payload.items()
                     if k in ("method", "mu", "beta", "log_mu", "log_sigma")]
        curve_text = _tsv_text(comments, ["bin_center", "empirical_density", "model_density"], rows)
        _emit(curve_text, curve_out)
        if plot_path:
            from .plotting import plot_distribution_fit

            plot_distribution_fit(hist, params, f"q={cache.q} n={lo} {model}", plot_path)
        return
    if model == "skew-power":
        lo, hi = _parse_n_range(n_range or "1..14")
        points = []
        for n in range(lo, hi + 1):
            ensemble = build_ensemble(sets, n)
            _require_complete(ensemble, False, cache.q)
            points.append((n, skewness([float(g) for g in ensemble.gaps])))
        power = fit_power_law(points)
        payload = {
            "model": "skew-power",
            "q": cache.q,
            "c": power.c,
            "alpha": power.alpha,
            "rms_log_residual": power.rms_log_residual,
            "points": [{"n": n, "s": s} for n, s in points],
        }
        _emit(_json_text(payload), out)
        if plot_path:
            from .plotting import plot_power_law

            plot_power_law(points, power, f"q={cache.q} skewness decay", plot_path)
        return
    # model == "tau"
    payload, points, tau_fit = _tau_payload(cache, sets, x_grid)
    _emit(_json_text(payload), out)
    if plot_path:
        from .plotting import plot_tau

        plot_tau(points, tau_fit, f"q={cache.q} record rate", plot_path)


def _parse_grid(spec: str, x_max: int) -> list[int]:
    parts = spec.split(":")
    if len(parts) not in (2, 3):
        raise click.UsageError(f"bad grid spec {spec!r}, want START:STOP[:FACTOR]")
    try:
        start = float(parts[0])
        stop = float(parts[1])
        factor = float(parts[2]) if len(parts) == 3 else math.e
    except ValueError:
        raise click.UsageError(f"bad grid spec {spec!r}") from None
    if start < 1 or stop < start or factor <= 1.0:
        raise click.UsageError(f"bad grid spec {spec!r}")
    xs: list[int] = []
    x = start
    while x <= stop * (1 + 1e-12):
        xi = int(round(x))
        if not xs or xi > xs[-1]:
            xs.append(xi)
        x *= factor
    top = math.floor(math.e * xs[-1])
    if top > x_max:
        raise OutOfScanRangeError(
            f"grid needs records to floor(e*{xs[-1]}) = {top}, cache holds x_max={x_max}"
        )
    return xs


def _tau_payload(cache, sets, x_grid):
    default_stop = math.floor(cache.x_max / math.e)
    spec = x_grid or f"1000:{default_stop}"
    xs = _parse_grid(spec, cache.x_max)
    points = [(x, mean_record_count_increment(sets, x)) for x in xs]
    tau_fit = fit_tau_model(points)
    payload = {
        "model": "tau",
        "q": cache.q,
        "x_max": cache.x_max,
        "kappa": tau_fit.kappa,
        "delta": tau_fit.delta,
        "points_used": tau_fit.points_used,
        "points": [{"x": x, "tau_hat": t} for x, t in points],
    }
    return payload, points, tau_fit


@cli.command()
@click.option("--cache", "cache_path", type=click.Path(exists=True, dir_okay=False),
              required=True, help="Record cache (must cover all residues of q).")
@click.option("--x-grid", "x_grid", default=None,
              help="Geometric grid START:STOP[:FACTOR]; default 1000:floor(x_max/e):e.")
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Render the record-rate figure to this file.")
@format_option
@out_option
def tau(cache_path, x_grid, plot_path, fmt, out):
    """Mean record-count increment per e-fold and the fitted rate model."""
    cache, sets = _load_sets(cache_path)
    payload, points, tau_fit = _tau_payload(cache, sets, x_grid)
    if fmt == JSON:
        _emit(_json_text(payload), out)
    else:
        header = ["x", "tau_hat"]
        rows = [[x, t] for x, t in points]
        if fmt == CSV:
            _emit(_csv_text(header, rows), out)
        else:
            comments = [
                f"q: {cache.q}",
                f"x_max: {cache.x_max}",
                f"kappa: {_fmt(tau_fit.kappa)}",
                f"delta: {_fmt(tau_fit.delta)}",
                f"points_used: {tau_fit.points_used}",
            ]
            _emit(_tsv_text(comments, header, rows), out)
    if plot_path:
        from .plotting import plot_tau

        plot_tau(points, tau_fit, f"q={cache.q} record rate", plot_path)


@cli.command()
@click.option("--cache-dir", type=click.Path(exists=True, file_okay=False), required=True,
              help="Directory of record caches (*.json).")
@click.option("--variant", type=click.Choice([Q_LOG2Q, PHI_LOG2Q]), default=Q_LOG2Q,
              show_default=True)
@click.option("--n-max", type=INT_EXPR, default=10, show_default=True)
@click.option("--q-min", type=INT_EXPR, default=1, show_default=True)
@click.option("--q-max", type=INT_EXPR, default=None, help="Audit only caches with q <= this.")
@format_option
@out_option
def audit(cache_dir, variant, n_max, q_min, q_max, fmt, out):
    """Audit record gaps against a conjectured bound; exit 2 on exceptions.

    When a directory holds several scans of one progression, the deepest is
    audited.
    """
    paths = sorted(Path(cache_dir).glob("*.json"))
    deepest = {}
    for path in paths:
        cache = load_cache(path)
        if cache.q < q_min or (q_max is not None and cache.q > q_max):
            continue
        for record_set in record_sets_from_cache(cache):
            key = (cache.q, record_set.prog.r)
            kept = deepest.get(key)
            if kept is None or record_set.x_max > kept.x_max:
                deepest[key] = record_set
    if not deepest:
        raise click.UsageError(f"no caches in the selected q range under {cache_dir}")
    report = audit_bounds(deepest.values(), n_max, variant)
    if fmt == JSON:
        _emit(_json_text(report_to_dict(report)), out)
    else:
        rows = report_csv_rows(report)
        if fmt == CSV:
            _emit(_csv_text(rows[0], rows[1:]), out)
        else:
            comments = [
                f"variant: {report.variant}",
                f"q_range: {report.q_range[0]}..{report.q_range[1]}",
                f"n_max: {report.n_max}",
                f"x_max: {report.x_max}",
                f"checked: {report.checked}",
            ]
            _emit(_tsv_text(comments, rows[0], rows[1:]), out)
    click.echo(
        f"checked {report.checked} records, {len(report.exceptions)} exception(s)",
        err=True,
    )
    if report.exceptions:
        sys.exit(2)


@cli.command()
@click.option("--n", "sequence_length", type=INT_EXPR, required=True,
              help="Sequence length N per trial.")
@click.option("--trials", type=INT_EXPR, default=10000, show_default=True)
@click.option("--distribution", type=click.Choice(list(DISTRIBUTIONS)),
              default=EXPONENTIAL, show_default=True)
@click.option("--seed", type=INT_EXPR, default=0, show_default=True)
@click.option("--plot", "plot_path", type=click.Path(dir_okay=False, writable=True),
              default=None, help="Render the record-count histogram to this file.")
@out_option
def iid(sequence_length, trials, distribution, seed, plot_path, out):
    """Record counts in i.i.d. sequences versus the harmonic baseline."""
    cfg = IidRunConfig(
        sequence_length=sequence_length,
        trials=trials,
        distribution=distribution,
        seed=seed,
    )
    result = simulate_record_counts(cfg)
    expected = expected_iid_records(sequence_length)
    payload = {
        "sequence_length": sequence_length,
        "trials": trials,
        "distribution": distribution,
        "seed": seed,
        "mean_records": result.mean_records,
        "stddev_records": result.stddev_records,
        "expected_records": expected,
        "histogram": {
            "bin_edges": list(result.histogram.bin_edges),
            "counts": list(result.histogram.counts),
            "total": result.histogram.total,
        },
    }
    _emit(_json_text(payload), out)
    if plot_path:
        from .plotting import plot_iid_histogram

        plot_iid_histogram(
            result.histogram, expected,
            f"records in {trials} x N={sequence_length} i.i.d. trials", plot_path,
        )


@cli.command()
@click.option("--cache", "cache_path", type=click.Path(exists=True, dir_okay=False),
              required=True)
@out_option
def export(cache_path, out):
    """Export a record cache as CSV (columns q,r,n,gap,start,end)."""
    cache = load_cache(cache_path)
    if out is None:
        export_csv(cache, sys.stdout)
    else:
        with open(out, "w") as handle:
            export_csv(cache, handle)


def entry() -> None:
    """Console entry point enforcing the exit-status contract."""
    try:
        cli.main(standalone_mode=False)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(1)
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        sys.exit(1)
    except (ApgapsError, ValueError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    entry()
