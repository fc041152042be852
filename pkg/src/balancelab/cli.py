"""Command-line entry point.

Subcommands: ``balance`` (descriptive diagnostics for a two-group table),
``simulate`` (Monte Carlo calibration of the balance-check procedure),
``match`` (optimal or greedy stimulus matching), ``generate`` (export one
simulated dataset) and ``serve`` (HTTP facade).

There is deliberately no "balance test" subcommand. A significance test on
a fixed stimulus set makes an inference about a population nobody sampled,
has low power exactly when sets are small, and a nonsignificant result is
not evidence of balance. The ``balance`` report is descriptive only, and
``simulate`` quantifies how often the testing habit throws away perfectly
recoverable studies.

Exit codes: 0 success, 1 runtime/data error, 2 usage or contract error.
"""

import csv
import json
import sys
from dataclasses import replace
from pathlib import Path

import click

from . import report as report_mod
from .config import load_run_config_file, parse_run_config, RunConfig
from .datagen import replicate_dataset
from .errors import BalanceLabError, ConfigError, DataError, SchemaError
from .matching import CostMatrix, ItemPool, cost_matrix, greedy_match, optimal_match
from .procedures import run_grid, run_simulation, summaries_to_csv, summary_to_json

CONTRACT_ERRORS = (ConfigError, DataError, SchemaError)


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read_csv(path: Path) -> tuple:
    """Returns (header, rows); IO and parse problems are runtime errors."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        _fail(f"cannot read {path}: {exc}", 1)
    if not rows:
        _fail(f"{path}: empty CSV, expected a header row", 1)
    header, data = rows[0], rows[1:]
    width = len(header)
    for lineno, row in enumerate(data, start=2):
        if len(row) != width:
            _fail(f"{path}: malformed CSV at row {lineno}: "
                  f"expected {width} fields, got {len(row)}", 1)
    return header, data


def _numeric_column(path, header, rows, name):
    idx = header.index(name)
    values = []
    for lineno, row in enumerate(rows, start=2):
        try:
            values.append(float(row[idx]))
        except ValueError:
            _fail(f"{path}: row {lineno}, column {name!r}: not a number: {row[idx]!r}", 1)
    return values


def _load_pool(path: Path) -> ItemPool:
    header, rows = _read_csv(path)
    if not header or header[0] != "item":
        _fail(f"{path}: pool CSV must start with an 'item' column", 2)
    covariates = {
        name: _numeric_column(path, header, rows, name) for name in header[1:]
    }
    if not covariates:
        _fail(f"{path}: pool CSV needs at least one covariate column", 2)
    return ItemPool(ids=[r[0] for r in rows], covariates=covariates)


def _parse_weights(text: str | None, names) -> dict:
    if not text:
        return {name: 1.0 for name in names}
    weights = {}
    for part in text.split(","):
        if "=" not in part:
            raise ConfigError("weights", f"expected name=value, got {part!r}")
        name, _, value = part.partition("=")
        try:
            weights[name.strip()] = float(value)
        except ValueError:
            raise ConfigError("weights", f"not a number: {value!r}") from None
    return weights


@click.group()
def main():
    """Nuisance-variable control toolkit."""


@main.command()
@click.argument("input_csv", type=click.Path(path_type=Path))
@click.option("--group-column", default="group", show_default=True,
              help="Name of the two-level grouping column.")
@click.option("--json", "json_path", type=click.Path(path_type=Path),
              help="Also write the report as JSON to this path.")
@click.option("--plots", type=click.Path(path_type=Path),
              help="Render balance figures into this directory.")
def balance(input_csv, group_column, json_path, plots):
    """Descriptive balance report for a two-group CSV table."""
    header, rows = _read_csv(input_csv)
    if group_column not in header:
        _fail(f"{input_csv}: no column named {group_column!r}", 2)
    gidx = header.index(group_column)
    group = [row[gidx] for row in rows]
    levels = sorted(set(group))
    if len(levels) != 2:
        _fail(f"{input_csv}: column {group_column!r}: expected exactly 2 levels, "
              f"got {len(levels)} ({', '.join(levels[:5])})", 2)
    columns = {
        name: _numeric_column(input_csv, header, rows, name)
        for name in header
        if name not in (group_column, "item")
    }
    if not columns:
        _fail(f"{input_csv}: no numeric columns to report on", 2)
    try:
        report = report_mod.build_balance_report(columns, group)
    except CONTRACT_ERRORS as exc:
        _fail(str(exc), 2)
    click.echo(report_mod.render_text(report), nl=False)
    if json_path:
        json_path.write_text(json.dumps(report_mod.report_dict(report), indent=2,
                                        sort_keys=True) + "\n")
    if plots:
        for path in report_mod.save_balance_figures(report, plots):
            click.echo(f"wrote {path}")


def _apply_overrides(run: RunConfig, seed, workers, grid_axis, grid_values) -> RunConfig:
    config = run.config
    if seed is not None:
        config = replace(config, seed=seed)
    if grid_axis is not None or grid_values is not None:
        if grid_axis is None or grid_values is None:
            raise ConfigError("grid_axis", "--grid-axis and --grid-values go together")
        values = tuple(float(v) for v in grid_values.split(","))
        run = replace(run, grid_axis=grid_axis, grid_values=values)
    if workers is not None:
        run = replace(run, workers=workers)
    return replace(run, config=config)


@main.command()
@click.argument("config_file", type=click.Path(path_type=Path))
@click.option("--seed", type=int, help="Override the config file's root seed.")
@click.option("--workers", type=click.IntRange(min=1), help="Worker process count.")
@click.option("--grid-axis", type=str, help="Sweep this config field.")
@click.option("--grid-values", type=str, help="Comma-separated sweep values.")
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              help="Write summary JSON here.")
@click.option("--csv", "csv_path", type=click.Path(path_type=Path),
              help="Write one CSV row per summary here.")
@click.option("--plots", type=click.Path(path_type=Path),
              help="Render rate curves into this directory (grid runs).")
def simulate(config_file, seed, workers, grid_axis, grid_values, out_path, csv_path, plots):
    """Run the Monte Carlo calibration described by a JSON config file."""
    try:
        run = load_run_config_file(config_file)
        run = _apply_overrides(run, seed, workers, grid_axis, grid_values)
    except FileNotFoundError:
        _fail(f"config file not found: {config_file}", 1)
    except ConfigError as exc:
        _fail(str(exc), 2)

    if run.grid_axis:
        summaries = run_grid(run.config, run.grid_axis, run.grid_values,
                             workers=run.workers)
    else:
        summaries = [run_simulation(run.config, workers=run.workers)]

    click.echo(summaries_to_csv(summaries).replace(",", "\t"), nl=False)
    total_time = sum(s.wall_time_s for s in summaries)
    click.echo(f"# {len(summaries)} run(s) in {total_time:.2f}s", err=True)
    if out_path:
        payload = summaries[0] if len(summaries) == 1 and not run.grid_axis else summaries
        out_path.write_text(summary_to_json(payload))
    if csv_path:
        csv_path.write_text(summaries_to_csv(summaries))
    if plots:
        if not run.grid_axis:
            _fail("--plots requires a grid run", 2)
        for path in report_mod.save_grid_figures(summaries, run.grid_axis, plots):
            click.echo(f"wrote {path}", err=True)


@main.command()
@click.argument("pool_a", type=click.Path(path_type=Path))
@click.argument("pool_b", type=click.Path(path_type=Path))
@click.option("--weights", type=str,
              help="Per-covariate weights as name=value,... (default all 1).")
@click.option("--optimal/--greedy", "use_optimal", default=True,
              help="Exact assignment vs greedy baseline.")
@click.option("--caliper", type=float, help="Greedy-only maximum pair cost.")
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              help="Write matched pairs CSV here (default stdout).")
@click.option("--json", "json_path", type=click.Path(path_type=Path),
              help="Write the post-match balance report as JSON here.")
@click.option("--plots", type=click.Path(path_type=Path),
              help="Render post-match balance figures into this directory.")
def match(pool_a, pool_b, weights, use_optimal, caliper, out_path, json_path, plots):
    """Match two stimulus pools and report post-match balance."""
    a = _load_pool(pool_a)
    b = _load_pool(pool_b)
    try:
        w = _parse_weights(weights, a.covariate_names)
        costs = cost_matrix(a, b, w)
        transposed = False
        if len(a) > len(b):
            costs = CostMatrix(values=costs.values.T, row_ids=costs.col_ids,
                               col_ids=costs.row_ids)
            transposed = True
        if use_optimal:
            if caliper is not None:
                _fail("--caliper applies to --greedy only", 2)
            matching = optimal_match(costs)
        else:
            matching = greedy_match(costs, caliper=caliper)
    except CONTRACT_ERRORS as exc:
        _fail(str(exc), 2)

    lines = ["item_a,item_b,cost"]
    for row_id, col_id, cost in matching.pairs:
        ia, ib = (col_id, row_id) if transposed else (row_id, col_id)
        lines.append(f"{ia},{ib},{cost!r}")
    pairs_csv = "\n".join(lines) + "\n"
    if out_path:
        out_path.write_text(pairs_csv)
    else:
        click.echo(pairs_csv, nl=False)
    if not matching.pairs:
        click.echo("warning: no pairs within the caliper; all items unmatched", err=True)
        return
    click.echo(f"# matched {len(matching.pairs)} pairs, "
               f"total cost {matching.total_cost:.4f}", err=True)

    # post-match balance over the matched subset only
    idx_a = {ident: i for i, ident in enumerate(a.ids)}
    idx_b = {ident: i for i, ident in enumerate(b.ids)}
    matched = [(col_id, row_id) if transposed else (row_id, col_id)
               for row_id, col_id, _ in matching.pairs]
    columns = {}
    for name in a.covariate_names:
        columns[name] = [a.covariates[name][idx_a[ia]] for ia, _ in matched] + \
                        [b.covariates[name][idx_b[ib]] for _, ib in matched]
    group = ["A"] * len(matched) + ["B"] * len(matched)
    try:
        report = report_mod.build_balance_report(columns, group)
    except DataError as exc:
        click.echo(f"# post-match balance unavailable: {exc}", err=True)
        return
    click.echo(report_mod.render_text(report), nl=False, err=True)
    if json_path:
        json_path.write_text(json.dumps(report_mod.report_dict(report), indent=2,
                                        sort_keys=True) + "\n")
    if plots:
        for path in report_mod.save_balance_figures(report, plots):
            click.echo(f"wrote {path}", err=True)


@main.command()
@click.argument("config_file", type=click.Path(path_type=Path))
@click.option("--seed", type=int, help="Override the config file's root seed.")
@click.option("--replicate", type=click.IntRange(min=0), default=0, show_default=True,
              help="Which replicate's dataset to export.")
@click.option("--out", "out_path", type=click.Path(path_type=Path),
              help="Write dataset CSV here (default stdout).")
def generate(config_file, seed, replicate, out_path):
    """Export one simulated dataset as CSV (item,group,covariate,outcome)."""
    try:
        run = load_run_config_file(config_file)
        config = replace(run.config, seed=seed) if seed is not None else run.config
    except FileNotFoundError:
        _fail(f"config file not found: {config_file}", 1)
    except ConfigError as exc:
        _fail(str(exc), 2)
    text = replicate_dataset(config, replicate).to_csv()
    if out_path:
        out_path.write_text(text)
    else:
        click.echo(text, nl=False)


@main.command()
@click.option("--bind", default="127.0.0.1:8710", show_default=True,
              help="host:port to listen on.")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
              help="Per-request simulation worker processes.")
@click.option("--replicate-cap", type=int, default=100_000, show_default=True,
              help="Maximum total replicates per request.")
@click.option("--cors", is_flag=True, help="Enable permissive CORS for local UI work.")
def serve(bind, workers, replicate_cap, cors):
    """Start the HTTP service backing the interactive UI."""
    import uvicorn

    from .service import create_app

    host, _, port = bind.rpartition(":")
    if not host or not port.isdigit() or not (0 < int(port) < 65536):
        _fail(f"invalid bind address {bind!r}, expected host:port", 2)
    app = create_app(workers=workers, replicate_cap=replicate_cap, cors=cors)
    uvicorn.run(app, host=host, port=int(port))


def entrypoint():  # pragma: no cover
    try:
        main(standalone_mode=True)
    except BalanceLabError as exc:
        _fail(str(exc), 2)


if __name__ == "__main__":  # pragma: no cover
    entrypoint()
