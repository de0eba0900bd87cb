"""Command-line entry point for batch and scripted use.

Every subcommand is a thin wrapper over the library: identical inputs and
seeds always produce byte-identical outputs.  Machine-readable output goes
to files or standard output only; diagnostics go to the error stream.  The
path ``-`` means the standard stream where that is unambiguous.

Exit codes: 0 success, 1 validation error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .catalog import (
    CRITERIA,
    Catalog,
    criterion_from_id,
    load_catalog,
    load_default_catalog,
)
from .decision import build_adtree, export_adtree_document, export_dot, recommend
from .errors import GridResponseError
from .evidence import (
    DEFAULT_DETECTION_THRESHOLD,
    correlate_events,
    correlation_to_obj,
    parse_events,
    serialize_events,
)
from .mcdm import DEFAULT_DELTA, DEFAULT_KAPPA, STRATEGIES, WeightVector, parse_weights
from .model import parse_attack_graph, serialize_attack_graph
from .scenario import SCENARIO_LOADERS, load_scenario
from .sensitivity import SweepConfig, export_sweep_csv, run_sweep
from .service import DEFAULT_MAX_BODY, create_app

_CRITERION_IDS = tuple(c.value for c in CRITERIA)


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _fail(exc: GridResponseError) -> None:
    click.echo(f"error ({exc.error_name}): {exc}", err=True)
    raise SystemExit(1)


def _fail_io(exc: OSError) -> None:
    click.echo(f"error (io_error): {exc}", err=True)
    raise SystemExit(1)


def _load_catalog_arg(path: str | None) -> Catalog:
    if path is None:
        return load_default_catalog()
    return load_catalog(_read_text(path))


catalog_option = click.option(
    "--catalog",
    "catalog_path",
    type=str,
    default=None,
    help="Catalog document path (defaults to the packaged catalog).",
)
strategy_option = click.option(
    "--strategy",
    type=click.Choice(STRATEGIES),
    default="ivpf-choquet",
    show_default=True,
    help="Ranking strategy.",
)
delta_option = click.option(
    "--delta",
    type=float,
    default=DEFAULT_DELTA,
    show_default=True,
    help="Fuzzification interval half-width.",
)
kappa_option = click.option(
    "--kappa",
    type=float,
    default=DEFAULT_KAPPA,
    show_default=True,
    help="Interaction intensity of the fuzzy measure.",
)


@click.group()
@click.version_option(package_name="gridresponse", prog_name="gridresponse")
def main() -> None:
    """Decision support for cyber-incident response in smart grids."""


@main.command()
@click.option("--graph", "graph_path", required=True, type=str, help="Attack-graph document path.")
@catalog_option
@click.option("--weights", "weights_path", type=str, default=None, help="Weights document path (defaults to uniform weights).")
@strategy_option
@delta_option
@kappa_option
@click.option("--out", "out_path", type=str, default="-", show_default=True, help="Where to write the DOT rendering.")
@click.option("--adtree-out", "adtree_path", type=str, default=None, help="Also write the attack-defense tree document here.")
def analyze(
    graph_path: str,
    catalog_path: str | None,
    weights_path: str | None,
    strategy: str,
    delta: float,
    kappa: float,
    out_path: str,
    adtree_path: str | None,
) -> None:
    """Rank countermeasures for a graph and write the defense tree as DOT."""
    try:
        graph = parse_attack_graph(_read_text(graph_path))
        catalog = _load_catalog_arg(catalog_path)
        weights = (
            parse_weights(_read_text(weights_path))
            if weights_path is not None
            else WeightVector.uniform()
        )
        recommendations = recommend(
            graph, catalog, weights, strategy, delta=delta, kappa=kappa
        )
        tree = build_adtree(graph, recommendations, catalog)
        _write_text(out_path, export_dot(tree))
        if adtree_path is not None:
            _write_text(adtree_path, export_adtree_document(tree))
    except GridResponseError as exc:
        _fail(exc)
    except OSError as exc:
        _fail_io(exc)
    for recommendation in recommendations:
        click.echo(
            f"{recommendation.node_id}: {recommendation.selected}", err=True
        )


@main.command()
@click.option("--graph", "graph_path", required=True, type=str, help="Attack-graph document path.")
@catalog_option
@click.option("--focus", type=click.Choice(_CRITERION_IDS), required=True, help="Criterion whose weight is swept.")
@click.option("--runs", type=int, default=1000, show_default=True, help="Number of sampled weight scenarios.")
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed.")
@strategy_option
@delta_option
@kappa_option
@click.option("--out", "out_path", type=str, default="-", show_default=True, help="Where to write the sweep CSV.")
def sensitivity(
    graph_path: str,
    catalog_path: str | None,
    focus: str,
    runs: int,
    seed: int,
    strategy: str,
    delta: float,
    kappa: float,
    out_path: str,
) -> None:
    """Sweep one criterion's weight and write the scenario table as CSV."""
    try:
        graph = parse_attack_graph(_read_text(graph_path))
        catalog = _load_catalog_arg(catalog_path)
        config = SweepConfig(
            focus=criterion_from_id(focus),
            runs=runs,
            seed=seed,
            strategy=strategy,
            delta=delta,
            kappa=kappa,
        )
        result = run_sweep(graph, catalog, config)
        _write_text(out_path, export_sweep_csv(result))
    except GridResponseError as exc:
        _fail(exc)
    except OSError as exc:
        _fail_io(exc)
    slope = "n/a" if result.slope is None else format(result.slope, ".6g")
    stability = (
        "n/a"
        if result.stability_threshold is None
        else format(result.stability_threshold, ".6g")
    )
    click.echo(f"slope: {slope}", err=True)
    click.echo(f"stability threshold: {stability}", err=True)


@main.command()
@click.option("--scenario", "scenario_name", type=click.Choice(sorted(SCENARIO_LOADERS)), default="havex", show_default=True, help="Packaged scenario to replay.")
@click.option("--seed", type=int, default=0, show_default=True, help="Random seed.")
@click.option("--noise-rate", type=float, default=0.0, show_default=True, help="Chance of one benign noise event after each step event.")
@click.option("--events-out", type=str, default="-", show_default=True, help="Where to write the line-delimited event stream.")
@click.option("--template-out", type=str, default=None, help="Also write the scenario's template attack-graph document here.")
def simulate(
    scenario_name: str,
    seed: int,
    noise_rate: float,
    events_out: str,
    template_out: str | None,
) -> None:
    """Replay a packaged scenario as an indicator event stream."""
    if events_out == "-" and template_out == "-":
        raise click.UsageError(
            "only one of --events-out and --template-out may be '-'"
        )
    try:
        scenario = load_scenario(scenario_name)
        events = scenario.emit_events(seed=seed, noise_rate=noise_rate)
        _write_text(events_out, serialize_events(events))
        if template_out is not None:
            _write_text(template_out, serialize_attack_graph(scenario.template()))
    except GridResponseError as exc:
        _fail(exc)
    except OSError as exc:
        _fail_io(exc)
    click.echo(f"emitted {len(events)} events", err=True)


@main.command()
@click.option("--events", "events_path", type=str, default="-", show_default=True, help="Line-delimited event stream path.")
@click.option("--template", "template_path", type=str, default=None, help="Template attack-graph document path.")
@click.option("--scenario", "scenario_name", type=click.Choice(sorted(SCENARIO_LOADERS)), default=None, help="Use a packaged scenario's template instead of --template.")
@click.option("--threshold", type=float, default=DEFAULT_DETECTION_THRESHOLD, show_default=True, help="Detection threshold on the correlation score.")
@click.option("--out", "out_path", type=str, default="-", show_default=True, help="Where to write the detection report.")
def detect(
    events_path: str,
    template_path: str | None,
    scenario_name: str | None,
    threshold: float,
    out_path: str,
) -> None:
    """Correlate an event stream against a template attack graph."""
    if (template_path is None) == (scenario_name is None):
        raise click.UsageError("pass exactly one of --template and --scenario")
    try:
        events = parse_events(_read_text(events_path))
        if template_path is not None:
            template = parse_attack_graph(_read_text(template_path))
        else:
            template = load_scenario(scenario_name).template()
        result = correlate_events(events, template, threshold)
        report = json.dumps(correlation_to_obj(result), indent=2) + "\n"
        _write_text(out_path, report)
    except GridResponseError as exc:
        _fail(exc)
    except OSError as exc:
        _fail_io(exc)
    verdict = "detected" if result.instantiated_graph is not None else "not detected"
    click.echo(
        f"{result.template_id}: {verdict} "
        f"(score {result.score:.4f}, coverage {result.coverage:.4f})",
        err=True,
    )


@main.group()
def catalog() -> None:
    """Catalog maintenance commands."""


@catalog.command()
@click.argument("path", type=str)
def validate(path: str) -> None:
    """Validate a catalog document; exit 1 with the violation if invalid."""
    try:
        loaded = load_catalog(_read_text(path))
    except GridResponseError as exc:
        _fail(exc)
    except OSError as exc:
        _fail_io(exc)
    click.echo(
        f"catalog ok: {len(loaded.countermeasures)} countermeasures, "
        f"{len(loaded.techniques)} techniques",
        err=True,
    )


@main.command()
@click.option("--host", type=str, default="127.0.0.1", show_default=True, help="Bind address.")
@click.option("--port", type=int, default=8080, show_default=True, help="Listen port.")
@catalog_option
@click.option("--max-body", type=int, default=DEFAULT_MAX_BODY, show_default=True, help="Maximum request body size in bytes.")
@click.option(
    "--console",
    "console_dir",
    type=click.Path(exists=True, file_okay=False),
    default=None,
    help="Serve this directory of operator-console assets at the web root.",
)
def serve(
    host: str, port: int, catalog_path: str | None, max_body: int, console_dir: str | None
) -> None:
    """Run the HTTP API server."""
    import uvicorn

    try:
        app = create_app(
            _load_catalog_arg(catalog_path), max_body=max_body, console_dir=console_dir
        )
    except GridResponseError as exc:
        _fail(exc)
    except OSError as exc:
        _fail_io(exc)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
