"""
nested-ensembles command line

Runs the sampling and analysis pipelines on graph, plan and ensemble files.

Usage:
    nested-ensembles grid --rows 6 --cols 6 --election TOY --out grid6x6.json
    nested-ensembles enumerate --graph grid6x6.json --districts 3 --size 12
    nested-ensembles run-swap --graph house.json --seed-plan rows.csv --steps 10000 --rng 7 --out run.jsonl
    nested-ensembles diagnose autocorr --ensemble run.jsonl --stat seats_a --max-lag 100
    nested-ensembles --config runs.yaml run-recom
    nested-ensembles --help

Every subcommand prints a human-readable summary, or JSON with --json.
Failures print "❌ Error: ..." (or {"error", "category"} with --json) and exit 1.
"""

import json
import logging
import sys
from collections import Counter
from collections.abc import Iterable, Iterator
from contextlib import contextmanager
from pathlib import Path
from typing import Any, NoReturn

import click
import pandas as pd
from tqdm import tqdm

from . import __version__
from .bursts import BurstConfig, run_short_bursts
from .config import CONFIG_ENV, load_config
from .diagnostics import (
    DEFAULT_FRACTIONS,
    autocorrelation_curve,
    compare_ensembles,
    partial_ensemble_rank_stats,
    seat_histogram,
    seat_range,
    statistic_series,
)
from .elections import Election, Party, random_voter_election, statewide_share
from .ensemble import EnsembleRecord, Observer, cut_edge_observer, election_observer
from .enumeration import (
    NESTING_LIMIT,
    PARTITION_LIMIT,
    count_balanced_partitions,
    iter_balanced_partitions,
    swap_reachability,
)
from .errors import ConfigError, DegeneratePopulation, InvalidConfig, NestingError, UnknownElection
from .graph import (
    DualGraph,
    NestingSpec,
    is_contiguous_plan,
    is_k_nested,
    population_deviation,
    quotient_graph,
    rook_grid,
)
from .io import (
    RunManifest,
    load_graph,
    load_plan,
    plan_table,
    read_ensemble,
    save_graph,
    save_plan,
    write_ensemble,
    write_table,
)
from .recom import RecomConfig, run_recom
from .seeds import DEFAULT_MAX_RESTARTS, random_nested_seed, random_recom_seed
from .swap import DEFAULT_MAX_REJECTIONS, SwapConfig, run_swap

log = logging.getLogger(__name__)

RULE = "=" * 80

json_option = click.option(
    "--json",
    "output_json",
    is_flag=True,
    help="Output as JSON instead of human-readable format",
)
quiet_option = click.option("--quiet", "-q", is_flag=True, help="Hide the progress bar")
rng_option = click.option("--rng", default=0, show_default=True, help="Random seed (64-bit integer)")
graph_option = click.option(
    "--graph",
    "graph_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Dual graph JSON file",
)


def fail(error: Exception, output_json: bool) -> NoReturn:
    category = getattr(error, "category", "io-error" if isinstance(error, OSError) else "error")
    if output_json:
        click.echo(json.dumps({"error": str(error), "category": category}, indent=2))
    else:
        click.echo(f"❌ Error: {error}", err=True)
    sys.exit(1)


@contextmanager
def reporting(output_json: bool) -> Iterator[None]:
    """Turn library and file errors into the CLI's error output and exit code 1"""
    try:
        yield
    except (NestingError, OSError) as error:
        log.debug("Command failed", exc_info=True)
        fail(error, output_json)


def emit_json(data: dict[str, Any]) -> None:
    click.echo(json.dumps(data, indent=2))


def banner(title: str) -> list[str]:
    return ["", RULE, title, RULE, ""]


def command_name(ctx: click.Context) -> str:
    names: list[str] = []
    while ctx.parent is not None:
        names.append(ctx.info_name or "")
        ctx = ctx.parent
    return " ".join(reversed(names))


def start_manifest(ctx: click.Context, rng_seeds: Iterable[int] = (), inputs: Iterable[str | None] = ()) -> RunManifest:
    manifest = RunManifest(command=command_name(ctx), config=dict(ctx.params), rng_seeds=list(rng_seeds))
    for path in inputs:
        if path is not None:
            manifest.add_input(path)
    return manifest


def pick_election(graph: DualGraph, name: str | None) -> Election | None:
    """The named election; with no name, the graph's only election (or None if it has none)"""
    if name is not None:
        return graph.election(name)
    if not graph.elections:
        return None
    if len(graph.elections) == 1:
        return next(iter(graph.elections.values()))
    raise UnknownElection(f"Graph carries {len(graph.elections)} elections ({', '.join(sorted(graph.elections))}); choose one with --election")


def chain_observers(election: Election | None) -> list[Observer]:
    observers: list[Observer] = [cut_edge_observer]
    if election is not None:
        observers.append(election_observer(election))
    return observers


def record_chain(
    records: Iterable[EnsembleRecord],
    steps: int,
    thin: int,
    out: str,
    quiet: bool,
    description: str,
) -> tuple[int, Counter[int]]:
    """Write every thin-th record to out; returns the record count and the seats_a tally"""
    if thin < 1:
        raise InvalidConfig(f"--thin must be at least 1, got {thin}")
    seats: Counter[int] = Counter()

    def kept() -> Iterator[EnsembleRecord]:
        progress = tqdm(records, total=steps, desc=description, unit="step", file=sys.stderr, disable=quiet)
        for record in progress:
            if record.step % thin:
                continue
            if "seats_a" in record.stats:
                seats[record.seats_a] += 1
            yield record

    return write_ensemble(kept(), out), seats


def format_chain_result(
    title: str,
    graph_path: str,
    graph: DualGraph,
    steps: int,
    rng: int,
    count: int,
    out: str,
    seats: Counter[int],
    manifest_path: Path,
) -> str:
    lines = banner(title)
    lines.append(f"  Graph:     {graph_path} ({len(graph.vertices)} vertices)")
    lines.append(f"  Steps:     {steps} (rng {rng})")
    lines.append(f"  Records:   {count} -> {out}")
    if seats:
        low, high = seat_range(seats)
        lines.append(f"  Seats (a): {low} to {high}")
    lines.append(f"  Manifest:  {manifest_path}")
    lines.append("")
    lines.append("✅ Done")
    lines.append("")
    return "\n".join(lines)


def echo_table(table: pd.DataFrame, out: str | None, manifest: RunManifest) -> Path | None:
    """CSV to stdout, or to out with a manifest beside it"""
    if out is None:
        click.echo(table.to_csv(index=False, lineterminator="\n"), nl=False)
        return None
    write_table(table, out)
    return manifest.write(out)


def json_table_outputs(table: pd.DataFrame, out: str | None, manifest: RunManifest) -> dict[str, str]:
    """--json still honours --out; the report says where the CSV went"""
    if out is None:
        return {}
    write_table(table, out)
    return {"out": out, "manifest": str(manifest.write(out))}


def option_defaults(group: click.Group, sections: dict[str, Any]) -> dict[str, Any]:
    """Re-key config sections by parameter name, so `graph:` reaches the --graph option"""
    resolved: dict[str, Any] = {}
    for name, section in sections.items():
        if not isinstance(section, dict):
            raise ConfigError(f"Section {name!r} must be a mapping")
        command = group.commands.get(name)
        if command is None:
            raise ConfigError(f"Unknown subcommand section {name!r} under {group.name!r}")
        if isinstance(command, click.Group):
            resolved[name] = option_defaults(command, section)
            continue
        names = {opt.lstrip("-").replace("-", "_"): param.name for param in command.params for opt in param.opts}
        for key in section:
            if key not in names:
                raise ConfigError(f"Section {name!r}: unknown option {key!r}")
        resolved[name] = {names[key]: value for key, value in section.items()}
    return resolved


class NestedGroup(click.Group):
    """Lists subcommands in pipeline order instead of alphabetically"""

    def list_commands(self, ctx: click.Context) -> list[str]:
        return list(self.commands)


@click.group(cls=NestedGroup, name="nested-ensembles")
@click.option(
    "--config",
    "config_path",
    envvar=CONFIG_ENV,
    type=click.Path(dir_okay=False),
    help=f"YAML file of per-subcommand defaults (env: {CONFIG_ENV})",
)
@click.option("--verbose", "-v", is_flag=True, help="Log debug diagnostics to stderr")
@click.version_option(__version__, prog_name="nested-ensembles")
@click.pass_context
def main(ctx: click.Context, config_path: str | None, verbose: bool) -> None:
    """
    Sample and analyze nested and unnested districting plan ensembles.

    Examples:

        nested-ensembles grid --rows 3 --cols 3 --out grid3x3.json

        nested-ensembles enumerate --graph grid3x3.json --arity 3

        nested-ensembles --config runs.yaml run-swap
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if config_path:
        with reporting(False):
            ctx.default_map = option_defaults(main, load_config(config_path, set(main.commands)))
            log.debug("Loaded defaults for %s from %s", sorted(ctx.default_map), config_path)


@main.command()
@click.option("--rows", required=True, type=int, help="Grid rows")
@click.option("--cols", required=True, type=int, help="Grid columns")
@click.option("--election", default=None, help="Add a one-voter-per-cell election with this name")
@click.option("--share-a", default=0.5, show_default=True, help="Probability that a cell votes for party a")
@rng_option
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Graph JSON to write")
@json_option
@click.pass_context
def grid(
    ctx: click.Context,
    rows: int,
    cols: int,
    election: str | None,
    share_a: float,
    rng: int,
    out: str,
    output_json: bool,
) -> None:
    """
    Write a rook-adjacency grid dual graph.

    Examples:

        nested-ensembles grid --rows 6 --cols 6 --out grid6x6.json

        nested-ensembles grid --rows 6 --cols 6 --election TOY --share-a 0.4 --rng 3 --out toy.json
    """
    with reporting(output_json):
        if not 0 <= share_a <= 1:
            raise InvalidConfig(f"--share-a must lie in [0, 1], got {share_a}")
        graph = rook_grid(rows, cols)
        if election is not None:
            graph = graph.with_election(random_voter_election(graph.vertices, election, rng, share_a))
        save_graph(graph, out)
        manifest_path = start_manifest(ctx, rng_seeds=[rng] if election else []).write(out)

        if output_json:
            emit_json({"graph": out, "vertices": len(graph.vertices), "edges": len(graph.edges), "manifest": str(manifest_path)})
            return
        lines = banner(f"🧩 Rook Grid {rows}x{cols}")
        lines.append(f"  Vertices: {len(graph.vertices)}")
        lines.append(f"  Edges:    {len(graph.edges)}")
        if election is not None:
            share = statewide_share(graph, graph.election(election), Party.A)
            lines.append(f"  Election: {election} (party a share {share:.1%})")
        lines.append(f"  Written:  {out}")
        lines.append("")
        click.echo("\n".join(lines))


@main.command()
@graph_option
@click.option("--plan", "plan_path", type=click.Path(exists=True, dir_okay=False), help="Plan CSV to check against the graph")
@click.option("--arity", type=int, default=None, help="Also check k:1 nesting with this k")
@click.option("--epsilon", type=float, default=None, help="Also check population balance within this tolerance")
@json_option
def validate(
    graph_path: str,
    plan_path: str | None,
    arity: int | None,
    epsilon: float | None,
    output_json: bool,
) -> None:
    """
    Check a graph file, and optionally a plan against it.

    Exits 1 when the plan fails any requested check.

    Examples:

        nested-ensembles validate --graph house.json

        nested-ensembles validate --graph house.json --plan rows.csv --arity 3
    """
    with reporting(output_json):
        graph = load_graph(graph_path)
        result: dict[str, Any] = {
            "graph": graph_path,
            "vertices": len(graph.vertices),
            "edges": len(graph.edges),
            "population": graph.total_population,
            "elections": sorted(graph.elections),
        }
        checks: dict[str, bool] = {}
        if plan_path is not None:
            plan = load_plan(plan_path, graph)
            result["plan"] = plan_path
            result["districts"] = plan.num_districts
            checks["contiguous"] = is_contiguous_plan(graph, plan)
            try:
                result["deviation"] = population_deviation(graph, plan)
            except DegeneratePopulation:
                result["deviation"] = None
            if epsilon is not None:
                checks["balanced"] = result["deviation"] is not None and result["deviation"] <= epsilon
            if arity is not None:
                checks["nested"] = is_k_nested(graph, plan, NestingSpec(arity))
        result["checks"] = checks
        result["valid"] = all(checks.values())

        if output_json:
            emit_json(result)
        else:
            lines = banner("🔍 Dual Graph Validation")
            lines.append(f"  ✅ {graph_path}: {result['vertices']} vertices, {result['edges']} edges, population {result['population']}")
            lines.append(f"     Elections: {', '.join(result['elections']) or 'none'}")
            if plan_path is not None:
                lines.append("")
                lines.append(f"📄 {plan_path}: {result['districts']} districts")
                if result["deviation"] is not None:
                    lines.append(f"     Max deviation: {result['deviation']:.2%}")
                for name, passed in checks.items():
                    lines.append(f"  {'✅' if passed else '❌'} {name}")
            lines.append("")
            lines.append("-" * 80)
            lines.append("✅ VALID" if result["valid"] else "❌ INVALID")
            lines.append("")
            click.echo("\n".join(lines))
        sys.exit(0 if result["valid"] else 1)


@main.command("enumerate")
@graph_option
@click.option("--districts", type=int, default=None, help="Number of districts")
@click.option("--size", type=int, default=None, help="Exact number of vertices per district")
@click.option("--arity", type=int, default=None, help="Enumerate k:1 nestings instead (districts of k vertices)")
@click.option("--reachable-from", type=click.Path(exists=True, dir_okay=False), help="With --arity: count nestings Swap reaches from this plan")
@click.option("--limit", type=int, default=None, help="Largest graph to accept (vertices)")
@click.option("--workers", default=1, show_default=True, help="Processes for counting")
@click.option("--out", type=click.Path(dir_okay=False), help="Write every plan as CSV (plan,unit_id,district)")
@json_option
@click.pass_context
def enumerate_command(
    ctx: click.Context,
    graph_path: str,
    districts: int | None,
    size: int | None,
    arity: int | None,
    reachable_from: str | None,
    limit: int | None,
    workers: int,
    out: str | None,
    output_json: bool,
) -> None:
    """
    Count partitions into connected districts of exactly equal size.

    Examples:

        nested-ensembles enumerate --graph grid6x6.json --districts 3 --size 12

        nested-ensembles enumerate --graph grid3x3.json --arity 3 --out nestings.csv

        nested-ensembles enumerate --graph grid3x3.json --arity 3 --reachable-from rows.csv
    """
    with reporting(output_json):
        graph = load_graph(graph_path)
        if arity is not None:
            nesting = NestingSpec(arity)
            districts, size = nesting.num_districts(graph), arity
            limit = limit or NESTING_LIMIT
        elif districts is None or size is None:
            raise click.UsageError("Give --districts and --size, or --arity")
        else:
            limit = limit or PARTITION_LIMIT
        if reachable_from is not None and arity is None:
            raise click.UsageError("--reachable-from needs --arity")

        result: dict[str, Any] = {"graph": graph_path, "districts": districts, "size": size}
        manifest = start_manifest(ctx, inputs=[graph_path, reachable_from])
        if out is not None:
            frames = [
                plan_table(plan, graph).assign(plan=number)
                for number, plan in enumerate(iter_balanced_partitions(graph, districts, size, limit), start=1)
            ]
            columns = ["plan", "unit_id", "district"]
            table = pd.concat(frames)[columns] if frames else pd.DataFrame(columns=columns)
            write_table(table, out)
            result["count"] = len(frames)
            result["manifest"] = str(manifest.write(out))
        else:
            result["count"] = count_balanced_partitions(graph, districts, size, limit, workers)
        if reachable_from is not None:
            start = load_plan(reachable_from, graph)
            result["reachable"] = len(swap_reachability(graph, NestingSpec(arity), start, limit))

        if output_json:
            emit_json(result)
            return
        lines = banner("🧮 Balanced Partition Enumeration")
        lines.append(f"  Graph:     {graph_path} ({len(graph.vertices)} vertices)")
        lines.append(f"  Districts: {districts} of {size} vertices")
        lines.append(f"  Count:     {result['count']}")
        if "reachable" in result:
            lines.append(f"  Reachable by Swap from {reachable_from}: {result['reachable']}")
        if out is not None:
            lines.append(f"  Written:   {out}")
        lines.append("")
        click.echo("\n".join(lines))


@main.command("run-swap")
@graph_option
@click.option("--seed-plan", required=True, type=click.Path(exists=True, dir_okay=False), help="Nested starting plan CSV")
@click.option("--steps", required=True, type=int, help="Chain steps")
@rng_option
@click.option("--arity", default=3, show_default=True, help="House districts per Senate district")
@click.option("--election", default=None, help="Election to record seats for (default: the graph's only one)")
@click.option("--max-rejections", default=DEFAULT_MAX_REJECTIONS, show_default=True, help="Proposals per step before giving up")
@click.option("--thin", default=1, show_default=True, help="Keep every n-th step")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Ensemble JSONL to write")
@quiet_option
@json_option
@click.pass_context
def run_swap_command(
    ctx: click.Context,
    graph_path: str,
    seed_plan: str,
    steps: int,
    rng: int,
    arity: int,
    election: str | None,
    max_rejections: int,
    thin: int,
    out: str,
    quiet: bool,
    output_json: bool,
) -> None:
    """
    Run the Swap chain over k:1 nested plans on a House dual graph.

    Examples:

        nested-ensembles run-swap --graph house.json --seed-plan rows.csv --steps 10000 --rng 7 --out run.jsonl
    """
    with reporting(output_json):
        graph = load_graph(graph_path)
        initial = load_plan(seed_plan, graph)
        config = SwapConfig(steps, rng, max_rejections, NestingSpec(arity))
        records = run_swap(graph, initial, config, chain_observers(pick_election(graph, election)))
        count, seats = record_chain(records, steps, thin, out, quiet, "swap")
        manifest_path = start_manifest(ctx, [rng], [graph_path, seed_plan]).write(out)

        if output_json:
            emit_json({"records": count, "out": out, "manifest": str(manifest_path), "seat_histogram": dict(sorted(seats.items()))})
        else:
            click.echo(format_chain_result("🔁 Swap Chain", graph_path, graph, steps, rng, count, out, seats, manifest_path))


@main.command("run-recom")
@graph_option
@click.option("--seed-plan", required=True, type=click.Path(exists=True, dir_okay=False), help="Contiguous starting plan CSV")
@click.option("--steps", required=True, type=int, help="Chain steps")
@rng_option
@click.option("--districts", type=int, default=None, help="Number of districts (default: the seed plan's)")
@click.option("--epsilon", default=0.05, show_default=True, help="Population tolerance")
@click.option("--max-tree-attempts", default=1000, show_default=True, help="Spanning trees per step before failing")
@click.option("--pair-attempts", default=100, show_default=True, help="Spanning trees per merge pair before reselecting")
@click.option("--election", default=None, help="Election to record seats for (default: the graph's only one)")
@click.option("--thin", default=1, show_default=True, help="Keep every n-th step")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Ensemble JSONL to write")
@quiet_option
@json_option
@click.pass_context
def run_recom_command(
    ctx: click.Context,
    graph_path: str,
    seed_plan: str,
    steps: int,
    rng: int,
    districts: int | None,
    epsilon: float,
    max_tree_attempts: int,
    pair_attempts: int,
    election: str | None,
    thin: int,
    out: str,
    quiet: bool,
    output_json: bool,
) -> None:
    """
    Run the ReCom chain on a unit-level dual graph.

    Examples:

        nested-ensembles run-recom --graph precincts.json --seed-plan enacted.csv --steps 10000 --out recom.jsonl
    """
    with reporting(output_json):
        graph = load_graph(graph_path)
        initial = load_plan(seed_plan, graph, districts)
        config = RecomConfig(steps, districts or initial.num_districts, rng, epsilon, max_tree_attempts, pair_attempts)
        records = run_recom(graph, initial, config, chain_observers(pick_election(graph, election)))
        count, seats = record_chain(records, steps, thin, out, quiet, "recom")
        manifest_path = start_manifest(ctx, [rng], [graph_path, seed_plan]).write(out)

        if output_json:
            emit_json({"records": count, "out": out, "manifest": str(manifest_path), "seat_histogram": dict(sorted(seats.items()))})
        else:
            click.echo(format_chain_result("🧬 ReCom Chain", graph_path, graph, steps, rng, count, out, seats, manifest_path))


@main.command("short-burst")
@graph_option
@click.option("--seed-plan", required=True, type=click.Path(exists=True, dir_okay=False), help="Contiguous starting plan CSV")
@click.option("--election", default=None, help="Election to score (default: the graph's only one)")
@click.option("--party", type=click.Choice([p.value for p in Party]), default=Party.A.value, show_default=True, help="Party whose seats to maximize")
@click.option("--burst-length", default=10, show_default=True, help="ReCom steps per burst")
@click.option("--bursts", default=100, show_default=True, help="Number of bursts")
@rng_option
@click.option("--districts", type=int, default=None, help="Number of districts (default: the seed plan's)")
@click.option("--epsilon", default=0.05, show_default=True, help="Population tolerance")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Best plan CSV to write")
@click.option("--trace", type=click.Path(dir_okay=False), help="Best score after each burst, as CSV")
@click.option("--quotient-out", type=click.Path(dir_okay=False), help="Dual graph of the best plan's districts, as graph JSON")
@json_option
@click.pass_context
def short_burst(
    ctx: click.Context,
    graph_path: str,
    seed_plan: str,
    election: str | None,
    party: str,
    burst_length: int,
    bursts: int,
    rng: int,
    districts: int | None,
    epsilon: float,
    out: str,
    trace: str | None,
    quotient_out: str | None,
    output_json: bool,
) -> None:
    """
    Search for plans with extreme seat counts by short ReCom bursts.

    With --quotient-out the best House plan becomes a House dual graph ready
    for run-swap.

    Examples:

        nested-ensembles short-burst --graph units.json --seed-plan house.csv --party b --bursts 500 --out biased.csv --quotient-out biased-house.json
    """
    with reporting(output_json):
        graph = load_graph(graph_path)
        initial = load_plan(seed_plan, graph, districts)
        scored = pick_election(graph, election)
        if scored is None:
            raise UnknownElection("Short bursts need an election; the graph carries none")
        inner = RecomConfig(max(burst_length, 1), districts or initial.num_districts, rng, epsilon)
        config = BurstConfig(inner, scored.name, Party(party), burst_length, bursts)
        result = run_short_bursts(graph, initial, config)

        manifest = start_manifest(ctx, [rng], [graph_path, seed_plan])
        save_plan(result.best_plan, out, graph)
        written = [out]
        manifest.write(out)
        if trace is not None:
            write_table(pd.DataFrame({"burst": range(1, len(result.trace) + 1), "best_seats": result.trace}), trace)
            manifest.write(trace)
            written.append(trace)
        if quotient_out is not None:
            save_graph(quotient_graph(graph, result.best_plan), quotient_out)
            manifest.write(quotient_out)
            written.append(quotient_out)

        best = result.trace[-1] if result.trace else None
        if output_json:
            emit_json({"best_seats": best, "trace": list(result.trace), "outputs": written})
            return
        lines = banner(f"💥 Short Bursts for party {party}")
        lines.append(f"  Bursts:     {bursts} x {burst_length} steps (rng {rng})")
        lines.append(f"  Best seats: {best if best is not None else 'seed plan only'}")
        for path in written:
            lines.append(f"  Written:    {path}")
        lines.append("")
        click.echo("\n".join(lines))


@main.command()
@graph_option
@click.option("--plan", "plan_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Plan CSV whose districts become vertices")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Graph JSON to write")
@json_option
@click.pass_context
def quotient(ctx: click.Context, graph_path: str, plan_path: str, out: str, output_json: bool) -> None:
    """
    Collapse each district of a plan to one vertex.

    Examples:

        nested-ensembles quotient --graph units.json --plan house.csv --out house.json
    """
    with reporting(output_json):
        graph = load_graph(graph_path)
        collapsed = quotient_graph(graph, load_plan(plan_path, graph))
        save_graph(collapsed, out)
        manifest_path = start_manifest(ctx, inputs=[graph_path, plan_path]).write(out)

        if output_json:
            emit_json({"vertices": len(collapsed.vertices), "edges": len(collapsed.edges), "out": out, "manifest": str(manifest_path)})
            return
        lines = banner("🗺️  Quotient Dual Graph")
        lines.append(f"  {len(graph.vertices)} units -> {len(collapsed.vertices)} vertices, {len(collapsed.edges)} edges")
        lines.append(f"  Written: {out}")
        lines.append("")
        click.echo("\n".join(lines))


@main.command()
@graph_option
@click.option("--arity", type=int, default=None, help="Build a k:1 nested plan with this k")
@click.option("--districts", type=int, default=None, help="Build an unnested plan with this many districts")
@click.option("--epsilon", default=0.05, show_default=True, help="Population tolerance for unnested plans")
@rng_option
@click.option("--max-restarts", default=DEFAULT_MAX_RESTARTS, show_default=True, help="Attempts before giving up")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Plan CSV to write")
@json_option
@click.pass_context
def seed(
    ctx: click.Context,
    graph_path: str,
    arity: int | None,
    districts: int | None,
    epsilon: float,
    rng: int,
    max_restarts: int,
    out: str,
    output_json: bool,
) -> None:
    """
    Generate a random starting plan.

    Examples:

        nested-ensembles seed --graph house.json --arity 3 --rng 1 --out s1.csv

        nested-ensembles seed --graph units.json --districts 4 --epsilon 0.02 --rng 2 --out s2.csv
    """
    with reporting(output_json):
        if (arity is None) == (districts is None):
            raise click.UsageError("Give exactly one of --arity or --districts")
        graph = load_graph(graph_path)
        if arity is not None:
            plan = random_nested_seed(graph, NestingSpec(arity), rng, max_restarts)
        else:
            plan = random_recom_seed(graph, districts, epsilon, rng, max_restarts)
        save_plan(plan, out, graph)
        manifest_path = start_manifest(ctx, [rng], [graph_path]).write(out)

        if output_json:
            emit_json({"districts": plan.num_districts, "digest": plan.digest(), "out": out, "manifest": str(manifest_path)})
            return
        lines = banner("🌱 Random Seed Plan")
        lines.append(f"  Districts: {plan.num_districts}")
        lines.append(f"  Digest:    {plan.digest()[:16]}")
        lines.append(f"  Written:   {out}")
        lines.append("")
        click.echo("\n".join(lines))


@main.group()
def diagnose() -> None:
    """Convergence and comparison statistics over ensemble files."""


ensemble_option = click.option(
    "--ensemble",
    "ensemble_path",
    required=True,
    type=click.Path(exists=True, dir_okay=False),
    help="Ensemble JSONL file",
)
stat_option = click.option("--stat", default="seats_a", show_default=True, help="Recorded statistic")
table_out_option = click.option("--out", type=click.Path(dir_okay=False), help="Write the CSV here instead of stdout")


@diagnose.command()
@ensemble_option
@stat_option
@click.option("--max-lag", default=100, show_default=True, help="Largest lag")
@table_out_option
@json_option
@click.pass_context
def autocorr(ctx: click.Context, ensemble_path: str, stat: str, max_lag: int, out: str | None, output_json: bool) -> None:
    """
    Autocorrelation curve of one statistic, lags 0..max-lag.

    Examples:

        nested-ensembles diagnose autocorr --ensemble run.jsonl --stat seats_a --max-lag 100
    """
    with reporting(output_json):
        curve = autocorrelation_curve(statistic_series(read_ensemble(ensemble_path), stat), max_lag)
        table = pd.DataFrame({"lag": range(len(curve)), "autocorrelation": curve})
        manifest = start_manifest(ctx, inputs=[ensemble_path])
        if output_json:
            emit_json({"stat": stat, "curve": curve, **json_table_outputs(table, out, manifest)})
            return
        echo_table(table, out, manifest)


@diagnose.command()
@ensemble_option
@click.option("--fraction", "fractions", multiple=True, type=float, default=DEFAULT_FRACTIONS, show_default=True, help="Prefix fractions (repeatable)")
@table_out_option
@json_option
@click.pass_context
def partial(ctx: click.Context, ensemble_path: str, fractions: tuple[float, ...], out: str | None, output_json: bool) -> None:
    """
    Five-number summaries of each rank's vote share over growing prefixes.

    Examples:

        nested-ensembles diagnose partial --ensemble run.jsonl --fraction 0.1 --fraction 0.5 --fraction 1
    """
    with reporting(output_json):
        summaries = partial_ensemble_rank_stats(read_ensemble(ensemble_path), fractions)
        rows = [
            {
                "fraction": fraction,
                "rank": rank,
                "min": summary.minimum,
                "q1": summary.lower_quartile,
                "median": summary.median,
                "q3": summary.upper_quartile,
                "max": summary.maximum,
            }
            for fraction, ranks in summaries.items()
            for rank, summary in enumerate(ranks, start=1)
        ]
        table = pd.DataFrame(rows)
        manifest = start_manifest(ctx, inputs=[ensemble_path])
        if output_json:
            emit_json({"summaries": rows, **json_table_outputs(table, out, manifest)})
            return
        echo_table(table, out, manifest)


@diagnose.command()
@ensemble_option
@stat_option
@table_out_option
@json_option
@click.pass_context
def histogram(ctx: click.Context, ensemble_path: str, stat: str, out: str | None, output_json: bool) -> None:
    """
    Seat histogram of an ensemble.

    Examples:

        nested-ensembles diagnose histogram --ensemble run.jsonl --out seats.csv
    """
    with reporting(output_json):
        counts = seat_histogram(read_ensemble(ensemble_path), stat)
        total = sum(counts.values())
        table = pd.DataFrame(
            {"seats": list(counts), "count": list(counts.values()), "fraction": [c / total for c in counts.values()]}
        )
        manifest = start_manifest(ctx, inputs=[ensemble_path])
        if output_json:
            report = {"stat": stat, "histogram": {str(k): v for k, v in counts.items()}, "range": list(seat_range(counts))}
            emit_json({**report, **json_table_outputs(table, out, manifest)})
            return
        echo_table(table, out, manifest)


@diagnose.command()
@click.option("--first", required=True, type=click.Path(exists=True, dir_okay=False), help="First ensemble JSONL")
@click.option("--second", required=True, type=click.Path(exists=True, dir_okay=False), help="Second ensemble JSONL")
@stat_option
@table_out_option
@json_option
@click.pass_context
def compare(ctx: click.Context, first: str, second: str, stat: str, out: str | None, output_json: bool) -> None:
    """
    Compare two seat histograms by total variation distance.

    Prints the distance and both seat ranges; --out also writes both
    histograms side by side.

    Examples:

        nested-ensembles diagnose compare --first nested.jsonl --second unnested.jsonl
    """
    with reporting(output_json):
        comparison = compare_ensembles(read_ensemble(first), read_ensemble(second), stat)
        support = sorted(set(comparison.first_histogram) | set(comparison.second_histogram))
        table = pd.DataFrame(
            {
                "seats": support,
                "first": [comparison.first_histogram.get(s, 0) for s in support],
                "second": [comparison.second_histogram.get(s, 0) for s in support],
            }
        )
        manifest = start_manifest(ctx, inputs=[first, second])
        if output_json:
            emit_json(
                {
                    "distance": comparison.distance,
                    "first_range": list(comparison.first_range),
                    "second_range": list(comparison.second_range),
                    "first_histogram": {str(k): v for k, v in comparison.first_histogram.items()},
                    "second_histogram": {str(k): v for k, v in comparison.second_histogram.items()},
                    **json_table_outputs(table, out, manifest),
                }
            )
            return

        lines = banner("⚖️  Ensemble Comparison")
        lines.append(f"  {first}: seats {comparison.first_range[0]} to {comparison.first_range[1]}")
        lines.append(f"  {second}: seats {comparison.second_range[0]} to {comparison.second_range[1]}")
        lines.append(f"  Total variation distance: {comparison.distance:.4f}")
        if out is not None:
            write_table(table, out)
            manifest.write(out)
            lines.append(f"  Written: {out}")
        lines.append("")
        click.echo("\n".join(lines))


if __name__ == "__main__":
    main()
