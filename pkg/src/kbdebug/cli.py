"""Command-line front: batch experiments, terminal-interactive debugging,
non-interactive solving, and the HTTP server."""
from __future__ import annotations

import csv
import json
import sys
import time
from pathlib import Path
from typing import Optional

import click

from .reasoning import Dpi, load_dpi, sorted_ids
from .session import (AWAITING, SessionConfig, next_query, non_interactive_debug,
                      run_batch, start_session, submit_answer)
from .strategies import RioState, StrategyChoice

STRATEGY_NAMES = {
    "ent": "entropy", "entropy": "entropy",
    "spl": "split", "split": "split",
    "rio": "rio",
    "rnd": "random", "random": "random",
}


def _strategy(name: str, seed: int) -> StrategyChoice:
    try:
        kind = STRATEGY_NAMES[name.strip().lower()]
    except KeyError:
        raise click.BadParameter(
            f"unknown strategy {name!r} (use ent, spl, rio, or rnd)")
    rio = RioState() if kind == "rio" else None
    return StrategyChoice(kind=kind, rio=rio, rng_seed=seed)


def _config(strategy: StrategyChoice, sigma: float, n: int, engine: str,
            mode: str, gamma: Optional[float]) -> SessionConfig:
    # the session falls back to the instance's own fault model
    return SessionConfig(n_leading=n, sigma=sigma, engine=engine, mode=mode,
                         strategy=strategy, gamma=gamma)


def _session_options(fn):
    for option in reversed([
        click.option("--sigma", type=float, default=0.85, show_default=True,
                     help="Acceptance threshold on the top-two probability gap."),
        click.option("--n", "n_leading", type=int, default=9, show_default=True,
                     help="Number of leading diagnoses to maintain."),
        click.option("--engine", type=click.Choice(["conflict", "direct"]),
                     default="conflict", show_default=True),
        click.option("--mode", type=click.Choice(["static", "dynamic"]),
                     default="dynamic", show_default=True),
        click.option("--seed", type=int, default=0, show_default=True,
                     help="RNG seed for the random strategy."),
        click.option("--gamma", type=float, default=None,
                     help="Threshold for the set-differencing query search "
                          "(omit for the exhaustive pool)."),
    ]):
        fn = option(fn)
    return fn


@click.group()
def cli() -> None:
    """Interactive knowledge-base debugging."""


@cli.command()
@click.option("--dpi", "dpi_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Problem instance JSON.")
@click.option("--target", "target_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Target diagnosis JSON (list of axiom ids).")
@click.option("--strategy", "strategies", default="ent", show_default=True,
              help="Comma-separated strategies: ent, spl, rio, rnd.")
@_session_options
@click.option("--out", "out_path", type=click.Path(dir_okay=False),
              default=None, help="Write the report as CSV.")
def batch(dpi_path: str, target_path: str, strategies: str, sigma: float,
          n_leading: int, engine: str, mode: str, seed: int,
          gamma: Optional[float], out_path: Optional[str]) -> None:
    """Run oracle-answered sessions and report query counts."""
    dpi = load_dpi(dpi_path)
    target = _load_target(target_path)
    rows = []
    for name in strategies.split(","):
        choice = _strategy(name, seed)
        config = _config(choice, sigma, n_leading, engine, mode, gamma)
        started = time.perf_counter()
        try:
            proposal, count, _ = run_batch(dpi, config, target)
            diagnosis = " ".join(str(i) for i in sorted_ids(proposal.diagnosis))
            error = ""
        except ValueError as exc:
            count, diagnosis, error = 0, "", str(exc)
        rows.append({
            "row_type": "run",
            "strategy": choice.kind,
            "target": " ".join(str(i) for i in sorted(target)),
            "query_count": count,
            "diagnosis": diagnosis,
            "wall_time_s": round(time.perf_counter() - started, 4),
            "error": error,
        })
    rows.extend(_aggregates(rows))
    for row in rows:
        click.echo("  ".join(f"{k}={row[k]}" for k in
                             ("row_type", "strategy", "query_count",
                              "diagnosis", "wall_time_s")
                             if row.get(k) != ""))
    if out_path:
        _write_csv(out_path, rows)
        click.echo(f"report written to {out_path}")


def _load_target(path: str) -> frozenset:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get("diagnosis", data.get("target"))
    if not isinstance(data, list) or not all(isinstance(i, int) for i in data):
        raise click.BadParameter(
            "target file must hold a JSON list of axiom ids")
    return frozenset(data)


def _aggregates(rows: list[dict]) -> list[dict]:
    out = []
    by_strategy: dict[str, list[int]] = {}
    for row in rows:
        if row["row_type"] == "run" and not row["error"]:
            by_strategy.setdefault(row["strategy"], []).append(
                row["query_count"])
    for strategy, counts in by_strategy.items():
        for kind, value in (("min", min(counts)),
                            ("avg", round(sum(counts) / len(counts), 3)),
                            ("max", max(counts))):
            out.append({"row_type": kind, "strategy": strategy,
                        "target": "", "query_count": value, "diagnosis": "",
                        "wall_time_s": "", "error": ""})
    return out


def _write_csv(path: str, rows: list[dict]) -> None:
    fields = ["row_type", "strategy", "target", "query_count", "diagnosis",
              "wall_time_s", "error"]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)


@cli.command()
@click.option("--dpi", "dpi_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--strategy", "strategy_name", default="ent", show_default=True)
@_session_options
def interactive(dpi_path: str, strategy_name: str, sigma: float,
                n_leading: int, engine: str, mode: str, seed: int,
                gamma: Optional[float]) -> None:
    """Debug a knowledge base by answering queries at the terminal."""
    dpi = load_dpi(dpi_path)
    choice = _strategy(strategy_name, seed)
    config = _config(choice, sigma, n_leading, engine, mode, gamma)
    state = start_session(dpi, config)
    answers = {"y": "yes", "yes": "yes", "n": "no", "no": "no",
               "s": "skip", "skip": "skip"}
    round_no = 0
    while state.status == AWAITING:
        query = next_query(state)
        if query is None:
            break
        round_no += 1
        click.echo(f"\n--- query {round_no} "
                   f"({len(state.leading)} candidate diagnoses) ---")
        click.echo("Does your intended knowledge base entail all of:")
        for text in query.texts:
            click.echo(f"    {text}")
        try:
            raw = click.prompt("Answer [y]es / [n]o / [s]kip",
                               prompt_suffix=": ").strip().lower()
        except (click.Abort, EOFError):
            state.status = "aborted"
            click.echo("\naborted")
            return
        value = answers.get(raw)
        if value is None:
            click.echo(f"unrecognized answer {raw!r}; use y, n, or s")
            round_no -= 1
            continue
        submit_answer(state, value)

    if state.proposal is None:
        click.echo("no repair found: every candidate was contradicted")
        sys.exit(1)
    diagnosis = ", ".join(str(i) for i in sorted_ids(state.proposal.diagnosis))
    click.echo(f"\nstatus: {state.status}")
    click.echo(f"faulty axioms: [{diagnosis}]")
    click.echo("repaired knowledge base:")
    for line in state.proposal.solution_kb:
        click.echo(f"    {line}")


@cli.command()
@click.option("--dpi", "dpi_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--n", "limit", type=int, default=9, show_default=True,
              help="How many diagnoses to list.")
@click.option("--time-limit", type=float, default=None,
              help="Search budget in seconds.")
def solve(dpi_path: str, limit: int, time_limit: Optional[float]) -> None:
    """List the most probable minimal diagnoses without interaction."""
    dpi = load_dpi(dpi_path)
    diagnoses, complete = non_interactive_debug(dpi, n=limit,
                                                time_limit=time_limit)
    for rank, d in enumerate(diagnoses, start=1):
        ids = ", ".join(str(i) for i in sorted_ids(d))
        click.echo(f"{rank}. [{ids}]")
    if not complete:
        click.echo("(time budget hit; list may be incomplete)")


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--data-dir", type=click.Path(file_okay=False), default=None,
              help="Session storage directory (default: $KBDEBUG_DATA_DIR).")
def serve(host: str, port: int, data_dir: Optional[str]) -> None:
    """Run the HTTP session API."""
    import uvicorn

    from .service import create_app
    from .store import SessionStore

    app = create_app(SessionStore(data_dir))
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    cli()
