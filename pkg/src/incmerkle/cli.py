"""``incmerkle`` command line: a persistent deposit accumulator plus checks and a benchmark."""
from __future__ import annotations

import json
import random
import sys
import time
from pathlib import Path
from typing import List, Optional

import click
from filelock import FileLock, Timeout

from . import harness
from .bitpaths import trailing_ones
from .combiners import DIGEST, TOY, CountingCombiner, combiner_by_id
from .contract import MAX_HEIGHT, DepositContract, TreeFullError
from .core import build_zero_hashes
from .oracle import MAX_ORACLE_HEIGHT, build_merkle
from .persistence import StateFileError, format_value, load_state, parse_value, save_state

EXIT_CHECK_FAILED = 1
EXIT_FULL = 3
EXIT_CORRUPT = 4
EXIT_BAD_VALUE = 5
EXIT_EXISTS = 6
EXIT_LOCKED = 7

HASH_CHOICE = click.Choice([TOY, DIGEST])


def _fail(message: str, code: int) -> "click.exceptions.Exit":
    click.echo(f"error: {message}", err=True)
    return click.exceptions.Exit(code)


def _lock(path: Path) -> FileLock:
    return FileLock(str(path) + ".lock", timeout=5)


def _load(path: Path) -> DepositContract:
    try:
        return load_state(path)
    except FileNotFoundError:
        raise _fail(f"no state file at {path}", EXIT_CORRUPT)
    except StateFileError as exc:
        raise _fail(f"corrupt state file {path}: {exc}", EXIT_CORRUPT)


@click.group()
def main() -> None:
    """Append-only incremental Merkle tree accumulator."""


@main.command()
@click.option("--height", type=click.IntRange(1, MAX_HEIGHT), required=True)
@click.option("--hash", "hash_id", type=HASH_CHOICE, default=TOY, show_default=True)
@click.option("--state", "state_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--audit", is_flag=True, help="Keep every deposited value in the state file.")
@click.option("--force", is_flag=True, help="Overwrite an existing state file.")
def init(height: int, hash_id: str, state_path: Path, audit: bool, force: bool) -> None:
    """Create a fresh state file and print the empty-tree root."""
    try:
        with _lock(state_path):
            if state_path.exists() and not force:
                raise _fail(f"{state_path} exists (use --force to overwrite)", EXIT_EXISTS)
            contract = DepositContract(height, combiner_by_id(hash_id), audit=audit)
            save_state(state_path, contract)
    except Timeout:
        raise _fail(f"{state_path} is locked by another process", EXIT_LOCKED)
    click.echo(format_value(contract.get_deposit_root()))


def _read_input(path: Path) -> List[str]:
    out = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


@main.command(context_settings={"ignore_unknown_options": True})
@click.option("--state", "state_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--input", "input_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.argument("values", nargs=-1, type=click.UNPROCESSED)
def deposit(state_path: Path, input_path: Optional[Path], values: tuple) -> None:
    """Append VALUES (or the lines of --input) and print the root after each one."""
    raw = list(values) + (_read_input(input_path) if input_path else [])
    try:
        with _lock(state_path):
            contract = _load(state_path)
            try:
                parsed = [parse_value(v, contract.combiner) for v in raw]
            except ValueError as exc:
                raise _fail(str(exc), EXIT_BAD_VALUE)
            if len(parsed) > contract.remaining:
                raise _fail(
                    f"{len(parsed)} deposits requested but only {contract.remaining} "
                    f"leaves remain in a tree of height {contract.height}",
                    EXIT_FULL,
                )
            roots = []
            for v in parsed:
                try:
                    contract.deposit(v)
                except TreeFullError as exc:
                    raise _fail(str(exc), EXIT_FULL)
                roots.append(contract.get_deposit_root())
            save_state(state_path, contract)
    except Timeout:
        raise _fail(f"{state_path} is locked by another process", EXIT_LOCKED)
    for r in roots:
        click.echo(format_value(r))


@main.command()
@click.option("--state", "state_path", type=click.Path(dir_okay=False, path_type=Path), required=True)
def root(state_path: Path) -> None:
    """Print the current root."""
    click.echo(format_value(_load(state_path).get_deposit_root()))


@main.command("zero-hashes")
@click.option("--height", type=click.IntRange(1, MAX_HEIGHT), required=True)
@click.option("--hash", "hash_id", type=HASH_CHOICE, default=TOY, show_default=True)
def zero_hashes(height: int, hash_id: str) -> None:
    """Print levels 0..HEIGHT-1 of the zero-hash table, one per line."""
    for v in build_zero_hashes(height, combiner_by_id(hash_id)):
        click.echo(format_value(v))


@main.command()
@click.option("--max-height", type=click.IntRange(1, MAX_ORACLE_HEIGHT), default=5, show_default=True)
@click.option("--cases", type=click.IntRange(1), default=20, show_default=True,
              help="Value draws per (height, length) cell.")
@click.option("--deep-traces", type=click.IntRange(1), default=1000, show_default=True,
              help="Random cases for sampled properties.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mutant", type=click.Choice(sorted(harness.MUTANTS)), default=None,
              help="Run against a deliberately broken combiner.")
@click.option("--property", "names", multiple=True, type=click.Choice(sorted(harness.PROPERTIES)))
def check(max_height: int, cases: int, deep_traces: int, seed: int, mutant: Optional[str], names) -> None:
    """Run the differential properties; one JSON record per property on stdout."""
    config = harness.HarnessConfig(
        max_height=max_height, num_random_cases=cases, rng_seed=seed,
        deep_traces=deep_traces, mutant=mutant,
    )
    ok = True
    for name in names or list(harness.PROPERTIES):
        verdict = harness.run_property(name, config)
        record = verdict.to_record()
        if not verdict.passed and name in harness.TRACE_PROPERTIES:
            record["shrunk"] = harness.shrink(verdict.failures[0]).to_record()
        click.echo(json.dumps(record, sort_keys=True))
        ok &= verdict.passed
    if not ok:
        sys.exit(EXIT_CHECK_FAILED)


@main.command()
@click.option("--height", type=click.IntRange(1, MAX_HEIGHT), default=16, show_default=True)
@click.option("--n", "n", type=click.IntRange(1), default=1000, show_default=True)
@click.option("--hash", "hash_id", type=HASH_CHOICE, default=TOY, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def bench(height: int, n: int, hash_id: str, seed: int) -> None:
    """Compare incremental deposits with a full oracle rebuild."""
    rng = random.Random(seed)
    counting = CountingCombiner(combiner_by_id(hash_id))
    contract = DepositContract(height, counting)
    n = min(n, contract.remaining)
    values = [harness.random_value(rng, counting.inner) for _ in range(n)]
    counting.reset()
    expected_calls = 0
    start = time.perf_counter()
    for v in values:
        expected_calls += trailing_ones(contract.count)
        contract.deposit(v)
    elapsed = time.perf_counter() - start
    deposit_calls = counting.reset()
    start = time.perf_counter()
    root = contract.get_deposit_root()
    root_time = time.perf_counter() - start
    root_calls = counting.reset()
    click.echo(f"height: {height}")
    click.echo(f"deposits: {n}")
    click.echo(f"incremental_deposit_seconds_per_op: {elapsed / n:.3e}")
    click.echo(f"incremental_combines_total: {deposit_calls}")
    click.echo(f"incremental_combines_expected: {expected_calls}")
    click.echo(f"root_seconds: {root_time:.3e}")
    click.echo(f"root_combines: {root_calls}")
    if height > MAX_ORACLE_HEIGHT:
        click.echo(f"oracle: skipped (height > {MAX_ORACLE_HEIGHT})")
        return
    start = time.perf_counter()
    tree = build_merkle(values, height, counting)
    oracle_time = time.perf_counter() - start
    click.echo(f"oracle_rebuild_seconds: {oracle_time:.3e}")
    click.echo(f"oracle_combines: {counting.reset()}")
    click.echo(f"roots_agree: {tree.value == root}")


if __name__ == "__main__":
    main()
