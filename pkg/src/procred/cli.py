"""Command-line interface: ``procred reduce|verify|stats|normalize|induce|generate``."""
from __future__ import annotations

import json
import logging
import random
import sys
from pathlib import Path

import click

from .automata import Nfa, Sra, as_sra, induced_nfa, normalize_terminals
from .formats import ParseError, parse, print_ba, print_native
from .generators import random_nfa
from .oracle import equivalent, equivalent_bounded, metrics
from .search import SearchConfig, reduce

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

in_option = click.option(
    "--in", "in_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Input automaton."
)
out_option = click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Output file (default: stdout).")
format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["auto", "native", "ba"]),
    default="auto",
    show_default=True,
    help="Format of input files; 'ba' also selects BA output where possible.",
)
json_option = click.option("--json", "as_json", is_flag=True, help="Print a JSON document instead of a table.")


def _load(path, fmt):
    text = Path(path).read_text(encoding="utf-8")
    try:
        return parse(text, fmt)
    except ParseError as exc:
        click.echo(f"{path}: {exc}", err=True)
        sys.exit(EXIT_USAGE)


def _write(a, out_path, fmt, name):
    if fmt == "ba" and (isinstance(a, Nfa) or not a.registers):
        text = print_ba(a)
    else:
        text = print_native(a, name)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _table(rows) -> str:
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows)


@click.group()
@click.option("-v", "--verbose", is_flag=True, help="Log search progress to stderr.")
def main(verbose):
    """Reduce NFAs by folding similar sub-automata into register-guarded procedures."""
    logging.basicConfig(level=logging.INFO if verbose else logging.WARNING, format="%(name)s: %(message)s")


@main.command("reduce")
@in_option
@out_option
@click.option("--depth", default=10, show_default=True, type=click.IntRange(min=0), help="Depth limit d of Gain^d.")
@click.option("--max-iters", type=click.IntRange(min=1), default=None, help="Stop after this many procedures.")
@click.option("--no-postprocess", is_flag=True, help="Skip symbol merging and guard removal.")
@click.option("--budget", default=100_000, show_default=True, type=click.IntRange(min=1),
              help="Node expansions per Gain^d root.")
@click.option("--total-budget", default=50_000_000, show_default=True, type=click.IntRange(min=1),
              help="Expansions for one full scoring pass; lowers the per-root budget on large inputs.")
@format_option
@json_option
def reduce_cmd(in_path, out_path, depth, max_iters, no_postprocess, budget, total_budget, fmt, as_json):
    """Reduce an automaton and write the resulting SRA."""
    a = _load(in_path, fmt)
    cfg = SearchConfig(depth=depth, max_iterations=max_iters, enable_postprocess=not no_postprocess,
                       budget=budget, total_budget=total_budget)
    result, report = reduce(a, cfg)
    if out_path:
        _write(result, out_path, "native", Path(in_path).stem)
    elif not as_json:
        click.echo(print_native(result, Path(in_path).stem), nl=False)
    before, after = metrics(a), metrics(result)
    if as_json:
        doc = report.as_dict()
        doc["metrics"] = {"before": before.as_dict(), "after": after.as_dict()}
        click.echo(json.dumps(doc, indent=2, sort_keys=True))
        return
    rows = [
        ("iterations", len(report.iterations)),
        ("states", f"{before.states} -> {after.states}"),
        ("transitions", f"{before.transitions} -> {after.transitions}"),
        ("registers", f"{report.registers_before_merge} -> {after.registers} after merging"),
        ("states + registers", f"{before.states_plus_registers} -> {after.states_plus_registers}"),
        ("total gain", report.total_gain),
        ("truncated", report.truncated),
        ("seconds", f"{report.duration:.3f}"),
    ]
    click.echo(_table(rows), err=not out_path)


@main.command()
@in_option
@click.option("--against", required=True, type=click.Path(exists=True, dir_okay=False), help="Automaton to compare with.")
@click.option("--bound", type=click.IntRange(min=0), default=None,
              help="Only compare words up to this length (default: exact check, bounded past the subset cap).")
@format_option
@json_option
def verify(in_path, against, bound, fmt, as_json):
    """Check that two automata accept the same language."""
    x, y = _load(in_path, fmt), _load(against, fmt)
    if x.alphabet != y.alphabet:
        # symbols missing from one side simply never fire there
        x, y = _widen(x, y.alphabet), _widen(y, x.alphabet)
    result = equivalent_bounded(x, y, bound) if bound is not None else equivalent(x, y)
    word = None if result.word is None else " ".join(result.word)
    if as_json:
        click.echo(json.dumps({"status": result.status, "counterexample": result.word}))
    elif result.equal:
        click.echo("equal" if bound is None else f"equal on all words up to length {bound}")
    else:
        click.echo(f"counterexample: {word!r}" if word else "counterexample: the empty word")
    sys.exit(EXIT_OK if result.equal else EXIT_MISMATCH)


def _widen(a, alphabet):
    return a if alphabet <= a.alphabet else type(a)(
        **{f: getattr(a, f) for f in a.__dataclass_fields__ if f not in ("alphabet", "serial")},
        alphabet=a.alphabet | alphabet,
    )


@main.command()
@in_option
@format_option
@json_option
def stats(in_path, fmt, as_json):
    """Print size metrics of an automaton."""
    m = metrics(_load(in_path, fmt))
    if as_json:
        click.echo(json.dumps(m.as_dict(), indent=2, sort_keys=True))
    else:
        click.echo(_table(list(m.as_dict().items())))


@main.command("normalize")
@in_option
@out_option
@format_option
def normalize_cmd(in_path, out_path, fmt):
    """Give the automaton a single initial and a single final state."""
    _write(normalize_terminals(_load(in_path, fmt)), out_path, fmt, Path(in_path).stem)


@main.command()
@in_option
@out_option
@format_option
def induce(in_path, out_path, fmt):
    """Export the NFA over reachable configurations of an SRA."""
    a = _load(in_path, fmt)
    _write(induced_nfa(as_sra(a)), out_path, fmt, Path(in_path).stem)


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--states", type=click.IntRange(min=1), default=10, show_default=True)
@click.option("--symbols", type=click.IntRange(min=1, max=26), default=3, show_default=True)
@click.option("--density", type=click.FloatRange(0, 1), default=0.2, show_default=True)
@out_option
@click.option("--format", "fmt", type=click.Choice(["native", "ba"]), default="native", show_default=True)
def generate(seed, states, symbols, density, out_path, fmt):
    """Write a random normalized NFA (test harness helper)."""
    a = random_nfa(states, symbols, density, random.Random(seed))
    _write(a, out_path, fmt, f"random{seed}")


if __name__ == "__main__":  # pragma: no cover
    main()
