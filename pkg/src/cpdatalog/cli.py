"""Command line entry point.

    cpdatalog run --program FILE [--facts FILE:REL]... [--query 'ATOMS']
                  [--engine lftj|generic|naive] [--trace] [--explain]
"""
from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional, TextIO

from .evaluate import edb_catalog, evaluate_seminaive
from .join import JoinError, execute, plan
from .oracle import naive_eval, nested_loop_join
from .syntax import DatalogError, Program, body_variables, load_csv_facts, parse_program, parse_query
from .trie import Catalog
from .values import format_value

ENGINES = ("lftj", "generic", "naive")


@dataclass
class RunConfig:
    program: Optional[str] = None
    facts: list = field(default_factory=list)  # (csv path, relation name)
    engine: str = "lftj"
    query: Optional[str] = None
    trace: bool = False
    explain: bool = False


def _block(name: str, arity: int, rows) -> list:
    lines = [f"% {name}/{arity}"]
    for row in sorted(rows):
        lines.append("\t".join(format_value(v) for v in row))
    return lines


def _load(cfg: RunConfig) -> Program:
    text = ""
    if cfg.program is not None:
        with open(cfg.program, encoding="utf-8") as fh:
            text = fh.read()
    program = parse_program(text)
    for path, rel in cfg.facts:
        rows = load_csv_facts(path)
        try:
            program.add_facts(rel, rows)
        except DatalogError as exc:
            raise DatalogError(f"{path}: {exc.message}") from None
    return program


def _trace_line(event) -> str:
    new = "END" if event.new is None else format_value(event.new)
    return f"raise\t{event.var}\t{format_value(event.old)}\t{new}\t{format_value(event.l_max)}"


def run(cfg: RunConfig, out: TextIO, err: TextIO) -> int:
    """Evaluate per ``cfg``, writing results to ``out``; returns the exit status."""
    if cfg.engine not in ENGINES:
        print(f"error: unknown engine {cfg.engine!r}", file=err)
        return 1
    events = []
    trace = events.append if cfg.trace else None
    lines = []
    try:
        program = _load(cfg)
        body = parse_query(cfg.query) if cfg.query is not None else None

        if cfg.engine == "naive":
            catalog = Catalog(naive_eval(program), program.arities)
        else:
            catalog = evaluate_seminaive(program, engine=cfg.engine, trace=trace)

        if cfg.explain:
            plans = [(str(r), r.body) for r in program.rules]
            if body is not None:
                plans.append(("?- " + ", ".join(map(str, body)) + ".", body))
            for title, atoms in plans:
                lines.append(f"% plan {title}")
                lines.extend("%   " + line for line in plan(atoms, catalog).explain().splitlines())

        if body is None:
            for name in sorted(catalog):
                lines.extend(_block(name, catalog.arity(name), catalog[name]))
        else:
            n = len(body_variables(body))
            if cfg.engine == "naive":
                for atom in body:
                    if atom.pred not in catalog:
                        raise JoinError(f"unknown predicate {atom.pred}")
                    if catalog.arity(atom.pred) != atom.arity:
                        raise JoinError(f"{atom.pred} has arity {catalog.arity(atom.pred)}, used with {atom.arity}")
                rows = nested_loop_join(body, catalog)
            else:
                rows = set(execute(plan(body, catalog), catalog, engine=cfg.engine, trace=trace))
            lines.extend(_block("query", n, rows))
    except OSError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except (DatalogError, JoinError) as exc:
        print(f"error: {exc}", file=err)
        return 1

    if cfg.trace:
        lines.append("% trace")
        lines.extend(_trace_line(e) for e in events)
    if lines:
        out.write("\n".join(lines) + "\n")
    return 0


def _facts_arg(text: str):
    path, sep, rel = text.rpartition(":")
    if not sep or not path or not rel:
        raise argparse.ArgumentTypeError(f"expected FILE:REL, got {text!r}")
    return path, rel


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpdatalog", description="Datalog with a Leapfrog Triejoin core")
    sub = parser.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="evaluate a program and print relations or a query")
    r.add_argument("--program", metavar="FILE")
    r.add_argument("--facts", metavar="FILE:REL", type=_facts_arg, action="append", default=[])
    r.add_argument("--query", metavar="ATOMS")
    r.add_argument("--engine", choices=ENGINES, default="lftj")
    r.add_argument("--trace", action="store_true", help="print the raiseLowerBound event log")
    r.add_argument("--explain", action="store_true", help="print join plans")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(program=args.program, facts=args.facts, engine=args.engine,
                    query=args.query, trace=args.trace, explain=args.explain)
    return run(cfg, sys.stdout, sys.stderr)


if __name__ == "__main__":
    sys.exit(main())
