"""Semi-naive bottom-up evaluation on top of the trie join."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Optional

from .join import execute, plan
from .syntax import Atom, Program, Rule, Var, body_variables
from .trie import Catalog
from .values import TraceHook

__all__ = ["EvalStats", "edb_catalog", "derive", "evaluate_seminaive"]

log = logging.getLogger(__name__)

DELTA_SUFFIX = "#delta"


@dataclass
class EvalStats:
    rounds: int = 0
    derived: int = 0


def edb_catalog(program: Program) -> Catalog:
    return Catalog({p: program.facts.get(p, ()) for p in program.arities}, program.arities)


def derive(head: Atom, body: Iterable[Atom], store: Catalog, engine: str = "lftj",
           trace: Optional[TraceHook] = None) -> set:
    """Head tuples produced by every solution of ``body`` over ``store``."""
    jp = plan(body, store)
    rank = {v: r for r, v in enumerate(body_variables(jp.body))}
    getters = [(True, rank[a]) if isinstance(a, Var) else (False, a) for a in head.args]
    out = set()
    for b in execute(jp, store, engine=engine, trace=trace):
        out.add(tuple(b[x] if is_var else x for is_var, x in getters))
    return out


def _delta_variants(rule: Rule, idb: set):
    for i, atom in enumerate(rule.body):
        if atom.pred in idb:
            body = list(rule.body)
            body[i] = Atom(atom.pred + DELTA_SUFFIX, atom.args, atom.line, atom.column)
            yield atom.pred, body


def evaluate_seminaive(program: Program, engine: str = "lftj", trace: Optional[TraceHook] = None,
                       stats: Optional[EvalStats] = None) -> Catalog:
    """Least fixpoint of ``program``'s rules over its facts.

    The first round fires every rule against the facts. Later rounds fire,
    for each rule, one variant per intensional body atom with that atom
    reading only the facts derived in the previous round.
    """
    stats = stats if stats is not None else EvalStats()
    idb = program.idb_predicates()
    total = {p: set(program.facts.get(p, ())) for p in program.arities}
    store = edb_catalog(program)

    delta = {p: set() for p in idb}
    for rule in program.rules:
        for t in derive(rule.head, rule.body, store, engine, trace):
            if t not in total[rule.head.pred]:
                delta[rule.head.pred].add(t)
    stats.rounds = 1

    while any(delta.values()):
        for p, rows in delta.items():
            total[p] |= rows
            stats.derived += len(rows)
        log.debug("round %d: %d new facts", stats.rounds, sum(map(len, delta.values())))
        updates = {p: frozenset(total[p]) for p in idb}
        updates.update({p + DELTA_SUFFIX: frozenset(rows) for p, rows in delta.items()})
        store = store.with_relations(
            updates, {p + DELTA_SUFFIX: program.arities[p] for p in idb})
        new = {p: set() for p in idb}
        for rule in program.rules:
            for pred, body in _delta_variants(rule, idb):
                if not delta[pred]:
                    continue
                for t in derive(rule.head, body, store, engine, trace):
                    if t not in total[rule.head.pred]:
                        new[rule.head.pred].add(t)
        delta = new
        stats.rounds += 1

    return Catalog({p: total[p] for p in program.arities}, program.arities)
