"""Brute-force reference semantics for differential testing.

Nothing here touches tries, iterators or the solvers: bodies are matched
tuple by tuple with nested loops, and fixpoints recompute everything each
round. Slow on purpose.
"""
from __future__ import annotations

from typing import Iterable, Mapping

from .syntax import Atom, Program, Var

__all__ = ["nested_loop_join", "naive_eval"]


def _variables(body) -> list:
    seen = []
    for atom in body:
        for arg in atom.args:
            if isinstance(arg, Var) and arg not in seen:
                seen.append(arg)
    return seen


def _solutions(body: list, relations: Mapping, env: dict):
    if not body:
        yield dict(env)
        return
    atom, rest = body[0], body[1:]
    for row in relations.get(atom.pred, ()):
        if len(row) != len(atom.args):
            continue
        added = []
        ok = True
        for arg, value in zip(atom.args, row):
            if isinstance(arg, Var):
                if arg in env:
                    if env[arg] != value:
                        ok = False
                        break
                else:
                    env[arg] = value
                    added.append(arg)
            elif arg != value:
                ok = False
                break
        if ok:
            yield from _solutions(rest, relations, env)
        for arg in added:
            del env[arg]


def nested_loop_join(body: Iterable[Atom], relations: Mapping) -> set:
    """All satisfying bindings of ``body``.

    Each binding is a tuple of values for the body's variables in order of
    first occurrence.
    """
    body = list(body)
    variables = _variables(body)
    return {tuple(env[v] for v in variables) for env in _solutions(body, relations, {})}


def naive_eval(program: Program) -> dict:
    """Least fixpoint by re-firing every rule on everything until nothing is new."""
    relations = {p: set(program.facts.get(p, ())) for p in program.arities}
    while True:
        grown = False
        for rule in program.rules:
            variables = _variables(rule.body)
            for b in nested_loop_join(rule.body, relations):
                env = dict(zip(variables, b))
                row = tuple(env[a] if isinstance(a, Var) else a for a in rule.head.args)
                if row not in relations[rule.head.pred]:
                    relations[rule.head.pred].add(row)
                    grown = True
        if not grown:
            return {p: frozenset(rows) for p, rows in relations.items()}
