"""Multiway joins as nested unary leapfrogs, one per equality class.

Variables are ordered by first occurrence in the body. Each atom reads a
trie whose levels follow that order (constants first), so binding the
classes one after another only ever opens the next level of each trie.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Sequence

from .cp import AllEqual, search_generic
from .lftj import UNARY_ENGINES, leapfrog_join, search_tailrec
from .syntax import Atom, Var, body_variables
from .trie import Catalog, TrieIterator
from .values import DomainStore, RaiseEvent, TraceHook

__all__ = ["JoinError", "Occurrence", "EqClass", "AtomPlan", "JoinPlan", "plan", "execute"]


class JoinError(ValueError):
    pass


@dataclass(frozen=True)
class Occurrence:
    atom: int
    position: int


@dataclass(frozen=True)
class EqClass:
    rank: int
    name: str
    occurrences: tuple


@dataclass(frozen=True)
class AtomPlan:
    """How one body atom is read.

    ``levels`` follows the trie order ``perm``; each entry is
    ``("const", value)``, ``("var", rank)`` for the level that joins the
    class, or ``("check", rank)`` for a repeated variable verified by seek.
    """

    index: int
    atom: Atom
    perm: tuple
    levels: tuple

    @property
    def n_consts(self) -> int:
        return sum(1 for kind, _ in self.levels if kind == "const")


@dataclass(frozen=True)
class JoinPlan:
    body: tuple
    classes: tuple
    atoms: tuple
    participants: tuple  # per rank: ((atom index, checks after the var level), ...)
    groups: tuple        # connected components of classes, as tuples of ranks

    @property
    def variables(self) -> list:
        return [c.name for c in self.classes]

    def explain(self) -> str:
        lines = []
        for ap in self.atoms:
            consts = [v for kind, v in ap.levels if kind == "const"]
            extra = f" consts={','.join(map(str, consts))}" if consts else ""
            lines.append(f"atom {ap.index} {ap.atom} perm={list(ap.perm)}{extra}")
        for cls in self.classes:
            members = " ".join(f"{self.body[o.atom].pred}[{o.atom}].{o.position}" for o in cls.occurrences)
            iters = ", ".join(f"{self.body[a].pred}[{a}]" for a, _ in self.participants[cls.rank])
            lines.append(f"class {cls.rank} {cls.name}: {members} | leapfrog: {iters}")
        if len(self.groups) > 1:
            groups = " x ".join("{" + ",".join(self.classes[r].name for r in g) + "}" for g in self.groups)
            lines.append(f"groups: {groups}")
        return "\n".join(lines)


def plan(body: Sequence[Atom], store: Catalog) -> JoinPlan:
    body = tuple(body)
    for atom in body:
        if atom.pred not in store:
            raise JoinError(f"unknown predicate {atom.pred}")
        if store.arity(atom.pred) != atom.arity:
            raise JoinError(f"{atom.pred} has arity {store.arity(atom.pred)}, used with {atom.arity}")

    variables = body_variables(body)
    rank = {v: r for r, v in enumerate(variables)}
    occurrences = {v: [] for v in variables}
    atoms = []
    participants = [[] for _ in variables]
    for i, atom in enumerate(body):
        for pos, arg in enumerate(atom.args):
            if isinstance(arg, Var):
                occurrences[arg].append(Occurrence(i, pos))
        order = sorted(range(atom.arity),
                       key=lambda p: (rank[atom.args[p]], p) if isinstance(atom.args[p], Var) else (-1, p))
        levels = []
        seen = set()
        for p in order:
            arg = atom.args[p]
            if not isinstance(arg, Var):
                levels.append(("const", arg))
            elif arg in seen:
                levels.append(("check", rank[arg]))
                participants[rank[arg]][-1][1] += 1
            else:
                seen.add(arg)
                levels.append(("var", rank[arg]))
                participants[rank[arg]].append([i, 0])
        atoms.append(AtomPlan(i, atom, tuple(order), tuple(levels)))

    classes = tuple(EqClass(rank[v], v.name if not v.name.startswith("_#") else "_", tuple(occurrences[v]))
                    for v in variables)
    return JoinPlan(body, classes, tuple(atoms),
                    tuple(tuple(map(tuple, ps)) for ps in participants),
                    _groups(body, rank))


def _groups(body, rank) -> tuple:
    parent = list(range(len(rank)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for atom in body:
        ranks = [rank[v] for v in atom.variables()]
        for r in ranks[1:]:
            a, b = find(ranks[0]), find(r)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = {}
    for r in range(len(rank)):
        groups.setdefault(find(r), []).append(r)
    return tuple(tuple(g) for g in groups.values())


def _seek_to(it, value) -> bool:
    if not it.at_end() and it.key() < value:
        it.seek(value)
    return not it.at_end() and it.key() == value


def _unary(iters: list, engine: str, trace: Optional[TraceHook], labels: list) -> Iterator:
    """Common keys of ``iters``; every iterator sits on the key when it is yielded."""
    if engine == "lftj":
        yield from leapfrog_join(iters, trace=trace, labels=labels)
        return
    if any(it.at_end() for it in iters):
        return
    hook = None
    if trace is not None:
        def hook(event):
            trace(event._replace(var=labels[event.var]))
    store = DomainStore(it.remaining() for it in iters)
    if engine == "tailrec":
        values = (b[0] for b in search_tailrec(store, trace=hook))
    elif engine == "generic":
        prop = AllEqual(range(len(iters)), trace=hook)
        values = (s[0].lower_bound() for s in search_generic((), (prop,), store))
    else:
        raise ValueError(f"unknown engine {engine!r}; expected one of {UNARY_ENGINES}")
    for v in values:
        for it in iters:
            if not _seek_to(it, v):
                raise AssertionError(f"engine {engine} produced {v!r} absent from an input")
        yield v


def execute(jp: JoinPlan, store: Catalog, engine: str = "lftj",
            trace: Optional[TraceHook] = None, stats=None) -> Iterator[tuple]:
    """Yield every binding (one value per class, in rank order) satisfying the body.

    Bindings come out in lexicographic order of the class ranks.
    """
    iters = []
    for ap in jp.atoms:
        if ap.atom.arity == 0:
            if not store[ap.atom.pred]:
                return
            iters.append(None)
            continue
        it = TrieIterator(store.trie(ap.atom.pred, ap.perm), stats)
        for kind, value in ap.levels[:ap.n_consts]:
            it.open()
            if not _seek_to(it, value):
                return
        iters.append(it)

    n = len(jp.classes)
    binding = [None] * n
    labels = [[f"{c.name}@{jp.body[a].pred}[{a}]" for a, _ in jp.participants[c.rank]] for c in jp.classes]

    def descend(r):
        if r == n:
            yield tuple(binding)
            return
        parts = jp.participants[r]
        level = [iters[a] for a, _ in parts]
        for it in level:
            it.open()
        for v in _unary(level, engine, trace, labels[r]):
            binding[r] = v
            opened = []
            ok = True
            for (a, checks), it in zip(parts, level):
                for _ in range(checks):
                    it.open()
                    opened.append(it)
                    if not _seek_to(it, v):
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield from descend(r + 1)
            for it in reversed(opened):
                it.up()
        for it in level:
            it.up()

    yield from descend(0)


def join(body: Sequence[Atom], store: Catalog, engine: str = "lftj",
         trace: Optional[TraceHook] = None) -> Iterator[tuple]:
    """Plan and execute ``body`` in one step."""
    return execute(plan(body, store), store, engine=engine, trace=trace)
