"""Flattened sorted tries and trie iterators."""
from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable, Iterator, Optional, Sequence

from .values import ArrayIterator, Domain, IterStats, LinearIterator

__all__ = ["TrieRelation", "build_trie", "TrieIterator", "Catalog"]


class TrieRelation:
    """An n-ary relation stored level by level.

    ``keys[d]`` holds the keys of every depth-``d`` node, grouped by parent
    and sorted within each group. The children of node ``i`` at depth ``d``
    occupy ``keys[d + 1][starts[d][i]:starts[d][i + 1]]``.
    """

    def __init__(self, name: str, arity: int, perm: tuple, keys: list, starts: list, size: int):
        self.name = name
        self.arity = arity
        self.perm = perm
        self.keys = keys
        self.starts = starts
        self.size = size

    def __len__(self):
        return self.size

    def __repr__(self):
        return f"TrieRelation({self.name!r}/{self.arity}, perm={self.perm}, size={self.size})"

    def tuples(self) -> Iterator[tuple]:
        """All stored (permuted) tuples in lexicographic order."""
        if self.arity == 0:
            if self.size:
                yield ()
            return
        prefix = [None] * self.arity

        def walk(d, lo, hi):
            for i in range(lo, hi):
                prefix[d] = self.keys[d][i]
                if d == self.arity - 1:
                    yield tuple(prefix)
                else:
                    yield from walk(d + 1, self.starts[d][i], self.starts[d][i + 1])

        yield from walk(0, 0, len(self.keys[0]))

    def iterator(self, stats: Optional[IterStats] = None) -> "TrieIterator":
        return TrieIterator(self, stats)


def build_trie(tuples: Iterable[tuple], perm: Optional[Sequence[int]] = None,
               name: str = "", arity: Optional[int] = None) -> TrieRelation:
    """Build a trie over ``tuples`` with columns reordered by ``perm``.

    Level ``d`` of the trie holds column ``perm[d]`` of the input tuples.
    Duplicates collapse. ``arity`` is only needed for an empty input.
    """
    rows = set(tuples)
    arities = {len(t) for t in rows}
    if len(arities) > 1:
        raise ValueError(f"mixed arities {sorted(arities)} in relation {name!r}")
    if arities:
        (found,) = arities
        if arity is not None and arity != found:
            raise ValueError(f"relation {name!r} expects arity {arity}, got {found}")
        arity = found
    elif arity is None:
        arity = len(perm) if perm is not None else 0
    perm = tuple(range(arity)) if perm is None else tuple(perm)
    if sorted(perm) != list(range(arity)):
        raise ValueError(f"{perm} is not a permutation of 0..{arity - 1}")

    keys = [[] for _ in range(arity)]
    starts = [[] for _ in range(max(arity - 1, 0))]
    prev = None
    for row in sorted(tuple(t[c] for c in perm) for t in rows):
        first = 0
        if prev is not None:
            while row[first] == prev[first]:
                first += 1
        for d in range(first, arity):
            if d < arity - 1:
                starts[d].append(len(keys[d + 1]))
            keys[d].append(row[d])
        prev = row
    for d in range(arity - 1):
        starts[d].append(len(keys[d + 1]))
    return TrieRelation(name, arity, perm, keys, starts, len(rows))


class TrieIterator(LinearIterator):
    """Cursor over a :class:`TrieRelation` with ``open``/``up`` navigation.

    Each open level is an :class:`ArrayIterator` on a stack, so ``up``
    returns to exactly the key the parent level held before ``open``.
    """

    def __init__(self, relation: TrieRelation, stats: Optional[IterStats] = None):
        self.relation = relation
        self.stats = stats
        self._stack: list = []

    @property
    def depth(self) -> int:
        return len(self._stack) - 1

    def open(self) -> None:
        rel = self.relation
        d = self.depth
        if d >= rel.arity - 1:
            raise IndexError(f"cannot open below depth {d} of a {rel.arity}-ary trie")
        if d < 0:
            lo, hi = 0, len(rel.keys[0])
        else:
            top = self._stack[-1]
            if top.at_end():
                raise IndexError("cannot open an iterator that is at end")
            i = top.position
            lo, hi = rel.starts[d][i], rel.starts[d][i + 1]
        self._stack.append(ArrayIterator(rel.keys[d + 1], lo, hi, self.stats))

    def up(self) -> None:
        if not self._stack:
            raise IndexError("already at the root")
        self._stack.pop()

    def level_iter(self) -> ArrayIterator:
        if not self._stack:
            raise IndexError("no level is open at the root")
        return self._stack[-1]

    def key(self):
        return self._stack[-1].key()

    def at_end(self) -> bool:
        return self._stack[-1].at_end()

    def next(self) -> None:
        self._stack[-1].next()

    def seek(self, t) -> None:
        self._stack[-1].seek(t)

    def remaining(self) -> Domain:
        return self._stack[-1].remaining()


class Catalog(Mapping):
    """Named relations (frozen tuple sets) with a cache of tries per permutation."""

    def __init__(self, relations: Optional[Mapping] = None, arities: Optional[Mapping] = None):
        self._relations = {}
        self._arities = dict(arities or {})
        self._tries: dict = {}
        for name, rows in (relations or {}).items():
            rows = frozenset(rows)
            self._relations[name] = rows
            if name not in self._arities:
                self._arities[name] = _arity_of(name, rows)
        for name in self._arities:
            self._relations.setdefault(name, frozenset())

    def __getitem__(self, name):
        return self._relations[name]

    def __iter__(self):
        return iter(self._relations)

    def __len__(self):
        return len(self._relations)

    def __repr__(self):
        body = ", ".join(f"{n}/{self._arities[n]}:{len(r)}" for n, r in sorted(self._relations.items()))
        return f"Catalog({body})"

    def arity(self, name: str) -> int:
        return self._arities[name]

    @property
    def arities(self) -> dict:
        return dict(self._arities)

    def trie(self, name: str, perm: Optional[Sequence[int]] = None) -> TrieRelation:
        arity = self._arities[name]
        perm = tuple(range(arity)) if perm is None else tuple(perm)
        key = (name, perm)
        trie = self._tries.get(key)
        if trie is None:
            trie = build_trie(self._relations[name], perm, name=name, arity=arity)
            self._tries[key] = trie
        return trie

    def with_relations(self, updates: Mapping, arities: Optional[Mapping] = None) -> "Catalog":
        """New catalog with ``updates`` replacing or adding relations.

        Cached tries of untouched relations are carried over.
        """
        merged_arities = {**self._arities, **(arities or {})}
        merged = {**self._relations, **updates}
        for name, rows in updates.items():
            if name not in merged_arities:
                merged_arities[name] = _arity_of(name, rows)
        new = Catalog(merged, merged_arities)
        new._tries = {k: t for k, t in self._tries.items() if k[0] not in updates}
        return new

    def as_sets(self) -> dict:
        return dict(self._relations)


def _arity_of(name, rows) -> int:
    arities = {len(t) for t in rows}
    if len(arities) != 1:
        raise ValueError(f"cannot infer a single arity for relation {name!r}")
    return arities.pop()
