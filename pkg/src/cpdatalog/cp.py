"""Generic propagation-and-search constraint solver.

This is the unspecialized starting point: propagators over a
:class:`~cpdatalog.values.DomainStore`, an incremental worklist fixpoint
(:func:`isolv`), depth-first search with choice constraints
(:func:`search_generic`) and the lower-bound equality propagator
(:func:`allequal`) that Datalog joins need.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .values import Domain, DomainStore, EmptyDomainError, RaiseEvent, TraceHook

__all__ = [
    "Propagator",
    "AllEqual",
    "VarMap",
    "sort_varmap",
    "allequal",
    "isolv",
    "new_propagators",
    "ChoiceKind",
    "ChoiceConstraint",
    "split_indomain_min",
    "select_first_unfixed",
    "search_generic",
    "solution_values",
]

_ids = itertools.count()


class Propagator:
    """Decreasing function on domain stores.

    Subclasses override :meth:`apply`. ``deps`` lists the variables the
    propagator reads or narrows; it drives :func:`new_propagators`.
    """

    def __init__(self, deps: Iterable[int], idempotent: bool = False, name: Optional[str] = None):
        self.id = next(_ids)
        self.deps = frozenset(deps)
        self.idempotent = idempotent
        self.name = name or f"{type(self).__name__}#{self.id}"

    def apply(self, store: DomainStore) -> DomainStore:
        raise NotImplementedError

    def __call__(self, store: DomainStore) -> DomainStore:
        return self.apply(store)

    def __repr__(self):
        return f"<{self.name} deps={sorted(self.deps)}>"


class FunctionPropagator(Propagator):
    """Propagator backed by a plain callable; handy in tests."""

    def __init__(self, fn: Callable[[DomainStore], DomainStore], deps, idempotent=False, name=None):
        super().__init__(deps, idempotent, name)
        self.fn = fn

    def apply(self, store):
        return self.fn(store)


@dataclass
class VarMap:
    """Circular ordering of variables by lower bound (positions -> var ids)."""

    slots: list
    start: int = 0

    def __len__(self):
        return len(self.slots)

    def rotation(self) -> list:
        n = len(self.slots)
        return [self.slots[(self.start + k) % n] for k in range(n)]

    def is_circularly_sorted(self, key: Callable[[int], object]) -> bool:
        keys = [key(x) for x in self.rotation()]
        return all(a <= b for a, b in zip(keys, keys[1:]))


def sort_varmap(store: DomainStore, variables: Sequence[int]) -> VarMap:
    """Variables ordered by increasing lower bound; ties broken by var id."""
    return VarMap(sorted(variables, key=lambda x: (store[x].lower_bound(), x)))


def allequal(store: DomainStore, variables: Optional[Sequence[int]] = None,
             trace: Optional[TraceHook] = None) -> DomainStore:
    """Lower-bound propagation for ``x1 = x2 = ... = xn``.

    Raises each lower bound to the running maximum, walking the variables
    circularly in lower-bound order, until every lower bound agrees or some
    domain empties. Only values below the first common value are removed.
    """
    if variables is None:
        variables = range(len(store))
    n = len(variables)
    if n <= 1 or any(store[x].is_empty for x in variables):
        return store
    m = sort_varmap(store, variables).slots
    doms = list(store.domains)
    l_max = doms[m[n - 1]].lower_bound()
    i = 0
    while True:
        x = m[i]
        d = doms[x]
        lb = d.lower_bound()
        if lb == l_max:
            break
        d = d.raise_lower_bound(l_max)
        doms[x] = d
        if d.is_empty:
            if trace is not None:
                trace(RaiseEvent(x, lb, None, l_max))
            break
        new_lb = d.lower_bound()
        if trace is not None:
            trace(RaiseEvent(x, lb, new_lb, l_max))
        l_max = new_lb
        i = (i + 1) % n
    return DomainStore(doms)


class AllEqual(Propagator):
    def __init__(self, variables: Sequence[int], trace: Optional[TraceHook] = None):
        super().__init__(variables, idempotent=True, name=f"allequal{tuple(variables)}")
        self.variables = tuple(variables)
        self.trace = trace

    def apply(self, store):
        return allequal(store, self.variables, self.trace)


def new_propagators(f: Propagator, F: Iterable[Propagator], before: DomainStore,
                    after: DomainStore) -> list:
    """Propagators of ``F`` that read a variable ``f`` just narrowed.

    An idempotent ``f`` is left out: ``after`` is already its fixpoint.
    """
    changed = before.changed_vars(after)
    return [g for g in F if g.deps & changed and not (g is f and f.idempotent)]


def isolv(F_old: Iterable[Propagator], F_new: Iterable[Propagator], store: DomainStore,
          new: Callable = new_propagators) -> DomainStore:
    """Propagate to a common fixpoint of ``F_old`` and ``F_new``.

    ``store`` must already be a fixpoint of every propagator in ``F_old``.
    The worklist is FIFO and never holds a propagator twice.
    """
    F = list(dict.fromkeys(itertools.chain(F_old, F_new)))
    queue = deque(dict.fromkeys(F_new))
    queued = set(queue)
    while queue and not store.is_false:
        f = queue.popleft()
        queued.discard(f)
        narrowed = f(store)
        if narrowed != store:
            for g in new(f, F, store, narrowed):
                if g not in queued:
                    queue.append(g)
                    queued.add(g)
        store = narrowed
    return store


class ChoiceKind(enum.Enum):
    ASSIGN_LOWER_BOUND = "="
    EXCLUDE_LOWER_BOUND = ">"


@dataclass(frozen=True)
class ChoiceConstraint:
    var: int
    kind: ChoiceKind
    pivot: object

    def apply(self, store: DomainStore) -> DomainStore:
        # Domain surgery stands in for posting a propagator for the choice.
        d = store[self.var]
        if self.kind is ChoiceKind.ASSIGN_LOWER_BOUND:
            d = d.raise_lower_bound(self.pivot)
            if d.is_empty or d.lower_bound() != self.pivot:
                return store.replace(self.var, Domain())
            return store.replace(self.var, d.assign_lower_bound())
        d = d.raise_lower_bound(self.pivot)
        if not d.is_empty and d.lower_bound() == self.pivot:
            d = d.remove_lower_bound()
        return store.replace(self.var, d)

    def __str__(self):
        return f"x{self.var} {self.kind.value} {self.pivot}"


def split_indomain_min(store: DomainStore, x: int) -> tuple:
    """``(x = lb, x > lb)`` for the current lower bound ``lb`` of ``x``."""
    lb = store[x].lower_bound()
    return (ChoiceConstraint(x, ChoiceKind.ASSIGN_LOWER_BOUND, lb),
            ChoiceConstraint(x, ChoiceKind.EXCLUDE_LOWER_BOUND, lb))


def select_first_unfixed(store: DomainStore) -> Optional[int]:
    for x, d in enumerate(store.domains):
        if len(d) > 1:
            return x
    return None


def search_generic(F_old: Iterable[Propagator], F_new: Iterable[Propagator], store: DomainStore,
                   select: Callable[[DomainStore], Optional[int]] = select_first_unfixed,
                   split: Callable = split_indomain_min) -> Iterator[DomainStore]:
    """Depth-first propagate-and-branch search yielding solved stores.

    A store is solved once propagation leaves every domain a singleton.
    Branches are explored left to right, each starting from its own
    snapshot of the parent store. The recursion is driven by an explicit
    stack so deep searches do not hit the interpreter's recursion limit.
    """
    stack = [(tuple(F_old), tuple(F_new), store)]
    while stack:
        f_old, f_new, d = stack.pop()
        d = isolv(f_old, f_new, d)
        if d.is_false:
            continue
        x = select(d)
        if x is None:
            yield d
            continue
        F = tuple(dict.fromkeys(f_old + f_new))
        for choice in reversed(split(d, x)):
            woken = tuple(g for g in F if choice.var in g.deps)
            stack.append((F, woken, choice.apply(d)))


def solution_values(store: DomainStore) -> tuple:
    """The assignment a solved store denotes: every variable at its lower bound."""
    try:
        return tuple(d.lower_bound() for d in store.domains)
    except EmptyDomainError:
        raise ValueError("a false domain has no solution") from None
