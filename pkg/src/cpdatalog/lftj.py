"""Specializations of the generic solver for a single equality class.

:func:`search_tailrec` is the indomain-min solver reduced to a loop;
:func:`leapfrog_join` additionally fuses the equality propagator into the
loop and keeps the circular ordering without ever re-sorting.
"""
from __future__ import annotations

from typing import Iterator, Optional, Sequence

from .cp import AllEqual, allequal, search_generic
from .values import DomainStore, LinearIterator, RaiseEvent, TraceHook

__all__ = ["inc_domain", "search_tailrec", "leapfrog_join", "unary_values", "UNARY_ENGINES"]

UNARY_ENGINES = ("lftj", "tailrec", "generic")


def inc_domain(store: DomainStore, x: int) -> DomainStore:
    """Drop the lower bound of ``x``; other domains are shared unchanged."""
    return store.replace(x, store[x].remove_lower_bound())


def search_tailrec(store: DomainStore, trace: Optional[TraceHook] = None) -> Iterator[tuple]:
    """Enumerate the common values of all domains as bindings, in increasing order.

    Each solution maps every variable to the shared lower bound. No choice
    points are kept: the exclude branch is taken by bumping variable 0.
    """
    n = len(store)
    if n == 0:
        yield ()
        return
    while True:
        store = allequal(store, trace=trace)
        if store.is_false:
            return
        yield (store[0].lower_bound(),) * n
        store = inc_domain(store, 0)


def leapfrog_join(iters: Sequence[LinearIterator], trace: Optional[TraceHook] = None,
                  labels: Optional[Sequence] = None, debug: bool = False) -> Iterator:
    """Yield the keys present in every iterator, in increasing order.

    On each yield all iterators sit on the yielded key, so a caller may
    descend into them (trie ``open``/``up``) before resuming.
    """
    n = len(iters)
    if n == 0:
        raise ValueError("leapfrog_join needs at least one iterator")
    if any(it.at_end() for it in iters):
        return
    if labels is None:
        labels = range(n)
    m = sorted(range(n), key=lambda i: (iters[i].key(), i))
    p_min = 0
    l_max = iters[m[n - 1]].key()
    while True:
        while True:
            if debug:
                _check_circular(iters, m, p_min, l_max)
            x_min = iters[m[p_min]]
            l_min = x_min.key()
            if l_min == l_max:
                break
            x_min.seek(l_max)
            if x_min.at_end():
                if trace is not None:
                    trace(RaiseEvent(labels[m[p_min]], l_min, None, l_max))
                return
            new = x_min.key()
            if trace is not None:
                trace(RaiseEvent(labels[m[p_min]], l_min, new, l_max))
            l_max = new
            p_min = (p_min + 1) % n
        yield l_max
        # The variable at p_min - 1 currently holds l_max; bumping it makes it the
        # new maximum and leaves the circular order intact.
        last = iters[m[p_min - 1]]
        last.next()
        if last.at_end():
            return
        l_max = last.key()


def _check_circular(iters, m, p_min, l_max):
    n = len(m)
    keys = [iters[m[(p_min + k) % n]].key() for k in range(n)]
    assert all(a <= b for a, b in zip(keys, keys[1:])), f"circular order broken: {keys}"
    assert keys[-1] == l_max, f"l_max {l_max!r} is not the last key {keys[-1]!r}"


def unary_values(store: DomainStore, engine: str = "lftj", trace: Optional[TraceHook] = None,
                 stats=None) -> Iterator:
    """Common values of ``store``'s domains via one of the three engines."""
    if engine == "lftj":
        return leapfrog_join([d.iterator(stats) for d in store], trace=trace)
    if engine == "tailrec":
        return (b[0] for b in search_tailrec(store, trace=trace))
    if engine == "generic":
        prop = AllEqual(range(len(store)), trace=trace)
        return (s[0].lower_bound() for s in search_generic((), (prop,), store))
    raise ValueError(f"unknown engine {engine!r}; expected one of {UNARY_ENGINES}")
