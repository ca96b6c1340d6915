"""Values, sorted domains and forward-only linear iterators.

Every engine in the package consumes the same small vocabulary: a totally
ordered :data:`Value` universe (integers before symbols), immutable
:class:`Domain` views over sorted sequences, a :class:`DomainStore` indexed by
variable id, and the :class:`LinearIterator` cursor protocol.
"""
from __future__ import annotations

import os
import re
from bisect import bisect_left
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, NamedTuple, Optional, Sequence, Union

__all__ = [
    "Sym",
    "Value",
    "parse_value",
    "format_value",
    "gallop",
    "EmptyDomainError",
    "Domain",
    "DomainStore",
    "RaiseEvent",
    "IterStats",
    "LinearIterator",
    "ArrayIterator",
]

# Set CPDATALOG_LINEAR_SEEK=1 to replace galloping with a plain scan (debugging aid).
LINEAR_SEEK = os.environ.get("CPDATALOG_LINEAR_SEEK", "") not in ("", "0")

_INT_RE = re.compile(r"[+-]?\d+\Z")


class Sym:
    """Interned symbolic constant.

    Symbols sort after every integer and among themselves by code point
    order of their text, which coincides with byte-wise order of UTF-8.
    """

    __slots__ = ("text", "__weakref__")
    _table: dict = {}

    def __new__(cls, text: str) -> "Sym":
        sym = cls._table.get(text)
        if sym is None:
            sym = object.__new__(cls)
            sym.text = text
            cls._table[text] = sym
        return sym

    def __reduce__(self):
        return (Sym, (self.text,))

    def __eq__(self, other):
        if isinstance(other, Sym):
            return self.text == other.text
        return NotImplemented if not isinstance(other, int) else False

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __hash__(self):
        return hash(("sym", self.text))

    def __lt__(self, other):
        if isinstance(other, Sym):
            return self.text < other.text
        if isinstance(other, int):
            return False
        return NotImplemented

    def __le__(self, other):
        if isinstance(other, Sym):
            return self.text <= other.text
        if isinstance(other, int):
            return False
        return NotImplemented

    def __gt__(self, other):
        if isinstance(other, Sym):
            return self.text > other.text
        if isinstance(other, int):
            return True
        return NotImplemented

    def __ge__(self, other):
        if isinstance(other, Sym):
            return self.text >= other.text
        if isinstance(other, int):
            return True
        return NotImplemented

    def __repr__(self):
        return f"Sym({self.text!r})"

    def __str__(self):
        return self.text


Value = Union[int, Sym]


def parse_value(text: str) -> Value:
    """Integer when the text is fully numeric, otherwise a symbol."""
    if _INT_RE.match(text):
        return int(text)
    return Sym(text)


def format_value(value: Value) -> str:
    return str(value)


def gallop(seq: Sequence, target, lo: int, hi: int) -> int:
    """Least index ``i`` in ``[lo, hi)`` with ``seq[i] >= target``, else ``hi``.

    Doubling probe from ``lo`` followed by a binary search, so the cost is
    logarithmic in the distance skipped rather than in ``hi - lo``.
    """
    if lo >= hi or not seq[lo] < target:
        return lo
    if LINEAR_SEEK:
        lo += 1
        while lo < hi and seq[lo] < target:
            lo += 1
        return lo
    bound = 1
    while lo + bound < hi and seq[lo + bound] < target:
        bound *= 2
    return bisect_left(seq, target, lo + bound // 2 + 1, min(lo + bound, hi))


class EmptyDomainError(ValueError):
    """Raised when a lower bound is requested from an empty domain."""


class Domain:
    """Immutable, strictly increasing set of values.

    A domain is a ``[lo, hi)`` window over a sorted sequence; narrowing it
    never copies the underlying storage, so snapshots are cheap.
    """

    __slots__ = ("_seq", "_lo", "_hi")

    def __init__(self, values: Iterable = ()):
        if isinstance(values, range) and values.step > 0:
            seq = values
        else:
            seq = tuple(sorted(set(values)))
        self._seq = seq
        self._lo = 0
        self._hi = len(seq)

    @classmethod
    def view(cls, seq: Sequence, lo: int = 0, hi: Optional[int] = None) -> "Domain":
        """Wrap an already sorted, duplicate-free sequence without copying."""
        d = object.__new__(cls)
        d._seq = seq
        d._lo = lo
        d._hi = len(seq) if hi is None else hi
        return d

    def _narrow(self, lo: int) -> "Domain":
        return Domain.view(self._seq, lo, self._hi)

    def __len__(self):
        return max(0, self._hi - self._lo)

    def __iter__(self) -> Iterator[Value]:
        seq = self._seq
        for i in range(self._lo, self._hi):
            yield seq[i]

    def __contains__(self, value):
        i = gallop(self._seq, value, self._lo, self._hi)
        return i < self._hi and self._seq[i] == value

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        if self._seq is other._seq and self._lo == other._lo and self._hi == other._hi:
            return True
        return len(self) == len(other) and all(a == b for a, b in zip(self, other))

    def __hash__(self):
        return hash(tuple(self))

    def __repr__(self):
        return "{" + ", ".join(map(str, self)) + "}"

    @property
    def is_empty(self) -> bool:
        return self._lo >= self._hi

    def lower_bound(self) -> Value:
        if self._lo >= self._hi:
            raise EmptyDomainError("lower bound of an empty domain")
        return self._seq[self._lo]

    def raise_lower_bound(self, t) -> "Domain":
        """Drop every element smaller than ``t``."""
        return self._narrow(gallop(self._seq, t, self._lo, self._hi))

    def remove_lower_bound(self) -> "Domain":
        if self._lo >= self._hi:
            raise EmptyDomainError("cannot remove the lower bound of an empty domain")
        return self._narrow(self._lo + 1)

    def assign_lower_bound(self) -> "Domain":
        """Restrict to the singleton holding the current lower bound."""
        if self._lo >= self._hi:
            raise EmptyDomainError("cannot assign from an empty domain")
        return Domain.view(self._seq, self._lo, self._lo + 1)

    def issubset(self, other: "Domain") -> bool:
        return all(v in other for v in self)

    def iterator(self, stats: Optional["IterStats"] = None) -> "ArrayIterator":
        """Destructive cursor view over this (immutable) domain."""
        return ArrayIterator(self._seq, self._lo, self._hi, stats=stats)


class DomainStore:
    """Domains indexed densely by variable id.

    Stores are treated as values by the engines: operations that narrow a
    domain return a new store and leave the receiver untouched.
    """

    __slots__ = ("domains",)

    def __init__(self, domains: Iterable[Domain]):
        self.domains = list(domains)

    @classmethod
    def of(cls, *value_sets: Iterable) -> "DomainStore":
        return cls(v if isinstance(v, Domain) else Domain(v) for v in value_sets)

    def __len__(self):
        return len(self.domains)

    def __getitem__(self, var: int) -> Domain:
        return self.domains[var]

    def __iter__(self):
        return iter(self.domains)

    def __eq__(self, other):
        if not isinstance(other, DomainStore):
            return NotImplemented
        return self.domains == other.domains

    def __repr__(self):
        return f"DomainStore({self.domains!r})"

    def copy(self) -> "DomainStore":
        return DomainStore(self.domains)

    def replace(self, var: int, domain: Domain) -> "DomainStore":
        new = DomainStore(self.domains)
        new.domains[var] = domain
        return new

    @property
    def is_false(self) -> bool:
        return any(d.is_empty for d in self.domains)

    def is_solved(self) -> bool:
        """Non-empty everywhere with one common lower bound."""
        if self.is_false:
            return False
        return len({d.lower_bound() for d in self.domains}) <= 1

    def changed_vars(self, other: "DomainStore") -> set:
        return {x for x, (a, b) in enumerate(zip(self.domains, other.domains)) if a != b}

    def issubset(self, other: "DomainStore") -> bool:
        return all(a.issubset(b) for a, b in zip(self.domains, other.domains))


class RaiseEvent(NamedTuple):
    """One raiseLowerBound (or seek) step: ``new`` is None when the domain emptied."""

    var: object
    old: Value
    new: Optional[Value]
    l_max: Value


TraceHook = Callable[[RaiseEvent], None]


@dataclass
class IterStats:
    seeks: int = 0
    nexts: int = 0


class LinearIterator:
    """Forward-only cursor over a strictly increasing key sequence."""

    def key(self) -> Value:
        raise NotImplementedError

    def at_end(self) -> bool:
        raise NotImplementedError

    def next(self) -> None:
        raise NotImplementedError

    def seek(self, t) -> None:
        """Move to the least key ``>= t`` (or to the end)."""
        raise NotImplementedError


class ArrayIterator(LinearIterator):
    __slots__ = ("_seq", "_pos", "_hi", "stats")

    def __init__(self, seq: Sequence, lo: int = 0, hi: Optional[int] = None, stats: Optional[IterStats] = None):
        self._seq = seq
        self._pos = lo
        self._hi = len(seq) if hi is None else hi
        self.stats = stats

    def key(self):
        if self._pos >= self._hi:
            raise EmptyDomainError("iterator is at end")
        return self._seq[self._pos]

    def at_end(self) -> bool:
        return self._pos >= self._hi

    def next(self) -> None:
        if self.stats is not None:
            self.stats.nexts += 1
        self._pos += 1

    def seek(self, t) -> None:
        if self.stats is not None:
            self.stats.seeks += 1
        pos = self._pos
        assert pos >= self._hi or not t < self._seq[pos], "seek must not move backward"
        self._pos = gallop(self._seq, t, pos, self._hi)

    @property
    def position(self) -> int:
        return self._pos

    def remaining(self) -> Domain:
        return Domain.view(self._seq, self._pos, self._hi)

    def __repr__(self):
        return f"ArrayIterator(pos={self._pos}, hi={self._hi})"
