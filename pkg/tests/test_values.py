import pickle

import pytest
from hypothesis import given, strategies as st

from cpdatalog import values
from cpdatalog.trie import build_trie
from cpdatalog.values import (
    ArrayIterator, Domain, DomainStore, EmptyDomainError, IterStats, Sym, gallop, parse_value,
)

value_st = st.one_of(st.integers(-50, 50), st.text(max_size=3).map(Sym))
domain_st = st.lists(st.integers(0, 40), max_size=25).map(Domain)


def test_sym_interning_and_equality():
    assert Sym("abc") is Sym("abc")
    assert Sym("abc") == Sym("abc")
    assert Sym("a") != Sym("b")
    assert Sym("a") != 1 and 1 != Sym("a")
    assert pickle.loads(pickle.dumps(Sym("x"))) is Sym("x")
    assert len({Sym("a"), Sym("a"), 1}) == 2


def test_ints_precede_symbols():
    assert 10**9 < Sym("")
    assert Sym("a") > -5
    assert sorted([Sym("b"), 3, Sym("a"), -1]) == [-1, 3, Sym("a"), Sym("b")]


def test_symbol_order_is_bytewise():
    words = ["b", "B", "é", "a", "ab", "", "zÿ", "中"]
    assert [s.text for s in sorted(map(Sym, words))] == sorted(words, key=lambda w: w.encode())


@given(value_st, value_st, value_st)
def test_value_order_is_strict_total(x, y, z):
    assert sum([x < y, x == y, y < x]) == 1
    if x < y and y < z:
        assert x < z
    if x <= y and y <= x:
        assert x == y


def test_parse_value():
    assert parse_value("42") == 42
    assert parse_value("-7") == -7
    assert parse_value("4x") == Sym("4x")
    assert parse_value("abc") is Sym("abc")


def test_lower_bound_examples():
    assert Domain([3, 4, 7, 10]).lower_bound() == 3
    assert Domain([5]).lower_bound() == 5
    assert Domain([1, 4, 7, 10, 11]).lower_bound() == 1
    with pytest.raises(EmptyDomainError):
        Domain().lower_bound()


def test_raise_lower_bound_examples():
    assert list(Domain([1, 2, 3, 4, 9, 10, 11]).raise_lower_bound(3)) == [3, 4, 9, 10, 11]
    assert list(Domain([1, 4, 7, 10, 11]).raise_lower_bound(4)) == [4, 7, 10, 11]
    assert Domain([1, 3]).raise_lower_bound(5).is_empty


def test_remove_lower_bound_examples():
    assert list(Domain([4, 9, 10, 11]).remove_lower_bound()) == [9, 10, 11]
    assert Domain([5]).remove_lower_bound().is_empty
    assert list(Domain([4, 7, 10]).remove_lower_bound()) == [7, 10]
    with pytest.raises(EmptyDomainError):
        Domain().remove_lower_bound()


def test_domain_normalizes_and_snapshots_are_independent():
    d = Domain([3, 1, 3, 2])
    assert list(d) == [1, 2, 3]
    e = d.raise_lower_bound(2)
    assert list(d) == [1, 2, 3] and list(e) == [2, 3]


def test_domain_over_range_does_not_materialize():
    d = Domain(range(1, 10**9))
    assert d.raise_lower_bound(10**8).lower_bound() == 10**8
    assert len(d) == 10**9 - 1


@given(domain_st, st.integers(-5, 45))
def test_raise_lower_bound_is_a_filter(d, t):
    assert list(d.raise_lower_bound(t)) == [v for v in d if v >= t]


@given(domain_st, st.integers(-5, 45))
def test_raise_lower_bound_idempotent(d, t):
    assert d.raise_lower_bound(t).raise_lower_bound(t) == d.raise_lower_bound(t)


@given(st.lists(st.integers(0, 100), max_size=60, unique=True).map(sorted), st.integers(-5, 105), st.data())
def test_gallop_matches_scan(seq, target, data):
    lo = data.draw(st.integers(0, len(seq)))
    expected = next((i for i in range(lo, len(seq)) if seq[i] >= target), len(seq))
    assert gallop(seq, target, lo, len(seq)) == expected


def test_linear_seek_fallback(monkeypatch):
    monkeypatch.setattr(values, "LINEAR_SEEK", True)
    seq = list(range(0, 100, 3))
    assert gallop(seq, 50, 0, len(seq)) == 17
    assert gallop(seq, 500, 0, len(seq)) == len(seq)


def test_store_is_false_and_solved():
    assert DomainStore.of([1], [], [2]).is_false
    assert not DomainStore.of([1], [2]).is_false
    assert DomainStore.of([4, 5], [4]).is_solved()
    assert not DomainStore.of([4, 5], [3, 4]).is_solved()


def test_store_replace_leaves_original():
    s = DomainStore.of([1, 2], [3])
    t = s.replace(0, Domain([2]))
    assert list(s[0]) == [1, 2] and list(t[0]) == [2]
    assert s.changed_vars(t) == {0}


# Shared conformance suite for every LinearIterator implementation.

def _array_iter(keys):
    return Domain(keys).iterator()


def _trie_level_iter(keys):
    it = build_trie({(k, 0) for k in keys}, arity=2).iterator()
    it.open()
    return it.level_iter()


def _trie_iter(keys):
    it = build_trie({(k,) for k in keys}, arity=1).iterator()
    it.open()
    return it


ITERATORS = [_array_iter, _trie_level_iter, _trie_iter]


@pytest.mark.parametrize("make", ITERATORS)
def test_iterator_examples(make):
    it = make([1, 4, 7, 10, 11])
    assert it.key() == 1
    it.seek(4)
    assert it.key() == 4
    it.seek(4)
    assert it.key() == 4
    it.next()
    assert it.key() == 7
    it.seek(12)
    assert it.at_end()


@pytest.mark.parametrize("make", ITERATORS)
@pytest.mark.parametrize("k", [1, 5, 64])
def test_seek_past_end(make, k):
    it = make(list(range(1, k + 1)))
    it.seek(k + 1)
    assert it.at_end()


@pytest.mark.parametrize("make", ITERATORS)
@given(keys=st.lists(st.integers(0, 60), unique=True, max_size=30),
       ops=st.lists(st.one_of(st.none(), st.integers(0, 65)), max_size=20))
def test_iterator_matches_domain_model(make, keys, ops):
    it = make(keys)
    model = Domain(keys)
    for op in ops:
        if model.is_empty:
            assert it.at_end()
            break
        assert it.key() == model.lower_bound()
        if op is None:
            it.next()
            model = model.remove_lower_bound()
        else:
            target = max(op, model.lower_bound())
            it.seek(target)
            model = model.raise_lower_bound(target)
    assert it.at_end() == model.is_empty


@given(domain_st, st.integers(-5, 45))
def test_seek_agrees_with_raise_lower_bound(d, t):
    it = d.iterator()
    if not it.at_end():
        it.seek(max(t, it.key()))
    raised = d.raise_lower_bound(t)
    assert it.at_end() == raised.is_empty
    if not raised.is_empty:
        assert it.key() == raised.lower_bound()


def test_backward_seek_is_rejected():
    it = Domain([1, 5, 9]).iterator()
    it.seek(5)
    with pytest.raises(AssertionError):
        it.seek(1)


def test_stats_count_operations():
    stats = IterStats()
    it = ArrayIterator(range(100), stats=stats)
    it.seek(50)
    it.next()
    assert (stats.seeks, stats.nexts) == (1, 1)
