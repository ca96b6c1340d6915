import pytest
from hypothesis import given, strategies as st

from conftest import X_DOM, Y_DOM, Z_DOM
from cpdatalog.cp import AllEqual, search_generic
from cpdatalog.lftj import inc_domain, leapfrog_join, search_tailrec, unary_values
from cpdatalog.values import Domain, DomainStore, EmptyDomainError, IterStats, LinearIterator, Sym

domains_st = st.lists(st.lists(st.integers(0, 30), max_size=20), min_size=1, max_size=4)


class ForwardOnly(LinearIterator):
    """Wraps an iterator and asserts every seek target is >= the current key."""

    def __init__(self, inner):
        self.inner = inner

    def key(self):
        return self.inner.key()

    def at_end(self):
        return self.inner.at_end()

    def next(self):
        self.inner.next()

    def seek(self, t):
        assert t >= self.inner.key()
        self.inner.seek(t)


def test_inc_domain_examples():
    s = DomainStore.of([4, 9, 10, 11], [4, 7, 10], [4, 7, 10, 11])
    out = inc_domain(s, 0)
    assert list(out[0]) == [9, 10, 11]
    assert out[1] is s[1] and out[2] is s[2]
    assert inc_domain(DomainStore.of([5]), 0).is_false
    with pytest.raises(EmptyDomainError):
        inc_domain(DomainStore.of([]), 0)


def test_search_tailrec_worked_example(xyz_store):
    assert list(search_tailrec(xyz_store)) == [(4, 4, 4), (10, 10, 10)]


def test_search_tailrec_small_cases():
    assert list(search_tailrec(DomainStore.of([1, 2]))) == [(1,), (2,)]
    assert list(search_tailrec(DomainStore([]))) == [()]


def test_search_tailrec_disjoint_ranges_single_pass():
    k = 1000
    events = []
    assert list(search_tailrec(DomainStore.of(range(1, k + 1), range(k + 1, 2 * k + 1)),
                               trace=events.append)) == []
    assert len(events) == 1


def test_leapfrog_worked_example():
    iters = [Domain(d).iterator() for d in (X_DOM, Y_DOM, Z_DOM)]
    assert list(leapfrog_join(iters)) == [4, 10]


def test_leapfrog_single_iterator_is_identity():
    syms = [Sym("a"), Sym("b"), Sym("c")]
    assert list(leapfrog_join([Domain(syms).iterator()])) == syms


def test_leapfrog_empty_input():
    assert list(leapfrog_join([Domain([1, 2]).iterator(), Domain([]).iterator()])) == []
    with pytest.raises(ValueError):
        list(leapfrog_join([]))


def test_leapfrog_mixed_value_types():
    a = Domain([1, 5, Sym("a"), Sym("k")])
    b = Domain([5, 6, Sym("k"), Sym("z")])
    assert list(leapfrog_join([a.iterator(), b.iterator()])) == [5, Sym("k")]


@given(domains_st)
def test_leapfrog_equals_set_intersection(domains):
    iters = [ForwardOnly(Domain(d).iterator()) for d in domains]
    got = list(leapfrog_join(iters, debug=True))
    assert got == sorted(set.intersection(*map(set, domains)))


@given(domains_st)
def test_three_engines_agree(domains):
    store = DomainStore.of(*domains)
    lf = list(unary_values(store, "lftj"))
    tr = list(unary_values(store, "tailrec"))
    ge = list(unary_values(store, "generic"))
    assert lf == tr == ge
    assert all(x < y for x, y in zip(lf, lf[1:]))


def test_generic_engine_matches_search_generic_directly(xyz_store):
    sols = search_generic([], [AllEqual(range(3))], xyz_store)
    assert [s[0].lower_bound() for s in sols] == list(unary_values(xyz_store, "generic"))


@pytest.mark.parametrize("k", [10, 1000, 100000])
def test_galloping_witness_leapfrog(k):
    stats = IterStats()
    iters = [Domain(range(1, k + 1)).iterator(stats), Domain(range(k + 1, 2 * k + 1)).iterator(stats)]
    assert list(leapfrog_join(iters)) == []
    assert stats.seeks + stats.nexts <= 2


def test_leapfrog_trace_reports_seeks():
    events = []
    iters = [Domain(d).iterator() for d in (X_DOM, Y_DOM, Z_DOM)]
    list(leapfrog_join(iters, trace=events.append))
    # Same opening moves as the propagator: X to 3, Z to 4, Y to 4, X to 4.
    assert [(e.var, e.new) for e in events[:4]] == [(0, 3), (2, 4), (1, 4), (0, 4)]


def test_unknown_engine():
    with pytest.raises(ValueError):
        unary_values(DomainStore.of([1]), "quantum")
