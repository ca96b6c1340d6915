"""Datalog evaluation on a Leapfrog Triejoin core obtained by specializing a
generic constraint-propagation solver."""
from .cp import AllEqual, allequal, isolv, new_propagators, search_generic, split_indomain_min
from .evaluate import evaluate_seminaive
from .join import execute, plan
from .lftj import inc_domain, leapfrog_join, search_tailrec
from .oracle import naive_eval, nested_loop_join
from .syntax import parse_program, parse_query
from .trie import Catalog, TrieIterator, build_trie
from .values import ArrayIterator, Domain, DomainStore, Sym

__all__ = [
    "AllEqual", "allequal", "isolv", "new_propagators", "search_generic", "split_indomain_min",
    "evaluate_seminaive", "execute", "plan", "inc_domain", "leapfrog_join", "search_tailrec",
    "naive_eval", "nested_loop_join", "parse_program", "parse_query", "Catalog", "TrieIterator",
    "build_trie", "ArrayIterator", "Domain", "DomainStore", "Sym",
]
__version__ = "0.1.0"
