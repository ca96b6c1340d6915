import random

import pytest

from cpdatalog.syntax import Atom, Program, Rule, Var
from cpdatalog.values import DomainStore, Sym

X_DOM = [1, 2, 3, 4, 9, 10, 11]
Y_DOM = [3, 4, 7, 10]
Z_DOM = [1, 4, 7, 10, 11]

a, b, c, d, e, f, g = (Sym(s) for s in "abcdefg")
P_FACTS = {(a, b), (c, d), (e, f)}
Q_FACTS = {(a, 1), (c, 2), (g, 3)}


@pytest.fixture
def xyz_store():
    """Variables X=0, Y=1, Z=2 over the worked three-way example."""
    return DomainStore.of(X_DOM, Y_DOM, Z_DOM)


def random_domains(rng, n_vars=3, hi=20, max_size=None):
    out = []
    for _ in range(n_vars):
        size = rng.randint(0, max_size if max_size is not None else hi + 1)
        out.append(sorted(rng.sample(range(hi + 1), size)))
    return out


def random_join_instance(rng, max_vars=5, max_atoms=3, max_arity=3, max_tuples=50, hi=20):
    """A random body plus relations for it.

    Predicates are sometimes reused across atoms and a few arguments are
    constants, so repeated variables, self joins and constant checks all occur.
    """
    n_vars = rng.randint(1, max_vars)
    pool = [Var(f"V{i}") for i in range(n_vars)]
    arities = {}
    body = []
    for i in range(rng.randint(1, max_atoms)):
        if arities and rng.random() < 0.2:
            pred = rng.choice(sorted(arities))
        else:
            pred = f"r{i}"
            arities[pred] = rng.randint(1, max_arity)
        args = []
        for _ in range(arities[pred]):
            if rng.random() < 0.1:
                args.append(rng.randint(0, hi))
            else:
                args.append(rng.choice(pool))
        body.append(Atom(pred, tuple(args)))
    relations = {}
    for pred, arity in arities.items():
        n = rng.randint(0, max_tuples)
        relations[pred] = {tuple(rng.randint(0, hi) for _ in range(arity)) for _ in range(n)}
    return body, relations, arities


def random_digraph(rng, max_nodes=15):
    n = rng.randint(1, max_nodes)
    p = rng.random() * 0.3
    return {(i, j) for i in range(n) for j in range(n) if rng.random() < p}


def tc_program(edges, linear=True):
    x, y, z = Var("X"), Var("Y"), Var("Z")
    prog = Program()
    prog.add_facts("e", edges, arity=2)
    prog.declare("t", 2)
    prog.rules.append(Rule(Atom("t", (x, y)), (Atom("e", (x, y)),)))
    if linear:
        prog.rules.append(Rule(Atom("t", (x, z)), (Atom("e", (x, y)), Atom("t", (y, z)))))
    else:
        prog.rules.append(Rule(Atom("t", (x, z)), (Atom("t", (x, y)), Atom("t", (y, z)))))
    return prog


def random_program(rng, n_edb=2, n_idb=2, max_rules=4, hi=6):
    """Small random positive program over unary and binary predicates."""
    prog = Program()
    preds = {}
    for i in range(n_edb):
        name, arity = f"b{i}", rng.randint(1, 2)
        preds[name] = arity
        rows = {tuple(rng.randint(0, hi) for _ in range(arity)) for _ in range(rng.randint(2, 20))}
        prog.add_facts(name, rows, arity=arity)
    idb = {}
    for i in range(n_idb):
        idb[f"h{i}"] = rng.randint(1, 2)
        prog.declare(f"h{i}", idb[f"h{i}"])
    preds.update(idb)
    pool = [Var(n) for n in "XYZW"]
    for _ in range(rng.randint(1, max_rules)):
        head_pred = rng.choice(sorted(idb))
        body = []
        for _ in range(rng.randint(1, 3)):
            p = rng.choice(sorted(preds))
            args = tuple(rng.choice(pool) if rng.random() > 0.1 else rng.randint(0, hi) for _ in range(preds[p]))
            body.append(Atom(p, args))
        bound = [v for atom in body for v in atom.variables()]
        head_args = tuple(rng.choice(bound) if bound and rng.random() > 0.1 else rng.randint(0, hi)
                          for _ in range(idb[head_pred]))
        prog.rules.append(Rule(Atom(head_pred, head_args), tuple(body)))
    return prog


@pytest.fixture
def rng():
    return random.Random(20240611)
