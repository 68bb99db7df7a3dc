import itertools
from pathlib import Path

import pytest

from rmatch.generators import gen_complete, gen_parity_sharpness, gen_random
from rmatch.hypergraph import Hypergraph, read_hypergraph

DATA = Path(__file__).parent / "data"


@pytest.fixture
def parity32():
    h, _ = gen_parity_sharpness(3, 2)
    return h


@pytest.fixture
def complete32():
    return gen_complete(3, 2)


@pytest.fixture
def exchange_instance():
    return read_hypergraph(DATA / "exchange_cases_n4.txt")


def scan_degree(h, f):
    """Degree of the side -> vertex mapping ``f`` by a direct pass over the edges."""
    return sum(all(e[s] == v for s, v in f.items()) for e in h.edges)


def random_instances(count, rs, ns, ps, seed0=0):
    out = []
    for k in range(count):
        r = rs[k % len(rs)]
        n = ns[(k // len(rs)) % len(ns)]
        p = ps[k % len(ps)]
        out.append(gen_random(r, n, p, seed0 + k))
    return out


def all_near_perfect(h):
    """Every matching of size n - 1 of a 3-partite hypergraph."""
    n = h.n
    for combo in itertools.combinations(h.edges, n - 1):
        if all(len({e[s] for e in combo}) == n - 1 for s in range(3)):
            yield list(combo)


def empty(r, n):
    return Hypergraph(r, n, [])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
