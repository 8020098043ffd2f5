"""Graph generators shared by the tests."""

import itertools

import numpy as np

from ctsrw import graph as G


def random_connected_graph(rng: np.random.Generator, n: int, weighted: bool = False, extra: float = 0.3):
    """Random spanning tree plus each remaining pair with probability ``extra``."""
    perm = rng.permutation(n)
    edges = set()
    for k in range(1, n):
        a, b = int(perm[k]), int(perm[rng.integers(0, k)])
        edges.add((min(a, b), max(a, b)))
    for a, b in itertools.combinations(range(n), 2):
        if (a, b) not in edges and rng.random() < extra:
            edges.add((a, b))
    rows = []
    for a, b in sorted(edges):
        w = float(rng.uniform(0.1, 5.0)) if weighted else 1.0
        rows.append((a, b, w))
    return G.from_edges(rows, labels=range(n))


def random_corpus(seed: int, count: int, weighted: bool = False, n_max: int = 16):
    rng = np.random.default_rng(seed)
    return [random_connected_graph(rng, int(rng.integers(2, n_max + 1)), weighted, float(rng.uniform(0.05, 0.6)))
            for _ in range(count)]


def connected_graphs(n: int):
    """Every connected labelled simple graph on vertices 0..n-1."""
    pairs = list(itertools.combinations(range(n), 2))
    out = []
    for mask in range(1, 1 << len(pairs)):
        edges = [pairs[k] for k in range(len(pairs)) if mask >> k & 1]
        try:
            out.append(G.from_edges(edges, labels=range(n)))
        except G.DisconnectedGraphError:
            pass
    return out
