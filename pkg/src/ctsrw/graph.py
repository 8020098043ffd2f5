"""Weighted graphs: edge-list parsing, Laplacians, bipartite structure."""

from __future__ import annotations

import io
import math
import re
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np


class GraphError(ValueError):
    """Invalid graph input. ``line`` is the 1-based source line when known."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        self.message = message
        super().__init__(self._format())

    def _format(self) -> str:
        where = ""
        if self.source is not None and self.line is not None:
            where = f"{self.source}:{self.line}: "
        elif self.line is not None:
            where = f"line {self.line}: "
        return where + self.message


class DuplicateEdgeError(GraphError):
    pass


class LoopError(GraphError):
    pass


class WeightError(GraphError):
    pass


class DisconnectedGraphError(GraphError):
    pass


class EmptyGraphError(GraphError):
    pass


@dataclass(frozen=True)
class WeightedGraph:
    """Connected simple graph with symmetric positive edge weights.

    ``edges`` holds each unordered pair once as ``(x, y)`` with ``x < y``;
    ``weights[k]`` is the weight of ``edges[k]``.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    weights: tuple[float, ...]
    _neighbors: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())
    _nbr_weights: tuple[tuple[float, ...], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self):
        n = len(self.labels)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        wts: list[list[float]] = [[] for _ in range(n)]
        for (x, y), w in zip(self.edges, self.weights):
            nbrs[x].append(y)
            wts[x].append(w)
            nbrs[y].append(x)
            wts[y].append(w)
        object.__setattr__(self, "_neighbors", tuple(tuple(a) for a in nbrs))
        object.__setattr__(self, "_nbr_weights", tuple(tuple(a) for a in wts))

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown vertex label {label!r}") from None

    def neighbors(self, x: int) -> tuple[int, ...]:
        return self._neighbors[x]

    def neighbor_weights(self, x: int) -> tuple[float, ...]:
        return self._nbr_weights[x]

    def weight(self, x: int, y: int) -> float:
        """w_xy, or 0.0 when x and y are not adjacent."""
        for z, w in zip(self._neighbors[x], self._nbr_weights[x]):
            if z == y:
                return w
        return 0.0

    def degree(self, x: int) -> int:
        return len(self._neighbors[x])

    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self._neighbors], dtype=np.int64)

    def vertex_weight(self, x: int) -> float:
        """w_x, the total weight of edges at x (the exit rate of the walk)."""
        return math.fsum(self._nbr_weights[x])

    def vertex_weights(self) -> np.ndarray:
        return np.array([math.fsum(a) for a in self._nbr_weights])

    @property
    def total_weight(self) -> float:
        return math.fsum(self.weights)

    @property
    def is_unweighted(self) -> bool:
        return all(w == 1.0 for w in self.weights)

    def is_regular(self) -> bool:
        d = self.degrees()
        return bool(np.all(d == d[0]))

    def is_weight_regular(self) -> bool:
        wx = self.vertex_weights()
        return bool(np.allclose(wx, wx[0], rtol=1e-12, atol=0.0))

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n, self.n))
        for (x, y), w in zip(self.edges, self.weights):
            A[x, y] = A[y, x] = w
        return A

    def to_edge_list(self) -> str:
        lines = []
        for (x, y), w in zip(self.edges, self.weights):
            if w == 1.0:
                lines.append(f"{self.labels[x]} {self.labels[y]}")
            else:
                lines.append(f"{self.labels[x]} {self.labels[y]} {w!r}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class GraphSummary:
    n: int
    m: int
    total_weight: float
    degrees: tuple[int, ...]
    d_min: int
    d_max: int
    w_min: float
    w_max: float
    bipartite: tuple[tuple[int, ...], tuple[int, ...]] | None

    @property
    def is_bipartite(self) -> bool:
        return self.bipartite is not None


_COMMENT = re.compile(r"#.*$")


def _build(records, labels, source) -> WeightedGraph:
    """Validate ``(line, a, b, w)`` records into a connected WeightedGraph."""
    index: dict = {}
    names: list[str] = []
    for lab in labels or ():
        index[lab] = len(names)
        names.append(str(lab))
    seen: dict[tuple[int, int], int] = {}
    pairs: list[tuple[int, int]] = []
    weights: list[float] = []
    for lineno, a, b, w in records:
        if a == b:
            raise LoopError(f"self-loop at vertex {a}", lineno, source)
        if not (w > 0.0) or not math.isfinite(w):
            raise WeightError(f"edge {a}-{b} needs a positive finite weight, got {w!r}", lineno, source)
        for v in (a, b):
            if v not in index:
                index[v] = len(names)
                names.append(str(v))
        x, y = index[a], index[b]
        key = (min(x, y), max(x, y))
        if key in seen:
            raise DuplicateEdgeError(f"duplicate edge {a}-{b} (first given on line {seen[key]})", lineno, source)
        seen[key] = lineno
        pairs.append(key)
        weights.append(w)
    if not pairs:
        raise EmptyGraphError("graph has no edges", None, source)
    g = WeightedGraph(tuple(names), tuple(pairs), tuple(weights))
    comp = _component(g, 0)
    if len(comp) != g.n:
        missing = next(v for v in range(g.n) if v not in comp)
        lines = [ln for (x, y), ln in seen.items() if missing in (x, y)]
        raise DisconnectedGraphError(
            f"graph is disconnected: {names[missing]!r} is not reachable from {names[0]!r}",
            min(lines) if lines else None,
            source,
        )
    return g


def from_edges(edges, labels=None, *, source: str | None = None) -> WeightedGraph:
    """Build a validated graph from ``(x, y)`` or ``(x, y, w)`` tuples.

    Endpoints may be any hashable; labels are assigned in first-appearance
    order after any given up front in ``labels``.
    """
    records = ((k, e[0], e[1], float(e[2]) if len(e) > 2 else 1.0) for k, e in enumerate(edges, start=1))
    return _build(records, labels, source)


def parse_edge_list(text, source: str | None = None) -> WeightedGraph:
    """Parse the whitespace-separated edge-list format.

    Each non-blank line is ``LABEL LABEL [WEIGHT]``; ``#`` starts a comment.
    Accepts a string or a text stream.
    """
    if not isinstance(text, str):
        text = text.read()

    def records():
        for lineno, raw in enumerate(io.StringIO(text), start=1):
            line = _COMMENT.sub("", raw).strip()
            if not line:
                continue
            tok = line.split()
            if len(tok) not in (2, 3):
                raise GraphError(f"expected 'LABEL LABEL [WEIGHT]', got {line!r}", lineno, source)
            w = 1.0
            if len(tok) == 3:
                try:
                    w = float(tok[2])
                except ValueError:
                    raise WeightError(f"weight {tok[2]!r} is not a number", lineno, source) from None
            yield lineno, tok[0], tok[1], w

    return _build(records(), None, source)


def load(path) -> WeightedGraph:
    path = Path(path)
    return parse_edge_list(path.read_text(), source=str(path))


def _component(g: WeightedGraph, start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for z in g.neighbors(v):
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return seen


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Weighted Laplacian L_w = diag(w_x) - W. The generator of the walk is -L_w."""
    L = -g.adjacency()
    np.fill_diagonal(L, g.vertex_weights())
    return L


def generator(g: WeightedGraph) -> np.ndarray:
    return -laplacian(g)


def bipartite_partition(g: WeightedGraph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Two-colour g by BFS depth parity; None if an edge joins equal colours."""
    colour = [-1] * g.n
    for root in range(g.n):
        if colour[root] != -1:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for z in g.neighbors(v):
                if colour[z] == -1:
                    colour[z] = colour[v] ^ 1
                    queue.append(z)
                elif colour[z] == colour[v]:
                    return None
    part0 = tuple(v for v in range(g.n) if colour[v] == 0)
    part1 = tuple(v for v in range(g.n) if colour[v] == 1)
    return part0, part1


def summarize(g: WeightedGraph) -> GraphSummary:
    d = g.degrees()
    wx = g.vertex_weights()
    assert int(d.sum()) == 2 * g.m
    return GraphSummary(
        n=g.n,
        m=g.m,
        total_weight=g.total_weight,
        degrees=tuple(int(v) for v in d),
        d_min=int(d.min()),
        d_max=int(d.max()),
        w_min=float(wx.min()),
        w_max=float(wx.max()),
        bipartite=bipartite_partition(g),
    )


# Built-in graphs. Complete graphs are labelled a, b, c, ...; the others use
# 1-based integers, so "c4" matches the file "1 2\n2 3\n3 4\n4 1".

def complete(n: int) -> WeightedGraph:
    if not 2 <= n <= 26:
        raise GraphError("complete graphs are built for 2 <= n <= 26")
    names = [chr(ord("a") + k) for k in range(n)]
    return from_edges([(names[i], names[j]) for i in range(n) for j in range(i + 1, n)])


def cycle(n: int) -> WeightedGraph:
    if n < 3:
        raise GraphError("a cycle needs at least 3 vertices")
    return from_edges([(i, i % n + 1) for i in range(1, n + 1)])


def path(n: int) -> WeightedGraph:
    if n < 2:
        raise GraphError("a path needs at least 2 vertices")
    return from_edges([(i, i + 1) for i in range(1, n)])


def star(n: int) -> WeightedGraph:
    """Star on n vertices; vertex 1 is the centre."""
    if n < 2:
        raise GraphError("a star needs at least 2 vertices")
    return from_edges([(1, i) for i in range(2, n + 1)])


def petersen() -> WeightedGraph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edges(outer + spokes + inner, labels=range(10))


def builtin(name: str) -> WeightedGraph:
    """Resolve names like ``k3``, ``c4``, ``path:5``, ``star:4``, ``cycle:6``, ``petersen``."""
    key = name.strip().lower()
    m = re.fullmatch(r"k(\d+)", key)
    if m:
        return complete(int(m.group(1)))
    m = re.fullmatch(r"c(\d+)", key)
    if m:
        return cycle(int(m.group(1)))
    m = re.fullmatch(r"(path|star|cycle|complete):(\d+)", key)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return {"path": path, "star": star, "cycle": cycle, "complete": complete}[kind](n)
    if key == "petersen":
        return petersen()
    raise KeyError(f"unknown built-in graph {name!r}")
