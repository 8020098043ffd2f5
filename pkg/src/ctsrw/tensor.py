"""Maps of an n-set, the tensor-power graph M(G), and multi-person meeting times.

A state of the n-person walk is a map x: {0..n-1} -> V(G), where x(k) is the
vertex occupied by person k. Person k starts at vertex k (the identity map)
and the walk coalesces at i when every person sits on i (the constant map c_i).
States are indexed lexicographically, person 0 being the most significant digit.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import WeightedGraph, bipartite_partition, laplacian
from .quadrature import integrate_decaying
from .spectral import SpectralDecomposition, decompose, heat_kernel_column, mixing_rate

EXPLICIT_CAP = 10**6
TUPLE_CAP_N = 8


class CapExceeded(ValueError):
    pass


class ExactUnavailable(ValueError):
    pass


@dataclass(frozen=True)
class MapState:
    images: tuple[int, ...]

    def __post_init__(self):
        n = len(self.images)
        if any(not 0 <= v < n for v in self.images):
            raise ValueError(f"map entries must lie in [0, {n}): {self.images}")

    @classmethod
    def identity(cls, n: int) -> MapState:
        return cls(tuple(range(n)))

    @classmethod
    def constant(cls, n: int, i: int) -> MapState:
        return cls((i,) * n)

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k]

    def index(self) -> int:
        idx = 0
        for v in self.images:
            idx = idx * self.n + v
        return idx

    @classmethod
    def from_index(cls, idx: int, n: int) -> MapState:
        digits = []
        for _ in range(n):
            idx, r = divmod(idx, n)
            digits.append(r)
        return cls(tuple(reversed(digits)))


def deficiency(x: MapState) -> int:
    return x.n - len(set(x.images))


def compose(x: MapState, y: MapState) -> MapState:
    """(x o y)(k) = x(y(k))."""
    if x.n != y.n:
        raise ValueError(f"cannot compose maps on {x.n} and {y.n} points")
    return MapState(tuple(x.images[v] for v in y.images))


def stratum_sizes(n: int) -> list[int]:
    """|M_n^(k)| for k = 0..n-1: maps with image size n - k, C(n, r) * surj(n, r)."""
    sizes = []
    for k in range(n):
        r = n - k
        surj = sum((-1) ** j * math.comb(r, j) * (r - j) ** n for j in range(r + 1))
        sizes.append(math.comb(n, r) * surj)
    return sizes


@dataclass(frozen=True)
class TensorGraphStats:
    order: int
    size: int
    frequency: int
    strata: tuple[int, ...]


def tensor_stats(g: WeightedGraph) -> TensorGraphStats:
    n = g.n
    return TensorGraphStats(n**n, g.m * n**n, 2 * g.m, tuple(stratum_sizes(n)))


def _require_unweighted(g: WeightedGraph):
    if not g.is_unweighted:
        raise ValueError("the multi-person walk is defined on unweighted base graphs")


@dataclass(frozen=True)
class ExplicitTensorGraph:
    """M(G) as index arrays: ``edges`` holds each unordered pair once (lower index first)."""

    base: WeightedGraph
    edges: np.ndarray

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def order(self) -> int:
        return self.n**self.n

    @property
    def size(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.order)

    def laplacian(self) -> np.ndarray:
        """Integer Laplacian; dense, so only for small orders."""
        N = self.order
        L = np.zeros((N, N), dtype=np.int64)
        a, b = self.edges[:, 0], self.edges[:, 1]
        L[a, b] = -1
        L[b, a] = -1
        L[np.arange(N), np.arange(N)] = self.degrees()
        return L

    def graph(self) -> WeightedGraph:
        """M(G) as a WeightedGraph labelled by comma-joined base labels."""
        names = self.base.labels
        labels = tuple(
            ",".join(names[v] for v in MapState.from_index(i, self.n).images) for i in range(self.order)
        )
        pairs = tuple((int(a), int(b)) for a, b in self.edges)
        return WeightedGraph(labels, pairs, (1.0,) * len(pairs))


def build_tensor_graph(g: WeightedGraph, cap: int = EXPLICIT_CAP) -> ExplicitTensorGraph:
    """Explicit M(G): x ~ y iff they differ in one person k and x(k)y(k) is an edge of G."""
    _require_unweighted(g)
    n = g.n
    N = n**n
    if N > cap:
        raise CapExceeded(f"M(G) has {N} vertices, over the explicit-construction cap {cap}")
    idx = np.arange(N, dtype=np.int64)
    chunks = []
    for k in range(n):
        place = n ** (n - 1 - k)
        digit = (idx // place) % n
        for a, b in g.edges:
            src = idx[digit == a]
            chunks.append(np.stack([src, src + (b - a) * place], axis=1))
    E = np.concatenate(chunks)
    E.sort(axis=1)
    order = np.lexsort((E[:, 1], E[:, 0]))
    return ExplicitTensorGraph(g, E[order])


def kronecker_sum(L: np.ndarray, n: int) -> np.ndarray:
    """L (+) L (+) ... (+) L, n factors: sum_k I x ... x L (slot k) x ... x I."""
    size = L.shape[0]
    eye = np.eye(size, dtype=L.dtype)
    total = None
    for k in range(n):
        term = np.ones((1, 1), dtype=L.dtype)
        for j in range(n):
            term = np.kron(term, L if j == k else eye)
        total = term if total is None else total + term
    return total


def tensor_bipartite_check(g: WeightedGraph, cap: int = EXPLICIT_CAP) -> tuple[bool, bool]:
    tg = build_tensor_graph(g, cap)
    return bipartite_partition(g) is not None, bipartite_partition(tg.graph()) is not None


def tensor_degree(g: WeightedGraph, x: MapState) -> int:
    return sum(g.degree(v) for v in x.images)


def tensor_return_times(g: WeightedGraph, x: MapState, exact: bool = False):
    """(h(x,x), H(x,x)) on M(G): n^n / d(x) and 2m n^n / d(x)."""
    _require_unweighted(g)
    n = g.n
    d = tensor_degree(g, x)
    if exact:
        h = Fraction(n**n, d)
        return h, 2 * g.m * h
    h = n**n / d
    return h, 2 * g.m * h


def _check_target(s_or_g, i: int):
    if not 0 <= i < s_or_g.n:
        raise ValueError(f"target vertex {i} out of range")


def meeting_time_spectral(s: SpectralDecomposition, i: int, max_n: int = TUPLE_CAP_N) -> float:
    """h(Id, c_i) by the eigen-tuple sum over all (k_1..k_n) in [0, n)^n.

    Each tuple contributes
        (prod_j u_{i k_j}^2 - prod_j u_{j k_j} u_{i k_j}) / sum_j lambda_{k_j},
    and the total is scaled by n^n. The all-zero-eigenvalue tuple is dropped
    after checking its numerator vanishes. Tuples are visited in lexicographic
    order: the first coordinates are looped over, the remaining ones are done
    as one vectorised block, and block sums are combined with math.fsum.
    """
    _check_target(s, i)
    n = s.n
    if n > max_n:
        raise CapExceeded(f"{n}^{n} tuples exceed the tuple-sum cap (n <= {max_n}); use quadrature")
    U, lam = s.eigenvectors, s.eigenvalues
    a = U[i] ** 2                      # same factor for every person
    b = U * U[i][None, :]              # b[j, k] = u_jk u_ik
    tail_len = min(n, 6)
    head_len = n - tail_len

    # Tail block over persons head_len..n-1, flattened in lexicographic order.
    tA = np.ones(1)
    tB = np.ones(1)
    tL = np.zeros(1)
    for j in range(head_len, n):
        tA = np.multiply.outer(tA, a).ravel()
        tB = np.multiply.outer(tB, b[j]).ravel()
        tL = np.add.outer(tL, lam).ravel()

    zero_tol = 1e-12 * max(1.0, float(lam[-1]))
    parts = []
    for head in itertools.product(range(n), repeat=head_len):
        hA = math.prod(a[k] for k in head)
        hB = math.prod(b[j, k] for j, k in enumerate(head))
        hL = math.fsum(lam[k] for k in head)
        num = hA * tA - hB * tB
        den = hL + tL
        if all(k == 0 for k in head):
            # Tail index 0 is the all-zero tuple.
            if abs(num[0]) >= 1e-12:
                raise ArithmeticError(f"zero-eigenvalue tuple has non-vanishing numerator {num[0]!r}")
            num = num[1:]
            den = den[1:]
        if np.any(den <= zero_tol):
            raise ArithmeticError("zero denominator outside the all-zero tuple: base graph is disconnected")
        parts.append(float(np.sum(num / den)))
    return n**n * math.fsum(parts)


def integer_spectrum(g: WeightedGraph, s: SpectralDecomposition | None = None) -> list[int]:
    """Distinct Laplacian eigenvalues when all are integers, verified exactly.

    Candidates come from the float spectrum; they are accepted only if the
    product of (L - mu I) over them is the zero matrix in integer arithmetic.
    Raises ExactUnavailable otherwise.
    """
    if not g.is_unweighted:
        raise ExactUnavailable("exact arithmetic needs unit weights")
    if s is None:
        s = decompose(laplacian(g))
    cands = sorted({int(round(v)) for v in s.eigenvalues})
    if any(abs(v - round(v)) > 1e-6 for v in s.eigenvalues):
        raise ExactUnavailable("Laplacian spectrum is not integral")
    L = laplacian(g).astype(np.int64).astype(object)
    eye = np.eye(g.n, dtype=np.int64).astype(object)
    prod = eye
    for mu in cands:
        prod = prod.dot(L - mu * eye)
    if any(v != 0 for v in prod.ravel()):
        raise ExactUnavailable("Laplacian spectrum is not integral")
    return cands


def spectral_projectors(g: WeightedGraph, spectrum: list[int]) -> dict[int, np.ndarray]:
    """Exact projectors onto each eigenspace, via Lagrange interpolation in L."""
    L = laplacian(g).astype(np.int64).astype(object)
    eye = np.eye(g.n, dtype=np.int64).astype(object)
    out = {}
    for mu in spectrum:
        P = eye * Fraction(1)
        for nu in spectrum:
            if nu != mu:
                P = P.dot(L - nu * eye) * Fraction(1, mu - nu)
        out[mu] = P
    return out


def meeting_time_exact(g: WeightedGraph, i: int, s: SpectralDecomposition | None = None) -> Fraction:
    """h(Id, c_i) as an exact rational, for unit-weight graphs with integral spectrum.

    Grouping the eigen-tuple sum by eigenvalue replaces u_{xk} u_{yk} with
    entries of the eigenspace projectors, which are rational here. The sum
    over tuples then only depends on the total eigenvalue, so it is computed
    as a polynomial product keyed by that total.
    """
    _check_target(g, i)
    spectrum = integer_spectrum(g, s)
    proj = spectral_projectors(g, spectrum)
    n = g.n

    def expand(factors):
        poly = {0: Fraction(1)}
        for coeff in factors:
            nxt: dict[int, Fraction] = {}
            for total, c in poly.items():
                for mu, cm in coeff.items():
                    if cm:
                        nxt[total + mu] = nxt.get(total + mu, 0) + c * cm
            poly = nxt
        return poly

    first = expand([{mu: proj[mu][i, i] for mu in spectrum}] * n)
    second = expand([{mu: proj[mu][j, i] for mu in spectrum} for j in range(n)])
    if first.get(0, 0) != second.get(0, 0):
        raise ArithmeticError("zero-eigenvalue term does not cancel")
    total = Fraction(0)
    for key in sorted(set(first) | set(second)):
        if key:
            total += (first.get(key, 0) - second.get(key, 0)) / key
    return n**n * total


def meeting_time_quadrature(s: SpectralDecomposition, i: int, eps: float = 1e-8) -> tuple[float, float]:
    """h(Id, c_i) = n^n int_0^inf (p_ii^n - prod_j p_ji) dt, numerically.

    Every p lies in [0, 1] and within exp(-lambda_2 t) of 1/n, so the
    integrand is bounded by 2 n^(n+1) exp(-lambda_2 t). Returns the value
    and an error bound.
    """
    _check_target(s, i)
    n = s.n
    scale = float(n**n)

    def integrand(t):
        col = heat_kernel_column(s, i, t)
        return scale * (col[i] ** n - np.prod(col))

    return integrate_decaying(integrand, mixing_rate(s), 2.0 * n * scale, eps)


@dataclass(frozen=True)
class MeetingSteps:
    """H(Id, c_i): exact (low == high) on regular bases, an interval otherwise."""

    low: float | Fraction
    high: float | Fraction

    @property
    def exact(self) -> bool:
        return self.low == self.high


def meeting_steps(g: WeightedGraph, h) -> MeetingSteps:
    """Bracket H(Id, c_i) between n d_min h and n d_max h (equal when regular)."""
    _require_unweighted(g)
    d = g.degrees()
    n = g.n
    return MeetingSteps(n * int(d.min()) * h, n * int(d.max()) * h)
