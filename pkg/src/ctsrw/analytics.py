"""Exact quantities for the continuous-time walk and its jump chain on a base graph.

Time-valued results (h) belong to the continuous-time walk with exit rate w_x
at x; step-valued results (H) belong to the jump chain with transition
probabilities w_xy / w_x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graph import WeightedGraph, bipartite_partition, laplacian
from .quadrature import integrate_decaying
from .spectral import SpectralDecomposition, decompose, heat_kernel_column, mixing_rate


@dataclass(frozen=True)
class FrequencyReport:
    f: float
    w_min: float
    w_max: float
    eigen_average: float | None  # sum(lambda)/n, defined for unit weights

    @property
    def within_bounds(self) -> bool:
        return self.w_min <= self.f <= self.w_max


@dataclass(frozen=True)
class HittingTable:
    """h[x, y] (time) for all ordered pairs; diagonal holds mean first-return times."""

    h: np.ndarray
    H: np.ndarray | None = None


@dataclass(frozen=True)
class CommuteTable:
    c: np.ndarray
    C: np.ndarray


@dataclass(frozen=True)
class FixedEdgeBounds:
    steps: float
    time_low: float
    time_high: float
    weighted: bool  # bounds use w_m, w_M in place of d_m, d_M


def frequency(g: WeightedGraph, s: SpectralDecomposition | None = None) -> FrequencyReport:
    wx = g.vertex_weights()
    f = 2.0 * g.total_weight / g.n
    avg = None
    if g.is_unweighted:
        if s is None:
            s = decompose(laplacian(g))
        avg = math.fsum(s.eigenvalues) / g.n
    return FrequencyReport(f, float(wx.min()), float(wx.max()), avg)


def stationary_ct(g: WeightedGraph) -> np.ndarray:
    return np.full(g.n, 1.0 / g.n)


def stationary_srw(g: WeightedGraph) -> np.ndarray:
    """Invariant law of the jump chain, w_x / 2w. A limit only when g is non-bipartite."""
    return g.vertex_weights() / (2.0 * g.total_weight)


def srw_is_limit(g: WeightedGraph) -> bool:
    return bipartite_partition(g) is None


def mean_first_return_ct(g: WeightedGraph, x: int) -> float:
    return g.n / g.vertex_weight(x)


def mean_first_return_srw(g: WeightedGraph, x: int) -> float:
    return 2.0 * g.total_weight / g.vertex_weight(x)


def hitting_time_ct(s: SpectralDecomposition, x: int, y: int) -> float:
    """h(x, y) = n * sum_{k>=2} (u_yk^2 - u_xk u_yk) / lambda_k, for x != y."""
    if x == y:
        raise ValueError("use mean_first_return_ct for x == y")
    U, lam = s.eigenvectors, s.eigenvalues
    terms = (U[y, 1:] ** 2 - U[x, 1:] * U[y, 1:]) / lam[1:]
    return s.n * math.fsum(terms)


def hitting_matrix_ct(g: WeightedGraph, s: SpectralDecomposition | None = None) -> np.ndarray:
    """All h(x, y); the diagonal is n / w_x."""
    if s is None:
        s = decompose(laplacian(g))
    U, lam = s.eigenvectors[:, 1:], s.eigenvalues[1:]
    V = U / lam
    # G[x, y] = sum_k u_xk u_yk / lambda_k, the pseudo-inverse of L_w.
    G = V @ U.T
    h = s.n * (np.diag(G)[None, :] - G)
    np.fill_diagonal(h, g.n / g.vertex_weights())
    return h


def hitting_time_quadrature(s: SpectralDecomposition, x: int, y: int, eps: float = 1e-8) -> tuple[float, float]:
    """h(x, y) = n * int_0^inf (p_yy - p_xy) dt, integrated numerically.

    |p_yy - p_xy| <= 2 exp(-lambda_2 t), which fixes the truncation point.
    Returns the value and an error bound (quadrature plus tail).
    """
    if x == y:
        raise ValueError("x and y must differ")
    n = s.n

    def integrand(t):
        col = heat_kernel_column(s, y, t)
        return n * (col[y] - col[x])

    return integrate_decaying(integrand, mixing_rate(s), 2.0 * n, eps)


def hitting_time_srw_oracle(g: WeightedGraph, x: int, y: int) -> float:
    """Expected jump-chain steps from x to y, by solving the first-step equations.

    H(v, y) = 1 + sum_z (w_vz / w_v) H(z, y) for v != y, H(y, y) = 0. For
    x == y this returns the mean return time 1 + sum_z (w_yz / w_y) H(z, y).
    """
    return float(srw_hitting_column(g, y)[x])


def srw_hitting_column(g: WeightedGraph, y: int) -> np.ndarray:
    """H(., y) for every start; entry y holds the mean return time to y."""
    n = g.n
    A = g.adjacency()
    P = A / A.sum(axis=1, keepdims=True)
    keep = [v for v in range(n) if v != y]
    M = np.eye(n - 1) - P[np.ix_(keep, keep)]
    try:
        sol = np.linalg.solve(M, np.ones(n - 1))
    except np.linalg.LinAlgError as exc:
        raise ArithmeticError(f"first-step system is singular: {exc}") from exc
    H = np.zeros(n)
    H[keep] = sol
    H[y] = 1.0 + P[y, keep] @ sol
    return H


def hitting_matrix_srw(g: WeightedGraph) -> np.ndarray:
    n = g.n
    H = np.empty((n, n))
    for y in range(n):
        H[:, y] = srw_hitting_column(g, y)
    return H


def hitting_table(g: WeightedGraph, s: SpectralDecomposition | None = None, with_srw: bool = True) -> HittingTable:
    return HittingTable(hitting_matrix_ct(g, s), hitting_matrix_srw(g) if with_srw else None)


def commute_times(g: WeightedGraph, s: SpectralDecomposition | None = None) -> CommuteTable:
    h = hitting_matrix_ct(g, s)
    H = hitting_matrix_srw(g)
    np.fill_diagonal(h, 0.0)
    np.fill_diagonal(H, 0.0)
    return CommuteTable(h + h.T, H + H.T)


def edge_sum(g: WeightedGraph, table: np.ndarray) -> float:
    """sum_x sum_{y in Gamma(x)} table[y, x]."""
    return math.fsum(table[y, x] + table[x, y] for x, y in g.edges)


def edge_commute_sum(g: WeightedGraph, table: np.ndarray) -> float:
    """sum over unordered edges xy of table[x, y]."""
    return math.fsum(table[x, y] for x, y in g.edges)


def neighbour_hitting_sums(g: WeightedGraph, h: np.ndarray) -> np.ndarray:
    """sum_{y in Gamma(x)} w_xy h(y, x) for each x; equals n - 1 everywhere."""
    return np.array(
        [math.fsum(w * h[y, x] for y, w in zip(g.neighbors(x), g.neighbor_weights(x))) for x in range(g.n)]
    )


def return_recursion_residual(g: WeightedGraph, h: np.ndarray) -> float:
    """max_x |h(x,x) - (1 + sum_y w_xy h(y,x)) / w_x|."""
    wx = g.vertex_weights()
    rhs = (1.0 + neighbour_hitting_sums(g, h)) / wx
    return float(np.abs(np.diag(h) - rhs).max())


def timestep_bounds(g: WeightedGraph, expected_time: float) -> tuple[float, float]:
    """[w_m E(T), w_M E(T)], the range of E(N_T) for any stopping time T."""
    if expected_time < 0:
        raise ValueError(f"expected time must be non-negative, got {expected_time}")
    wx = g.vertex_weights()
    return float(wx.min()) * expected_time, float(wx.max()) * expected_time


def fixed_edge_return_bounds(g: WeightedGraph, edge: tuple[int, int] | None = None) -> FixedEdgeBounds:
    """Mean steps and time bounds for a return to x that arrives along a fixed edge yx.

    The directed edge y->x carries stationary mass w_xy / 2w in the edge
    chain, so the mean step count is 2w / w_xy (2m for unit weights, for any
    edge). Time bounds follow from the time-step inequality. Weighted graphs
    need ``edge`` and are flagged with ``weighted=True``.
    """
    if g.is_unweighted:
        d = g.degrees()
        steps = 2.0 * g.m
        return FixedEdgeBounds(steps, steps / d.max(), steps / d.min(), False)
    if edge is None:
        raise ValueError("weighted graphs need the edge (x, y): the step count depends on w_xy")
    w = g.weight(*edge)
    if w == 0.0:
        raise ValueError(f"{edge} is not an edge")
    wx = g.vertex_weights()
    steps = 2.0 * g.total_weight / w
    return FixedEdgeBounds(steps, steps / wx.max(), steps / wx.min(), True)
