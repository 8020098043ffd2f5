import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ctsrw import graph as G
from ctsrw import tensor as tn
from ctsrw.spectral import SpectralDecomposition, decompose, heat_kernel

from .helpers import connected_graphs


def linear_system_meeting_time(g, i):
    """h(Id, c_i) by solving d(v) h(v) - sum_{z~v} h(z) = 1 on explicit M(G), h(c_i) = 0."""
    tg = tn.build_tensor_graph(g)
    L = tg.laplacian().astype(float)
    target = tn.MapState.constant(g.n, i).index()
    keep = np.array([k for k in range(tg.order) if k != target])
    sol = np.linalg.solve(L[np.ix_(keep, keep)], np.ones(len(keep)))
    h = np.zeros(tg.order)
    h[keep] = sol
    return h[tn.MapState.identity(g.n).index()]


maps = st.integers(1, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
        st.lists(st.integers(0, n - 1), min_size=n, max_size=n),
    )
)


def test_deficiency_examples():
    assert tn.deficiency(tn.MapState.identity(3)) == 0
    assert tn.deficiency(tn.MapState.constant(3, 0)) == 2
    assert tn.deficiency(tn.MapState((0, 0, 1))) == 1
    with pytest.raises(ValueError):
        tn.MapState((0, 3, 1))


@given(maps)
def test_compose_laws(pair):
    x, y = tn.MapState(tuple(pair[0])), tn.MapState(tuple(pair[1]))
    n = x.n
    assert tn.compose(x, tn.MapState.identity(n)) == x
    assert tn.compose(tn.MapState.identity(n), x) == x
    c = tn.MapState.constant(n, 0)
    assert tn.compose(c, x) == c
    assert tn.deficiency(tn.compose(x, y)) <= tn.deficiency(x) + tn.deficiency(y)
    assert tn.MapState.from_index(x.index(), n) == x


def test_compose_size_mismatch():
    with pytest.raises(ValueError):
        tn.compose(tn.MapState.identity(2), tn.MapState.identity(3))


@pytest.mark.parametrize("n", range(1, 7))
def test_strata_by_enumeration(n):
    counts = [0] * n
    for images in itertools.product(range(n), repeat=n):
        counts[n - len(set(images))] += 1
    assert tn.stratum_sizes(n) == counts
    assert sum(counts) == n**n and counts[0] == math.factorial(n)


def test_tensor_graph_examples(k3, c4):
    tg = tn.build_tensor_graph(k3)
    assert (tg.order, tg.size) == (27, 81)
    assert tg.degrees()[tn.MapState.identity(3).index()] == 6
    tg = tn.build_tensor_graph(c4)
    assert (tg.order, tg.size) == (256, 1024)
    st_ = tn.tensor_stats(c4)
    assert (st_.order, st_.size, st_.frequency) == (256, 1024, 8)


def test_tensor_graph_cap(c5):
    with pytest.raises(tn.CapExceeded):
        tn.build_tensor_graph(c5, cap=1000)
    with pytest.raises(ValueError):
        tn.build_tensor_graph(G.parse_edge_list("a b 2"))


def test_tensor_edges_differ_in_one_person(star4):
    tg = tn.build_tensor_graph(star4)
    for a, b in tg.edges[::7]:
        x, y = tn.MapState.from_index(int(a), 4), tn.MapState.from_index(int(b), 4)
        diff = [k for k in range(4) if x(k) != y(k)]
        assert len(diff) == 1
        assert star4.weight(x(diff[0]), y(diff[0])) == 1.0


@pytest.mark.parametrize("n", [2, 3])
def test_tensor_heat_kernel_factorises(n):
    for g in connected_graphs(n):
        tg = tn.build_tensor_graph(g)
        big = decompose(tg.laplacian().astype(float))
        small = decompose(G.laplacian(g))
        for t in (0.05, 0.4, 1.7):
            P = heat_kernel(big, t).p
            p = heat_kernel(small, t).p
            Q = p
            for _ in range(n - 1):
                Q = np.kron(Q, p)
            assert np.abs(P - Q).max() <= 1e-8


def test_bipartite_equivalence_exhaustive():
    for n in (2, 3, 4):
        for g in connected_graphs(n):
            base, tensor = tn.tensor_bipartite_check(g)
            assert base == tensor


def test_return_times(k3, c4):
    idm = tn.MapState.identity(3)
    assert tn.tensor_return_times(k3, idm, exact=True) == (Fraction(9, 2), 27)
    assert tn.tensor_return_times(c4, tn.MapState.identity(4), exact=True) == (32, 256)
    assert tn.tensor_return_times(k3, tn.MapState.constant(3, 0)) == (4.5, 27.0)


def test_meeting_time_spectral_paper_values(k3, c4):
    s = decompose(G.laplacian(k3))
    for i in range(3):
        assert tn.meeting_time_spectral(s, i) == pytest.approx(31 / 6, abs=1e-10)
    s = decompose(G.laplacian(c4))
    assert tn.meeting_time_spectral(s, 0) == pytest.approx(1336 / 35, abs=1e-10)


def test_meeting_time_exact(k3, c4, star4, c5):
    assert tn.meeting_time_exact(k3, 0) == Fraction(31, 6)
    assert tn.meeting_time_exact(c4, 0) == Fraction(1336, 35)
    assert tn.meeting_time_exact(star4, 0) == pytest.approx(linear_system_meeting_time(star4, 0), abs=1e-9)
    with pytest.raises(tn.ExactUnavailable):
        tn.meeting_time_exact(c5, 0)


@pytest.mark.parametrize("name", ["k3", "c4", "star:4", "path:4", "c5"])
def test_meeting_time_matches_linear_system(name):
    g = G.builtin(name)
    s = decompose(G.laplacian(g))
    for i in range(g.n):
        oracle = linear_system_meeting_time(g, i)
        assert tn.meeting_time_spectral(s, i) == pytest.approx(oracle, rel=1e-10)
        q, err = tn.meeting_time_quadrature(s, i)
        assert abs(q - oracle) <= 1e-6


def test_meeting_time_all_small_graphs():
    for g in connected_graphs(4):
        s = decompose(G.laplacian(g))
        assert tn.meeting_time_spectral(s, 0) == pytest.approx(linear_system_meeting_time(g, 0), rel=1e-10)


def test_basis_invariance_in_degenerate_eigenspace(k3):
    s = decompose(G.laplacian(k3))
    base = tn.meeting_time_spectral(s, 0)
    rng = np.random.default_rng(7)
    for _ in range(5):
        theta = rng.uniform(0, 2 * np.pi)
        R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
        U = s.eigenvectors.copy()
        U[:, 1:3] = U[:, 1:3] @ R
        rotated = SpectralDecomposition(s.eigenvalues, U)
        assert abs(tn.meeting_time_spectral(rotated, 0) - base) < 1e-9


def test_tuple_cap():
    g = G.cycle(9)
    s = decompose(G.laplacian(g))
    with pytest.raises(tn.CapExceeded):
        tn.meeting_time_spectral(s, 0)


def test_meeting_steps(k3, c4, star4):
    assert tn.meeting_steps(k3, Fraction(31, 6)).low == 31
    st_ = tn.meeting_steps(c4, Fraction(1336, 35))
    assert st_.exact and st_.low == Fraction(10688, 35)
    assert float(st_.low) == pytest.approx(305.371, abs=5e-4)
    h = tn.meeting_time_spectral(decompose(G.laplacian(star4)), 0)
    st_ = tn.meeting_steps(star4, h)
    assert not st_.exact
    assert (st_.low, st_.high) == pytest.approx((4 * h, 12 * h))
