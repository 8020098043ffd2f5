import numpy as np
import pytest

from ctsrw import analytics as an
from ctsrw import graph as G
from ctsrw.montecarlo import (
    Estimate,
    SimConfig,
    SimulationError,
    StoppingTimeSpec,
    estimate_frequency,
    occupation_fractions,
    simulate_ctsrw,
    simulate_mpsrw,
    simulate_srw,
)

BANDS = 4.0


def cfg(replicas=20_000, seed=42, **kw):
    return SimConfig(seed=seed, replicas=replicas, **kw)


def test_estimate_from_samples():
    e = Estimate.from_samples(np.array([1.0, 2.0, 3.0, 4.0]), 7, "time")
    assert e.mean == 2.5
    assert e.variance == pytest.approx(5 / 3)
    assert e.stderr == pytest.approx(np.sqrt(5 / 12))
    assert (e.replicas, e.seed, e.units) == (4, 7, "time")


def test_config_validation():
    with pytest.raises(ValueError):
        SimConfig(replicas=0)
    with pytest.raises(ValueError):
        SimConfig(max_events=0)
    with pytest.raises(ValueError):
        SimConfig(seed=-1)


def test_spec_validation(k3, star4):
    with pytest.raises(ValueError):
        simulate_ctsrw(k3, cfg(10), StoppingTimeSpec.hitting(0, 0))
    with pytest.raises(ValueError):
        simulate_ctsrw(star4, cfg(10), StoppingTimeSpec.fixed_edge_return(1, 2))
    with pytest.raises(ValueError):
        simulate_ctsrw(k3, cfg(10), StoppingTimeSpec.first_return(5))
    with pytest.raises(ValueError):
        simulate_ctsrw(k3, cfg(10), StoppingTimeSpec("teleport", x=0))


def test_ctsrw_first_return_triangle(k3):
    r = simulate_ctsrw(k3, cfg(), StoppingTimeSpec.first_return(0))
    assert r.time.within(1.5, BANDS)
    assert r.jumps.within(3.0, BANDS)


def test_ctsrw_hitting_weighted(weighted_triangle):
    s = an.hitting_matrix_ct(weighted_triangle)
    r = simulate_ctsrw(weighted_triangle, cfg(), StoppingTimeSpec.hitting(0, 2))
    assert r.time.within(s[0, 2], BANDS)
    H = an.hitting_time_srw_oracle(weighted_triangle, 0, 2)
    assert r.jumps.within(H, BANDS)


def test_timestep_inequality_star_leaf_to_centre(star4):
    r = simulate_ctsrw(star4, cfg(), StoppingTimeSpec.hitting(1, 0))
    lo, hi = r.paired(1.0), r.paired(3.0)
    assert lo.mean >= -BANDS * lo.stderr
    assert hi.mean <= BANDS * hi.stderr


def test_srw_examples(k3, c4):
    assert simulate_srw(k3, cfg(), StoppingTimeSpec.hitting(0, 1)).jumps.within(2.0, BANDS)
    assert simulate_srw(k3, cfg(), StoppingTimeSpec.fixed_edge_return(0, 1)).jumps.within(6.0, BANDS)
    assert simulate_srw(c4, cfg(), StoppingTimeSpec.first_return(0)).jumps.within(4.0, BANDS)
    r = simulate_srw(c4, cfg(100), StoppingTimeSpec.horizon(10))
    assert np.all(r.counts == 10) and r.time is None


def test_fixed_edge_return_weighted(weighted_triangle):
    r = simulate_srw(weighted_triangle, cfg(), StoppingTimeSpec.fixed_edge_return(0, 2))
    assert r.jumps.within(an.fixed_edge_return_bounds(weighted_triangle, (0, 2)).steps, BANDS)


def test_regular_graph_equality_all_kinds(c4):
    f = an.frequency(c4).f
    for spec in (StoppingTimeSpec.first_return(0), StoppingTimeSpec.hitting(0, 2), StoppingTimeSpec.fixed_edge_return(0, 1)):
        d = simulate_ctsrw(c4, cfg(), spec).paired(f)
        assert abs(d.mean) <= BANDS * d.stderr


def test_non_bipartite_first_return_scaling():
    # Star with a triangle hung on one leaf: non-bipartite, not regular.
    g = G.parse_edge_list("c l1\nc l2\nc l3\nl3 t1\nt1 t2\nt2 l3")
    assert G.bipartite_partition(g) is None
    f = an.frequency(g).f
    for x in (0, 3):
        d = simulate_ctsrw(g, cfg(), StoppingTimeSpec.first_return(x)).paired(f)
        assert abs(d.mean) <= BANDS * d.stderr


def test_mpsrw_triangle_both_selections(k3):
    a = simulate_mpsrw(k3, cfg(), 0, "degree")
    b = simulate_mpsrw(k3, cfg(), 0, "uniform")
    assert a.within(31.0, BANDS)
    # Identical law on a regular graph; the streams are consumed identically too.
    assert a == b


def test_mpsrw_selection_differs_on_star(star4):
    from ctsrw import tensor as tn
    from ctsrw.spectral import decompose

    h = tn.meeting_time_spectral(decompose(G.laplacian(star4)), 0)
    steps = tn.meeting_steps(star4, h)
    a = simulate_mpsrw(star4, cfg(), 0, "degree")
    assert steps.low - BANDS * a.stderr <= a.mean <= steps.high + BANDS * a.stderr
    with pytest.raises(ValueError):
        simulate_mpsrw(star4, cfg(10), 0, "random")


def test_mpsrw_start_already_coalesced(k3):
    e = simulate_mpsrw(k3, cfg(10, start=(1, 1, 1)), 1)
    assert e.mean == 0.0


def test_estimate_frequency(k3, star4, weighted_triangle):
    e = estimate_frequency(k3, cfg(2_000), 100.0)
    assert e.within(2.0, BANDS)
    e = estimate_frequency(star4, cfg(2_000, start=[0.25] * 4), 100.0)
    # E N(t)/t is f plus an O(1/t) start-up bias; the uniform start removes it.
    assert e.within(1.5, BANDS)
    assert 1.0 <= e.mean <= 3.0
    e = estimate_frequency(weighted_triangle, cfg(2_000, start=[1 / 3] * 3), 100.0)
    assert e.within(4.0, BANDS)


def test_occupation_fractions_uniform(star4):
    occ = occupation_fractions(star4, cfg(200), 500.0)
    # Pooled time fractions; chi-square-style check against 1/n.
    assert np.abs(occ - 0.25).max() < 0.01
    assert occ.sum() == pytest.approx(1.0)


def test_max_events_cap(c4):
    with pytest.raises(SimulationError):
        simulate_srw(c4, cfg(100, max_events=1), StoppingTimeSpec.hitting(0, 2))


def test_determinism_and_worker_independence(star4):
    spec = StoppingTimeSpec.hitting(1, 2)
    a = simulate_ctsrw(star4, cfg(3_000), spec)
    b = simulate_ctsrw(star4, cfg(3_000), spec)
    c = simulate_ctsrw(star4, cfg(3_000, workers=3), spec)
    assert a.time == b.time == c.time and a.jumps == b.jumps == c.jumps
    assert np.array_equal(a.times, c.times)
    d = simulate_ctsrw(star4, cfg(3_000, seed=43), spec)
    assert d.time != a.time
    e1 = simulate_mpsrw(star4, cfg(500), 0)
    e2 = simulate_mpsrw(star4, cfg(500, workers=2), 0)
    assert e1 == e2
