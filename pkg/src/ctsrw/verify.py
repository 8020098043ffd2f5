"""Run every analytic identity and Monte Carlo check against one graph."""

from __future__ import annotations

import math

import numpy as np

from . import analytics as an
from . import montecarlo as mc
from . import tensor as tn
from .graph import WeightedGraph, laplacian
from .report import Report
from .spectral import EPS_PROB, check_invariants, decompose, eps_eig, heat_kernel

BANDS = 4.0


def _close(a: float, b: float, tol: float) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def _desc(a, b) -> str:
    return f"{a:.12g} vs {b:.12g}"


def run_checks(
    rep: Report,
    g: WeightedGraph,
    tol: float = 1e-9,
    seed: int = 0,
    replicas: int = 10_000,
    max_events: int = mc.MAX_EVENTS,
    quad_tol: float = 1e-6,
) -> None:
    """Append pass/fail/skip checks to ``rep``. Analytic identities use ``tol``
    relative to max(1, |expected|); Monte Carlo checks use 4-stderr bands."""
    n = g.n
    L = laplacian(g)
    s = decompose(L)
    unit = g.is_unweighted
    regular = g.is_regular() if unit else g.is_weight_regular()
    bipartite = not an.srw_is_limit(g)
    scale = max(1.0, float(np.abs(L).max()))
    eps = eps_eig(n) * scale

    res = check_invariants(s, L)
    for key, val in res.items():
        rep.check(f"spectral {key}", val <= eps, f"residual {val:.3g} (limit {eps:.3g})")

    rng = np.random.default_rng(seed)
    worst_row = worst_neg = worst_sym = worst_ck = worst_u = 0.0
    for _ in range(8):
        a, b = rng.uniform(1e-3, 5.0, size=2)
        Pa, Pb, Pab = heat_kernel(s, a).p, heat_kernel(s, b).p, heat_kernel(s, a + b).p
        worst_row = max(worst_row, float(np.abs(Pa.sum(axis=1) - 1).max()))
        worst_neg = max(worst_neg, float(-Pa.min()))
        worst_sym = max(worst_sym, float(np.abs(Pa - Pa.T).max()))
        worst_ck = max(worst_ck, float(np.abs(Pa @ Pb - Pab).max()))
        worst_u = max(worst_u, float(np.abs(np.full(n, 1 / n) @ Pa - 1 / n).max()))
    rep.check("heat kernel rows sum to 1", worst_row <= EPS_PROB, f"{worst_row:.3g}")
    rep.check("heat kernel non-negative", worst_neg <= EPS_PROB, f"min entry {-worst_neg:.3g}")
    rep.check("heat kernel symmetric", worst_sym <= EPS_PROB, f"{worst_sym:.3g}")
    rep.check("Chapman-Kolmogorov P(s)P(t) = P(s+t)", worst_ck <= 10 * EPS_PROB, f"{worst_ck:.3g}")
    rep.check("uniform law is invariant", worst_u <= EPS_PROB, f"{worst_u:.3g}")

    freq = an.frequency(g, s)
    f = freq.f
    rep.check("frequency within [w_m, w_M]", freq.within_bounds, f"{freq.w_min:.12g} <= {f:.12g} <= {freq.w_max:.12g}")
    if unit:
        rep.check("frequency equals eigenvalue average", _close(freq.eigen_average, f, tol), _desc(freq.eigen_average, f))
    else:
        rep.check("frequency equals eigenvalue average", None, "unit weights only")

    h = an.hitting_matrix_ct(g, s)
    H = an.hitting_matrix_srw(g)
    resid = an.return_recursion_residual(g, h)
    rep.check("first-return recursion h(x,x) = (1 + sum w_xy h(y,x)) / w_x", resid <= tol * max(1.0, h.max()), f"{resid:.3g}")
    nb = an.neighbour_hitting_sums(g, h)
    worst = float(np.abs(nb - (n - 1)).max())
    rep.check("per-vertex sum of w_xy h(y,x) = n-1", worst <= tol * n, f"max deviation {worst:.3g}")
    if unit:
        tot = an.edge_sum(g, h)
        rep.check(f"sum identity n(n-1)={n * (n - 1)}", _close(tot, n * (n - 1), tol), _desc(tot, n * (n - 1)))
        tot = an.edge_sum(g, H)
        target = 2 * g.m * (n - 1)
        rep.check(f"jump-chain sum identity 2m(n-1)={target}", _close(tot, target, tol), _desc(tot, target))
        ct = an.commute_times(g, s)
        lhs, rhs = an.edge_commute_sum(g, ct.C), f * an.edge_commute_sum(g, ct.c)
        rep.check("edge commute sums C = f c", _close(lhs, rhs, tol), _desc(lhs, rhs))
    else:
        for name in ("sum identity n(n-1)", "jump-chain sum identity 2m(n-1)", "edge commute sums C = f c"):
            rep.check(name, None, "unit weights only")

    ret_ok = all(
        _close(an.mean_first_return_srw(g, x), f * an.mean_first_return_ct(g, x), tol) for x in range(n)
    )
    diag_ok = all(_close(H[x, x], an.mean_first_return_srw(g, x), tol) for x in range(n))
    rep.check("return steps 2w/w_x = f * n/w_x", ret_ok)
    rep.check("first-step oracle return steps = 2w/w_x", diag_ok)
    if regular:
        off = ~np.eye(n, dtype=bool)
        worst = float(np.abs(H[off] - f * h[off]).max())
        rep.check("regular graph: H(x,y) = f h(x,y)", worst <= 1e-8 * max(1.0, H.max()), f"max deviation {worst:.3g}")
    else:
        rep.check("regular graph: H(x,y) = f h(x,y)", None, "graph is not regular")

    x, y = g.edges[0]
    far = int(np.argmax(h[0]))
    pairs = [(x, y)] + ([(0, far)] if far != 0 and (0, far) != (x, y) else [])
    for a, b in pairs:
        q, _ = an.hitting_time_quadrature(s, a, b)
        rep.check(
            f"hitting time quadrature {g.labels[a]}->{g.labels[b]}",
            abs(q - h[a, b]) <= quad_tol,
            _desc(q, h[a, b]),
        )

    if unit:
        _tensor_checks(rep, g, s, quad_tol)
    else:
        rep.check("tensor-power checks", None, "unit weights only")

    _mc_checks(rep, g, h, f, regular, bipartite, seed, replicas, max_events)


def _tensor_checks(rep: Report, g: WeightedGraph, s, quad_tol: float) -> None:
    n = g.n
    stats = tn.tensor_stats(g)
    rep.check(
        "deficiency strata sum to n^n, stratum 0 is n!",
        sum(stats.strata) == stats.order and stats.strata[0] == math.factorial(n),
    )
    if n**n <= 10**5:
        tg = tn.build_tensor_graph(g)
        deg = tg.degrees()
        rule = np.array([tn.tensor_degree(g, tn.MapState.from_index(k, n)) for k in range(tg.order)])
        rep.check("M(G) order n^n and size m n^n", tg.size == stats.size and len(deg) == stats.order)
        rep.check("M(G) degree rule d(x) = sum d(x(k))", bool(np.array_equal(deg, rule)))
        idd = tn.MapState.identity(n).index()
        rep.check("M(G) frequency 2m and d(Id) = 2m", deg.sum() == 2 * stats.size and deg[idd] == 2 * g.m)
        if n**n <= 256:
            ks = tn.kronecker_sum(laplacian(g).astype(np.int64), n)
            rep.check("M(G) Laplacian is the Kronecker sum", bool(np.array_equal(tg.laplacian(), ks)))
        else:
            rep.check("M(G) Laplacian is the Kronecker sum", None, "dense check limited to n^n <= 256")
        base_bip, tensor_bip = tn.tensor_bipartite_check(g)
        rep.check("G bipartite iff M(G) bipartite", base_bip == tensor_bip, f"base={base_bip} tensor={tensor_bip}")
    else:
        rep.check("explicit M(G) checks", None, f"n^n = {n**n} too large for the verify run")
    if n <= 6:
        vals = [tn.meeting_time_spectral(s, i) for i in range(n)]
        for i in range(n):
            q, _ = tn.meeting_time_quadrature(s, i)
            rep.check(f"meeting time tuple sum = quadrature at {g.labels[i]}", abs(q - vals[i]) <= quad_tol, _desc(vals[i], q))
    else:
        rep.check("meeting time tuple sum = quadrature", None, "verify run limited to n <= 6")


def _mc_checks(rep, g, h, f, regular, bipartite, seed, replicas, max_events) -> None:
    if replicas <= 0:
        rep.check("Monte Carlo checks", None, "replicas = 0")
        return
    cfg = mc.SimConfig(seed=seed, replicas=replicas, max_events=max_events)
    wx = g.vertex_weights()
    w_lo, w_hi = float(wx.min()), float(wx.max())
    x = int(np.argmin(wx))
    y = g.neighbors(x)[0]
    far = int(np.argmax(h[x]))
    specs = {
        "first return": mc.StoppingTimeSpec.first_return(x),
        "hitting": mc.StoppingTimeSpec.hitting(x, far if far != x else y),
        "fixed-edge return": mc.StoppingTimeSpec.fixed_edge_return(x, y),
    }
    for name, spec in specs.items():
        r = mc.simulate_ctsrw(g, cfg, spec)
        lo, hi = r.paired(w_lo), r.paired(w_hi)
        ok = lo.mean >= -BANDS * lo.stderr and hi.mean <= BANDS * hi.stderr
        rep.check(
            f"mc time-step inequality ({name})",
            ok,
            f"N={r.jumps.mean:.6g}, [w_m T, w_M T]=[{w_lo * r.time.mean:.6g}, {w_hi * r.time.mean:.6g}]",
        )
        if regular:
            d = r.paired(f)
            rep.check(f"mc regular graph E(N_T) = f E(T) ({name})", abs(d.mean) <= BANDS * d.stderr, f"{d.mean:.4g} ± {d.stderr:.3g}")
        if name == "first return":
            rep.check(
                "mc first-return time n/w_x",
                r.time.within(g.n / wx[x], BANDS),
                f"{r.time.mean:.6g} ± {r.time.stderr:.3g} vs {g.n / wx[x]:.6g}",
            )
            target = 2 * g.total_weight / wx[x]
            rep.check(
                "mc first-return jumps 2w/w_x",
                r.jumps.within(target, BANDS),
                f"{r.jumps.mean:.6g} ± {r.jumps.stderr:.3g} vs {target:.6g}",
            )
            if bipartite:
                rep.check("mc non-bipartite first return E(N) = f E(T)", None, "graph is bipartite")
            else:
                d = r.paired(f)
                rep.check("mc non-bipartite first return E(N) = f E(T)", abs(d.mean) <= BANDS * d.stderr, f"{d.mean:.4g} ± {d.stderr:.3g}")
        if name == "hitting":
            rep.check(
                "mc hitting time matches spectral",
                r.time.within(h[spec.x, spec.y], BANDS),
                f"{r.time.mean:.6g} ± {r.time.stderr:.3g} vs {h[spec.x, spec.y]:.6g}",
            )
        if name == "fixed-edge return":
            target = 2 * g.total_weight / g.weight(x, y)
            rep.check(
                "mc fixed-edge return steps 2w/w_xy",
                r.jumps.within(target, BANDS),
                f"{r.jumps.mean:.6g} ± {r.jumps.stderr:.3g} vs {target:.6g}",
            )
    horizon = 50.0
    fe = mc.estimate_frequency(g, mc.SimConfig(seed=seed, replicas=max(1, replicas // 10), max_events=max_events), horizon)
    rep.check("mc frequency N(t)/t within [w_m, w_M]", w_lo - BANDS * fe.stderr <= fe.mean <= w_hi + BANDS * fe.stderr, f"{fe.mean:.6g}")
