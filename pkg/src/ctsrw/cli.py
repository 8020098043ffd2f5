"""Command-line front end.

    ctsrw analyze GRAPH
    ctsrw hitting GRAPH --from A --to B [--method spectral|quadrature|oracle|mc]
    ctsrw meeting GRAPH --target I [--method tuple|quadrature|mc] [--exact]
    ctsrw verify GRAPH [--tol T] [--seed S] [--replicas R]

GRAPH is an edge-list file or a built-in name (k3, c4, c5, path:N, star:N,
cycle:N, petersen). Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from . import analytics as an
from . import montecarlo as mc
from . import tensor as tn
from .graph import GraphError, WeightedGraph, builtin, laplacian, load, summarize
from .quadrature import QuadratureError
from .report import Report
from .spectral import SpectralError, decompose
from .verify import run_checks

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


def resolve_graph(spec: str) -> WeightedGraph:
    if os.path.exists(spec):
        return load(spec)
    try:
        return builtin(spec)
    except KeyError:
        raise InputError(f"{spec}: no such file or built-in graph") from None


def _vertex(g: WeightedGraph, label: str) -> int:
    try:
        return g.index(label)
    except KeyError:
        raise InputError(f"unknown vertex label {label!r} (known: {', '.join(g.labels[:12])}"
                         f"{', ...' if g.n > 12 else ''})") from None


def graph_info(g: WeightedGraph) -> dict:
    s = summarize(g)
    return {
        "n": s.n,
        "m": s.m,
        "total_weight": s.total_weight,
        "degrees": list(s.degrees),
        "d_min": s.d_min,
        "d_max": s.d_max,
        "w_min": s.w_min,
        "w_max": s.w_max,
        "bipartite": s.is_bipartite,
        "partition": None if s.bipartite is None else [[g.labels[v] for v in part] for part in s.bipartite],
        "labels": list(g.labels),
    }


def cmd_analyze(args, rep: Report, g: WeightedGraph) -> int:
    s = decompose(laplacian(g))
    freq = an.frequency(g, s)
    rep.add("frequency f = 2w/n", freq.f, "jumps/time", "formula")
    rep.add("frequency bounds [w_m, w_M]", [freq.w_min, freq.w_max], "jumps/time", "formula")
    if freq.eigen_average is not None:
        rep.add("eigenvalue average", freq.eigen_average, "jumps/time", "spectral")
    rep.add("Laplacian spectrum", list(s.eigenvalues), "", "spectral")
    rep.add("stationary law (continuous time)", list(an.stationary_ct(g)), "probability", "formula")
    rep.add("stationary law (jump chain)", list(an.stationary_srw(g)), "probability", "formula")
    if not an.srw_is_limit(g):
        rep.notes.append("graph is bipartite: the jump-chain law is invariant but not a limit")
    exact = args.exact and g.is_unweighted
    for x in range(g.n):
        lab = g.labels[x]
        ht = Fraction(g.n, g.degree(x)) if exact else an.mean_first_return_ct(g, x)
        Ht = Fraction(2 * g.m, g.degree(x)) if exact else an.mean_first_return_srw(g, x)
        rep.add(f"h({lab},{lab}) = n/w_x", ht, "time", "exact" if exact else "formula")
        rep.add(f"H({lab},{lab}) = 2w/w_x", Ht, "steps", "exact" if exact else "formula")
    tab = an.hitting_table(g, s)
    for x in range(g.n):
        rep.add(f"h({g.labels[x]},·)", list(tab.h[x]), "time", "spectral")
    for x in range(g.n):
        rep.add(f"H({g.labels[x]},·)", list(tab.H[x]), "steps", "oracle")
    ct = an.commute_times(g, s)
    rep.add("sum over edges of c(x,y)", an.edge_commute_sum(g, ct.c), "time", "spectral")
    rep.add("sum over edges of C(x,y)", an.edge_commute_sum(g, ct.C), "steps", "oracle")
    rep.add("sum_x sum_{y~x} h(y,x)", an.edge_sum(g, tab.h), "time", "spectral")
    rep.add("sum_x sum_{y~x} H(y,x)", an.edge_sum(g, tab.H), "steps", "oracle")
    fe = an.fixed_edge_return_bounds(g, g.edges[0])
    note = None if not fe.weighted else f"weighted: edge {g.labels[g.edges[0][0]]}-{g.labels[g.edges[0][1]]}"
    rep.add("fixed-edge return steps", fe.steps, "steps", "formula", note=note)
    rep.add("fixed-edge return time bounds", [fe.time_low, fe.time_high], "time", "formula", note=note)
    return EXIT_OK


def _mc_config(args) -> mc.SimConfig:
    return mc.SimConfig(seed=args.seed, replicas=args.replicas, max_events=args.max_events, workers=args.workers)


def cmd_hitting(args, rep: Report, g: WeightedGraph) -> int:
    x, y = _vertex(g, args.source), _vertex(g, args.target)
    if x == y:
        raise InputError("--from and --to must differ; use analyze for return times")
    s = decompose(laplacian(g))
    f = an.frequency(g, s).f
    regular = g.is_regular() if g.is_unweighted else g.is_weight_regular()
    if args.method == "spectral":
        rep.add(f"h({args.source},{args.target})", an.hitting_time_ct(s, x, y), "time", "spectral")
    elif args.method == "quadrature":
        val, err = an.hitting_time_quadrature(s, x, y, eps=args.tol)
        rep.add(f"h({args.source},{args.target})", val, "time", "quadrature", tolerance=err)
    elif args.method == "oracle":
        if not regular:
            raise InputError("the oracle gives h = H/f only on regular graphs; use spectral or quadrature")
        rep.add(f"h({args.source},{args.target}) = H/f", an.hitting_time_srw_oracle(g, x, y) / f, "time", "oracle")
    else:
        res = mc.simulate_ctsrw(g, _mc_config(args), mc.StoppingTimeSpec.hitting(x, y))
        rep.add(f"h({args.source},{args.target})", res.time.mean, "time", "monte-carlo", stderr=res.time.stderr)
        rep.add(f"jumps to hit {args.target}", res.jumps.mean, "steps", "monte-carlo", stderr=res.jumps.stderr)
        rep.meta.update(seed=args.seed, replicas=args.replicas, capped=res.capped)
        rep.add("spectral reference", an.hitting_time_ct(s, x, y), "time", "spectral")
    H = an.hitting_time_srw_oracle(g, x, y)
    rep.add(f"H({args.source},{args.target})", H, "steps", "oracle")
    if regular:
        rep.notes.append(f"regular graph: H = f h exactly with f = {f:.12g}")
    return EXIT_OK


def cmd_meeting(args, rep: Report, g: WeightedGraph) -> int:
    if not g.is_unweighted:
        raise InputError("meeting times are defined for unweighted graphs")
    i = _vertex(g, args.target)
    n = g.n
    s = decompose(laplacian(g))
    name = f"h(Id,c_{args.target})"
    h = None
    if args.method == "tuple":
        if n > tn.TUPLE_CAP_N:
            raise InputError(
                f"{n}^{n} eigen-tuples exceed the cap (n <= {tn.TUPLE_CAP_N}); use --method quadrature or mc"
            )
        if args.exact:
            try:
                h, method = tn.meeting_time_exact(g, i, s), "exact"
            except tn.ExactUnavailable as exc:
                rep.notes.append(f"exact form unavailable ({exc}); reporting the floating-point tuple sum")
        if h is None:
            h, method = tn.meeting_time_spectral(s, i), "spectral"
        rep.add(name, h, "time", method)
    elif args.method == "quadrature":
        h, err = tn.meeting_time_quadrature(s, i, eps=args.tol)
        method = "quadrature"
        rep.add(name, h, "time", method, tolerance=err)
    else:
        est = mc.simulate_mpsrw(g, _mc_config(args), i, args.person_selection)
        rep.add(f"H(Id,c_{args.target})", est.mean, "steps", "monte-carlo", stderr=est.stderr,
                note=f"person selection: {args.person_selection}")
        rep.meta.update(seed=args.seed, replicas=args.replicas)
        if n > tn.TUPLE_CAP_N:
            h, method = tn.meeting_time_quadrature(s, i)[0], "quadrature"
        else:
            h, method = tn.meeting_time_spectral(s, i), "spectral"
        rep.add(f"{name} reference", h, "time", method)
    steps = tn.meeting_steps(g, h)
    if steps.exact:
        rep.add(f"H(Id,c_{args.target}) = n d h", steps.low, "steps", method)
    else:
        rep.add(f"H(Id,c_{args.target}) bounds [n d_m h, n d_M h]", [steps.low, steps.high], "steps", method)
        rep.notes.append("graph is not regular: only bounds on the step count follow from h")
    hr, Hr = tn.tensor_return_times(g, tn.MapState.identity(n), exact=args.exact)
    rep.add("h(Id,Id) = n^n/2m", hr, "time", "exact" if args.exact else "formula")
    rep.add("H(Id,Id) = n^n", Hr, "steps", "exact" if args.exact else "formula")
    return EXIT_OK


def cmd_verify(args, rep: Report, g: WeightedGraph) -> int:
    run_checks(rep, g, tol=args.tol, seed=args.seed, replicas=args.replicas, max_events=args.max_events)
    rep.meta.update(seed=args.seed, replicas=args.replicas, tol=args.tol)
    return EXIT_FAIL if rep.failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ctsrw", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, mc_defaults=(0, 10_000)):
        sp.add_argument("graph", help="edge-list file or built-in name")
        sp.add_argument("--json", action="store_true", help="emit one JSON document")
        sp.add_argument("--exact", action="store_true", help="rational arithmetic where inputs are rational")
        sp.add_argument("--seed", type=int, default=mc_defaults[0])
        sp.add_argument("--replicas", type=int, default=mc_defaults[1])
        sp.add_argument("--max-events", type=int, default=mc.MAX_EVENTS)
        sp.add_argument("--workers", type=int, default=1, help="processes for Monte Carlo replicas")

    sp = sub.add_parser("analyze", help="frequency, stationary laws, return and hitting times")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("hitting", help="mean hitting time between two vertices")
    common(sp, (42, 100_000))
    sp.add_argument("--from", dest="source", required=True)
    sp.add_argument("--to", dest="target", required=True)
    sp.add_argument("--method", choices=["spectral", "quadrature", "oracle", "mc"], default="spectral")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_hitting)

    sp = sub.add_parser("meeting", help="time for all n persons to meet at a vertex")
    common(sp, (42, 100_000))
    sp.add_argument("--target", required=True)
    sp.add_argument("--method", choices=["tuple", "quadrature", "mc"], default="tuple")
    sp.add_argument("--person-selection", choices=["degree", "uniform"], default="degree")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.set_defaults(func=cmd_meeting)

    sp = sub.add_parser("verify", help="run every identity and Monte Carlo check")
    common(sp)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        for flag in ("replicas", "max_events", "workers"):
            if getattr(args, flag) < 1:
                raise InputError(f"--{flag.replace('_', '-')} must be a positive integer")
        if args.seed < 0:
            raise InputError("--seed must be non-negative")
        g = resolve_graph(args.graph)
        rep = Report(command=[args.command] + argv[1:], graph=graph_info(g))
        code = args.func(args, rep, g)
    except (GraphError, InputError, tn.CapExceeded, ValueError) as exc:
        print(f"ctsrw: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (SpectralError, QuadratureError, mc.SimulationError, ArithmeticError) as exc:
        print(f"ctsrw: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    sys.stdout.write(rep.to_json() if args.json else rep.to_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
