"""``graphent`` command-line front end.

Exit codes: 0 on success, 1 when a verification fails (the report is still
written), 2 on usage or input errors.  Data goes to ``--out`` or stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import replace
from pathlib import Path

from . import __version__
from .af import (
    check_independence_hypothesis,
    dimension_report,
    omega,
    phi_E_containment,
    rank_bound_sequences,
    verify_homomorphism,
    verify_independence,
)
from .counting import (
    PathClass,
    convolution_check,
    count_class,
    first_return_counts,
    renewal_failures,
    transpose_duality_failures,
)
from .entropy import (
    DEFAULT_TAIL,
    _r,
    block_entropy,
    coblock_entropy,
    finite_entropy,
    growth_rate,
    loop_entropy,
    loop_period,
    star_radius_check,
    finite_coherence_check,
    through_growth_check,
    sandwich,
    subgraph_supremum,
    through_growth,
)
from .errors import GraphentError, HypothesisViolated
from .families import ROOT, family_from_dict, load_family
from .graph import FiniteGraph, FiniteGraphOracle, full_window, is_irreducible, materialize, read_edge_list


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", metavar="FILE", help="edge-list file of a finite graph")
    src.add_argument("--family", metavar="NAME", help="built-in family: salama_2_8, salama_pp, random_strongly_connected")
    src.add_argument("--family-file", metavar="JSON", help="family spec file")
    common.add_argument("--p", type=int, help="parameter p of salama_pp")
    common.add_argument("--n-vertices", type=int, default=8, help="random_strongly_connected size (default: 8)")
    common.add_argument("--density", type=float, default=0.2, help="random_strongly_connected edge density (default: 0.2)")
    common.add_argument("--seed", type=int, default=1, help="random_strongly_connected seed (default: 1)")
    common.add_argument("--vertex", help="base vertex (default: 0 for families, first vertex for files)")
    common.add_argument("--nmax", type=int, default=20, help="largest path length (default: 20)")
    common.add_argument("--stride", type=int, help="subsequence stride for growth estimates (default: loop period)")
    common.add_argument("--tol", type=float, default=0.05, help="tolerance for numerical checks (default: 0.05)")
    common.add_argument("--tail", type=float, default=DEFAULT_TAIL, help="tail fraction for growth estimates")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="output file (default: stdout)")

    parser = argparse.ArgumentParser(prog="graphent", description="Entropy invariants of locally finite directed graphs.")
    parser.add_argument("--version", action="version", version=f"graphent {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counts", parents=[common], help="exact path-class counts")
    p.add_argument("--class", dest="path_class", choices=[c.value for c in PathClass] + ["first-return"], default="source")

    p = sub.add_parser("entropy", parents=[common], help="loop, block and co-block entropy estimates")
    p.add_argument("--quantity", choices=("all", "h_l", "h_b", "h_b_t", "through"), default="all")
    p.add_argument("--method", choices=("stride_subsequence", "tail_max"), default="stride_subsequence")

    sub.add_parser("sandwich", parents=[common], help="lower/upper entropy bounds")
    sub.add_parser("verify", parents=[common], help="run the identity checks")

    p = sub.add_parser("af", parents=[common], help="AF-algebra truncation checks")
    p.add_argument("--n", type=int, default=2, help="truncation length (default: 2)")
    p.add_argument("--n1", type=int, default=0, help="offset for the k_n sequence (default: 0)")

    p = sub.add_parser("subgraphs", parents=[common], help="entropy of finite windows")
    p.add_argument("--radii", default="5,9,13,17,21", help="comma-separated increasing radii")
    return parser


# --------------------------------------------------------------------------
# input


def _load(args):
    """Return ``(graph_or_oracle, descriptor_or_None)``."""
    if args.graph:
        try:
            return read_edge_list(args.graph), None
        except OSError as exc:
            raise UsageError(f"cannot read {args.graph}: {exc}") from None
    if args.family_file:
        return load_family(args.family_file)
    spec = {"family": args.family}
    if args.family == "salama_pp":
        if args.p is None:
            raise UsageError("--family salama_pp needs --p")
        spec["p"] = args.p
    elif args.family == "random_strongly_connected":
        spec.update(n_vertices=args.n_vertices, density=args.density, seed=args.seed)
    elif args.p is not None:
        raise UsageError(f"--p does not apply to family {args.family}")
    return family_from_dict(spec)


def _vertex(args, graph) -> str:
    if args.vertex is not None:
        v = args.vertex
    elif isinstance(graph, FiniteGraph):
        if not graph.vertices:
            raise UsageError("graph has no vertices")
        v = graph.vertices[0]
    else:
        v = ROOT
    if isinstance(graph, FiniteGraph) and v not in graph.index:
        raise UsageError(f"vertex {v!r} is not in the graph")
    return v


def _window(graph, v, radius):
    if isinstance(graph, FiniteGraph):
        return full_window(graph)
    return materialize(graph, [v], radius)


# --------------------------------------------------------------------------
# commands; each returns (report body, passed, csv rows or None)


def _cmd_counts(args, graph, v):
    w = _window(graph, v, args.nmax)
    if args.path_class == "first-return":
        counts = first_return_counts(w, v, args.nmax).counts
    else:
        counts = count_class(w, v, args.path_class, args.nmax).counts
    body = {"class": args.path_class, "window_radius": w.radius, "counts": [str(c) for c in counts]}
    rows = [["n", "count"]] + [[n, str(c)] for n, c in enumerate(counts)]
    return body, True, rows


def _cmd_entropy(args, graph, v, desc):
    w = _window(graph, v, args.nmax)
    n = args.nmax
    stride = args.stride or loop_period(w, v, n)
    funcs = {"h_l": loop_entropy, "h_b": block_entropy, "h_b_t": coblock_entropy, "through": through_growth}
    series_cls = {"h_l": PathClass.LOOP, "h_b": PathClass.SOURCE, "h_b_t": PathClass.RANGE, "through": PathClass.THROUGH}
    names = list(funcs) if args.quantity == "all" else [args.quantity]
    prov = _provenance(desc)
    estimates = []
    for q in names:
        if args.method == "tail_max":
            series = count_class(w, v, series_cls[q], n)
            est = growth_rate(series, stride, args.tail, method="tail_max")
            est = replace(est, quantity=q)
        else:
            est = funcs[q](w, v, n, stride, args.tail)
        estimates.append(est.to_dict(prov))
    body = {"window_radius": w.radius, "estimates": estimates}
    if isinstance(graph, FiniteGraph):
        body["log_spectral_radius"] = _r(finite_entropy(graph).value)
    rows = [["quantity", "value_nats", "value_bits", "method", "stride"]]
    rows += [[e["quantity"], e["value_nats"], e["value_bits"], e["method"], e["stride"]] for e in estimates]
    return body, True, rows


def _cmd_sandwich(args, graph, v, desc):
    rep = sandwich(graph, v, args.nmax, args.tol, args.tail)
    body = rep.to_dict(_provenance(desc))
    rows = [["lower_nats", "upper_nats", "exact", "consistent"], [body["lower_nats"], body["upper_nats"], rep.exact, rep.consistent]]
    return body, rep.consistent, rows


def _cmd_verify(args, graph, v, desc):
    n = args.nmax
    w = _window(graph, v, n)
    checks = []
    checks.append(convolution_check(w, v, n).to_dict())
    loops = count_class(w, v, PathClass.LOOP, n)
    bad = renewal_failures(first_return_counts(w, v, n), loops)
    checks.append({"check": "renewal identity", "n_max": n, "passed": not bad, "failures": bad})
    bad = transpose_duality_failures(w, v, n)
    checks.append({"check": "transpose duality", "n_max": n, "passed": not bad, "failures": [list(b) for b in bad]})
    checks.append(star_radius_check(w, v, n, args.tol).to_dict())
    checks.append(through_growth_check(w, v, n, args.tol).to_dict())
    if isinstance(graph, FiniteGraph):
        if is_irreducible(graph):
            checks.append(finite_coherence_check(graph, v, n, args.tol).to_dict())
        else:
            checks.append({"check": "finite irreducible coherence", "passed": None, "skipped": "graph is not irreducible"})
    passed = all(c["passed"] is not False for c in checks)
    rows = [["check", "passed"]] + [[c["check"], c["passed"]] for c in checks]
    return {"window_radius": w.radius, "checks": checks, "passed": passed}, passed, rows


def _cmd_af(args, graph, v):
    n = args.n
    if n < 0:
        raise UsageError("--n must be >= 0")
    w = _window(graph, v, max(2 * n, args.nmax + args.n1))
    body = {"window_radius": w.radius, "n": n, "omega_cardinality": len(omega(w, v, n))}
    hom = verify_homomorphism(w, v, n)
    body["homomorphism"] = hom.to_dict()
    try:
        check_independence_hypothesis(w)
        ind = verify_independence(w, v, n).to_dict()
    except HypothesisViolated as exc:
        ind = {"check": "independence", "passed": None, "skipped": str(exc)}
    body["independence"] = ind
    body["dimension"] = dimension_report(w, v, n).to_dict()
    bad = phi_E_containment(w, v, n, 2) if n >= 1 else []
    body["phi_E_containment"] = {"n0": n, "n": 2, "passed": not bad, "violations": len(bad)}
    r_series, k_series = rank_bound_sequences(w, v, args.nmax, n1=args.n1)
    body["rank_bounds"] = {
        "n1": args.n1,
        "r_n": [str(c) for c in r_series.counts],
        "k_n": [str(c) for c in k_series.counts],
    }
    passed = hom.passed and ind["passed"] is not False and not bad
    rows = [["check", "passed"]]
    rows += [["homomorphism", hom.passed], ["independence", ind["passed"]], ["phi_E containment", not bad]]
    rows += [["dimensions coincide", body["dimension"]["coincide"]]]
    return body, passed, rows


def _cmd_subgraphs(args, graph, v):
    try:
        radii = [int(x) for x in args.radii.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --radii {args.radii!r}") from None
    if not radii or any(b <= a for a, b in zip(radii, radii[1:])):
        raise UsageError("--radii must be a strictly increasing list")
    oracle = FiniteGraphOracle(graph) if isinstance(graph, FiniteGraph) else graph
    values = subgraph_supremum(oracle, v, radii)
    body = {"radii": radii, "entropy_nats": [_r(x) for x in values]}
    body["monotone"] = all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
    rows = [["radius", "entropy_nats"]] + [[r, _r(x)] for r, x in zip(radii, values)]
    return body, True, rows


# --------------------------------------------------------------------------
# output


def _provenance(desc):
    if desc is None or desc.known_entropies is None:
        return None
    return desc.known_entropies.provenance


def _config(args) -> dict:
    keep = ("graph", "family", "family_file", "p", "vertex", "nmax", "stride", "tol", "tail", "format")
    cfg = {k: getattr(args, k) for k in keep}
    for k in ("path_class", "quantity", "method", "n", "n1", "radii"):
        if hasattr(args, k):
            cfg[k] = getattr(args, k)
    return cfg


def _known(desc):
    if desc is None or desc.known_entropies is None:
        return None
    k = desc.known_entropies
    return {"h_l": _r(k.h_l), "h_b": _r(k.h_b), "h_b_t": _r(k.h_b_t), "provenance": k.provenance}


def _render(args, header: dict, body: dict, rows) -> str:
    if args.format == "csv":
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        return buf.getvalue()
    return json.dumps({**header, **body}, indent=2) + "\n"


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.nmax < 1:
        parser.print_usage(sys.stderr)
        print("graphent: error: --nmax must be >= 1", file=sys.stderr)
        return 2
    if not args.tol > 0:
        print("graphent: error: --tol must be > 0", file=sys.stderr)
        return 2
    if args.stride is not None and args.stride < 1:
        print("graphent: error: --stride must be >= 1", file=sys.stderr)
        return 2

    t0 = time.perf_counter()
    try:
        graph, desc = _load(args)
        v = _vertex(args, graph)
        cmd = args.command
        if cmd == "counts":
            body, passed, rows = _cmd_counts(args, graph, v)
        elif cmd == "entropy":
            body, passed, rows = _cmd_entropy(args, graph, v, desc)
        elif cmd == "sandwich":
            body, passed, rows = _cmd_sandwich(args, graph, v, desc)
        elif cmd == "verify":
            body, passed, rows = _cmd_verify(args, graph, v, desc)
        elif cmd == "af":
            body, passed, rows = _cmd_af(args, graph, v)
        else:
            body, passed, rows = _cmd_subgraphs(args, graph, v)
    except (UsageError, GraphentError, ValueError, KeyError) as exc:
        print(f"graphent: error: {exc}", file=sys.stderr)
        return 2

    header = {
        "tool": "graphent",
        "version": __version__,
        "command": args.command,
        "config": _config(args),
        "vertex": str(v),
        "family": None if desc is None else desc.name,
        "known_entropies": _known(desc),
    }
    text = _render(args, header, body, rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    print(f"graphent {args.command}: {'ok' if passed else 'FAILED'} in {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 0 if passed else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
