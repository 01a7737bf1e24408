"""Command-line front end.

JSON reports go to stdout; human diagnostics go to stderr (suppressed by
--quiet).  Exit codes: 0 = success / IN, 1 = OUT / infeasible behavior,
2 = error, 3 = BOUNDARY.  Resource caps are settable per invocation
(--sdp-cap, --clique-budget, --copy-budget) or via the environment
variables EXLAB_SDP_CAP, EXLAB_CLIQUE_BUDGET, EXLAB_COPY_BUDGET; flags
win over the environment.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__
from .assignments import (
    in_qstab,
    in_stab,
    self_inconsistency_check,
    unit_range_assignment,
)
from .cliques import DEFAULT_CLIQUE_CAP, enumerate_maximal_cliques
from .constructions import build_h, th_membership_via_h
from .errors import ExlabError, InfeasibleBehaviorError, ValidationFailure
from .graphs import (
    DEFAULT_PRODUCT_CAP,
    Graph,
    complement,
    cycle_graph,
    find_isomorphism,
    generalized_composition,
    induced_subgraph,
    is_perfect,
    is_self_complementary,
    or_power,
    or_product,
)
from .scalars import parse_scalar
from .scenarios import (
    CHSH_PENTAGON_VERTICES,
    KCBS_PENTAGON_VERTICES,
    behavior_to_assignment,
    bell_chsh_scenario,
    complete_chsh_behavior,
    exclusivity_graph,
    in_classical,
    kcbs_scenario,
    make_behavior,
    validate_behavior,
)
from .serialize import (
    assignment_from_obj,
    colored_exclusivity_dot,
    fmt_float,
    graph_to_dot,
    graph_to_obj,
    parse_graph_text,
    scalar_obj,
)
from .theta import DEFAULT_DIM_CAP, DEFAULT_TOL, in_th

EXIT_IN = 0
EXIT_OUT = 1
EXIT_ERROR = 2
EXIT_BOUNDARY = 3


def _read_text(path: str):
    if path == "-":
        data = sys.stdin.read()
    else:
        with open(path, "r", encoding="utf-8") as fh:
            data = fh.read()
    digest = hashlib.sha256(data.encode("utf-8")).hexdigest()
    return data, {"path": path, "sha256": digest}


def _load_graph(path: str):
    text, meta = _read_text(path)
    return parse_graph_text(text), meta


def _load_assignment(path: str):
    text, meta = _read_text(path)
    return assignment_from_obj(json.loads(text)), meta


def _emit(report: dict, args) -> None:
    print(json.dumps(report, indent=2))


def _note(args, message: str) -> None:
    if not getattr(args, "quiet", False):
        print(message, file=sys.stderr)


def _base_report(args, command: str, inputs=None) -> dict:
    return {
        "command": command,
        "version": __version__,
        "inputs": inputs or {},
    }


def _clique_cert_obj(clique, weight):
    return {
        "clique": list(clique.vertices),
        "weight": scalar_obj(weight),
        "weight_float": fmt_float(float(weight)),
    }


def _env_int(name: str, default: int) -> int:
    val = os.environ.get(name)
    if val is None:
        return default
    try:
        return int(val)
    except ValueError:
        raise ExlabError(f"environment variable {name} must be an integer")


def _caps(args):
    sdp_cap = getattr(args, "sdp_cap", None) or _env_int(
        "EXLAB_SDP_CAP", DEFAULT_DIM_CAP
    )
    clique_budget = getattr(args, "clique_budget", None) or _env_int(
        "EXLAB_CLIQUE_BUDGET", DEFAULT_CLIQUE_CAP
    )
    copy_budget = getattr(args, "copy_budget", None) or _env_int(
        "EXLAB_COPY_BUDGET", DEFAULT_PRODUCT_CAP
    )
    return sdp_cap, clique_budget, copy_budget


# ---------------------------------------------------------------------------
# graph subcommands


def _graph_output(args, g: Graph) -> int:
    if getattr(args, "format", "json") == "dot":
        print(graph_to_dot(g))
        return EXIT_IN
    print(json.dumps(graph_to_obj(g), indent=2))
    return EXIT_IN


def cmd_graph(args) -> int:
    sdp_cap, clique_budget, copy_budget = _caps(args)
    sub = args.graph_cmd
    if sub == "cycle":
        return _graph_output(args, cycle_graph(args.n))
    if sub == "complement":
        g, _ = _load_graph(args.file)
        return _graph_output(args, complement(g))
    if sub == "product":
        g1, _ = _load_graph(args.file1)
        g2, _ = _load_graph(args.file2)
        return _graph_output(args, or_product(g1, g2, cap=copy_budget))
    if sub == "power":
        g, _ = _load_graph(args.file)
        return _graph_output(args, or_power(g, args.k, cap=copy_budget))
    if sub == "compose":
        skel, _ = _load_graph(args.skeleton)
        parts = [_load_graph(p)[0] for p in args.parts]
        return _graph_output(args, generalized_composition(skel, parts))
    if sub == "info":
        g, meta = _load_graph(args.file)
        t0 = time.perf_counter()
        perfect = is_perfect(g)
        cliques = enumerate_maximal_cliques(g, cap=clique_budget)
        report = _base_report(args, "graph info", {"graph": meta})
        report.update(
            {
                "order": g.n,
                "size": g.edge_count,
                "perfect": perfect.is_perfect,
                "self_complementary": is_self_complementary(g),
                "maximal_cliques": [list(c.vertices) for c in cliques],
                "timings": {"elapsed_s": time.perf_counter() - t0},
            }
        )
        if not perfect.is_perfect:
            report["imperfection_witness"] = {
                "kind": perfect.witness_kind,
                "vertices": list(perfect.witness),
            }
        _emit(report, args)
        return EXIT_IN
    if sub == "h-build":
        g, meta = _load_graph(args.file)
        t0 = time.perf_counter()
        hc = build_h(g, skip_verification=args.skip_verification)
        report = _base_report(args, "graph h-build", {"graph": meta})
        report.update(
            {
                "base": graph_to_obj(hc.base),
                "h_graph": graph_to_obj(hc.h_graph),
                "block_ranges": [list(r) for r in hc.block_ranges],
                "self_complementarity_verified": hc.verified,
                "timings": {"elapsed_s": time.perf_counter() - t0},
            }
        )
        if hc.witness is not None:
            report["isomorphism_witness"] = list(hc.witness.mapping)
        if not hc.verified:
            _note(args, "warning: self-complementarity proof skipped (over cap)")
        _emit(report, args)
        return EXIT_IN
    raise ExlabError(f"unknown graph subcommand {sub}")


# ---------------------------------------------------------------------------
# membership


def cmd_membership(args) -> int:
    sdp_cap, clique_budget, _ = _caps(args)
    g, gmeta = _load_graph(args.graph)
    p, ameta = _load_assignment(args.assignment)
    pa = unit_range_assignment(g, p)
    report = _base_report(
        args, "membership", {"graph": gmeta, "assignment": ameta}
    )
    report["set"] = args.set
    t0 = time.perf_counter()

    if args.set == "qstab":
        verdict = in_qstab(pa)
        report["verdict"] = verdict.status
        if verdict.certificate:
            report["certificate"] = {
                "verdict": verdict.status,
                **_clique_cert_obj(
                    verdict.certificate.clique, verdict.certificate.weight
                ),
            }
        report["timings"] = {"elapsed_s": time.perf_counter() - t0}
        _emit(report, args)
        return EXIT_IN if verdict.is_in else EXIT_OUT

    if args.set == "stab":
        verdict = in_stab(pa, set_cap=clique_budget)
        report["verdict"] = verdict.status
        if verdict.decomposition is not None:
            report["certificate"] = {
                "verdict": verdict.status,
                "decomposition": [
                    {"vertices": list(s), "coefficient": scalar_obj(c)}
                    for s, c in verdict.decomposition
                ],
            }
        if verdict.separating is not None:
            a, rhs = verdict.separating
            report["certificate"] = {
                "verdict": verdict.status,
                "separating_inequality": {
                    "coefficients": [scalar_obj(v) for v in a],
                    "rhs": scalar_obj(rhs),
                },
            }
        report["timings"] = {"elapsed_s": time.perf_counter() - t0}
        _emit(report, args)
        return EXIT_IN if verdict.is_in else EXIT_OUT

    if args.set == "th":
        if args.via_h:
            res = th_membership_via_h(g, pa, tol=args.tol, dim_cap=sdp_cap)
            verdict = res.verdict
            report["via_h"] = {
                "h_order": res.construction.h_graph.n,
                "self_complementarity_verified": res.construction.verified,
            }
            if res.witness is not None:
                report["witness"] = {
                    "q": [scalar_obj(v) for v in res.witness.q.p],
                    "inner_product": fmt_float(res.witness.inner_product),
                    "theta_of_witness": fmt_float(res.witness.theta_of_witness),
                }
        else:
            verdict = in_th(pa, tol=args.tol, dim_cap=sdp_cap)
        report["verdict"] = verdict.status
        report["theta_of_complement"] = fmt_float(verdict.theta_of_complement)
        report["margin"] = fmt_float(verdict.margin)
        report["band"] = fmt_float(verdict.band)
        report["theta"] = {
            "value": fmt_float(verdict.theta.value),
            "dual": fmt_float(verdict.theta.dual_value),
            "gap": fmt_float(verdict.theta.gap),
            "iterations": verdict.theta.iterations,
        }
        report["solver"] = {"tolerance": fmt_float(args.tol)}
        report["timings"] = {"elapsed_s": time.perf_counter() - t0}
        _emit(report, args)
        if verdict.status == "IN":
            return EXIT_IN
        if verdict.status == "OUT":
            return EXIT_OUT
        return EXIT_BOUNDARY

    raise ExlabError(f"unknown set {args.set}")


# ---------------------------------------------------------------------------
# copies


def cmd_copies(args) -> int:
    _, _, copy_budget = _caps(args)
    g, gmeta = _load_graph(args.graph)
    p, ameta = _load_assignment(args.assignment)
    pa = unit_range_assignment(g, p)
    t0 = time.perf_counter()
    verdict = self_inconsistency_check(pa, args.max_copies, vertex_budget=copy_budget)
    report = _base_report(args, "copies", {"graph": gmeta, "assignment": ameta})
    report["max_copies_requested"] = args.max_copies
    report["copies_checked"] = verdict.n_checked
    report["per_copy"] = [
        {
            "copies": k,
            "max_clique_weight": scalar_obj(w),
            "max_clique_weight_float": fmt_float(float(w)),
            "clique": list(c.vertices),
        }
        for k, w, c in verdict.per_copy
    ]
    if verdict.first_violation is not None:
        fv = verdict.first_violation
        report["verdict"] = "self-inconsistent"
        report["first_violation"] = {
            "copies": fv.copies,
            "clique": list(fv.clique.vertices),
            "clique_tuples": [list(t) for t in fv.clique_digits(g.n)],
            "weight": scalar_obj(fv.weight),
            "weight_float": fmt_float(float(fv.weight)),
        }
    else:
        report["verdict"] = f"clean up to {verdict.n_checked} copies"
        report["note"] = (
            "a clean scan bounds no higher copy count and is not a proof of "
            "self-consistency"
        )
    if verdict.budget_stopped_at is not None:
        report["budget_stopped_at_copies"] = verdict.budget_stopped_at
        report["budget_vertices"] = copy_budget
        _note(
            args,
            f"stopped at {verdict.budget_stopped_at} copies by the vertex budget "
            f"({copy_budget}), not by the mathematics",
        )
    report["timings"] = {"elapsed_s": time.perf_counter() - t0}
    _emit(report, args)
    return EXIT_OUT if verdict.is_violated else EXIT_IN


# ---------------------------------------------------------------------------
# scenarios


def _parse_behavior(scenario, obj):
    if isinstance(obj, dict) and "chsh8" in obj:
        return complete_chsh_behavior([parse_scalar(v) for v in obj["chsh8"]])
    if isinstance(obj, list):
        by_ctx = {}
        for entry in obj:
            ctx = tuple(int(x) for x in str(entry["context"]).split(","))
            by_ctx[tuple(sorted(ctx))] = entry["probs"]
        tables = []
        for ctx in scenario.maximal_contexts:
            if ctx not in by_ctx:
                raise ExlabError(f"behavior file missing context {ctx}")
            probs = by_ctx[ctx]
            spaces = [scenario.measurements[m].outcomes for m in ctx]
            from itertools import product as iproduct

            table = []
            for combo in iproduct(*spaces):
                key = "".join(str(o) for o in combo)
                if key not in probs:
                    raise ExlabError(f"behavior missing outcome {key} in context {ctx}")
                table.append(parse_scalar(probs[key]))
            tables.append(table)
        return make_behavior(scenario, tables)
    raise ExlabError("behavior JSON must be a list of context tables or {'chsh8': []}")


def cmd_scenario(args) -> int:
    sdp_cap, _, _ = _caps(args)
    scenario = bell_chsh_scenario() if args.scenario == "chsh" else kcbs_scenario()
    ceg = exclusivity_graph(scenario)
    report = _base_report(args, f"scenario {args.scenario}")
    report["measurements"] = [
        {"name": m.name, "outcomes": list(m.outcomes)} for m in scenario.measurements
    ]
    report["contexts"] = [list(c) for c in scenario.maximal_contexts]
    report["exclusivity_graph"] = {"order": ceg.graph.n, "size": ceg.graph.edge_count}

    if args.pentagon_subset:
        verts = (
            CHSH_PENTAGON_VERTICES if args.scenario == "chsh" else KCBS_PENTAGON_VERTICES
        )
        sub, mapping = induced_subgraph(ceg.graph, verts)
        witness = find_isomorphism(sub, cycle_graph(5))
        report["pentagon_subset"] = {
            "vertices": list(verts),
            "events": [ceg.events[v].label(scenario) for v in verts],
            "isomorphic_to_C5": witness is not None,
        }
        if witness is not None:
            report["pentagon_subset"]["isomorphism"] = list(witness.mapping)

    exit_code = EXIT_IN
    if args.behavior:
        text, bmeta = _read_text(args.behavior)
        report["inputs"]["behavior"] = bmeta
        behavior = _parse_behavior(scenario, json.loads(text))
        check = validate_behavior(scenario, behavior)
        report["behavior_constraints"] = {
            "ok": check.ok,
            "violations": [list(map(str, v)) for v in check.violations],
        }
        if not check.ok:
            _emit(report, args)
            return EXIT_OUT
        pa = behavior_to_assignment(scenario, behavior)
        report["assignment"] = [scalar_obj(v) for v in pa.p]
        if args.classical:
            verdict = in_classical(scenario, behavior)
            report["classical"] = {"verdict": verdict.status}
            if verdict.decomposition is not None:
                report["classical"]["decomposition"] = [
                    {"strategy": list(s), "coefficient": scalar_obj(c)}
                    for s, c in verdict.decomposition
                ]
            if verdict.separating is not None:
                a, bound, value = verdict.separating
                report["classical"]["separating_inequality"] = {
                    "coefficients": [scalar_obj(v) for v in a],
                    "local_bound": scalar_obj(bound),
                    "value_at_behavior": scalar_obj(value),
                }
            if verdict.status == "OUT":
                exit_code = EXIT_OUT
        if args.th:
            verdict = in_th(pa, tol=args.tol, dim_cap=sdp_cap)
            report["th"] = {
                "verdict": verdict.status,
                "theta_of_complement": fmt_float(verdict.theta_of_complement),
                "band": fmt_float(verdict.band),
            }
            if verdict.status == "OUT":
                exit_code = EXIT_OUT
            elif verdict.status == "BOUNDARY" and exit_code == EXIT_IN:
                exit_code = EXIT_BOUNDARY

    if args.dot:
        dot = colored_exclusivity_dot(ceg)
        if args.dot == "-":
            print(dot)
        else:
            with open(args.dot, "w", encoding="utf-8") as fh:
                fh.write(dot)
            _note(args, f"wrote colored DOT to {args.dot}")

    _emit(report, args)
    return exit_code


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p, leaf=False):
    """Shared flags.  Leaf duplicates use SUPPRESS so a value parsed by the
    parent command is not clobbered by the subcommand's defaults; this lets
    the flags appear on either side of the subcommand word."""
    sup = argparse.SUPPRESS
    p.add_argument(
        "--quiet",
        action="store_true",
        default=sup if leaf else False,
        help="suppress stderr diagnostics",
    )
    p.add_argument("--sdp-cap", type=int, default=sup if leaf else None,
                   help="SDP dimension cap")
    p.add_argument("--clique-budget", type=int, default=sup if leaf else None,
                   help="enumeration cap")
    p.add_argument("--copy-budget", type=int, default=sup if leaf else None,
                   help="power-graph vertex budget")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="exlab",
        description="exclusivity-graph membership analysis with certificates",
    )
    ap.add_argument("--version", action="version", version=f"exlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("graph", help="graph constructions and reports")
    _add_common(g)
    g.add_argument("--format", choices=("json", "dot"), default="json")
    gsub = g.add_subparsers(dest="graph_cmd", required=True)

    def graph_leaf(name):
        leaf = gsub.add_parser(name)
        _add_common(leaf, leaf=True)
        leaf.add_argument(
            "--format", choices=("json", "dot"), default=argparse.SUPPRESS
        )
        return leaf

    p = graph_leaf("cycle")
    p.add_argument("n", type=int)
    p = graph_leaf("complement")
    p.add_argument("file", nargs="?", default="-")
    p = graph_leaf("product")
    p.add_argument("file1")
    p.add_argument("file2")
    p = graph_leaf("power")
    p.add_argument("file")
    p.add_argument("k", type=int)
    p = graph_leaf("compose")
    p.add_argument("skeleton")
    p.add_argument("parts", nargs="+")
    p = graph_leaf("info")
    p.add_argument("file", nargs="?", default="-")
    p = graph_leaf("h-build")
    p.add_argument("file", nargs="?", default="-")
    p.add_argument("--skip-verification", action="store_true")
    g.set_defaults(func=cmd_graph)

    m = sub.add_parser("membership", help="polytope / theta-body membership")
    _add_common(m)
    m.add_argument("--set", choices=("stab", "qstab", "th"), required=True)
    m.add_argument("--graph", required=True)
    m.add_argument("--assignment", required=True)
    m.add_argument("--via-h", action="store_true", help="route th through the 4-block host")
    m.add_argument("--tol", type=float, default=DEFAULT_TOL)
    m.set_defaults(func=cmd_membership)

    c = sub.add_parser("copies", help="multi-copy clique-bound scan")
    _add_common(c)
    c.add_argument("--graph", required=True)
    c.add_argument("--assignment", required=True)
    c.add_argument("--max-copies", type=int, required=True)
    c.set_defaults(func=cmd_copies)

    s = sub.add_parser("scenario", help="CHSH / KCBS measurement scenarios")
    _add_common(s)
    s.add_argument("scenario", choices=("chsh", "kcbs"))
    s.add_argument("--behavior", help="behavior JSON file ('-' for stdin)")
    s.add_argument("--classical", action="store_true", help="local-polytope membership")
    s.add_argument("--th", action="store_true", help="theta-body membership")
    s.add_argument("--pentagon-subset", action="store_true")
    s.add_argument("--dot", help="write measurement-colored DOT ('-' for stdout)")
    s.add_argument("--tol", type=float, default=DEFAULT_TOL)
    s.set_defaults(func=cmd_scenario)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"  violated: {v}", file=sys.stderr)
        return EXIT_ERROR
    except InfeasibleBehaviorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return EXIT_OUT
    except ExlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
