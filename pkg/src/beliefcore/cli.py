"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid or inconsistent diagram,
3 impossible evidence, 4 internal size limit.  Results go to stdout,
diagnostics to stderr.
"""

import argparse
import os
import sys

import numpy as np

from . import io as bio
from .clustering import METHODS, build_join_tree, jt_infer_jensen, jt_infer_meta
from .conditioning import conditioning_infer_joint, conditioning_infer_weighted
from .errors import (
    BeliefcoreError,
    DiagramError,
    ImpossibleEvidence,
    ParseError,
    TooLarge,
    TransformError,
    UnknownFixture,
)
from .estimators import calibrate, estimate_jensen_init, estimate_jensen_update, evidence_declaration_cost
from .fixtures import fixture
from .model import NodeKind, graph_order, is_consistent
from .oracle import joint_enumeration_oracle
from .polytree import is_polytree, polytree_infer
from .random_nets import bench_networks, random_network
from .reduction import evaluate_influence_diagram, reduction_query
from .simulation import SimParams, gibbs_infer
from .transforms import absorb_chance_node, reduce_deterministic_node, remove_all_barren, reverse_arc

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_IMPOSSIBLE = 3
EXIT_LIMIT = 4

ALGORITHMS = ("auto", "polytree", "conditioning-weighted", "conditioning-joint",
              "clustering-jensen", "clustering-meta", "reduction", "gibbs", "oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def exit_code(exc):
    if isinstance(exc, ImpossibleEvidence):
        return EXIT_IMPOSSIBLE
    if isinstance(exc, TooLarge):
        return EXIT_LIMIT
    if isinstance(exc, (ParseError, DiagramError)) and not isinstance(exc, TransformError):
        return EXIT_INCONSISTENT
    return EXIT_USAGE


def fmt(x):
    return format(float(x), ".12g")


def read_diagram(source, validate=True):
    """Load ``source`` from a file, or from the fixture of that name."""
    if os.path.exists(source):
        return bio.load_file(source, validate=validate)
    try:
        return fixture(source)
    except UnknownFixture:
        raise UsageError(f"no such file or fixture: {source}") from None


def parse_evidence(text):
    ev = {}
    if not text:
        return ev
    for item in text.split(","):
        name, sep, state = item.partition("=")
        if not sep or not name.strip() or not state.strip():
            raise UsageError(f"bad evidence item {item!r}; expected NODE=STATE")
        ev[name.strip()] = state.strip()
    return ev


def parse_range(text):
    lo, _, hi = text.partition("-")
    try:
        return (int(lo), int(hi or lo))
    except ValueError:
        raise UsageError(f"bad range {text!r}; expected N or LO-HI") from None


def write_text(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# --------------------------------------------------------------------------
# subcommands


def cmd_validate(args, out):
    d = read_diagram(args.file, validate=False)
    report = is_consistent(d)
    if report.ok:
        print(f"{d.name or args.file}: consistent ({len(d)} nodes)", file=out)
        return EXIT_OK
    for v in report.violations:
        print(f"{v.node}: {v.rule}: {v.detail}", file=out)
    return EXIT_INCONSISTENT


def describe_node(d, i):
    n = d[i]
    lines = [f"{i} ({n.kind.value})"]
    if n.states:
        lines.append(f"  states: {', '.join(n.states)}")
    lines.append(f"  parents: {', '.join(n.parents) or '-'}")
    lines.append(f"  children: {', '.join(d.children(i)) or '-'}")
    if n.table is not None:
        for cfg in np.ndindex(*n.table.shape[:len(n.parents)]):
            cond = ",".join(f"{p}={d[p].states[s]}" for p, s in zip(n.parents, cfg))
            row = np.atleast_1d(n.table[cfg])
            lines.append(f"  {cond or '(none)'}: {' '.join(fmt(x) for x in row)}")
    return lines


def cmd_describe(args, out):
    d = read_diagram(args.file)
    if args.node:
        d[args.node]
        ids = [args.node]
    else:
        counts = {k: len(d.ids_of_kind(k)) for k in NodeKind}
        summary = ", ".join(f"{v} {k.value}" for k, v in counts.items() if v)
        print(f"diagram {d.name}: {len(d)} nodes ({summary}), {len(d.arcs())} arcs", file=out)
        ids = graph_order(d)
    for i in ids:
        for line in describe_node(d, i):
            print(line, file=out)
    return EXIT_OK


def run_query(d, evidence, algorithm, target=None, params=None):
    if algorithm == "auto":
        algorithm = "polytree" if is_polytree(d) else "clustering-jensen"
    if algorithm == "polytree":
        return polytree_infer(d, evidence)
    if algorithm == "conditioning-weighted":
        return conditioning_infer_weighted(d, evidence)[0]
    if algorithm == "conditioning-joint":
        return conditioning_infer_joint(d, evidence)
    if algorithm == "clustering-jensen":
        return jt_infer_jensen(build_join_tree(d), evidence)
    if algorithm == "clustering-meta":
        return jt_infer_meta(build_join_tree(d), evidence)
    if algorithm == "gibbs":
        return gibbs_infer(d, evidence, params)
    if algorithm == "oracle":
        return joint_enumeration_oracle(d, evidence)
    if algorithm == "reduction":
        targets = [target] if target else [i for i in graph_order(d) if d[i].is_chance]
        return {t: reduction_query(d, t, evidence)[t] for t in targets}
    raise UsageError(f"unknown algorithm {algorithm!r}")


def cmd_query(args, out):
    d = read_diagram(args.file)
    evidence = parse_evidence(args.evidence)
    if args.target:
        d[args.target]
    params = SimParams(args.sweeps, args.burn_in, args.seed) if args.algorithm == "gibbs" else None
    if args.stats and args.algorithm.startswith("conditioning"):
        beliefs, log = conditioning_infer_weighted(d, evidence)
        if args.algorithm == "conditioning-joint":
            beliefs = conditioning_infer_joint(d, evidence)
        print(log, file=out)
    else:
        beliefs = run_query(d, evidence, args.algorithm, args.target, params)
    ids = [args.target] if args.target else [i for i in graph_order(d) if i in beliefs]
    for i in ids:
        print(f"{i}: {' '.join(fmt(x) for x in beliefs[i])}", file=out)
    return EXIT_OK


def cmd_solve(args, out):
    d = read_diagram(args.file)
    result = evaluate_influence_diagram(d, add_no_forgetting=args.add_no_forgetting)
    for line in result.policy.describe(d):
        print(line, file=out)
    print(f"EU: {fmt(result.expected_utility)}", file=out)
    return EXIT_OK


def cmd_estimate(args, out):
    d = read_diagram(args.file)
    jt = build_join_tree(d, args.method)
    ev = jt.resolve(parse_evidence(args.evidence))
    print(f"init_estimate: {estimate_jensen_init(jt)}", file=out)
    print(f"update_estimate: {estimate_jensen_update(jt, ev)}", file=out)
    print(f"evidence_declaration_cost: {evidence_declaration_cost(jt, ev)}", file=out)
    return EXIT_OK


def cmd_bench(args, out):
    if args.gen_count < 1:
        raise UsageError("--gen-count must be positive")
    nets = bench_networks(args.gen_count, args.seed)
    cal = calibrate(nets, method=args.method, repeats=args.repeats)
    write_text(args.out, cal.to_csv())
    corr = "undefined" if cal.correlation is None else f"{cal.correlation:.4f}"
    print(f"nets: {len(nets)}", file=out)
    print(f"pearson(update_estimate, wall_time_ns): {corr}", file=out)
    print(f"wrote {args.out}", file=out)
    return EXIT_OK


def cmd_gen(args, out):
    d = random_network(args.nodes, args.max_parents, parse_range(args.states), args.density,
                       polytree_only=args.polytree, seed=args.seed)
    write_text(args.out, bio.save(d))
    print(f"wrote {args.out} ({len(d)} nodes, {len(d.arcs())} arcs)", file=out)
    return EXIT_OK


def cmd_transform(args, out):
    d = read_diagram(args.file)
    if args.reverse_arc:
        d = reverse_arc(d, *args.reverse_arc)
    elif args.remove_barren:
        keep = [k for k in (args.keep or "").split(",") if k]
        d = remove_all_barren(d, keep=keep)
    elif args.absorb:
        d = absorb_chance_node(d, args.absorb)
    else:
        d = reduce_deterministic_node(d, args.reduce_det)
    write_text(args.out, bio.save(d))
    print(f"wrote {args.out} ({len(d)} nodes)", file=out)
    return EXIT_OK


def cmd_compile(args, out):
    d = read_diagram(args.file)
    jt = build_join_tree(d, args.method)
    n = len(jt.universes)
    print(f"universes: {n}", file=out)
    for u in range(n):
        parent = "-" if jt.parent[u] is None else str(jt.parent[u])
        print(f"U{u}: {' '.join(jt.universes[u])}  S={jt.S(u)} N={jt.N(u)} parent={parent}", file=out)
    for c in sorted(jt.sepsets):
        print(f"sepset U{jt.parent[c]}-U{c}: {' '.join(jt.sepsets[c]) or '(empty)'}", file=out)
    print(f"total state space: {jt.total_state_space()}", file=out)
    print(f"max universe: {max(jt.S(u) for u in range(n))}", file=out)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="beliefcore", description="Belief networks and influence diagrams.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("validate", help="check a diagram file for consistency")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("describe", help="print nodes, arcs and tables")
    s.add_argument("file")
    s.add_argument("--node")
    s.set_defaults(func=cmd_describe)

    s = sub.add_parser("query", help="posterior beliefs given evidence")
    s.add_argument("file")
    s.add_argument("--evidence", default="")
    s.add_argument("--target")
    s.add_argument("--algorithm", choices=ALGORITHMS, default="auto")
    s.add_argument("--sweeps", type=int, default=20000)
    s.add_argument("--burn-in", type=int, default=1000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--stats", action="store_true", help="print cutset case counts")
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("solve", help="optimal policy of an influence diagram")
    s.add_argument("file")
    s.add_argument("--add-no-forgetting", action="store_true")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("estimate", help="join-tree cost estimates")
    s.add_argument("file")
    s.add_argument("--evidence", default="")
    s.add_argument("--method", choices=METHODS, default="min-fill")
    s.set_defaults(func=cmd_estimate)

    s = sub.add_parser("bench", help="compare cost estimates with wall time")
    s.add_argument("--gen-count", type=int, default=30)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.add_argument("--method", choices=METHODS, default="min-fill")
    s.add_argument("--repeats", type=int, default=5)
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("gen", help="write a random belief network")
    s.add_argument("--nodes", type=int, required=True)
    s.add_argument("--max-parents", type=int, default=2)
    s.add_argument("--states", default="2", help="N or LO-HI")
    s.add_argument("--density", type=float, default=0.5)
    s.add_argument("--polytree", action="store_true")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("transform", help="apply one transformation and save the result")
    s.add_argument("file")
    op = s.add_mutually_exclusive_group(required=True)
    op.add_argument("--reverse-arc", nargs=2, metavar=("PARENT", "CHILD"))
    op.add_argument("--remove-barren", action="store_true")
    op.add_argument("--absorb", metavar="ID")
    op.add_argument("--reduce-det", metavar="ID")
    s.add_argument("--keep", help="comma-separated nodes protected from barren removal")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_transform)

    s = sub.add_parser("compile", help="join-tree statistics")
    s.add_argument("file")
    s.add_argument("--method", choices=METHODS, default="min-fill")
    s.set_defaults(func=cmd_compile)
    return p


def run(argv, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except UsageError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE
    except BeliefcoreError as e:
        msg = e.args[0] if isinstance(e, KeyError) and e.args else str(e)
        print(f"error: {msg}", file=err)
        return exit_code(e)
    except OSError as e:
        print(f"error: {e}", file=err)
        return EXIT_USAGE


def main(argv=None):
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
