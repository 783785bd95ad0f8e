"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v`` (the lines are printed
even under output capture) or directly with ``python tests/test_acceptance.py``.
"""

import time

import numpy as np
import pytest

from beliefcore import io
from beliefcore.clustering import build_join_tree, join_tree_structure, jt_infer_jensen, jt_infer_meta
from beliefcore.conditioning import conditioning_infer_joint, conditioning_infer_weighted
from beliefcore.errors import ImpossibleEvidence, NotStrictlyPositive, WouldCreateCycle
from beliefcore.estimators import (
    StepCounter,
    calibrate,
    estimate_jensen_init,
    estimate_jensen_update,
    evidence_declaration_cost,
)
from beliefcore.fixtures import fixture
from beliefcore.model import build_diagram, diagrams_equal, graph_order, is_consistent, make_node
from beliefcore.oracle import best_policy_by_enumeration, joint_enumeration_oracle
from beliefcore.polytree import is_polytree, polytree_infer
from beliefcore.random_nets import bench_networks, random_influence_diagram, random_network
from beliefcore.reduction import evaluate_influence_diagram, reduction_query
from beliefcore.simulation import SimParams, gibbs_infer
from beliefcore.transforms import (
    absorb_chance_node,
    reduce_deterministic_node,
    remove_all_barren,
    remove_barren_node,
    reverse_arc,
)
from support import deterministic_net, impossible_case, joint_over, mixed_nets, random_evidence, three_diamonds

TF = ("t", "f")


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def exact_algorithms(d, ev):
    """Posteriors from every applicable exact algorithm, keyed by name."""
    out = {}
    if is_polytree(d):
        out["polytree"] = polytree_infer(d, ev)
    out["conditioning-weighted"] = conditioning_infer_weighted(d, ev)[0]
    out["conditioning-joint"] = conditioning_infer_joint(d, ev)
    jt = build_join_tree(d)
    out["clustering-jensen"] = jt_infer_jensen(jt, ev)
    out["clustering-meta"] = jt_infer_meta(jt, ev)
    out["reduction"] = {t: reduction_query(d, t, ev)[t] for t in d.nodes}
    return out


def test_01_oracle_equivalence(report):
    nets = mixed_nets(200)
    worst, checks = 0.0, 0
    start = time.perf_counter()
    for seed, d in enumerate(nets):
        ev = random_evidence(d, seed)
        o = joint_enumeration_oracle(d, ev)
        for beliefs in exact_algorithms(d, ev).values():
            for i in d.nodes:
                worst = max(worst, float(np.max(np.abs(beliefs[i] - o[i]))))
            checks += 1
    elapsed = time.perf_counter() - start
    polys = sum(is_polytree(d) for d in nets)
    report(1, worst <= 1e-8 and elapsed < 60,
           f"oracle equivalence: {checks} algorithm runs on 200 nets ({polys} polytrees), "
           f"max L-inf {worst:.2e} <= 1e-8, {elapsed:.1f}s < 60s")


def test_02_impossible_evidence(report):
    raised = total = other = nans = 0
    for seed in range(50):
        d, ev = impossible_case(seed)
        runs = [
            lambda: joint_enumeration_oracle(d, ev),
            lambda: conditioning_infer_weighted(d, ev),
            lambda: conditioning_infer_joint(d, ev),
            lambda: jt_infer_jensen(build_join_tree(d), ev),
            lambda: jt_infer_meta(build_join_tree(d), ev),
        ]
        runs += [lambda t=t: reduction_query(d, t, ev) for t in graph_order(d)]
        if is_polytree(d):
            runs.append(lambda: polytree_infer(d, ev))
        for fn in runs:
            total += 1
            try:
                result = fn()
            except ImpossibleEvidence:
                raised += 1
                continue
            except Exception:
                other += 1
                continue
            beliefs = result[0] if isinstance(result, tuple) else result
            nans += any(not np.all(np.isfinite(v)) for v in beliefs.values())
        try:
            gibbs_infer(d, ev, SimParams(10, 0, 0))
            other += 1
        except NotStrictlyPositive:
            pass
    report(2, raised == total and other == 0 and nans == 0,
           f"impossible evidence: {raised}/{total} exact runs raised ImpossibleEvidence on 50 nets, "
           f"{other} crashes, {nans} NaN outputs (sampling refuses zero tables up front)")


def test_03_reversal_zero_rule(report):
    d = build_diagram([
        make_node("A", TF, (), [1.0, 0.0]),
        make_node("B", TF, ("A",), [[1.0, 0.0], [0.3, 0.7]]),
    ])
    r = reverse_arc(d, "A", "B")
    row = r["A"].table[1]
    ok = np.array_equal(row, [0.5, 0.5]) and is_consistent(r).ok and r["B"].table[1] == 0.0
    report(3, ok, f"arc reversal with P(B=f)=0: reversed P(A | B=f) = {row.tolist()}, consistent")


def test_04_cutset_skipping(report):
    d = three_diamonds(0.0)
    pruned, log = conditioning_infer_weighted(d)
    debug, _ = conditioning_infer_weighted(d, prune=False)
    diff = pruned.max_abs_diff(debug)
    ok = (log.total_cases, log.skipped_cases) == (8, 4) and diff <= 1e-12
    report(4, ok, f"cutset {('A', 'B', 'C')} with P(A=t)=0: {log.skipped_cases} of {log.total_cases} "
                  f"cases skipped, max change vs unpruned {diff:.1e}")


def test_05_estimator_exactness(report):
    chain = build_diagram([
        make_node("A", TF, (), [0.3, 0.7]),
        make_node("B", TF, ("A",), [[0.8, 0.2], [0.1, 0.9]]),
        make_node("C", TF, ("B",), [[0.6, 0.4], [0.5, 0.5]]),
    ])
    worked = []
    for d in (chain, fixture("FIX-DIAMOND")):
        jt = build_join_tree(d)
        worked.append((estimate_jensen_init(jt), estimate_jensen_update(jt)))
    exact = bracket = 0
    for seed, d in enumerate(mixed_nets(50, seed0=700)):
        init = StepCounter()
        jt = build_join_tree(d, counter=init)
        exact += init.total == estimate_jensen_init(jt)
        ev = jt.resolve(random_evidence(d, seed))
        upd = StepCounter()
        jt_infer_jensen(jt, ev, counter=upd)
        est = estimate_jensen_update(jt, ev)
        bracket += est <= upd.total <= est + evidence_declaration_cost(jt, ev)
    ok = worked == [(32, 42), (64, 88)] and exact == 50 and bracket == 50
    report(5, ok, f"estimators: worked values {worked}, init exact on {exact}/50, "
                  f"update bracketed on {bracket}/50")


def test_06_bench_correlation(report, tmp_path):
    cal = calibrate(bench_networks(30, seed=0), repeats=5)
    (tmp_path / "bench.csv").write_text(cal.to_csv())
    sizes = [r.max_clique_states for r in cal.reports]
    report(6, cal.correlation is not None and cal.correlation >= 0.95,
           f"bench: Pearson(update_estimate, wall time) = {cal.correlation:.4f} >= 0.95 over 30 nets "
           f"(max clique {min(sizes)}..{max(sizes)} states)")


def test_07_influence_diagrams(report):
    eu_id = evaluate_influence_diagram(fixture("FIX-ID"))
    eu_info = evaluate_influence_diagram(fixture("FIX-ID-INFO"))
    worst = 0.0
    for seed in range(100):
        d = random_influence_diagram(chance_count=2 + seed % 5, decision_count=1 + seed % 2, seed=seed)
        _, best = best_policy_by_enumeration(d)
        worst = max(worst, abs(evaluate_influence_diagram(d).expected_utility - best))
    ok = (abs(eu_id.expected_utility - 76) <= 1e-12 and eu_id.policy.choice("D") == 0
          and abs(eu_info.expected_utility - 88) <= 1e-12 and worst <= 1e-9)
    report(7, ok, f"influence diagrams: FIX-ID EU {eu_id.expected_utility:g} (take), FIX-ID-INFO EU "
                  f"{eu_info.expected_utility:g}, 100 random IDs max |EU - enumeration| {worst:.1e}")


def test_08_simulation(report):
    errors = []
    for k in range(5):
        d = random_network(6, max_parents=2, states_range=(2, 3), seed=100 + k)
        ev = random_evidence(d, k, max_items=1)
        b = gibbs_infer(d, ev, SimParams(20000, 1000, k))
        errors.append(b.max_abs_diff(joint_enumeration_oracle(d, ev)))
    refused = 0
    zero_nets = [fixture("FIX-ZERO")] + [impossible_case(s)[0] for s in range(20)]
    for d in zero_nets:
        try:
            gibbs_infer(d, {}, SimParams(10, 0, 0))
        except NotStrictlyPositive:
            refused += 1
    ok = max(errors) <= 0.05 and refused == len(zero_nets)
    report(8, ok, f"Gibbs: max L-inf vs oracle {max(errors):.4f} <= 0.05 on 5 nets at 20000 sweeps, "
                  f"NotStrictlyPositive on {refused}/{len(zero_nets)} nets with zeros")


def test_09_serialization(report):
    same = identical = 0
    for seed in range(100):
        d = random_network(2 + seed % 11, max_parents=3, states_range=(2, 3), seed=seed)
        text = io.save(d)
        back = io.load(text)
        same += diagrams_equal(d, back)
        identical += io.save(back) == text
    report(9, same == 100 and identical == 100,
           f"serialization: {same}/100 load(save(d)) == d, {identical}/100 re-save byte-identical")


def _fifty_node_net():
    for seed in range(1000):
        d = random_network(50, max_parents=3, states_range=(2, 3), arc_density=0.05, seed=seed)
        jt = join_tree_structure(d, "min-fill")
        top = max(jt.S(u) for u in range(len(jt.universes)))
        if 512 <= top <= 1024:
            return d, top
    raise AssertionError("no suitable 50-node network found")


def test_10_performance(report):
    d, top = _fifty_node_net()
    ev = random_evidence(d, 1, max_items=5)
    start = time.perf_counter()
    b = jt_infer_jensen(build_join_tree(d), ev)
    elapsed = time.perf_counter() - start
    ok = elapsed < 1.0 and all(np.isfinite(v).all() for v in b.values())
    report(10, ok, f"50-node net, max clique {top} states: compile + query in {elapsed * 1000:.1f} ms < 1 s")


def _apply_random_transform(d, rng):
    order = graph_order(d)
    op = int(rng.integers(5))
    if op == 0:
        arcs = d.arcs()
        rng.shuffle(arcs)
        for p, c in arcs:
            try:
                return "reverse", reverse_arc(d, p, c)
            except WouldCreateCycle:
                continue
    if op == 1:
        leaves = [i for i in order if not d.children(i)]
        return "barren", remove_barren_node(d, leaves[int(rng.integers(len(leaves)))])
    if op == 2:
        keep = set(rng.choice(order, size=max(1, len(order) // 2), replace=False).tolist())
        return "barren-all", remove_all_barren(d, keep=keep)
    if op == 3:
        dd, target = deterministic_net(int(rng.integers(10**6)))
        if target is not None:
            return "deterministic", (dd, reduce_deterministic_node(dd, target))
    return "absorb", absorb_chance_node(d, order[int(rng.integers(len(order)))])


def test_11_transform_soundness(report):
    rng = np.random.default_rng(2024)
    worst, consistent, kinds = 0.0, 0, {}
    for k in range(200):
        d = random_network(3 + k % 6, max_parents=3, states_range=(2, 3), arc_density=0.6, seed=3000 + k)
        kind, out = _apply_random_transform(d, rng)
        if kind == "deterministic":
            d, out = out
        kinds[kind] = kinds.get(kind, 0) + 1
        consistent += is_consistent(out).ok
        rest = sorted(out.nodes)
        worst = max(worst, float(np.max(np.abs(joint_over(out, rest) - joint_over(d, rest)))))
    summary = ", ".join(f"{k} {v}" for k, v in sorted(kinds.items()))
    report(11, worst <= 1e-10 and consistent == 200,
           f"transforms: 200 applications ({summary}), max joint change {worst:.1e} <= 1e-10, "
           f"{consistent}/200 consistent")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
