"""Shared constructors for the test suite."""

import numpy as np

from beliefcore.model import Diagram, Node, NodeKind, build_diagram, graph_order, make_node
from beliefcore.polytree import is_polytree
from beliefcore.random_nets import random_network

TF = ("t", "f")


def random_evidence(d, seed, max_items=3):
    rng = np.random.default_rng(seed)
    ids = sorted(d.nodes)
    k = int(rng.integers(0, min(max_items, len(ids)) + 1))
    chosen = rng.choice(ids, size=k, replace=False)
    return {str(i): int(rng.integers(d.card(str(i)))) for i in chosen}


def mixed_nets(count=200, seed0=0):
    """Alternating polytree / unrestricted random nets, 2 to 12 nodes, 2-3 states."""
    nets = []
    for s in range(count):
        n = 2 + s % 11
        nets.append(random_network(n, max_parents=3, states_range=(2, 3), arc_density=0.6,
                                   polytree_only=(s % 2 == 0), seed=seed0 + s))
    return nets


def loopy_nets(count, seed0=0, nodes=10):
    nets = []
    s = seed0
    while len(nets) < count:
        d = random_network(nodes, max_parents=3, states_range=(2, 3), arc_density=0.6, seed=s)
        s += 1
        if not is_polytree(d):
            nets.append(d)
    return nets


def polytrees(count, seed0=0):
    return [random_network(2 + s % 11, max_parents=3, states_range=(2, 3), arc_density=0.7,
                           polytree_only=True, seed=seed0 + s) for s in range(count)]


def three_diamonds(p_a=0.0):
    """Three disjoint diamonds rooted at A, B and C; the loop cutset is (A, B, C)."""
    nodes = []
    rng = np.random.default_rng(11)
    for root, prior in (("A", [p_a, 1 - p_a]), ("B", [0.4, 0.6]), ("C", [0.7, 0.3])):
        nodes.append(make_node(root, TF, (), prior))
        left, right, low = f"{root}x", f"{root}y", f"{root}z"
        nodes.append(make_node(left, TF, (root,), rng.dirichlet([1, 1], size=2)))
        nodes.append(make_node(right, TF, (root,), rng.dirichlet([1, 1], size=2)))
        nodes.append(make_node(low, TF, (left, right), rng.dirichlet([1, 1], size=4).reshape(2, 2, 2)))
    return build_diagram(nodes, name="three-diamonds")


def impossible_case(seed):
    """A random net with one zeroed table entry and evidence hitting it exactly."""
    rng = np.random.default_rng(seed)
    d = random_network(3 + seed % 8, max_parents=3, states_range=(2, 3), arc_density=0.6,
                       polytree_only=(seed % 2 == 0), seed=1000 + seed)
    order = graph_order(d)
    with_parents = [i for i in order if d[i].parents]
    target = with_parents[int(rng.integers(len(with_parents)))] if with_parents and seed % 5 else order[0]
    node = d.nodes[target]
    cfg = tuple(int(rng.integers(d.card(p))) for p in node.parents)
    state = int(rng.integers(node.card))
    row = node.table[cfg].copy()
    row[state] = 0.0
    table = node.table.copy()
    table[cfg] = row / row.sum()
    node.table = table
    evidence = {p: s for p, s in zip(node.parents, cfg)}
    evidence[target] = state
    others = [i for i in order if i not in evidence]
    if others and seed % 3 == 0:
        extra = others[int(rng.integers(len(others)))]
        evidence[extra] = int(rng.integers(d.card(extra)))
    return d, evidence


def deterministic_net(seed):
    """A random net in which one non-root node is made deterministic."""
    rng = np.random.default_rng(seed)
    d = random_network(4 + seed % 4, max_parents=2, states_range=(2, 3), arc_density=0.7,
                       seed=2000 + seed)
    order = graph_order(d)
    candidates = [i for i in order if d[i].parents and d.children(i)] or [i for i in order if d[i].parents]
    if not candidates:
        return d, None
    target = candidates[int(rng.integers(len(candidates)))]
    node = d.nodes[target]
    choice = rng.integers(node.card, size=node.table.shape[:-1])
    table = np.zeros(node.table.shape)
    np.put_along_axis(table, choice[..., None], 1.0, axis=-1)
    node.table = table
    node.kind = NodeKind.DETERMINISTIC
    return d, target


def joint_over(d, nodes):
    """Oracle joint over ``nodes`` with axes in sorted id order."""
    from beliefcore.oracle import joint_table

    keep, arr = joint_table(d, nodes=nodes)
    target = sorted(nodes)
    return np.transpose(arr, [keep.index(v) for v in target])


__all__ = ["Diagram", "Node"]
