"""Seeded random belief-network generation."""

import numpy as np

from .errors import BadParams
from .model import Diagram, Node, NodeKind


def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def random_network(node_count, max_parents=2, states_range=(2, 2), arc_density=0.5,
                   polytree_only=False, seed=0, name=None):
    """Generate a random belief network.

    Nodes are created in index order and only draw parents from earlier
    nodes, so the result is acyclic by construction.  Each earlier node is
    considered (in a random order) and accepted with probability
    ``arc_density`` until ``max_parents`` is reached.  With
    ``polytree_only`` a candidate parent is rejected if it is already
    connected to the node, which keeps the skeleton a forest.

    Rows are drawn uniformly from the probability simplex.
    """
    if isinstance(states_range, int):
        states_range = (states_range, states_range)
    lo, hi = states_range
    if node_count < 1 or max_parents < 0 or lo < 1 or hi < lo or not 0.0 <= arc_density <= 1.0:
        raise BadParams(
            f"bad generator parameters: node_count={node_count}, max_parents={max_parents}, "
            f"states_range={states_range}, arc_density={arc_density}"
        )
    rng = np.random.default_rng(seed)
    width = len(str(node_count - 1))
    ids = [f"N{i:0{width}d}" for i in range(node_count)]
    cards = [int(c) for c in rng.integers(lo, hi + 1, size=node_count)]
    component = list(range(node_count))
    nodes = []
    for i in range(node_count):
        chosen = []
        for j in rng.permutation(i):
            if len(chosen) >= max_parents:
                break
            if rng.random() >= arc_density:
                continue
            if polytree_only:
                ri, rj = _find(component, i), _find(component, int(j))
                if ri == rj:
                    continue
                component[rj] = ri
            chosen.append(int(j))
        chosen.sort()
        pcards = [cards[j] for j in chosen]
        rows = rng.dirichlet(np.ones(cards[i]), size=int(np.prod(pcards, dtype=np.int64)))
        table = rows.reshape(tuple(pcards) + (cards[i],))
        states = tuple(f"s{k}" for k in range(cards[i]))
        nodes.append(Node(ids[i], NodeKind.CHANCE, states, tuple(ids[j] for j in chosen), table))
    return Diagram(nodes, name or f"random-{seed}")


def random_influence_diagram(chance_count=4, decision_count=2, states_range=(2, 3),
                             max_policies=256, seed=0, name=None):
    """Generate a small influence diagram that satisfies no-forgetting.

    Decisions are spread over the node sequence.  Each decision observes at
    most one new earlier chance node plus everything the previous decision
    knew and that decision itself, so the decisions lie on a directed path.
    Chance nodes draw up to two parents from earlier chance or decision
    nodes; the value node depends on up to three nodes, always including the
    last decision.  Utilities are integers in [0, 100].  Draws whose policy
    space exceeds ``max_policies`` are rejected and redrawn.
    """
    if chance_count < 1 or decision_count < 1 or max_policies < 1:
        raise BadParams("need at least one chance node, one decision and one policy")
    lo, hi = (states_range, states_range) if isinstance(states_range, int) else states_range
    rng = np.random.default_rng(seed)
    while True:
        slots = sorted(rng.choice(np.arange(1, chance_count + decision_count),
                                  size=decision_count, replace=False).tolist())
        ids, kinds, cards, parents = [], [], [], []
        known = []
        ci = di = 0
        for pos in range(chance_count + decision_count):
            earlier = list(range(pos))
            if pos in slots:
                chance_before = [j for j in earlier if kinds[j] == NodeKind.CHANCE and j not in known]
                pa = list(known)
                if chance_before and rng.random() < 0.8:
                    pa.append(int(rng.choice(chance_before)))
                ids.append(f"D{di}")
                di += 1
                kinds.append(NodeKind.DECISION)
                cards.append(2)
                parents.append(sorted(set(pa)))
                known = sorted(set(pa) | {pos})
            else:
                k = int(rng.integers(0, min(2, pos) + 1))
                pa = sorted(int(j) for j in rng.choice(earlier, size=k, replace=False)) if k else []
                ids.append(f"C{ci}")
                ci += 1
                kinds.append(NodeKind.CHANCE)
                cards.append(int(rng.integers(lo, hi + 1)))
                parents.append(pa)
        size = 1
        for j, kind in enumerate(kinds):
            if kind == NodeKind.DECISION:
                cfg = int(np.prod([cards[p] for p in parents[j]], dtype=np.int64))
                size *= cards[j] ** cfg
        if size <= max_policies:
            break
    nodes = []
    for j, kind in enumerate(kinds):
        pa = tuple(ids[p] for p in parents[j])
        states = tuple(f"s{k}" for k in range(cards[j]))
        if kind == NodeKind.DECISION:
            nodes.append(Node(ids[j], kind, states, pa, None))
            continue
        pcards = [cards[p] for p in parents[j]]
        rows = rng.dirichlet(np.ones(cards[j]), size=int(np.prod(pcards, dtype=np.int64)))
        nodes.append(Node(ids[j], kind, states, pa, rows.reshape(tuple(pcards) + (cards[j],))))
    last = max(j for j, k in enumerate(kinds) if k == NodeKind.DECISION)
    others = [j for j in range(len(ids)) if j != last]
    extra = rng.choice(others, size=int(rng.integers(0, min(2, len(others)) + 1)), replace=False)
    vpa = sorted({last, *(int(j) for j in extra)})
    table = rng.integers(0, 101, size=tuple(cards[p] for p in vpa)).astype(float)
    nodes.append(Node("V", NodeKind.VALUE, (), tuple(ids[p] for p in vpa), table))
    return Diagram(nodes, name or f"random-id-{seed}")


def bench_networks(count, seed=0):
    """A seeded family of 30-node networks of steadily growing density.

    Used by the cost-model calibration.  Node count is fixed so per-node
    bookkeeping stays roughly constant, while clique state spaces range over
    several orders of magnitude.
    """
    if count < 1:
        raise BadParams("count must be positive")
    rng = np.random.default_rng(seed)
    nets = []
    for k in range(count):
        frac = k / max(count - 1, 1)
        nets.append(random_network(
            30,
            max_parents=2 + int(round(2 * frac)),
            states_range=(2, 3),
            arc_density=0.3 + 0.4 * frac,
            seed=int(rng.integers(2**31)),
            name=f"bench-{k:03d}",
        ))
    return nets
