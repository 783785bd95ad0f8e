"""Brute-force reference computations.

Everything here enumerates the full joint state space.  These routines are
deliberately naive: they are the yardstick the propagation algorithms are
tested against, so they share no code path with them beyond the data model.
"""

import itertools

import numpy as np

from .errors import ImpossibleEvidence, NotBeliefNet, TooLarge
from .model import Beliefs, NodeKind, graph_order, resolve_evidence

MAX_JOINT_STATES = 10**7


def joint_table(d, nodes=None, decisions_as_chance=None):
    """Full joint probability array over ``nodes`` (default: all chance nodes).

    Axes follow graph order.  Tables of decision nodes may be supplied in
    ``decisions_as_chance`` (id -> conditional array) to evaluate a policy.
    """
    decisions_as_chance = decisions_as_chance or {}
    order = [i for i in graph_order(d) if d[i].is_chance or i in decisions_as_chance]
    for i in order:
        for p in d[i].parents:
            if d[p].kind == NodeKind.DECISION and p not in decisions_as_chance:
                raise NotBeliefNet(f"decision {p!r} must be fixed by a policy")
    cards = [d.card(i) for i in order]
    size = int(np.prod(cards, dtype=np.float64)) if cards else 1
    if size > MAX_JOINT_STATES:
        raise TooLarge(f"joint state space {size} exceeds {MAX_JOINT_STATES}")
    axis = {v: k for k, v in enumerate(order)}
    joint = np.ones(cards)
    for i in order:
        node = d[i]
        table = decisions_as_chance.get(i, node.table)
        variables = list(node.parents) + [i]
        perm = sorted(range(len(variables)), key=lambda k: axis[variables[k]])
        arr = np.transpose(table, perm)
        shape = [1] * len(order)
        for k in perm:
            shape[axis[variables[k]]] = cards[axis[variables[k]]]
        joint = joint * arr.reshape(shape)
    if nodes is None:
        return order, joint
    keep = [v for v in order if v in set(nodes)]
    summed = tuple(k for k, v in enumerate(order) if v not in set(nodes))
    return keep, joint.sum(axis=summed) if summed else joint


def joint_enumeration_oracle(d, evidence=None):
    """Exact posteriors of every chance node by full enumeration."""
    if not all(n.is_chance for n in d.nodes.values() if n.kind != NodeKind.VALUE):
        raise NotBeliefNet("oracle inference needs a belief network")
    ev = resolve_evidence(d, evidence)
    order, joint = joint_table(d)
    for node_id, state in ev.items():
        ax = order.index(node_id)
        mask = np.zeros(d.card(node_id))
        mask[state] = 1.0
        shape = [1] * len(order)
        shape[ax] = -1
        joint = joint * mask.reshape(shape)
    total = float(joint.sum())
    if total == 0.0:
        raise ImpossibleEvidence()
    posteriors = {}
    for ax, node_id in enumerate(order):
        others = tuple(k for k in range(len(order)) if k != ax)
        m = joint.sum(axis=others)
        posteriors[node_id] = m / m.sum()
    return Beliefs(posteriors, evidence_probability=total)


def evidence_probability(d, evidence):
    ev = resolve_evidence(d, evidence)
    order, joint = joint_table(d)
    idx = tuple(ev.get(v, slice(None)) for v in order)
    return float(np.sum(joint[idx]))


def policy_tables(d, policy):
    """Deterministic conditional tables equivalent to a policy."""
    out = {}
    for dec, choice in policy.items():
        node = d[dec]
        choice = np.asarray(choice, dtype=int)
        table = np.zeros(choice.shape + (node.card,))
        np.put_along_axis(table, choice[..., None], 1.0, axis=-1)
        out[dec] = table
    return out


def expected_utility(d, policy):
    """Expected utility of ``policy`` (decision id -> array of choices)."""
    values = d.ids_of_kind(NodeKind.VALUE)
    tables = policy_tables(d, policy)
    total = 0.0
    for v in values:
        node = d[v]
        keep, marg = joint_table(d, nodes=node.parents, decisions_as_chance=tables)
        util = np.transpose(node.table, [node.parents.index(p) for p in keep]) if keep else node.table
        total += float(np.sum(marg * util))
    return total


def enumerate_policies(d):
    """Yield every deterministic policy over the decision nodes."""
    decisions = [i for i in graph_order(d) if d[i].kind == NodeKind.DECISION]
    spaces = []
    for dec in decisions:
        node = d[dec]
        shape = tuple(d.card(p) for p in node.parents)
        n_cfg = int(np.prod(shape, dtype=np.int64))
        spaces.append([np.array(c, dtype=int).reshape(shape)
                       for c in itertools.product(range(node.card), repeat=n_cfg)])
    for combo in itertools.product(*spaces):
        yield dict(zip(decisions, combo))


def best_policy_by_enumeration(d):
    best, best_eu = None, -np.inf
    for pol in enumerate_policies(d):
        eu = expected_utility(d, pol)
        if eu > best_eu:
            best, best_eu = pol, eu
    return best, best_eu
