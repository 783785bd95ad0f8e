"""Loop-cutset conditioning for multiply connected belief networks.

Clamping every node of a loop cutset to a joint state ``s`` and cutting the
clamped nodes' outgoing arcs leaves a polytree, so each case is solved by
ordinary propagation.  Cases are enumerated depth first over the cutset in
graph order.  A prefix of the enumeration whose probability is already zero
is abandoned together with all its extensions.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import ImpossibleEvidence
from .model import Beliefs, ancestors, graph_order, resolve_evidence
from .polytree import Network, normalize_beliefs, propagate


@dataclass
class Cutset:
    nodes: tuple
    cards: tuple

    def __len__(self):
        return len(self.nodes)

    def __iter__(self):
        return iter(self.nodes)

    def cases(self):
        return itertools.product(*(range(c) for c in self.cards))

    @property
    def case_count(self):
        return int(np.prod(self.cards, dtype=np.int64))


@dataclass
class CutsetCaseLog:
    total_cases: int = 0
    skipped_cases: int = 0
    evaluated_cases: int = 0
    weights: dict = field(default_factory=dict)

    def __str__(self):
        return (f"cutset cases: total={self.total_cases} skipped={self.skipped_cases} "
                f"evaluated={self.evaluated_cases}")


def _two_core(nodes, adj):
    alive = set(nodes)
    deg = {v: len(adj[v]) for v in alive}
    stack = [v for v in alive if deg[v] <= 1]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for u in adj[v]:
            if u in alive:
                deg[u] -= 1
                if deg[u] <= 1:
                    stack.append(u)
    return alive


def find_loop_cutset(d):
    """Greedy loop cutset.

    While the skeleton (with the cutset's outgoing arcs removed) still has a
    cycle, take the nodes that lie on cycles (the 2-core), keep those with at
    most one parent inside it, and add the one of highest core degree
    (lowest id on ties).  Each round is polynomial; the result is not
    guaranteed minimal.
    """
    order = graph_order(d)
    parents = {i: set(d[i].parents) for i in order}
    cutset = []
    while True:
        adj = {i: set(parents[i]) for i in order}
        for i in order:
            for p in parents[i]:
                adj[p].add(i)
        core = _two_core(order, adj)
        if not core:
            break
        candidates = [v for v in core if v not in cutset and len(parents[v] & core) <= 1]
        best = min(candidates, key=lambda v: (-len(adj[v] & core), v))
        cutset.append(best)
        for i in order:
            parents[i].discard(best)
    rank = {v: k for k, v in enumerate(order)}
    nodes = tuple(sorted(cutset, key=rank.__getitem__))
    return Cutset(nodes, tuple(d.card(i) for i in nodes))


def cut_network(net, assignment, keep=None):
    """Clamp ``assignment`` by slicing children's tables and dropping the arcs.

    ``keep`` optionally restricts the network to an ancestrally closed node set.
    """
    order = [i for i in net.order if keep is None or i in keep]
    parents = {i: net.parents[i] for i in order}
    tables = {i: net.tables[i] for i in order}
    for c, state in assignment.items():
        for ch in net.children[c]:
            if ch not in parents:
                continue
            k = parents[ch].index(c)
            idx = (slice(None),) * k + (state,)
            tables[ch] = tables[ch][idx]
            parents[ch] = parents[ch][:k] + parents[ch][k + 1:]
    return Network(order, parents, tables, {i: net.cards[i] for i in order})


def _enumerate_cases(d, ev, cutset, prune, log, counter):
    """Yield ``(case, joint_beliefs, P(s, e))`` for every case not pruned."""
    net = Network.from_diagram(d)
    k = len(cutset)
    prefix_sets = [set(cutset.nodes[:j]) | ancestors(d, cutset.nodes[:j]) for j in range(k + 1)]
    log.total_cases = cutset.case_count

    def conflicts(assignment):
        return any(n in ev and ev[n] != s for n, s in assignment.items())

    def recurse(prefix):
        j = len(prefix)
        assignment = dict(zip(cutset.nodes, prefix))
        if j == k:
            if conflicts(assignment):
                log.skipped_cases += 1
                log.weights[prefix] = 0.0
                return
            joint, z = propagate(cut_network(net, assignment), {**ev, **assignment}, counter)
            yield prefix, joint, z
            return
        if prune and j > 0:
            remaining = int(np.prod(cutset.cards[j:], dtype=np.int64))
            if conflicts(assignment):
                log.skipped_cases += remaining
                return
            keep = prefix_sets[j]
            sub_ev = {n: s for n, s in ev.items() if n in keep}
            _, z = propagate(cut_network(net, assignment, keep), {**sub_ev, **assignment}, counter)
            if z == 0.0:
                log.skipped_cases += remaining
                return
        for s in range(cutset.cards[j]):
            yield from recurse(prefix + (s,))

    yield from recurse(())


def conditioning_infer_weighted(d, evidence=None, prune=True, counter=None):
    """Mix per-case posteriors ``P(x | s, e)`` with weights ``P(s | e)``.

    Returns ``(Beliefs, CutsetCaseLog)``.  ``prune=False`` disables prefix
    pruning so every leaf case is computed (for checking that pruned cases
    really carry zero weight).
    """
    ev = resolve_evidence(d, evidence)
    cutset = find_loop_cutset(d)
    log = CutsetCaseLog()
    order = graph_order(d)
    results = []
    for case, joint, z in _enumerate_cases(d, ev, cutset, prune, log, counter):
        if z == 0.0:
            log.skipped_cases += 1
            log.weights[case] = 0.0
            continue
        log.evaluated_cases += 1
        results.append((case, z, normalize_beliefs(joint, order, counter)))
    if not results:
        raise ImpossibleEvidence(log=log)
    p_e = sum(z for _, z, _ in results)
    posteriors = {x: np.zeros(d.card(x)) for x in order}
    for case, z, post in results:
        w = z / p_e
        log.weights[case] = w
        for x in order:
            posteriors[x] += w * post[x]
    for x in order:
        if x in ev:
            posteriors[x] = np.zeros(d.card(x))
            posteriors[x][ev[x]] = 1.0
    return Beliefs(posteriors, evidence_probability=p_e), log


def conditioning_infer_joint(d, evidence=None, log=None, counter=None):
    """Sum joint-scale beliefs ``P(x, s, e)`` over cases and normalize once.

    Pass a :class:`CutsetCaseLog` as ``log`` to collect case statistics.
    """
    ev = resolve_evidence(d, evidence)
    cutset = find_loop_cutset(d)
    log = log if log is not None else CutsetCaseLog()
    order = graph_order(d)
    acc = {x: np.zeros(d.card(x)) for x in order}
    p_e = 0.0
    for _case, joint, z in _enumerate_cases(d, ev, cutset, True, log, counter):
        if z == 0.0:
            log.skipped_cases += 1
            continue
        log.evaluated_cases += 1
        p_e += z
        for x in order:
            acc[x] += joint[x]
    return Beliefs(normalize_beliefs(acc, order, counter), evidence_probability=p_e)
