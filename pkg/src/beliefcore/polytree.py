"""Pearl's lambda/pi propagation on singly connected networks.

Messages are kept in joint scale: no message is ever normalized, so after
both sweeps ``pi(x) * lambda(x)`` is ``P(x, e)``.  The only divisions happen
when the final belief vectors are normalized, and a zero normalizer there
means ``P(e) = 0``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ImpossibleEvidence, NotPolytree
from .model import Beliefs, graph_order, resolve_evidence


@dataclass
class Network:
    """Bare families (parents + conditional table) in a fixed node order."""

    order: list
    parents: dict
    tables: dict
    cards: dict
    children: dict = field(default=None)

    def __post_init__(self):
        if self.children is None:
            self.children = {i: [] for i in self.order}
            for i in self.order:
                for p in self.parents[i]:
                    self.children[p].append(i)

    @classmethod
    def from_diagram(cls, d):
        order = graph_order(d)
        return cls(
            order,
            {i: d[i].parents for i in order},
            {i: d[i].table for i in order},
            {i: d[i].card for i in order},
        )


def skeleton_is_forest(nodes, arcs):
    root = {i: i for i in nodes}

    def find(i):
        while root[i] != i:
            root[i] = root[root[i]]
            i = root[i]
        return i

    for p, c in arcs:
        rp, rc = find(p), find(c)
        if rp == rc:
            return False
        root[rc] = rp
    return True


def is_polytree(d):
    return skeleton_is_forest(list(d.nodes), d.arcs())


@dataclass
class MessageState:
    pi: dict = field(default_factory=dict)      # (parent, child) -> vector over parent
    lam: dict = field(default_factory=dict)     # (child, parent) -> vector over parent


class _Propagator:
    def __init__(self, net, evidence, counter=None):
        self.net = net
        self.counter = counter
        self.ev = {}
        for i in net.order:
            v = np.ones(net.cards[i])
            if i in evidence:
                v = np.zeros(net.cards[i])
                v[evidence[i]] = 1.0
            self.ev[i] = v
        self.msgs = MessageState()
        rank = {v: k for k, v in enumerate(net.order)}
        self.neighbors = {
            i: sorted(set(net.parents[i]) | set(net.children[i]), key=rank.__getitem__)
            for i in net.order
        }

    def _count(self, x):
        if self.counter is not None:
            self.counter.add(self.net.tables[x].size)

    def pi_of(self, x):
        table = self.net.tables[x]
        ps = self.net.parents[x]
        if not ps:
            return table.copy()
        k = len(ps)
        ops = [table, list(range(k + 1))]
        for j, p in enumerate(ps):
            ops += [self.msgs.pi[(p, x)], [j]]
        self._count(x)
        return np.einsum(*ops, [k])

    def lam_of(self, x, exclude=None):
        v = self.ev[x].copy()
        for c in self.net.children[x]:
            if c != exclude:
                v *= self.msgs.lam[(c, x)]
        return v

    def send(self, x, y):
        if y in self.net.children[x]:
            self.msgs.pi[(x, y)] = self.pi_of(x) * self.lam_of(x, exclude=y)
            return
        ps = self.net.parents[x]
        i = ps.index(y)
        k = len(ps)
        ops = [self.net.tables[x], list(range(k + 1)), self.lam_of(x), [k]]
        for j, p in enumerate(ps):
            if j != i:
                ops += [self.msgs.pi[(p, x)], [j]]
        self._count(x)
        self.msgs.lam[(x, y)] = np.einsum(*ops, [i])

    def run(self):
        """Two sweeps per connected component; returns joint-scale beliefs and P(e)."""
        seen = set()
        components = []
        for r in self.net.order:
            if r in seen:
                continue
            tree_parent = {r: None}
            bfs = [r]
            seen.add(r)
            for x in bfs:
                for nb in self.neighbors[x]:
                    if nb in tree_parent:
                        if tree_parent[x] != nb:
                            raise NotPolytree("network skeleton contains a cycle")
                        continue
                    tree_parent[nb] = x
                    seen.add(nb)
                    bfs.append(nb)
            for x in reversed(bfs[1:]):
                self.send(x, tree_parent[x])
            for x in bfs:
                for nb in self.neighbors[x]:
                    if nb != tree_parent[x]:
                        self.send(x, nb)
            bel = {x: self.pi_of(x) * self.lam_of(x) for x in bfs}
            components.append((bel, float(bel[r].sum())))

        beliefs = {}
        for k, (bel, _) in enumerate(components):
            scale = 1.0
            for j, (_, z) in enumerate(components):
                if j != k:
                    scale *= z
            for x, v in bel.items():
                beliefs[x] = v * scale
        z_total = 1.0
        for _, z in components:
            z_total *= z
        return beliefs, z_total


def propagate(net, evidence, counter=None):
    """Unnormalized beliefs ``P(x, e)`` for every node plus ``P(e)``."""
    return _Propagator(net, evidence, counter).run()


def normalize_beliefs(joint_beliefs, order, counter=None):
    posteriors = {}
    for x in order:
        v = joint_beliefs[x]
        s = float(v.sum())
        if s == 0.0 or not np.isfinite(s):
            raise ImpossibleEvidence()
        posteriors[x] = v / s
        if counter is not None:
            counter.add(2 * v.size)
    return posteriors


def polytree_infer(d, evidence=None, counter=None):
    if not is_polytree(d):
        raise NotPolytree("network is multiply connected")
    ev = resolve_evidence(d, evidence)
    net = Network.from_diagram(d)
    joint, z = propagate(net, ev, counter)
    return Beliefs(normalize_beliefs(joint, net.order, counter), evidence_probability=z)
