"""Join-tree compilation and the two clustering propagation schemes.

Compilation: moralize, triangulate (maximum cardinality search or greedy
min-fill), collect maximal cliques ("universes"), connect them by a maximum
weight spanning tree on sepset size, then multiply each conditional table
into the smallest universe holding its family and calibrate once without
evidence.  The calibrated tree is the compiled artifact; queries copy its
potentials and never modify it.

``jt_infer_jensen`` updates potentials with collect/distribute passes and
sepset ratios.  ``jt_infer_meta`` treats the rooted tree as a belief network
whose nodes are universes with conditional tables ``P(U | sepset)`` and runs
joint-scale lambda/pi propagation over it.

Step counters follow a fixed pass structure per universe ``U``: setup 1
pass, collect 2 passes (absorb from children, then update the parent sepset;
the root's second pass sums its potential), distribute ``N(U)`` passes, each
pass charged ``S(U)``.  Declaring evidence charges ``S(U_e)`` per observed
node, extracting a belief ``S(U_i)`` and dividing it ``S(i)``.
"""

import heapq
from dataclasses import dataclass, field

import numpy as np

from .errors import ImpossibleEvidence, NotBeliefNet
from .model import Beliefs, graph_order, is_belief_net, resolve_evidence, unit_vector


# --------------------------------------------------------------------------
# graphs


class UndirectedGraph:
    def __init__(self, nodes=(), edges=(), cards=None):
        self.nodes = list(nodes)
        self.adj = {v: set() for v in self.nodes}
        self.cards = dict(cards or {})
        for u, v in edges:
            self.add_edge(u, v)

    def add_edge(self, u, v):
        if u == v:
            raise ValueError("self-loops are not allowed")
        self.adj[u].add(v)
        self.adj[v].add(u)

    def has_edge(self, u, v):
        return v in self.adj[u]

    def edges(self):
        return sorted(tuple(sorted((u, v))) for u in self.adj for v in self.adj[u] if u < v)

    def copy(self):
        g = UndirectedGraph(self.nodes, (), self.cards)
        g.adj = {v: set(n) for v, n in self.adj.items()}
        return g

    def __repr__(self):
        return f"UndirectedGraph({len(self.nodes)} nodes, {len(self.edges())} edges)"


def moralize(d):
    if not is_belief_net(d):
        raise NotBeliefNet("moralization needs a belief network")
    order = graph_order(d)
    g = UndirectedGraph(order, cards={i: d.card(i) for i in order})
    for i in order:
        ps = d[i].parents
        for p in ps:
            g.add_edge(p, i)
        for a in range(len(ps)):
            for b in range(a + 1, len(ps)):
                g.add_edge(ps[a], ps[b])
    return g


def mcs_order(g):
    """Maximum cardinality search visit order (ties to the smallest id)."""
    weight = {v: 0 for v in g.nodes}
    visited = []
    done = set()
    heap = [(0, v) for v in g.nodes]
    heapq.heapify(heap)
    while heap:
        w, v = heapq.heappop(heap)
        if v in done or -w != weight[v]:
            continue
        done.add(v)
        visited.append(v)
        for u in g.adj[v]:
            if u not in done:
                weight[u] += 1
                heapq.heappush(heap, (-weight[u], u))
    return visited


def _eliminate(g, order):
    """Eliminate along ``order``; returns fill edges and the clique formed at each step."""
    h = g.copy()
    fill = set()
    cliques = []
    for v in order:
        nbrs = sorted(h.adj[v])
        cliques.append(frozenset(nbrs) | {v})
        for a in range(len(nbrs)):
            for b in range(a + 1, len(nbrs)):
                x, y = nbrs[a], nbrs[b]
                if not h.has_edge(x, y):
                    h.add_edge(x, y)
                    fill.add(tuple(sorted((x, y))))
        for u in nbrs:
            h.adj[u].discard(v)
        del h.adj[v]
    return sorted(fill), cliques


def _min_fill_order(g):
    h = g.copy()
    order = []
    while h.adj:
        best = None
        for v in sorted(h.adj):
            nbrs = sorted(h.adj[v])
            fill = sum(1 for a in range(len(nbrs)) for b in range(a + 1, len(nbrs))
                       if nbrs[b] not in h.adj[nbrs[a]])
            size = g.cards.get(v, 1)
            for u in nbrs:
                size *= g.cards.get(u, 1)
            key = (fill, size, v)
            if best is None or key < best:
                best = key
        v = best[2]
        nbrs = sorted(h.adj[v])
        for a in range(len(nbrs)):
            for b in range(a + 1, len(nbrs)):
                h.adj[nbrs[a]].add(nbrs[b])
                h.adj[nbrs[b]].add(nbrs[a])
        for u in nbrs:
            h.adj[u].discard(v)
        del h.adj[v]
        order.append(v)
    return order


METHODS = ("min-fill", "mcs")


def triangulate(g, method="min-fill"):
    """Return ``(fill_edges, elimination_order)``."""
    if method == "mcs":
        order = list(reversed(mcs_order(g)))
    elif method == "min-fill":
        order = _min_fill_order(g)
    else:
        raise ValueError(f"unknown triangulation method {method!r}; choose from {METHODS}")
    fill, _ = _eliminate(g, order)
    return fill, order


def is_chordal(g):
    fill, _ = _eliminate(g, list(reversed(mcs_order(g))))
    return not fill


# --------------------------------------------------------------------------
# join tree


def _allocate_potential(shape):
    return np.ones(shape)


@dataclass
class JoinTree:
    diagram: object
    node_order: list
    cards: dict
    universes: list
    edges: list
    parent: list
    children: list
    order: list
    sepsets: dict
    member_home: dict
    family_home: dict
    method: str = "min-fill"
    potentials: list = None
    sep_potentials: dict = None
    conditionals: list = field(default=None, repr=False)

    def S(self, u):
        return int(np.prod([self.cards[v] for v in self.universes[u]], dtype=np.int64))

    def N(self, u):
        return len(self.children[u]) + (self.parent[u] is not None)

    def neighbors(self, u):
        return sorted(self.children[u] + ([self.parent[u]] if self.parent[u] is not None else []))

    def sepset(self, child):
        return self.sepsets[child]

    def resolve(self, evidence):
        return resolve_evidence(self.diagram, evidence)

    def total_state_space(self):
        return sum(self.S(u) for u in range(len(self.universes)))

    def has_running_intersection(self):
        adj = {u: self.neighbors(u) for u in range(len(self.universes))}
        n = len(self.universes)
        for a in range(n):
            prev = {a: None}
            stack = [a]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in prev:
                        prev[y] = x
                        stack.append(y)
            for b in range(a + 1, n):
                shared = set(self.universes[a]) & set(self.universes[b])
                x = b
                while x is not None:
                    if not shared <= set(self.universes[x]):
                        return False
                    x = prev[x]
        return True


def join_tree_structure(d, method="min-fill"):
    """Compile the graph part of a join tree (no potentials)."""
    g = moralize(d)
    rank = {v: k for k, v in enumerate(g.nodes)}
    _, order = triangulate(g, method)
    _, formed = _eliminate(g, order)
    cliques = []
    for c in formed:
        if not any(c <= other for other in cliques):
            cliques = [o for o in cliques if not o < c]
            cliques.append(c)
    universes = [tuple(sorted(c, key=rank.__getitem__)) for c in cliques]

    n = len(universes)
    candidates = sorted(
        (-len(set(universes[i]) & set(universes[j])), i, j) for i in range(n) for j in range(i + 1, n)
    )
    comp = list(range(n))

    def find(i):
        while comp[i] != i:
            comp[i] = comp[comp[i]]
            i = comp[i]
        return i

    edges = []
    for _, i, j in candidates:
        ri, rj = find(i), find(j)
        if ri != rj:
            comp[rj] = ri
            edges.append((i, j))

    adj = {u: [] for u in range(n)}
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    parent = [None] * n
    children = [[] for _ in range(n)]
    visit = [0]
    seen = {0}
    for u in visit:
        for v in sorted(adj[u]):
            if v not in seen:
                seen.add(v)
                parent[v] = u
                children[u].append(v)
                visit.append(v)
    sepsets = {c: tuple(v for v in universes[c] if v in set(universes[parent[c]]))
               for c in range(n) if parent[c] is not None}

    cards = {i: d.card(i) for i in g.nodes}

    def size(u):
        return int(np.prod([cards[v] for v in universes[u]], dtype=np.int64))

    def smallest(members):
        return min((u for u in range(n) if members <= set(universes[u])), key=lambda u: (size(u), u))

    member_home = {i: smallest({i}) for i in g.nodes}
    family_home = {i: smallest({i, *d[i].parents}) for i in g.nodes}
    return JoinTree(d, list(g.nodes), cards, universes, sorted(edges), parent, children, visit,
                    sepsets, member_home, family_home, method)


def _axes_onto(uvars, svars):
    return tuple(k for k, v in enumerate(uvars) if v not in svars)


def _marg(pot, uvars, svars):
    drop = _axes_onto(uvars, svars)
    if not drop:
        return pot.copy()
    keep = tuple(k for k in range(pot.ndim) if k not in drop)
    shape = tuple(pot.shape[k] for k in keep)
    # a contiguous (dropped, kept) matrix summed by a vector product costs
    # about the same per cell whichever axes are dropped
    m = np.ascontiguousarray(pot.transpose(drop + keep)).reshape(-1, int(np.prod(shape, dtype=np.int64)))
    return (np.ones(m.shape[0]) @ m).reshape(shape)


def _spread(arr, uvars, svars):
    shape = [arr.shape[svars.index(v)] if v in svars else 1 for v in uvars]
    return arr.reshape(shape)


def _ratio(new, old):
    # 0/0 := 0; a zero old sepset entry always has a zero new entry
    return np.divide(new, old, out=np.zeros_like(new), where=old != 0)


def _charge(counter, steps):
    if counter is not None:
        counter.add(steps)


def _collect_distribute(jt, pots, seps, counter):
    U = jt.universes
    up = {}
    z = None
    for u in reversed(jt.order):
        for c in jt.children[u]:
            pots[u] *= _spread(up[c], U[u], jt.sepsets[c])
        _charge(counter, jt.S(u))
        if jt.parent[u] is not None:
            new = _marg(pots[u], U[u], jt.sepsets[u])
            up[u] = _ratio(new, seps[u])
            seps[u] = new
        else:
            z = float(pots[u].sum())
        _charge(counter, jt.S(u))
    down = {}
    for u in jt.order:
        if jt.parent[u] is not None:
            pots[u] *= _spread(down[u], U[u], jt.sepsets[u])
            _charge(counter, jt.S(u))
        for c in jt.children[u]:
            new = _marg(pots[u], U[u], jt.sepsets[c])
            down[c] = _ratio(new, seps[c])
            seps[c] = new
            _charge(counter, jt.S(u))
    return z


def build_join_tree(d, method="min-fill", counter=None):
    """Compile ``d`` into a calibrated join tree.

    ``counter`` receives the initialization steps (setup plus one
    collect/distribute round).
    """
    jt = join_tree_structure(d, method)
    U = jt.universes
    pots = []
    for u in range(len(U)):
        pots.append(_allocate_potential(tuple(jt.cards[v] for v in U[u])))
    for i in jt.node_order:
        node = d[i]
        u = jt.family_home[i]
        fam = node.parents + (i,)
        perm = sorted(range(len(fam)), key=lambda k: U[u].index(fam[k]))
        arr = np.transpose(node.table, perm)
        pots[u] *= _spread(arr, U[u], tuple(fam[k] for k in perm))
    for u in range(len(U)):
        _charge(counter, jt.S(u))
    seps = {c: np.ones(tuple(jt.cards[v] for v in jt.sepsets[c])) for c in jt.sepsets}
    _collect_distribute(jt, pots, seps, counter)
    jt.potentials = pots
    jt.sep_potentials = seps
    conds = []
    for u in range(len(U)):
        if jt.parent[u] is None:
            conds.append(pots[u].copy())
        else:
            # rows with zero parent marginal are set to zero
            sep = _spread(seps[u], U[u], jt.sepsets[u])
            conds.append(np.divide(pots[u], sep, out=np.zeros_like(pots[u]), where=sep != 0))
    jt.conditionals = conds
    return jt


def _declare(jt, pots, ev, counter):
    for i, s in ev.items():
        u = jt.member_home[i]
        mask = _spread(unit_vector(jt.cards[i], s), jt.universes[u], (i,))
        pots[u] *= mask
        _charge(counter, jt.S(u))


def _beliefs_from(jt, bel, ev, z, counter):
    posteriors = {}
    for i in jt.node_order:
        u = jt.member_home[i]
        vec = _marg(bel[u], jt.universes[u], (i,))
        _charge(counter, jt.S(u))
        norm = z if z is not None else float(vec.sum())
        if norm == 0.0 or not np.isfinite(norm):
            raise ImpossibleEvidence()
        posteriors[i] = unit_vector(jt.cards[i], ev[i]) if i in ev else vec / norm
        _charge(counter, jt.cards[i])
    return posteriors


def jt_infer_jensen(jt, evidence=None, counter=None):
    ev = jt.resolve(evidence)
    pots = [p.copy() for p in jt.potentials]
    seps = {c: s.copy() for c, s in jt.sep_potentials.items()}
    _declare(jt, pots, ev, counter)
    z = _collect_distribute(jt, pots, seps, counter)
    if z == 0.0:
        raise ImpossibleEvidence()
    return Beliefs(_beliefs_from(jt, pots, ev, z, counter), evidence_probability=z)


def jt_infer_meta(jt, evidence=None, counter=None):
    ev = jt.resolve(evidence)
    U = jt.universes
    n = len(U)
    evid = [np.ones(tuple(jt.cards[v] for v in U[u])) for u in range(n)]
    _declare(jt, evid, ev, counter)
    cond = jt.conditionals

    lam = [None] * n
    lam_up = {}
    for u in reversed(jt.order):
        lam_u = evid[u].copy()
        for c in jt.children[u]:
            lam_u *= _spread(lam_up[c], U[u], jt.sepsets[c])
        lam[u] = lam_u
        if jt.parent[u] is not None:
            lam_up[u] = _marg(cond[u] * lam_u, U[u], jt.sepsets[u])
            _charge(counter, 2 * jt.S(u))
    pi = [None] * n
    pi_down = {}
    for u in jt.order:
        if jt.parent[u] is None:
            pi[u] = cond[u].copy()
        else:
            pi[u] = cond[u] * _spread(pi_down[u], U[u], jt.sepsets[u])
        _charge(counter, jt.S(u))
        for c in jt.children[u]:
            m = pi[u] * evid[u]
            for c2 in jt.children[u]:
                if c2 != c:
                    m = m * _spread(lam_up[c2], U[u], jt.sepsets[c2])
            pi_down[c] = _marg(m, U[u], jt.sepsets[c])
            _charge(counter, jt.S(u))
    bel = [pi[u] * lam[u] for u in range(n)]
    root = jt.order[0]
    p_e = float(bel[root].sum())
    return Beliefs(_beliefs_from(jt, bel, ev, None, counter), evidence_probability=p_e)
