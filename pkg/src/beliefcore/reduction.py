"""Influence-diagram evaluation and single-target queries by node removal.

Both entry points work on a private copy of the diagram and shrink it with
the operations of :mod:`beliefcore.transforms`: barren nodes are dropped,
chance nodes are absorbed (their arcs reversed away, utilities averaged over
them) and decisions are replaced by a maximization once the value node
depends on nothing the decision maker could not see.
"""

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from .errors import (
    DecisionsUnordered,
    ImpossibleEvidence,
    MultipleValueNodes,
    NotBeliefNet,
    NotChance,
    NotNoForgetting,
    NoValueNode,
    SolveError,
)
from .factors import Factor
from .model import Beliefs, NodeKind, graph_order, has_directed_path, resolve_evidence, unit_vector
from .transforms import (
    absorb_chance_node,
    family_factor,
    remove_all_barren,
    remove_barren_node,
    reverse_arc,
)

MAX_TIE_TOL = 1e-12


class Policy(Mapping):
    """Decision id -> integer array of chosen alternatives.

    The array for decision ``D`` is indexed by the states of ``parents[D]``
    in that order (a 0-d array when ``D`` observes nothing).
    """

    def __init__(self, tables, parents):
        self.tables = dict(tables)
        self.parents = dict(parents)

    def __getitem__(self, decision):
        return self.tables[decision]

    def __iter__(self):
        return iter(self.tables)

    def __len__(self):
        return len(self.tables)

    def choice(self, decision, configuration=()):
        return int(self.tables[decision][tuple(configuration)])

    def describe(self, d):
        """One line per decision and information configuration."""
        lines = []
        for dec in graph_order(d):
            if dec not in self.tables:
                continue
            states = d[dec].states
            table = self.tables[dec]
            pars = self.parents[dec]
            if not pars:
                lines.append(f"{dec}: {states[int(table)]}")
                continue
            for cfg in np.ndindex(*table.shape):
                cond = ",".join(f"{p}={d[p].states[s]}" for p, s in zip(pars, cfg))
                lines.append(f"{dec} | {cond}: {states[int(table[cfg])]}")
        return lines

    def __repr__(self):
        return f"Policy({ {k: v.tolist() for k, v in self.tables.items()} })"


@dataclass
class SolveResult:
    policy: Policy
    expected_utility: float


def decision_order(d):
    """Decisions in graph order, checked to lie on one directed path."""
    decisions = [i for i in graph_order(d) if d[i].kind == NodeKind.DECISION]
    for a, b in zip(decisions, decisions[1:]):
        if not has_directed_path(d, a, b):
            raise DecisionsUnordered(f"no directed path from decision {a!r} to {b!r}")
    return decisions


def _no_forgetting_gaps(d, decisions):
    gaps = []
    for a, b in zip(decisions, decisions[1:]):
        need = set(d[a].parents) | {a}
        missing = sorted(need - set(d[b].parents))
        if missing:
            gaps.append((b, missing))
    return gaps


def with_no_forgetting(d):
    """Copy of ``d`` with the information arcs no-forgetting requires."""
    out = d.copy()
    decisions = decision_order(out)
    known = []
    for dec in decisions:
        node = out.nodes[dec]
        node.parents = node.parents + tuple(p for p in known if p not in node.parents)
        known = list(node.parents) + [dec]
    return out


def _value_node(d):
    values = d.ids_of_kind(NodeKind.VALUE)
    if not values:
        raise NoValueNode("influence diagram has no value node")
    if len(values) > 1:
        raise MultipleValueNodes(f"expected one value node, found {len(values)}")
    return values[0]


def _absorb_cost(d, x, children):
    scope = set(d[x].parents)
    for c in children[x]:
        scope |= set(d[c].parents)
        if d[c].kind != NodeKind.VALUE:
            scope.add(c)
    scope.discard(x)
    return int(np.prod([d.card(v) for v in scope], dtype=np.int64))


def _next_absorption(d, candidates):
    children = d.children_map()
    best = None
    for x in candidates:
        if any(d[c].kind == NodeKind.DECISION for c in children[x]):
            continue
        key = (_absorb_cost(d, x, children), x)
        if best is None or key < best:
            best = key
    return None if best is None else best[1]


def _argmax_lowest(values, axis):
    top = values.max(axis=axis, keepdims=True)
    tol = MAX_TIE_TOL * np.maximum(1.0, np.abs(top))
    return np.argmax(values >= top - tol, axis=axis)


def _maximize(d, dec, value):
    v = d.nodes[value]
    f = family_factor(v)
    ax = f.variables.index(dec)
    rest = f.variables[:ax] + f.variables[ax + 1:]
    choice = Factor(rest, _argmax_lowest(f.values, ax))
    info = d[dec].parents
    shape = tuple(d.card(p) for p in info)
    table = np.broadcast_to(choice.aligned(info), shape).astype(int) if info else \
        np.asarray(choice.values, dtype=int).reshape(())
    v.parents = rest
    v.table = np.array(f.max_out(dec).values, order="C")
    del d.nodes[dec]
    return table


def _prune(work, value, decisions, tables):
    """Drop barren chance nodes and unobserved-by-anything decisions until stable."""
    while True:
        remove_all_barren(work, keep=(value,), inplace=True)
        children = work.children_map()
        idle = [i for i in decisions if i in work.nodes and not children[i]]
        if not idle:
            return
        for dec in idle:
            # any choice is optimal; take the lowest alternative
            shape = tuple(work.card(p) for p in work[dec].parents)
            tables[dec] = np.zeros(shape, dtype=int)
            remove_barren_node(work, dec, inplace=True)


def evaluate_influence_diagram(d, add_no_forgetting=False):
    """Optimal policy and its expected utility.

    With ``add_no_forgetting`` the missing information arcs are added first
    (the returned policy is then indexed by the enlarged information sets);
    otherwise a diagram violating no-forgetting is rejected.
    """
    value = _value_node(d)
    decisions = decision_order(d)
    if add_no_forgetting:
        d = with_no_forgetting(d)
    gaps = _no_forgetting_gaps(d, decisions)
    if gaps:
        dec, missing = gaps[0]
        raise NotNoForgetting(f"decision {dec!r} does not observe {', '.join(missing)}")
    info = {dec: d[dec].parents for dec in decisions}
    work = d.copy()
    tables = {}
    while True:
        _prune(work, value, decisions, tables)
        children = work.children_map()
        v = work[value]
        if not v.parents:
            break
        removable = [
            dec for dec in decisions
            if dec in work.nodes and children[dec] == [value]
            and set(v.parents) - {dec} <= set(work[dec].parents)
        ]
        if removable:
            dec = removable[-1]
            tables[dec] = _maximize(work, dec, value)
            continue
        chance = [i for i in graph_order(work) if work[i].is_chance]
        x = _next_absorption(work, chance)
        if x is None:
            raise SolveError("no chance node or decision can be removed")
        absorb_chance_node(work, x, inplace=True)
    eu = float(work[value].table)
    return SolveResult(Policy({k: tables[k] for k in decisions}, info), eu)


def _chance_part(d):
    out = d.copy()
    for v in out.ids_of_kind(NodeKind.VALUE):
        del out.nodes[v]
    children = out.children_map()
    for dec in out.ids_of_kind(NodeKind.DECISION):
        if children[dec]:
            raise NotBeliefNet(f"chance nodes depend on decision {dec!r}")
        del out.nodes[dec]
    return out


def reduction_query(d, target, evidence=None):
    """Posterior of ``target`` given ``evidence`` by removing everything else.

    After the reduction only the target and the evidence nodes remain, the
    target has no children, and ``P(e)`` is the product of the evidence
    nodes' table entries.
    """
    node = d[target]
    if not node.is_chance:
        raise NotChance(f"query target {target!r} is a {node.kind} node")
    ev = resolve_evidence(d, evidence)
    work = _chance_part(d)
    keep = set(ev) | {target}
    remove_all_barren(work, keep=keep, inplace=True)
    while True:
        x = _next_absorption(work, [i for i in graph_order(work) if i not in keep])
        if x is None:
            break
        absorb_chance_node(work, x, inplace=True)
    if target not in ev:
        rank = {v: k for k, v in enumerate(graph_order(work))}
        for c in sorted(work.children(target), key=rank.__getitem__):
            reverse_arc(work, target, c, inplace=True)

    p_e = 1.0
    for i in ev:
        n = work[i]
        p_e *= float(n.table[tuple(ev[p] for p in n.parents) + (ev[i],)])
    if p_e == 0.0:
        raise ImpossibleEvidence()
    if target in ev:
        post = unit_vector(node.card, ev[target])
    else:
        t = work[target]
        post = np.array(t.table[tuple(ev[p] for p in t.parents)], dtype=float)
    return Beliefs({target: post}, evidence_probability=p_e)
