"""Joint-preserving diagram transformations.

All functions return a new diagram unless called with ``inplace=True``, in
which case the argument is modified and returned (the reduction algorithms
use this on their private scratch copy).
"""

import numpy as np

from .errors import (
    NoSuchArc,
    NotBarren,
    NotChance,
    NotDeterministic,
    TransformError,
    WouldCreateCycle,
)
from .factors import Factor
from .model import NodeKind, _unit_rows, graph_order, has_directed_path


def family_factor(node):
    if node.kind == NodeKind.VALUE:
        return Factor(node.parents, node.table)
    return Factor(node.parents + (node.id,), node.table)


def _store(node, factor, parents):
    node.parents = tuple(parents)
    variables = node.parents if node.kind == NodeKind.VALUE else node.parents + (node.id,)
    node.table = np.array(factor.transpose(variables).values, order="C")


def _settle_kind(node):
    if node.kind == NodeKind.DETERMINISTIC and not _unit_rows(node.table):
        node.kind = NodeKind.CHANCE


def reverse_arc(d, frm, to, inplace=False):
    """Reverse ``frm -> to`` by Bayes' rule.

    Both nodes end up conditioned on the union of their parents.  Where the
    new marginal of ``to`` is zero the conditional of ``frm`` is set uniform,
    which keeps the diagram a valid probability model.
    """
    x, y = d[frm], d[to]
    if frm not in y.parents:
        raise NoSuchArc(f"no arc {frm} -> {to}")
    if not (x.is_chance and y.is_chance):
        raise NotChance(f"arc reversal needs two chance nodes, got {x.kind}/{y.kind}")
    if has_directed_path(d, frm, to, skip_arc=(frm, to)):
        raise WouldCreateCycle(f"reversing {frm} -> {to} would create a cycle")
    out = d if inplace else d.copy()
    x, y = out.nodes[frm], out.nodes[to]

    pa_x = x.parents
    pa_y = tuple(p for p in y.parents if p != frm)
    new_pa_y = pa_y + tuple(p for p in pa_x if p not in pa_y)
    new_pa_x = pa_x + tuple(p for p in pa_y if p not in pa_x) + (to,)

    joint = (family_factor(x) * family_factor(y)).transpose(new_pa_y + (to, frm)).values
    marg = joint.sum(axis=-1)
    zero = marg == 0.0
    cond = np.where(zero[..., None], 1.0 / x.card,
                    joint / np.where(zero, 1.0, marg)[..., None])

    _store(y, Factor(new_pa_y + (to,), marg), new_pa_y)
    _store(x, Factor(new_pa_y + (to, frm), cond), new_pa_x)
    _settle_kind(x)
    _settle_kind(y)
    return out


def remove_barren_node(d, node_id, keep=(), inplace=False):
    node = d[node_id]
    if node.kind == NodeKind.VALUE or node_id in keep or d.children(node_id):
        raise NotBarren(f"node {node_id!r} is not barren")
    out = d if inplace else d.copy()
    del out.nodes[node_id]
    out.ext = [r for r in out.ext if r.scope != node_id]
    return out


def remove_all_barren(d, keep=(), inplace=False):
    """Repeatedly delete childless chance nodes that are not in ``keep``."""
    keep = set(keep)
    for k in keep:
        d[k]
    out = d if inplace else d.copy()
    changed = True
    while changed:
        children = out.children_map()
        barren = [i for i, n in out.nodes.items()
                  if n.is_chance and not children[i] and i not in keep]
        changed = bool(barren)
        for i in barren:
            remove_barren_node(out, i, inplace=True)
    return out


def absorb_chance_node(d, node_id, inplace=False):
    """Marginalize a chance node out of the diagram.

    Outgoing arcs to chance children are reversed (children in graph order),
    a value child takes the expectation over the node, and the then childless
    node is removed.
    """
    node = d[node_id]
    if not node.is_chance:
        raise NotChance(f"{node_id!r} is a {node.kind} node")
    rank = {v: k for k, v in enumerate(graph_order(d))}
    children = sorted(d.children(node_id), key=rank.__getitem__)
    if any(d[c].kind == NodeKind.DECISION for c in children):
        raise TransformError(f"{node_id!r} is observed by a decision and cannot be absorbed")
    out = d if inplace else d.copy()
    for c in children:
        if out[c].is_chance:
            reverse_arc(out, node_id, c, inplace=True)
    x = out.nodes[node_id]
    for c in children:
        v = out.nodes[c]
        if v.kind != NodeKind.VALUE:
            continue
        expected = (family_factor(v) * family_factor(x)).sum_out(node_id)
        parents = tuple(p for p in v.parents if p != node_id)
        parents += tuple(p for p in x.parents if p not in parents)
        _store(v, expected, parents)
    return remove_barren_node(out, node_id, inplace=True)


def reduce_deterministic_node(d, node_id, inplace=False):
    """Substitute a deterministic node's function into its children and remove it."""
    node = d[node_id]
    if not node.is_chance or not _unit_rows(node.table):
        raise NotDeterministic(f"{node_id!r} is not deterministic")
    children = d.children(node_id)
    if any(d[c].kind == NodeKind.DECISION for c in children):
        raise TransformError(f"{node_id!r} is observed by a decision and cannot be reduced")
    out = d if inplace else d.copy()
    fn = family_factor(out.nodes[node_id])
    for c in children:
        child = out.nodes[c]
        combined = (family_factor(child) * fn).sum_out(node_id)
        parents = []
        for p in child.parents:
            if p == node_id:
                parents.extend(q for q in node.parents if q not in child.parents and q not in parents)
            elif p not in parents:
                parents.append(p)
        _store(child, combined, parents)
    return remove_barren_node(out, node_id, inplace=True)

