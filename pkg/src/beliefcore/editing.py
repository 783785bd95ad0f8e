"""Consistency-preserving diagram edits.

Every function takes a diagram, leaves it untouched, and returns a new
consistent diagram.  Where an edit leaves probabilities underdetermined the
extension rule is fixed and documented on the function.
"""

import numpy as np

from .errors import (
    ArcExists,
    CycleDetected,
    DuplicateId,
    DuplicateState,
    HasChildren,
    LastState,
    NoSuchArc,
    ShapeMismatch,
    UnknownParent,
    UnknownState,
)
from .model import (
    Node,
    NodeKind,
    _coerce_table,
    _unit_rows,
    has_directed_path,
    make_node,
    raise_if_inconsistent,
)


def copy_diagram(d):
    return d.copy()


def add_node(d, node):
    """Add a fully specified node (a :class:`Node` or a mapping of its fields)."""
    if not isinstance(node, Node):
        node = make_node(**node)
    if node.id in d.nodes:
        raise DuplicateId(f"node {node.id!r} already exists")
    for p in node.parents:
        if p not in d.nodes:
            raise UnknownParent(f"unknown parent {p!r}")
    out = d.copy()
    cards = {**{i: n.card for i, n in out.nodes.items()}, node.id: len(node.states)}
    out.nodes[node.id] = Node(node.id, NodeKind(node.kind), tuple(node.states),
                              tuple(node.parents), _coerce_table(node, cards))
    return raise_if_inconsistent(out)


def delete_node(d, node_id, cascade=False):
    """Remove a node.  With ``cascade`` its outgoing arcs are first removed by :func:`delete_arc`."""
    children = d.children(d[node_id].id)
    if children and not cascade:
        raise HasChildren(f"node {node_id!r} has children {children}")
    out = d
    for c in children:
        out = delete_arc(out, node_id, c)
    out = out.copy()
    del out.nodes[node_id]
    out.ext = [r for r in out.ext if r.scope != node_id]
    return raise_if_inconsistent(out)


def add_arc(d, parent, child):
    """Add ``parent -> child``; the child's rows are replicated so it stays independent of the new parent."""
    d[parent], d[child]
    if parent in d[child].parents:
        raise ArcExists(f"arc {parent} -> {child} already exists")
    if parent == child or has_directed_path(d, child, parent):
        raise CycleDetected(f"arc {parent} -> {child} would create a cycle")
    out = d.copy()
    node = out.nodes[child]
    node.parents = node.parents + (parent,)
    if node.table is not None:
        k = len(node.parents) - 1
        expanded = np.expand_dims(node.table, axis=k)
        node.table = np.repeat(expanded, out.card(parent), axis=k)
    return raise_if_inconsistent(out)


def delete_arc(d, parent, child):
    """Remove ``parent -> child``; the child's rows are averaged uniformly over the parent's states."""
    node = d[child]
    if parent not in node.parents:
        raise NoSuchArc(f"no arc {parent} -> {child}")
    out = d.copy()
    node = out.nodes[child]
    k = node.parents.index(parent)
    node.parents = node.parents[:k] + node.parents[k + 1:]
    if node.table is not None:
        node.table = node.table.mean(axis=k)
        if node.kind == NodeKind.DETERMINISTIC and not _unit_rows(node.table):
            node.kind = NodeKind.CHANCE
    return raise_if_inconsistent(out)


def add_state(d, node_id, label):
    """Append a state.

    The node's own rows give it probability 0; rows of chance children for
    configurations involving it are uniform and value children get utility 0.
    """
    node = d[node_id]
    if label in node.states:
        raise DuplicateState(f"node {node_id!r} already has state {label!r}")
    out = d.copy()
    node = out.nodes[node_id]
    node.states = node.states + (label,)
    if node.table is not None and node.kind != NodeKind.VALUE:
        pad = [(0, 0)] * (node.table.ndim - 1) + [(0, 1)]
        node.table = np.pad(node.table, pad)
    for c in out.children(node_id):
        child = out.nodes[c]
        if child.table is None:
            continue
        k = child.parents.index(node_id)
        shape = list(child.table.shape)
        shape[k] = 1
        if child.kind == NodeKind.VALUE:
            extra = np.zeros(shape)
        else:
            extra = np.full(shape, 1.0 / child.card)
            if child.kind == NodeKind.DETERMINISTIC and child.card > 1:
                child.kind = NodeKind.CHANCE
        child.table = np.concatenate([child.table, extra], axis=k)
    return raise_if_inconsistent(out)


def delete_state(d, node_id, label):
    """Remove a state, renormalizing the node's rows and dropping children's rows conditioned on it.

    A row whose entire mass was on the removed state becomes uniform.
    """
    node = d[node_id]
    if label not in node.states:
        raise UnknownState(f"node {node_id!r} has no state {label!r}")
    if node.card < 2:
        raise LastState(f"cannot delete the last state of {node_id!r}")
    s = node.states.index(label)
    out = d.copy()
    node = out.nodes[node_id]
    node.states = node.states[:s] + node.states[s + 1:]
    if node.table is not None and node.kind != NodeKind.VALUE:
        removed = node.table[..., s:s + 1]
        t = np.delete(node.table, s, axis=-1)
        sums = t.sum(axis=-1, keepdims=True)
        zero = sums == 0.0
        # rows that gave the state no mass are kept bit-for-bit
        scaled = np.where(removed == 0.0, t, t / np.where(zero, 1.0, sums))
        t = np.where(zero, 1.0 / node.card, scaled)
        node.table = t
        if node.kind == NodeKind.DETERMINISTIC and not _unit_rows(t):
            node.kind = NodeKind.CHANCE
    for c in out.children(node_id):
        child = out.nodes[c]
        if child.table is not None:
            child.table = np.delete(child.table, s, axis=child.parents.index(node_id))
    return raise_if_inconsistent(out)


def edit_distribution(d, node_id, rows):
    """Replace a node's table; ``rows`` may be the full array or a list of rows."""
    node = d[node_id]
    if node.kind == NodeKind.DECISION:
        raise ShapeMismatch(f"decision node {node_id!r} has no distribution to edit")
    out = d.copy()
    target = out.nodes[node_id]
    target.table = _coerce_table(Node(node.id, node.kind, node.states, node.parents, rows), out.cards())
    return raise_if_inconsistent(out)
