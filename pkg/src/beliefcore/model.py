"""Diagram data model, consistency checks and small utilities.

Tables are numpy arrays with one axis per parent (in parent order) followed
by one axis for the node's own states.  Value nodes drop the trailing axis
and hold one utility per parent configuration; decision nodes hold no table.
Row-major iteration over the leading axes is the row order used everywhere
else (serialization, editing, display).
"""

import heapq
import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import (
    BadEpsilon,
    CycleDetected,
    DuplicateId,
    EvidenceError,
    Inconsistent,
    RowSumViolation,
    ShapeMismatch,
    UnknownNode,
    UnknownParent,
)

ROW_TOL = 1e-9

_ID_FORBIDDEN = set(",=|:*#%")
_STATE_FORBIDDEN = set(",=|:#")


class NodeKind(str, Enum):
    CHANCE = "chance"
    DETERMINISTIC = "deterministic"
    DECISION = "decision"
    VALUE = "value"

    def __str__(self):
        return self.value

    @property
    def is_chance(self):
        return self in (NodeKind.CHANCE, NodeKind.DETERMINISTIC)


@dataclass(eq=False)
class Node:
    id: str
    kind: NodeKind
    states: tuple
    parents: tuple = ()
    table: np.ndarray = None

    @property
    def card(self):
        return len(self.states)

    @property
    def is_chance(self):
        return self.kind.is_chance

    def copy(self):
        return Node(
            self.id,
            self.kind,
            tuple(self.states),
            tuple(self.parents),
            None if self.table is None else self.table.copy(),
        )


@dataclass(frozen=True)
class ExtRecord:
    """User extension data attached to a node or (scope ``"*"``) the diagram."""

    scope: str
    key: str
    value: str


DIAGRAM_SCOPE = "*"


class Diagram:
    """A belief network or influence diagram.

    ``nodes`` preserves insertion order; algorithms that need a canonical
    order call :func:`graph_order`.
    """

    def __init__(self, nodes=(), name="", ext=()):
        self.nodes = {}
        for n in nodes:
            if n.id in self.nodes:
                raise DuplicateId(f"duplicate node id {n.id!r}")
            self.nodes[n.id] = n
        self.name = name
        self.ext = list(ext)

    def __getitem__(self, node_id):
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"unknown node {node_id!r}") from None

    def __contains__(self, node_id):
        return node_id in self.nodes

    def __iter__(self):
        return iter(self.nodes)

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return f"Diagram({self.name!r}, {len(self.nodes)} nodes)"

    def children(self, node_id):
        return [n.id for n in self.nodes.values() if node_id in n.parents]

    def children_map(self):
        out = {i: [] for i in self.nodes}
        for n in self.nodes.values():
            for p in n.parents:
                if p in out:
                    out[p].append(n.id)
        return out

    def card(self, node_id):
        return self[node_id].card

    def cards(self):
        return {i: n.card for i, n in self.nodes.items() if n.kind != NodeKind.VALUE}

    def arcs(self):
        return [(p, n.id) for n in self.nodes.values() for p in n.parents]

    def ids_of_kind(self, *kinds):
        return [i for i, n in self.nodes.items() if n.kind in kinds]

    def copy(self):
        return Diagram((n.copy() for n in self.nodes.values()), self.name, self.ext)


@dataclass
class Violation:
    node: str
    rule: str
    detail: str


@dataclass
class ConsistencyReport:
    violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok


class Beliefs(Mapping):
    """Normalized posterior vectors keyed by node id."""

    def __init__(self, posteriors, evidence_probability=None):
        self.posteriors = dict(posteriors)
        self.evidence_probability = evidence_probability

    def __getitem__(self, node_id):
        return self.posteriors[node_id]

    def __iter__(self):
        return iter(self.posteriors)

    def __len__(self):
        return len(self.posteriors)

    def __repr__(self):
        body = ", ".join(f"{k}: {np.round(v, 6).tolist()}" for k, v in self.posteriors.items())
        return f"Beliefs({{{body}}}, evidence_probability={self.evidence_probability})"

    def max_abs_diff(self, other):
        return max(
            (float(np.max(np.abs(self[k] - other[k]))) for k in self.posteriors if k in other),
            default=0.0,
        )


# --------------------------------------------------------------------------
# construction


def expected_table_shape(node, cards):
    pcards = tuple(cards[p] for p in node.parents)
    if node.kind == NodeKind.VALUE:
        return pcards
    return pcards + (len(node.states),)


def _coerce_table(node, cards):
    if node.kind == NodeKind.DECISION:
        return None
    if node.table is None:
        raise ShapeMismatch(f"node {node.id!r} has no table")
    arr = np.array(node.table, dtype=float)
    shape = expected_table_shape(node, cards)
    if arr.shape == shape:
        return arr
    if arr.size == int(np.prod(shape, dtype=np.int64)):
        # flat row lists and (rows, states) matrices in row-major order
        return arr.reshape(shape)
    raise ShapeMismatch(f"node {node.id!r}: table shape {arr.shape}, expected {shape}")


def make_node(id, states=(), parents=(), table=None, kind=NodeKind.CHANCE):
    return Node(str(id), NodeKind(kind), tuple(states), tuple(parents), table)


def build_diagram(spec, name="", ext=(), validate=True):
    """Build a diagram from node descriptions.

    ``spec`` is an iterable of :class:`Node` objects or mappings with keys
    ``id``, ``states``, ``parents``, ``table`` and optional ``kind``.
    Tables may be given as nested arrays of the full shape or as a list of
    rows in row-major parent order.
    """
    nodes = []
    seen = set()
    for item in spec:
        node = item if isinstance(item, Node) else make_node(**item)
        if node.id in seen:
            raise DuplicateId(f"duplicate node id {node.id!r}")
        seen.add(node.id)
        nodes.append(node)
    for n in nodes:
        for p in n.parents:
            if p not in seen:
                raise UnknownParent(f"node {n.id!r} has unknown parent {p!r}")
    cards = {n.id: len(n.states) for n in nodes}
    built = [Node(n.id, NodeKind(n.kind), tuple(n.states), tuple(n.parents),
                  _coerce_table(n, cards)) for n in nodes]
    d = Diagram(built, name, ext)
    if validate:
        raise_if_inconsistent(d)
    return d


_RULE_ERRORS = {
    "cycle": CycleDetected,
    "row-sum": RowSumViolation,
    "unknown-parent": UnknownParent,
    "shape": ShapeMismatch,
}


def raise_if_inconsistent(d):
    report = is_consistent(d)
    if not report.ok:
        v = report.violations[0]
        exc = _RULE_ERRORS.get(v.rule, Inconsistent)
        raise exc(f"{v.rule} at {v.node}: {v.detail}")
    return d


# --------------------------------------------------------------------------
# checks


def is_consistent(d):
    report = ConsistencyReport()
    add = lambda node, rule, detail: report.violations.append(Violation(node, rule, detail))  # noqa: E731

    ids = set(d.nodes)
    children = d.children_map()
    for n in d.nodes.values():
        if not n.id or any(c.isspace() or c in _ID_FORBIDDEN for c in n.id):
            add(n.id, "id", f"invalid node id {n.id!r}")
        for p in n.parents:
            if p not in ids:
                add(n.id, "unknown-parent", f"parent {p!r} does not exist")
        if len(set(n.parents)) != len(n.parents):
            add(n.id, "duplicate-parent", "parent listed twice")
        if n.kind == NodeKind.VALUE:
            if n.states:
                add(n.id, "states", "value node must not have states")
            if children[n.id]:
                add(n.id, "value-child", f"value node has children {children[n.id]}")
        else:
            if not n.states:
                add(n.id, "states", "node needs at least one state")
            if len(set(n.states)) != len(n.states):
                add(n.id, "states", "state labels must be unique")
            for s in n.states:
                if not s or any(c.isspace() or c in _STATE_FORBIDDEN for c in s):
                    add(n.id, "states", f"invalid state label {s!r}")
        for p in n.parents:
            if p in d.nodes and d.nodes[p].kind == NodeKind.VALUE:
                add(n.id, "value-child", f"value node {p!r} used as parent")

    if not is_acyclic(d):
        add("*", "cycle", "arc relation contains a directed cycle")

    seen_keys = set()
    for rec in d.ext:
        if rec.scope != DIAGRAM_SCOPE and rec.scope not in ids:
            add(rec.scope, "ext-scope", f"extension record for unknown node {rec.scope!r}")
        if (rec.scope, rec.key) in seen_keys:
            add(rec.scope, "ext-key", f"duplicate extension key {rec.key!r}")
        seen_keys.add((rec.scope, rec.key))

    if any(v.rule in ("unknown-parent",) for v in report.violations):
        return report
    cards = {i: len(n.states) for i, n in d.nodes.items()}
    for n in d.nodes.values():
        if n.kind == NodeKind.DECISION:
            if n.table is not None:
                add(n.id, "decision-table", "decision nodes carry no distribution")
            continue
        if n.table is None:
            add(n.id, "shape", "missing table")
            continue
        shape = expected_table_shape(n, cards)
        if tuple(n.table.shape) != shape:
            add(n.id, "shape", f"table shape {tuple(n.table.shape)}, expected {shape}")
            continue
        if not np.all(np.isfinite(n.table)):
            add(n.id, "non-finite", "table contains NaN or infinity")
            continue
        if n.kind == NodeKind.VALUE:
            continue
        if np.any(n.table < 0):
            add(n.id, "negative", "negative probability")
        sums = n.table.sum(axis=-1)
        bad = np.abs(sums - 1.0) > ROW_TOL
        if np.any(bad):
            idx = tuple(int(i) for i in np.argwhere(bad)[0])
            add(n.id, "row-sum", f"row {idx} sums to {sums[idx]!r}")
        if n.kind == NodeKind.DETERMINISTIC and not _unit_rows(n.table):
            add(n.id, "deterministic-row", "deterministic rows must be unit vectors")
    return report


def _unit_rows(table):
    return bool(np.all((table == 0.0) | (table == 1.0)) and np.all(table.sum(axis=-1) == 1.0))


def is_acyclic(d):
    try:
        graph_order(d)
    except CycleDetected:
        return False
    return True


def is_strictly_positive(d):
    return all(
        n.table is None or n.kind == NodeKind.VALUE or bool(np.all(n.table > 0))
        for n in d.nodes.values()
    )


def is_belief_net(d):
    return all(n.is_chance for n in d.nodes.values())


def graph_order(d):
    """Topological order with ties broken by ascending id."""
    indeg = {i: 0 for i in d.nodes}
    for n in d.nodes.values():
        indeg[n.id] = sum(1 for p in n.parents if p in d.nodes)
    children = d.children_map()
    heap = [i for i, k in indeg.items() if k == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        i = heapq.heappop(heap)
        order.append(i)
        for c in children[i]:
            indeg[c] -= 1
            if indeg[c] == 0:
                heapq.heappush(heap, c)
    if len(order) != len(d.nodes):
        raise CycleDetected("diagram contains a directed cycle")
    return order


def ancestors(d, nodes):
    out = set()
    stack = list(nodes)
    while stack:
        for p in d[stack.pop()].parents:
            if p not in out:
                out.add(p)
                stack.append(p)
    return out


def has_directed_path(d, src, dst, skip_arc=None):
    """True if a directed path ``src -> ... -> dst`` exists, optionally ignoring one arc."""
    children = d.children_map()
    stack, seen = [src], {src}
    while stack:
        u = stack.pop()
        for c in children[u]:
            if (u, c) == skip_arc:
                continue
            if c == dst:
                return True
            if c not in seen:
                seen.add(c)
                stack.append(c)
    return False


def parent_configurations(d, node_id):
    node = d[node_id]
    return itertools.product(*(range(d.card(p)) for p in node.parents))


def make_strictly_positive(d, eps):
    """Mix every chance row with the uniform distribution: ``(1-eps)*p + eps/n``."""
    if not (0.0 <= eps < 1.0):
        raise BadEpsilon(f"eps must be in [0, 1), got {eps!r}")
    out = d.copy()
    if eps == 0.0:
        return out
    for n in out.nodes.values():
        if n.is_chance:
            n.table = (1.0 - eps) * n.table + eps / n.card
            n.kind = NodeKind.CHANCE
    return out


# --------------------------------------------------------------------------
# evidence


def resolve_evidence(d, evidence):
    """Validate evidence and convert state labels to indices."""
    out = {}
    for node_id, state in (evidence or {}).items():
        if node_id not in d.nodes:
            raise EvidenceError(f"evidence on unknown node {node_id!r}")
        node = d.nodes[node_id]
        if not node.is_chance:
            raise EvidenceError(f"evidence on non-chance node {node_id!r}")
        if isinstance(state, str):
            if state not in node.states:
                raise EvidenceError(f"node {node_id!r} has no state {state!r}")
            idx = node.states.index(state)
        else:
            idx = int(state)
            if not 0 <= idx < node.card:
                raise EvidenceError(f"state index {idx} out of range for {node_id!r}")
        out[node_id] = idx
    return out


def unit_vector(card, index):
    v = np.zeros(card)
    v[index] = 1.0
    return v


def diagrams_equal(a, b):
    """Field-by-field equality of two diagrams (tables compared exactly)."""
    if a.name != b.name or list(a.ext) != list(b.ext) or set(a.nodes) != set(b.nodes):
        return False
    for i, n in a.nodes.items():
        m = b.nodes[i]
        if (n.kind, n.states, n.parents) != (m.kind, m.states, m.parents):
            return False
        if (n.table is None) != (m.table is None):
            return False
        if n.table is not None and not np.array_equal(n.table, m.table):
            return False
    return True
