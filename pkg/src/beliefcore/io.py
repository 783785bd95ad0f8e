"""Plain-text serialization.

Format (line oriented, LF newlines, ``#`` at line start is a comment)::

    %beliefcore 1
    diagram <name>
    node <id> kind=<chance|deterministic|decision|value> states=<s1,s2,...>
    arc <parent> -> <child>
    cpt <id> | <p1>=<state>,<p2>=<state> : v1 v2 ...
    val <id> | <p1>=<state> : u
    ext <scope> <key> <value...>

Nodes are written in graph order, arcs grouped by child (graph order) with
parents in the child's parent order, table rows in row-major order of parent
state indices.  Floats use the shortest repr that round-trips.
"""

import itertools

import numpy as np

from .errors import Inconsistent, ParseError, VersionUnsupported
from .model import (
    ROW_TOL,
    Diagram,
    ExtRecord,
    Node,
    NodeKind,
    expected_table_shape,
    graph_order,
    is_consistent,
    raise_if_inconsistent,
)

FORMAT_VERSION = 1
HEADER = "%beliefcore"
RENORMALIZE_TOL = 1e-6


def _num(x):
    return repr(float(x))


def save(d):
    report = is_consistent(d)
    if not report.ok:
        v = report.violations[0]
        raise Inconsistent(f"cannot save inconsistent diagram: {v.rule} at {v.node}: {v.detail}")
    if "\n" in d.name or any("\n" in r.value or "\r" in r.value for r in d.ext):
        raise Inconsistent("names and extension values must be single-line")
    order = graph_order(d)
    lines = [f"{HEADER} {FORMAT_VERSION}", f"diagram {d.name}".rstrip()]
    for i in order:
        n = d[i]
        lines.append(f"node {i} kind={n.kind.value} states={','.join(n.states)}")
    for i in order:
        for p in d[i].parents:
            lines.append(f"arc {p} -> {i}")
    for i in order:
        n = d[i]
        if n.table is None:
            continue
        keyword = "val" if n.kind == NodeKind.VALUE else "cpt"
        ranges = [range(d.card(p)) for p in n.parents]
        for cfg in itertools.product(*ranges):
            label = ",".join(f"{p}={d[p].states[s]}" for p, s in zip(n.parents, cfg))
            row = n.table[cfg]
            values = " ".join(_num(v) for v in np.atleast_1d(row))
            lines.append(f"{keyword} {i} | {label + ' ' if label else ''}: {values}")
    for r in d.ext:
        lines.append(f"ext {r.scope} {r.key} {r.value}")
    return "\n".join(lines) + "\n"


def save_file(d, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(save(d))


def load_file(path, renormalize=False, validate=True):
    with open(path, encoding="utf-8") as fh:
        return load(fh.read(), renormalize=renormalize, validate=validate)


def _col(raw, token, start=0):
    pos = raw.find(token, start)
    return pos + 1 if pos >= 0 else 1


def load(text, renormalize=False, validate=True):
    """Parse the text format.

    With ``renormalize`` rows within 1e-6 of summing to one are rescaled;
    otherwise the usual 1e-9 tolerance applies.  ``validate=False`` skips the
    final consistency check (used to report on broken files).
    """
    raw_lines = text.splitlines()
    content = [(no, ln) for no, ln in enumerate(raw_lines, 1)
               if ln.strip() and not ln.lstrip().startswith("#")]
    if not content:
        raise ParseError(1, 1, "empty input")
    no, first = content[0]
    head = first.split()
    if not head or head[0] != HEADER:
        raise ParseError(no, 1, f"expected '{HEADER} <version>' header")
    if len(head) != 2 or not head[1].isdigit():
        raise ParseError(no, len(HEADER) + 2, "missing or malformed version")
    if int(head[1]) != FORMAT_VERSION:
        raise VersionUnsupported(no, len(HEADER) + 2, f"unsupported version {head[1]}")

    name = ""
    nodes = {}
    node_lines = {}
    arcs = []
    rows = {}
    ext = []
    for no, raw in content[1:]:
        line = raw.rstrip("\r")
        keyword = line.split(None, 1)[0]
        if keyword == "diagram":
            name = line.strip()[len("diagram"):].strip()
        elif keyword == "node":
            parts = line.split()
            if len(parts) != 4:
                raise ParseError(no, 1, "expected 'node <id> kind=<kind> states=<s1,...>'")
            node_id, kind_tok, states_tok = parts[1:]
            if not kind_tok.startswith("kind="):
                raise ParseError(no, _col(line, kind_tok), "expected kind=<kind>")
            try:
                kind = NodeKind(kind_tok[5:])
            except ValueError:
                raise ParseError(no, _col(line, kind_tok), f"unknown kind {kind_tok[5:]!r}") from None
            if not states_tok.startswith("states="):
                raise ParseError(no, _col(line, states_tok), "expected states=<s1,...>")
            states = tuple(states_tok[7:].split(",")) if states_tok[7:] else ()
            if node_id in nodes:
                raise ParseError(no, _col(line, node_id), f"duplicate node {node_id!r}")
            nodes[node_id] = Node(node_id, kind, states, (), None)
            node_lines[node_id] = no
        elif keyword == "arc":
            parts = line.split()
            if len(parts) != 4 or parts[2] != "->":
                raise ParseError(no, 1, "expected 'arc <parent> -> <child>'")
            arcs.append((no, line, parts[1], parts[3]))
        elif keyword in ("cpt", "val"):
            bar = line.find("|")
            colon = line.find(":", bar + 1)
            if bar < 0 or colon < 0:
                raise ParseError(no, len(line) + 1, "expected '<id> | <configuration> : <values>'")
            node_id = line[len(keyword):bar].strip()
            cfg_text = line[bar + 1:colon].strip()
            cfg = []
            if cfg_text:
                for item in cfg_text.split(","):
                    if "=" not in item:
                        raise ParseError(no, _col(line, item, bar), f"expected parent=state, got {item!r}")
                    p, s = item.split("=", 1)
                    cfg.append((p.strip(), s.strip()))
            values = []
            for tok in line[colon + 1:].split():
                try:
                    values.append(float(tok))
                except ValueError:
                    raise ParseError(no, _col(line, tok, colon), f"bad number {tok!r}") from None
            rows.setdefault(node_id, []).append((no, line, keyword, cfg, values))
        elif keyword == "ext":
            parts = line.split(" ", 3)
            if len(parts) < 3:
                raise ParseError(no, 1, "expected 'ext <scope> <key> <value>'")
            ext.append(ExtRecord(parts[1], parts[2], parts[3] if len(parts) > 3 else ""))
        else:
            raise ParseError(no, 1, f"unknown keyword {keyword!r}")

    for no, line, p, c in arcs:
        for ref in (p, c):
            if ref not in nodes:
                raise ParseError(no, _col(line, ref, 4), f"arc references unknown node {ref!r}")
        child = nodes[c]
        if p in child.parents:
            raise ParseError(no, 1, f"duplicate arc {p} -> {c}")
        child.parents = child.parents + (p,)

    end_line = len(raw_lines) + 1
    cards = {i: len(n.states) for i, n in nodes.items()}
    for node_id, entries in rows.items():
        if node_id not in nodes:
            no, line = entries[0][0], entries[0][1]
            raise ParseError(no, 5, f"table row for unknown node {node_id!r}")
    for node_id, node in nodes.items():
        entries = rows.get(node_id, [])
        if node.kind == NodeKind.DECISION:
            if entries:
                raise ParseError(entries[0][0], 1, f"decision node {node_id!r} cannot have table rows")
            continue
        shape = expected_table_shape(node, cards)
        table = np.full(shape, np.nan)
        filled = np.zeros(shape[:len(node.parents)], dtype=bool)
        want_kw = "val" if node.kind == NodeKind.VALUE else "cpt"
        width = 1 if node.kind == NodeKind.VALUE else node.card
        for no, line, keyword, cfg, values in entries:
            if keyword != want_kw:
                raise ParseError(no, 1, f"use '{want_kw}' rows for {node.kind.value} node {node_id!r}")
            if [p for p, _ in cfg] != list(node.parents):
                raise ParseError(no, _col(line, "|") + 1,
                                 f"configuration must name parents {list(node.parents)} in order")
            idx = []
            for p, s in cfg:
                if s not in nodes[p].states:
                    raise ParseError(no, _col(line, f"{p}={s}"), f"node {p!r} has no state {s!r}")
                idx.append(nodes[p].states.index(s))
            idx = tuple(idx)
            if len(values) != width:
                raise ParseError(no, len(line) + 1, f"expected {width} values, got {len(values)}")
            if filled[idx]:
                raise ParseError(no, 1, f"duplicate row for {node_id!r}")
            filled[idx] = True
            table[idx] = values[0] if node.kind == NodeKind.VALUE else values
        if not np.all(filled):
            missing = tuple(int(i) for i in np.argwhere(~filled)[0]) if filled.ndim else ()
            raise ParseError(end_line, 1, f"missing table row {missing} for node {node_id!r} "
                                          f"(declared at line {node_lines[node_id]})")
        if renormalize and node.kind != NodeKind.VALUE:
            sums = table.sum(axis=-1, keepdims=True)
            fix = (np.abs(sums - 1.0) <= RENORMALIZE_TOL) & (np.abs(sums - 1.0) > 0)
            table = np.where(fix, table / sums, table)
        node.table = table

    # graph order is the canonical declaration order; keep declaration order otherwise
    d = Diagram(nodes.values(), name, ext)
    if validate:
        raise_if_inconsistent(d)
    return d


__all__ = ["save", "load", "save_file", "load_file", "ROW_TOL", "FORMAT_VERSION"]
