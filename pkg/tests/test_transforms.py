import numpy as np
import pytest

from beliefcore.errors import NoSuchArc, NotBarren, NotChance, NotDeterministic, WouldCreateCycle
from beliefcore.fixtures import fixture
from beliefcore.model import NodeKind, build_diagram, graph_order, is_consistent, make_node
from beliefcore.oracle import joint_enumeration_oracle
from beliefcore.random_nets import random_network
from beliefcore.transforms import (
    absorb_chance_node,
    reduce_deterministic_node,
    remove_all_barren,
    remove_barren_node,
    reverse_arc,
)
from support import deterministic_net, joint_over

TF = ("t", "f")


def test_reverse_chain():
    d = reverse_arc(fixture("FIX-CHAIN"), "A", "B")
    assert d["B"].parents == () and d["A"].parents == ("B",)
    assert d["B"].table[0] == pytest.approx(0.31, abs=1e-15)
    assert d["A"].table[0, 0] == pytest.approx(24 / 31, abs=1e-15)
    assert d["A"].table[1, 0] == pytest.approx(6 / 69, abs=1e-15)
    assert np.allclose(joint_over(d, ["A", "B"]), joint_over(fixture("FIX-CHAIN"), ["A", "B"]), atol=1e-12)


def test_reverse_zero_marginal_uniform():
    d = build_diagram([
        make_node("A", TF, (), [1.0, 0.0]),
        make_node("B", TF, ("A",), [[1.0, 0.0], [0.3, 0.7]]),
    ])
    r = reverse_arc(d, "A", "B")
    assert np.array_equal(r["A"].table[1], [0.5, 0.5])
    assert is_consistent(r).ok


def test_reverse_errors():
    with pytest.raises(NoSuchArc):
        reverse_arc(fixture("FIX-CHAIN"), "B", "A")
    d = build_diagram([
        make_node("A", TF, (), [0.5, 0.5]),
        make_node("B", TF, ("A",), [[0.5, 0.5]] * 2),
        make_node("C", TF, ("A", "B"), [[0.5, 0.5]] * 4),
    ])
    with pytest.raises(WouldCreateCycle):
        reverse_arc(d, "A", "C")
    with pytest.raises(NotChance):
        reverse_arc(fixture("FIX-ID-INFO"), "W", "D")


def test_reverse_twice_restores_joint():
    for seed in range(30):
        d = random_network(6, max_parents=2, states_range=(2, 3), seed=seed)
        arcs = [(p, c) for p, c in d.arcs()]
        for p, c in arcs:
            try:
                r = reverse_arc(reverse_arc(d, p, c), c, p)
            except WouldCreateCycle:
                continue
            ids = sorted(d.nodes)
            assert np.max(np.abs(joint_over(r, ids) - joint_over(d, ids))) < 1e-10
            break


def test_barren_removal():
    d = remove_all_barren(fixture("FIX-DIAMOND"), keep={"A"})
    assert list(d.nodes) == ["A"]
    assert d["A"].table[0] == 0.5
    d = remove_all_barren(fixture("FIX-DIAMOND"), keep={"A", "D"})
    assert len(d) == 4
    with pytest.raises(NotBarren):
        remove_barren_node(fixture("FIX-CHAIN"), "A")


def test_absorb():
    d = absorb_chance_node(fixture("FIX-CHAIN"), "A")
    assert list(d.nodes) == ["B"]
    assert d["B"].table[0] == pytest.approx(0.31)
    dia = fixture("FIX-DIAMOND")
    d = absorb_chance_node(dia, "B")
    assert set(d["D"].parents) == {"A", "C"}
    assert np.max(np.abs(joint_over(d, ["A", "C", "D"]) - joint_over(dia, ["A", "C", "D"]))) < 1e-12
    leaf = absorb_chance_node(dia, "D")
    assert sorted(leaf.nodes) == ["A", "B", "C"]


def test_absorb_into_value():
    d = absorb_chance_node(fixture("FIX-ID"), "W")
    assert d["V"].parents == ("D",)
    assert np.allclose(d["V"].table, [76.0, 60.0])


def test_reduce_deterministic():
    base = [make_node("A", TF, (), [0.3, 0.7])]
    child = make_node("C", TF, ("B",), [[0.9, 0.1], [0.2, 0.8]])
    ident = build_diagram(base + [make_node("B", TF, ("A",), [[1, 0], [0, 1]], NodeKind.DETERMINISTIC), child])
    out = reduce_deterministic_node(ident, "B")
    assert out["C"].parents == ("A",)
    assert np.array_equal(out["C"].table, child.table)
    neg = build_diagram(base + [make_node("B", TF, ("A",), [[0, 1], [1, 0]], NodeKind.DETERMINISTIC), child])
    out = reduce_deterministic_node(neg, "B")
    assert np.array_equal(out["C"].table, child.table[::-1])
    assert np.allclose(joint_over(out, ["A", "C"]), joint_over(neg, ["A", "C"]), atol=1e-12)
    with pytest.raises(NotDeterministic):
        reduce_deterministic_node(fixture("FIX-CHAIN"), "B")


def test_deterministic_random():
    for seed in range(40):
        d, target = deterministic_net(seed)
        if target is None:
            continue
        out = reduce_deterministic_node(d, target)
        assert is_consistent(out).ok
        rest = sorted(out.nodes)
        assert np.max(np.abs(joint_over(out, rest) - joint_over(d, rest))) < 1e-10


def test_transforms_are_pure():
    d = fixture("FIX-DIAMOND")
    before = {i: n.table.copy() for i, n in d.nodes.items()}
    absorb_chance_node(d, "A")
    reverse_arc(d, "B", "D")
    for i in d.nodes:
        assert np.array_equal(d[i].table, before[i])
    assert graph_order(d) == ["A", "B", "C", "D"]
    assert joint_enumeration_oracle(d)["D"][0] == pytest.approx(0.5655)
