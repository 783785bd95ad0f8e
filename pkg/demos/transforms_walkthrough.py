"""Reverse arcs and absorb nodes while the joint distribution stays put."""

import itertools

import numpy as np

import beliefcore as bc


def joint(d, nodes):
    # brute force P(nodes) from the oracle's full enumeration
    out = np.zeros([d.card(n) for n in nodes])
    for cfg in itertools.product(*(range(d.card(n)) for n in nodes)):
        ev = dict(zip(nodes, cfg))
        try:
            out[cfg] = bc.joint_enumeration_oracle(d, ev).evidence_probability
        except bc.ImpossibleEvidence:
            pass
    return out


if __name__ == "__main__":
    d = bc.fixture("FIX-DIAMOND")

    r = bc.reverse_arc(d, "A", "B")
    print("after reversing A->B, A has parents", r["A"].parents)
    print("joint unchanged:", np.allclose(joint(r, ["A", "B", "C", "D"]), joint(d, ["A", "B", "C", "D"])))

    a = bc.absorb_chance_node(d, "A")
    print("after absorbing A:", sorted(a.nodes))
    print("C now depends on", a["C"].parents)
    print("marginal over B,C,D unchanged:", np.allclose(joint(a, ["B", "C", "D"]), joint(d, ["B", "C", "D"])))

    # a zero in the table: B=f never follows A=t
    z = bc.fixture("FIX-ZERO")
    zr = bc.reverse_arc(z, "A", "B")
    print("FIX-ZERO reversed, P(A | B):")
    print(zr["A"].table)

    b = bc.remove_all_barren(d, keep={"A"})
    print("barren removal keeping A leaves", sorted(b.nodes))
