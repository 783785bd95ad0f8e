"""Compare the exact inference algorithms on the four-node diamond network."""

import numpy as np

import beliefcore as bc


if __name__ == "__main__":
    d = bc.fixture("FIX-DIAMOND")
    print(bc.save(d))

    evidence = {"D": "t"}

    # ground truth from the full joint
    truth = bc.joint_enumeration_oracle(d, evidence)
    print("P(D=t) =", truth.evidence_probability)

    results = {
        "cutset, weighted": bc.conditioning_infer_weighted(d, evidence)[0],
        "cutset, joint": bc.conditioning_infer_joint(d, evidence),
        "join tree": bc.jt_infer_jensen(bc.build_join_tree(d), evidence),
        "join tree, meta": bc.jt_infer_meta(bc.build_join_tree(d), evidence),
    }
    for name, beliefs in results.items():
        print(f"{name:18s} max error {beliefs.max_abs_diff(truth):.1e}")

    for node in bc.graph_order(d):
        print(node, np.round(truth[node], 4))

    # node reduction answers one target at a time
    print("P(A | D=t) by reduction:", bc.reduction_query(d, "A", evidence)["A"])

    # the diamond has a loop, so polytree propagation refuses it
    print("polytree?", bc.is_polytree(d))
    print("cutset:", bc.find_loop_cutset(d))
